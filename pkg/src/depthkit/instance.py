"""Plain-text instance files: a ring, named modules, pairs and options.

::

    ring
      char 32003
      vars x y
      relation x*y
    end
    module M
      twists 0
      relation [x]
    end
    pair M M
    options
      bound 6
    end

Each ``relation`` line of a module block is one column of the presentation
matrix, with one entry per generator.  ``#`` starts a comment.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .errors import GradingError, InputError, ParseError
from .fpmodule import FPModule, Ring
from .groebner import poly_to_vec, split_positions
from .poly import DEFAULT_PRIME, Poly

OPTION_KEYS = ("bound", "dmax", "seed", "max_degree")


@dataclass
class InstanceFile:
    ring: Ring
    modules: Dict[str, FPModule] = field(default_factory=dict)
    pairs: List[Tuple[str, str]] = field(default_factory=list)
    options: Dict[str, int] = field(default_factory=dict)

    def module(self, name: str) -> FPModule:
        if name not in self.modules:
            raise NameError(f"unknown module {name!r}")
        return self.modules[name]

    def canonical(self):
        mods = tuple((k, M.twists, tuple(tuple(sorted(c.items())) for c in M.relations))
                     for k, M in self.modules.items())
        return (self.ring, mods, tuple(self.pairs), tuple(sorted(self.options.items())))

    def __eq__(self, other):
        return isinstance(other, InstanceFile) and self.canonical() == other.canonical()

    def to_text(self) -> str:
        return serialize(self)


def _strip(line: str) -> str:
    i = line.find("#")
    return (line if i < 0 else line[:i]).rstrip()


def _ints(words, lineno, col, what):
    out = []
    for w in words:
        try:
            out.append(int(w))
        except ValueError:
            raise ParseError(f"{what}: expected an integer, got {w!r}", lineno, col) from None
    return out


def _split_vector(text: str, lineno: int, col: int) -> List[Tuple[str, int]]:
    """Split ``[f1, f2]`` into entries with their 1-based columns."""
    lead = len(text) - len(text.lstrip())
    s = text.strip()
    if not (s.startswith("[") and s.endswith("]")):
        raise ParseError("relation vectors are written [f1, f2, ...]", lineno, col)
    base = col + lead + 1
    parts, depth, start = [], 0, 0
    body = s[1:-1]
    for k, ch in enumerate(body + ","):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            piece = body[start:k]
            parts.append((piece.strip(), base + start + len(piece) - len(piece.lstrip())))
            start = k + 1
    if len(parts) == 1 and not parts[0][0]:
        return []
    return parts


def _parse_poly(text, names, p, lineno, col):
    from .poly import parse_poly

    try:
        return parse_poly(text, names, p)
    except ParseError as exc:
        c = col + (exc.column - 1 if exc.column else 0)
        msg = str(exc).split(" (line")[0].split(" (column")[0]
        raise ParseError(msg, lineno, c) from None


def parse_instance_file(text: str, char: Optional[int] = None) -> InstanceFile:
    """Parse and validate an instance file.

    ``char`` overrides the characteristic in the file (field enlargement).
    """
    lines = text.splitlines()
    i = 0
    ring_spec = None
    module_specs: List[tuple] = []
    pairs: List[Tuple[str, str, int]] = []
    options: Dict[str, int] = {}

    def block(start):
        body = []
        j = start + 1
        while j < len(lines):
            s = _strip(lines[j])
            if s.strip() == "end":
                return body, j + 1
            if s.strip():
                body.append((j + 1, s))
            j += 1
        raise ParseError("block is missing 'end'", start + 1, 1)

    while i < len(lines):
        raw = _strip(lines[i])
        s = raw.strip()
        if not s:
            i += 1
            continue
        col = len(raw) - len(raw.lstrip()) + 1
        words = s.split()
        head = words[0]
        if head == "ring":
            if ring_spec is not None:
                raise ParseError("duplicate ring block", i + 1, col)
            body, nxt = block(i)
            ring_spec = (i + 1, body)
            i = nxt
        elif head == "module":
            if len(words) != 2:
                raise ParseError("expected 'module NAME'", i + 1, col)
            body, nxt = block(i)
            module_specs.append((words[1], i + 1, body))
            i = nxt
        elif head == "pair":
            if len(words) != 3:
                raise ParseError("expected 'pair NAME NAME'", i + 1, col)
            pairs.append((words[1], words[2], i + 1))
            i += 1
        elif head == "options":
            body, nxt = block(i)
            for lineno, line in body:
                w = line.split()
                c = len(line) - len(line.lstrip()) + 1
                if len(w) != 2 or w[0] not in OPTION_KEYS:
                    raise ParseError(f"unknown option line {line.strip()!r}", lineno, c)
                options[w[0]] = _ints(w[1:], lineno, c, w[0])[0]
            i = nxt
        else:
            raise ParseError(f"unexpected {head!r}", i + 1, col)

    if ring_spec is None:
        raise ParseError("missing ring block")
    ring = _build_ring(ring_spec, char)
    modules: Dict[str, FPModule] = {}
    for name, lineno, body in module_specs:
        if name in modules:
            raise ParseError(f"duplicate module {name!r}", lineno, 1)
        modules[name] = _build_module(ring, name, body)
    out_pairs = []
    for a, b, lineno in pairs:
        for nm in (a, b):
            if nm not in modules:
                raise NameError(f"line {lineno}: unknown module {nm!r}")
        out_pairs.append((a, b))
    return InstanceFile(ring, modules, out_pairs, options)


def _build_ring(spec, char) -> Ring:
    start, body = spec
    p = DEFAULT_PRIME
    names = None
    rels = []
    for lineno, line in body:
        w = line.split()
        c = len(line) - len(line.lstrip()) + 1
        key = w[0]
        if key == "char":
            p = _ints(w[1:2], lineno, c, "char")[0] if len(w) == 2 else None
            if p is None:
                raise ParseError("expected 'char P'", lineno, c)
        elif key == "vars":
            names = w[1:]
            if not names:
                raise ParseError("no variables", lineno, c)
        elif key == "relation":
            rest = line.lstrip()[len("relation"):]
            rels.append((lineno, c + len("relation") + (len(rest) - len(rest.lstrip())),
                         rest.strip()))
        else:
            raise ParseError(f"unknown ring field {key!r}", lineno, c)
    if names is None:
        raise ParseError("ring block has no vars line", start, 1)
    if char is not None:
        p = char
    polys = []
    for lineno, c, t in rels:
        f = _parse_poly(t, names, p, lineno, c)
        if not f.is_homogeneous():
            raise GradingError(f"block 'ring' (line {lineno}): relation {t} is not homogeneous")
        polys.append(f)
    try:
        return Ring(names, polys, p)
    except InputError as exc:
        raise InputError(f"block 'ring': {exc}") from None


def _build_module(ring: Ring, name: str, body) -> FPModule:
    twists = None
    cols = []
    for lineno, line in body:
        stripped = line.lstrip()
        c = len(line) - len(stripped) + 1
        key = stripped.split()[0]
        rest = stripped[len(key):]
        if key == "twists":
            twists = _ints(rest.split(), lineno, c, "twists")
        elif key == "rank":
            r = _ints(rest.split(), lineno, c, "rank")
            twists = [0] * r[0]
        elif key == "relation":
            entries = _split_vector(rest, lineno, c + len(key))
            cols.append((lineno, [_parse_poly(e, ring.names, ring.p, lineno, ec)
                                  for e, ec in entries]))
        else:
            raise ParseError(f"unknown module field {key!r}", lineno, c)
    if twists is None:
        if not cols:
            raise ParseError(f"module {name}: give twists or at least one relation",
                             body[0][0] if body else None)
        twists = [0] * len(cols[0][1])
    vecs = []
    for lineno, entries in cols:
        if len(entries) != len(twists):
            raise ParseError(f"module {name}: relation has {len(entries)} entries, "
                             f"expected {len(twists)}", lineno, 1)
        v = {}
        degs = set()
        for i, f in enumerate(entries):
            if not f.is_homogeneous():
                raise GradingError(f"block 'module {name}' (line {lineno}): "
                                   f"entry {f.format(ring.names)} is not homogeneous")
            if f:
                degs.add(f.degree + twists[i])
            v.update(poly_to_vec(f.terms, i))
        if len(degs) > 1:
            raise GradingError(f"block 'module {name}' (line {lineno}): "
                               "relation is not homogeneous for the given twists")
        vecs.append(v)
    try:
        return FPModule(ring, twists, vecs, name=name)
    except GradingError as exc:
        raise GradingError(f"block 'module {name}': {exc}") from None


def module_block(name: str, M: FPModule) -> str:
    ring = M.ring
    out = [f"module {name}", "  twists " + " ".join(str(t) for t in M.twists)]
    for c in M.relations:
        parts = split_positions(c)
        entries = [ring.poly_str(Poly(ring.n, ring.p, parts.get(i, {}))) for i in range(M.rank)]
        out.append("  relation [" + ", ".join(entries) + "]")
    out.append("end")
    return "\n".join(out)


def ring_block(ring: Ring) -> str:
    out = ["ring", f"  char {ring.p}", "  vars " + " ".join(ring.names)]
    for g in ring.gb:
        out.append("  relation " + ring.poly_str(g))
    out.append("end")
    return "\n".join(out)


def serialize(inst: InstanceFile) -> str:
    parts = [ring_block(inst.ring)]
    for name, M in inst.modules.items():
        parts.append(module_block(name, M))
    for a, b in inst.pairs:
        parts.append(f"pair {a} {b}")
    if inst.options:
        body = "\n".join(f"  {k} {inst.options[k]}" for k in OPTION_KEYS if k in inst.options)
        parts.append("options\n" + body + "\nend")
    return "\n".join(parts) + "\n"


def load_instance_file(path, char: Optional[int] = None) -> InstanceFile:
    with open(path, encoding="utf-8") as fh:
        return parse_instance_file(fh.read(), char)
