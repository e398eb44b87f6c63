"""Buchberger's algorithm for homogeneous ideals and submodules of free modules.

Vectors are dicts from packed terms to residues.  A term packs a monomial
code (see :mod:`depthkit.poly`) together with a free-module position.  The
default order is term-over-position (monomial first, then lower position
index wins); a position-over-term packing is used only by the elimination
route for syzygies.

Relations of a quotient ring ``S/I`` enter as a fixed block ``g * e_i`` for
every element ``g`` of a Gröbner basis of ``I`` and every position ``i``.
Pairs inside that block are skipped: the block is already a Gröbner basis
position by position, and its syzygies die when projected away.
"""
from __future__ import annotations

import heapq
from typing import Dict, Iterable, List, Optional, Sequence

from .errors import GradingError, ShapeError
from .poly import Poly, codec, field_inverse

POS_BITS = 16
PMASK = (1 << POS_BITS) - 1

Vector = Dict[int, int]


class _TOP:
    """Term-over-position packing: ``(mono << 16) | (PMASK - pos)``."""

    name = "TOP"

    def __init__(self, n: int):
        self.n = n

    @staticmethod
    def make(mono: int, pos: int) -> int:
        return (mono << POS_BITS) | (PMASK - pos)

    @staticmethod
    def pos(t: int) -> int:
        return PMASK - (t & PMASK)

    @staticmethod
    def mono(t: int) -> int:
        return t >> POS_BITS

    @staticmethod
    def shift(q: int) -> int:
        return q << POS_BITS


class _POT:
    """Position-over-term packing; lower position index dominates."""

    name = "POT"

    def __init__(self, n: int):
        self.n = n
        self.mb = 16 * (n + 1) + 1
        self.mmask = (1 << self.mb) - 1

    def make(self, mono: int, pos: int) -> int:
        return ((PMASK - pos) << self.mb) | mono

    def pos(self, t: int) -> int:
        return PMASK - (t >> self.mb)

    def mono(self, t: int) -> int:
        return t & self.mmask

    @staticmethod
    def shift(q: int) -> int:
        return q


def top_term(mono: int, pos: int) -> int:
    return (mono << POS_BITS) | (PMASK - pos)


def term_pos(t: int) -> int:
    return PMASK - (t & PMASK)


def term_mono(t: int) -> int:
    return t >> POS_BITS


def vec_degree(v: Vector, twists: Sequence[int], n: int) -> int:
    """Degree of a nonzero homogeneous TOP vector."""
    t = next(iter(v))
    return codec(n).degree(t >> POS_BITS) + twists[PMASK - (t & PMASK)]


def is_homogeneous_vec(v: Vector, twists: Sequence[int], n: int) -> bool:
    cd = codec(n)
    degs = {cd.degree(t >> POS_BITS) + twists[PMASK - (t & PMASK)] for t in v}
    return len(degs) <= 1


def vec_add(acc: Vector, v: Vector, c: int, p: int, shift: int = 0) -> None:
    """In place: ``acc += c * x^shift * v``."""
    for t, a in v.items():
        k = t + shift
        val = (acc.get(k, 0) + c * a) % p
        if val:
            acc[k] = val
        else:
            acc.pop(k, None)


def poly_times_vec(f: Dict[int, int], v: Vector, p: int, one: int) -> Vector:
    out: Vector = {}
    for m, c in f.items():
        vec_add(out, v, c, p, (m - one) << POS_BITS)
    return out


def remap_positions(v: Vector, fn) -> Vector:
    """Move each TOP term to position ``fn(pos)``."""
    out: Vector = {}
    for t, c in v.items():
        out[((t >> POS_BITS) << POS_BITS) | (PMASK - fn(PMASK - (t & PMASK)))] = c
    return out


def split_positions(v: Vector) -> Dict[int, Dict[int, int]]:
    """Return ``{pos: {mono: coeff}}``."""
    out: Dict[int, Dict[int, int]] = {}
    for t, c in v.items():
        out.setdefault(PMASK - (t & PMASK), {})[t >> POS_BITS] = c
    return out


def poly_to_vec(f: Dict[int, int], pos: int) -> Vector:
    return {(m << POS_BITS) | (PMASK - pos): c for m, c in f.items()}


class _Elem:
    __slots__ = ("vec", "rep", "mono", "pos", "inv", "deg", "fixed")

    def __init__(self, vec, rep, order, p, cd, twists, fixed=False):
        lead = max(vec)
        self.vec = vec
        self.rep = rep
        self.mono = order.mono(lead)
        self.pos = order.pos(lead)
        self.inv = field_inverse(vec[lead], p)
        self.deg = cd.degree(self.mono) + twists[self.pos]
        self.fixed = fixed


class GBEngine:
    """A (not necessarily reduced) Gröbner basis of a homogeneous submodule.

    ``gens`` live in a free module with generator degrees ``twists``; the
    ideal ``ideal`` (a Gröbner basis, as monomial-code dicts) is added in
    every position listed in ``ideal_positions`` (default: all).  With
    ``track=True`` every basis element carries its expression in the
    original generators, and the Schreyer lifts of S-pairs that reduce to
    zero are collected in ``syzygies``.
    """

    def __init__(self, gens: Sequence[Vector], twists: Sequence[int], n: int, p: int,
                 ideal: Sequence[Dict[int, int]] = (), ideal_positions=None,
                 track: bool = False, order: str = "TOP"):
        self.n, self.p = n, p
        self.twists = list(twists)
        self.cd = codec(n)
        self.order = _TOP(n) if order == "TOP" else _POT(n)
        self.elems: List[_Elem] = []
        self.by_pos: Dict[int, List[int]] = {}
        self.syzygies: List[Vector] = []
        self.track = track
        self._pending = set()
        self._heap = []
        one = self.cd.one
        for j, v in enumerate(gens):
            if not v:
                if track:
                    self.syzygies.append({top_term(one, j): 1})
                continue
            rep = {top_term(one, j): 1} if track else None
            self._add(dict(v), rep)
        if ideal:
            positions = range(len(self.twists)) if ideal_positions is None else ideal_positions
            for pos in positions:
                for h in ideal:
                    vec = {self.order.make(m, pos): c for m, c in h.items()}
                    self._add(vec, None, fixed=True)
        self._run()

    def _add(self, vec, rep, fixed=False):
        e = _Elem(vec, rep, self.order, self.p, self.cd, self.twists, fixed)
        k = len(self.elems)
        self.elems.append(e)
        cd = self.cd
        tw = self.twists[e.pos]
        for i in self.by_pos.get(e.pos, ()):
            other = self.elems[i]
            if fixed and other.fixed:
                continue
            L = cd.lcm(other.mono, e.mono)
            heapq.heappush(self._heap, (cd.degree(L) + tw, L, k, i))
            self._pending.add((i, k))
        self.by_pos.setdefault(e.pos, []).append(k)

    def _criterion(self, i, j, L, pos) -> bool:
        divides = self.cd.divides
        pending = self._pending
        for k in self.by_pos[pos]:
            if k == i or k == j:
                continue
            if not divides(self.elems[k].mono, L):
                continue
            a = (i, k) if i < k else (k, i)
            b = (j, k) if j < k else (k, j)
            if a not in pending and b not in pending:
                return True
        return False

    def _run(self):
        heap, elems, order, p = self._heap, self.elems, self.order, self.p
        while heap:
            _, L, j, i = heapq.heappop(heap)
            self._pending.discard((i, j))
            ei, ej = elems[i], elems[j]
            if self._criterion(i, j, L, ei.pos):
                continue
            shi = order.shift(L - ei.mono)
            shj = order.shift(L - ej.mono)
            v: Vector = {}
            vec_add(v, ei.vec, ei.inv, p, shi)
            vec_add(v, ej.vec, -ej.inv, p, shj)
            rep = None
            if self.track:
                rep = {}
                if ei.rep:
                    vec_add(rep, ei.rep, ei.inv, p, (L - ei.mono) << POS_BITS)
                if ej.rep:
                    vec_add(rep, ej.rep, -ej.inv, p, (L - ej.mono) << POS_BITS)
            v, rep = self.top_reduce(v, rep)
            if v:
                self._add(v, rep)
            elif rep:
                self.syzygies.append(rep)

    def find_reducer(self, t: int) -> Optional[_Elem]:
        order = self.order
        m = order.mono(t)
        divides = self.cd.divides
        for k in self.by_pos.get(order.pos(t), ()):
            e = self.elems[k]
            if divides(e.mono, m):
                return e
        return None

    def top_reduce(self, v: Vector, rep: Optional[Vector] = None):
        """Reduce the lead term of ``v`` until it is irreducible or ``v`` is 0.

        ``v`` and ``rep`` are modified in place and returned.
        """
        order, p = self.order, self.p
        while v:
            t = max(v)
            e = self.find_reducer(t)
            if e is None:
                break
            q = order.mono(t) - e.mono
            c = v[t] * e.inv % p
            vec_add(v, e.vec, -c, p, order.shift(q))
            if rep is not None and e.rep:
                vec_add(rep, e.rep, -c, p, q << POS_BITS)
        return v, rep

    def normal_form(self, v: Vector) -> Vector:
        """Full reduction: no term of the result is divisible by a lead term."""
        order, p = self.order, self.p
        v = dict(v)
        out: Vector = {}
        while v:
            t = max(v)
            e = self.find_reducer(t)
            if e is None:
                out[t] = v.pop(t)
                continue
            q = order.mono(t) - e.mono
            c = v[t] * e.inv % p
            vec_add(v, e.vec, -c, p, order.shift(q))
        return out

    def contains(self, v: Vector) -> bool:
        w, _ = self.top_reduce(dict(v))
        return not w

    def leads(self) -> Dict[int, List[int]]:
        """Lead monomial codes grouped by position, minimalized."""
        out: Dict[int, List[int]] = {}
        divides = self.cd.divides
        for pos, idx in self.by_pos.items():
            monos = sorted({self.elems[k].mono for k in idx})
            keep: List[int] = []
            for m in monos:
                if not any(divides(a, m) for a in keep):
                    keep.append(m)
            out[pos] = keep
        return out

    def reduced_basis(self) -> List[Vector]:
        """Reduced Gröbner basis (monic, minimal leads, tails in normal form)."""
        divides = self.cd.divides
        cand = sorted(range(len(self.elems)),
                      key=lambda k: (self.elems[k].pos, self.elems[k].mono, k))
        keep = []
        for k in cand:
            e = self.elems[k]
            if any(self.elems[j].pos == e.pos and divides(self.elems[j].mono, e.mono) for j in keep):
                continue
            keep.append(k)
        sub = GBEngine.__new__(GBEngine)
        sub.n, sub.p, sub.twists, sub.cd, sub.order = self.n, self.p, self.twists, self.cd, self.order
        sub.elems = [self.elems[k] for k in keep]
        sub.by_pos = {}
        for i, e in enumerate(sub.elems):
            sub.by_pos.setdefault(e.pos, []).append(i)
        out = []
        p = self.p
        for i, e in enumerate(sub.elems):
            lead = max(e.vec)
            tail = dict(e.vec)
            c0 = tail.pop(lead)
            tail = sub.normal_form(tail) if tail else {}
            inv = field_inverse(c0, p)
            vec = {t: c * inv % p for t, c in tail.items()}
            vec[lead] = 1
            out.append(vec)
        cd = self.cd
        out.sort(key=lambda v: (cd.degree(self.order.mono(max(v))), -max(v)))
        return out


def hilbert_from_leads(leads: Dict[int, List[int]], twists: Sequence[int], n: int,
                       d_max: int, d_min: int = 0) -> List[int]:
    """Count standard monomials of ``F / <leads>`` in degrees ``d_min..d_max``.

    Standard monomials form an order ideal, so degree ``d+1`` candidates are
    the variable multiples of degree ``d`` survivors.
    """
    cd = codec(n)
    divides = cd.divides
    steps = [v - cd.one for v in cd.var_codes]
    out = [0] * (d_max - d_min + 1)
    for pos, tw in enumerate(twists):
        if tw > d_max:
            continue
        lds = leads.get(pos, [])
        if any(m == cd.one for m in lds):
            continue
        layer = {cd.one}
        d = tw
        while layer and d <= d_max:
            if d >= d_min:
                out[d - d_min] += len(layer)
            nxt = set()
            for m in layer:
                for s in steps:
                    nxt.add(m + s)
            layer = {m for m in nxt if not any(divides(a, m) for a in lds)}
            d += 1
    return out


# ---------------------------------------------------------------------------
# syzygies


def syzygies(gens: Sequence[Vector], twists: Sequence[int], n: int, p: int,
             ideal: Sequence[Dict[int, int]] = ()) -> List[Vector]:
    """Generators of ``{c : sum_j c_j gens_j in I * F}`` via Schreyer lifts.

    Results are TOP vectors over generator indices, not reduced modulo I.
    """
    eng = GBEngine(gens, twists, n, p, ideal=ideal, track=True)
    return eng.syzygies


def syzygies_by_elimination(gens: Sequence[Vector], twists: Sequence[int], n: int, p: int,
                            ideal: Sequence[Dict[int, int]] = ()) -> List[Vector]:
    """Independent route: eliminate the target block of ``[gens ; identity]``.

    Each generator ``a_j`` is augmented by a tag ``e_j`` in extra positions
    that sit below every target position in a position-over-term order.  The
    Gröbner basis elements whose lead lies in the tag block form a Gröbner
    basis of the syzygy module.
    """
    r = len(twists)
    cd = codec(n)
    gen_degs = []
    pot = _POT(n)
    aug = []
    for j, v in enumerate(gens):
        if v:
            d = vec_degree(v, twists, n)
        else:
            d = 0
        gen_degs.append(d)
        w = {pot.make(term_mono(t), term_pos(t)): c for t, c in v.items()}
        w[pot.make(cd.one, r + j)] = 1
        aug.append(w)
    all_twists = list(twists) + gen_degs
    eng = GBEngine(aug, all_twists, n, p, ideal=ideal, ideal_positions=range(r), order="POT")
    out = []
    for e in eng.elems:
        if e.pos >= r:
            out.append({top_term(pot.mono(t), pot.pos(t) - r): c for t, c in e.vec.items()})
    return out


# ---------------------------------------------------------------------------
# public objects over polynomials and vectors


class ModuleVector:
    """An element of a graded free module ``S^r``, stored sparsely."""

    __slots__ = ("n", "p", "rank", "vec")

    def __init__(self, n: int, p: int, rank: int, vec: Optional[Vector] = None):
        self.n, self.p, self.rank = n, p, rank
        self.vec = {t: c % p for t, c in (vec or {}).items() if c % p}

    @classmethod
    def from_entries(cls, entries: Sequence[Poly]) -> "ModuleVector":
        if not entries:
            raise ShapeError("empty vector")
        n, p = entries[0].n, entries[0].p
        vec: Vector = {}
        for i, f in enumerate(entries):
            vec.update(poly_to_vec(f.terms, i))
        return cls(n, p, len(entries), vec)

    def entries(self) -> List[Poly]:
        parts = split_positions(self.vec)
        return [Poly(self.n, self.p, parts.get(i, {})) for i in range(self.rank)]

    def __eq__(self, other):
        return isinstance(other, ModuleVector) and (self.n, self.p, self.rank, self.vec) == (
            other.n, other.p, other.rank, other.vec)

    def __bool__(self):
        return bool(self.vec)

    def __repr__(self):
        return f"ModuleVector({self.entries()})"


def _as_vec(f):
    if isinstance(f, Poly):
        return poly_to_vec(f.terms, 0), (f.n, f.p, None)
    if isinstance(f, ModuleVector):
        return f.vec, (f.n, f.p, f.rank)
    raise TypeError(f"expected Poly or ModuleVector, got {type(f).__name__}")


def _wrap(vec, meta):
    n, p, rank = meta
    if rank is None:
        return Poly(n, p, {t >> POS_BITS: c for t, c in vec.items()})
    return ModuleVector(n, p, rank, vec)


def s_polynomial(f, g):
    """S-polynomial (or S-vector) of two elements.

    Returns ``None`` when the lead terms sit in different positions, in which
    case no S-pair exists.
    """
    vf, meta = _as_vec(f)
    vg, meta_g = _as_vec(g)
    if meta[:2] != meta_g[:2]:
        raise ShapeError("elements from different rings")
    if not vf or not vg:
        return _wrap({}, meta)
    p = meta[1]
    cd = codec(meta[0])
    tf, tg = max(vf), max(vg)
    if term_pos(tf) != term_pos(tg):
        return None
    mf, mg = term_mono(tf), term_mono(tg)
    L = cd.lcm(mf, mg)
    out: Vector = {}
    vec_add(out, vf, field_inverse(vf[tf], p), p, (L - mf) << POS_BITS)
    vec_add(out, vg, -field_inverse(vg[tg], p), p, (L - mg) << POS_BITS)
    return _wrap(out, meta)


class GroebnerBasis:
    """Reduced Gröbner basis of an ideal or a submodule of ``S^r``."""

    def __init__(self, generators: list, n: int, p: int, rank: Optional[int],
                 twists: Sequence[int], engine: GBEngine):
        self.generators = generators
        self.n, self.p, self.rank = n, p, rank
        self.twists = list(twists)
        self.order = "degrevlex" if rank is None else "TOP-degrevlex"
        self.reduced = True
        self._engine = engine

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def __repr__(self):
        return f"GroebnerBasis({self.generators})"

    def contains(self, f) -> bool:
        v, _ = _as_vec(f)
        return self._engine.contains(v)


def buchberger(gens: Sequence, order: str = "degrevlex") -> GroebnerBasis:
    """Reduced Gröbner basis of the ideal or submodule generated by ``gens``.

    Inputs must be homogeneous: polynomials, or vectors that are homogeneous
    with all generators of the free module in degree 0.  Use
    :class:`GBEngine` directly for twisted free modules.
    """
    if order not in ("degrevlex", "TOP-degrevlex", "TOP"):
        raise ValueError(f"unsupported order {order!r}")
    gens = list(gens)
    if not gens:
        return GroebnerBasis([], 0, 0, None, [], GBEngine([], [0], 1, 2))
    vecs, metas = zip(*(_as_vec(g) for g in gens))
    meta = metas[0]
    if any(m != meta for m in metas):
        raise ShapeError("generators from different rings or ranks")
    n, p, rank = meta
    twists = [0] * (rank or 1)
    for v in vecs:
        if not is_homogeneous_vec(v, twists, n):
            raise GradingError("buchberger requires homogeneous input")
    eng = GBEngine(list(vecs), twists, n, p)
    basis = eng.reduced_basis()
    return GroebnerBasis([_wrap(v, meta) for v in basis], n, p, rank, twists,
                         GBEngine(basis, twists, n, p))


def normal_form(v, G: GroebnerBasis):
    vec, meta = _as_vec(v)
    return _wrap(G._engine.normal_form(vec), meta)


def ideal_gb(polys: Iterable[Poly]) -> List[Dict[int, int]]:
    """Reduced Gröbner basis of a homogeneous ideal, as monomial-code dicts."""
    polys = [f for f in polys if f]
    if not polys:
        return []
    n, p = polys[0].n, polys[0].p
    for f in polys:
        if not f.is_homogeneous():
            raise GradingError(f"relation {f!r} is not homogeneous")
    eng = GBEngine([poly_to_vec(f.terms, 0) for f in polys], [0], n, p)
    return [{t >> POS_BITS: c for t, c in v.items()} for v in eng.reduced_basis()]


def module_syzygies(A):
    """Kernel of a homogeneous map of free modules as a new map onto it.

    ``A`` is a :class:`depthkit.fpmodule.ModuleMap`; the result has target
    ``A.source`` and image ``ker A`` (over the ring of ``A``).
    """
    from .fpmodule import FreeModule, ModuleMap

    ring = A.ring
    cols = ring.kernel(A.columns, A.target.twists, A.source.twists)
    degs = [vec_degree(c, A.source.twists, ring.n) for c in cols]
    return ModuleMap(FreeModule(ring, degs), A.source, cols)
