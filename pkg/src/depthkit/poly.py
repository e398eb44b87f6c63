"""Prime fields, packed degrevlex monomials and sparse polynomials.

Monomials are stored as a single Python int so that comparison under
degrevlex is ordinary integer comparison and multiplication is addition.
The top 16-bit field holds the total degree; below it, field ``i`` holds
``BIAS - e_{i+1}``, with the last variable in the most significant slot.
Comparing two codes therefore compares total degree first and then the
reversed, negated exponent vector, which is exactly degrevlex.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Dict, Iterable, Optional, Sequence, Tuple

from .errors import DivisionByZero, InputError, ShapeError

DEFAULT_PRIME = 32003

FIELD_BITS = 16
FIELD = 1 << FIELD_BITS
BIAS = 1 << (FIELD_BITS - 2)
_FMASK = FIELD - 1


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def field_inverse(a: int, p: int) -> int:
    """Inverse of ``a`` in F_p."""
    a %= p
    if a == 0:
        raise DivisionByZero(f"0 has no inverse mod {p}")
    return pow(a, -1, p)


@dataclass(frozen=True)
class FieldElem:
    value: int
    p: int

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.p)

    def _coerce(self, other):
        if isinstance(other, FieldElem):
            if other.p != self.p:
                raise ShapeError("field elements from different primes")
            return other.value
        return other

    def __add__(self, other):
        return FieldElem(self.value + self._coerce(other), self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElem(self.value - self._coerce(other), self.p)

    def __neg__(self):
        return FieldElem(-self.value, self.p)

    def __mul__(self, other):
        return FieldElem(self.value * self._coerce(other), self.p)

    __rmul__ = __mul__

    def inverse(self) -> "FieldElem":
        return FieldElem(field_inverse(self.value, self.p), self.p)

    def __truediv__(self, other):
        return self * FieldElem(self._coerce(other), self.p).inverse()

    def __int__(self):
        return self.value


class MonomialCodec:
    """Packing of exponent vectors in ``n`` variables into ints."""

    def __init__(self, n: int):
        self.n = n
        self.one = sum(BIAS << (FIELD_BITS * i) for i in range(n))
        add = (1 << (FIELD_BITS - 1)) - BIAS - 1
        self._div_offset = self.one + sum(add << (FIELD_BITS * i) for i in range(n))
        self._div_mask = sum((1 << (FIELD_BITS - 1)) << (FIELD_BITS * i) for i in range(n))
        self.deg_shift = FIELD_BITS * n
        self.var_codes = tuple(self.encode(tuple(int(i == j) for j in range(n))) for i in range(n))

    def encode(self, exps: Sequence[int]) -> int:
        if len(exps) != self.n:
            raise ShapeError(f"expected {self.n} exponents, got {len(exps)}")
        code = sum(exps) << self.deg_shift
        for i, e in enumerate(exps):
            if e < 0 or e >= BIAS:
                raise ShapeError(f"exponent {e} out of range")
            code += (BIAS - e) << (FIELD_BITS * i)
        return code

    def decode(self, code: int) -> Tuple[int, ...]:
        return tuple(BIAS - ((code >> (FIELD_BITS * i)) & _FMASK) for i in range(self.n))

    def degree(self, code: int) -> int:
        return code >> self.deg_shift

    def mul(self, a: int, b: int) -> int:
        return a + b - self.one

    def divides(self, a: int, b: int) -> bool:
        return not ((b - a + self._div_offset) & self._div_mask)

    def div(self, b: int, a: int) -> int:
        return b - a + self.one

    def lcm(self, a: int, b: int) -> int:
        ea, eb = self.decode(a), self.decode(b)
        return self.encode([max(x, y) for x, y in zip(ea, eb)])

    def gcd(self, a: int, b: int) -> int:
        ea, eb = self.decode(a), self.decode(b)
        return self.encode([min(x, y) for x, y in zip(ea, eb)])

    def of_degree(self, d: int) -> Tuple[int, ...]:
        return _monomials_of_degree(self.n, d)


@lru_cache(maxsize=None)
def codec(n: int) -> MonomialCodec:
    return MonomialCodec(n)


@lru_cache(maxsize=None)
def _monomials_of_degree(n: int, d: int) -> Tuple[int, ...]:
    c = codec(n)
    out = []
    for combo in combinations_with_replacement(range(n), d):
        e = [0] * n
        for i in combo:
            e[i] += 1
        out.append(c.encode(e))
    out.sort(reverse=True)
    return tuple(out)


def degrevlex_key(exps: Sequence[int]) -> tuple:
    return (sum(exps),) + tuple(-e for e in reversed(exps))


def monomial_compare(a: Sequence[int], b: Sequence[int]) -> int:
    """Compare exponent vectors under degrevlex; returns -1, 0 or 1."""
    if len(a) != len(b):
        raise ShapeError("monomials in different numbers of variables")
    ka, kb = degrevlex_key(a), degrevlex_key(b)
    return (ka > kb) - (ka < kb)


class Poly:
    """Sparse polynomial over F_p, immutable by convention.

    ``terms`` maps packed monomial codes to nonzero residues.
    """

    __slots__ = ("n", "p", "terms", "_hash")

    def __init__(self, n: int, p: int, terms: Optional[Dict[int, int]] = None):
        self.n = n
        self.p = p
        self.terms = {m: c % p for m, c in (terms or {}).items() if c % p}
        self._hash = None

    @classmethod
    def from_exponents(cls, n: int, p: int, terms: Dict[Tuple[int, ...], int]) -> "Poly":
        cd = codec(n)
        out: Dict[int, int] = {}
        for e, c in terms.items():
            m = cd.encode(e)
            out[m] = (out.get(m, 0) + c) % p
        return cls(n, p, out)

    @classmethod
    def constant(cls, n: int, p: int, c: int) -> "Poly":
        return cls(n, p, {codec(n).one: c})

    @classmethod
    def variable(cls, n: int, p: int, i: int) -> "Poly":
        return cls(n, p, {codec(n).var_codes[i]: 1})

    @classmethod
    def zero(cls, n: int, p: int) -> "Poly":
        return cls(n, p, {})

    def _check(self, other: "Poly"):
        if self.n != other.n or self.p != other.p:
            raise ShapeError("polynomials from different rings")

    def _lift(self, other) -> "Poly":
        if isinstance(other, Poly):
            self._check(other)
            return other
        if isinstance(other, (int, FieldElem)):
            return Poly.constant(self.n, self.p, int(other))
        return NotImplemented

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, int):
            other = Poly.constant(self.n, self.p, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.n == other.n and self.p == other.p and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, self.p, frozenset(self.terms.items())))
        return self._hash

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = (out.get(m, 0) + c) % self.p
        return Poly(self.n, self.p, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.n, self.p, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        p, one = self.p, codec(self.n).one
        out: Dict[int, int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = m1 + m2 - one
                out[m] = (out.get(m, 0) + c1 * c2) % p
        return Poly(self.n, p, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise InputError("negative power")
        out = Poly.constant(self.n, self.p, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def scale(self, c: int) -> "Poly":
        return Poly(self.n, self.p, {m: v * c for m, v in self.terms.items()})

    def degrees(self) -> set:
        cd = codec(self.n)
        return {cd.degree(m) for m in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    @property
    def degree(self) -> Optional[int]:
        """Total degree (maximum over terms); None for the zero polynomial."""
        if not self.terms:
            return None
        return codec(self.n).degree(max(self.terms))

    def lead(self) -> Tuple[Tuple[int, ...], int]:
        m = max(self.terms)
        return codec(self.n).decode(m), self.terms[m]

    def sorted_terms(self) -> Iterable[Tuple[Tuple[int, ...], int]]:
        cd = codec(self.n)
        for m in sorted(self.terms, reverse=True):
            yield cd.decode(m), self.terms[m]

    def constant_term(self) -> int:
        return self.terms.get(codec(self.n).one, 0)

    def evaluate(self, point: Sequence[int]) -> int:
        total = 0
        for e, c in self.sorted_terms():
            t = c
            for x, k in zip(point, e):
                t = t * pow(x, k, self.p) % self.p
            total += t
        return total % self.p

    def format(self, names: Sequence[str]) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(names, e) if k)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts)

    def __repr__(self):
        return f"Poly({self.format(default_names(self.n))})"


def default_names(n: int) -> Tuple[str, ...]:
    if n <= 3:
        return ("x", "y", "z")[:n]
    return tuple(f"x{i + 1}" for i in range(n))


def poly_multiply(f: Poly, g: Poly) -> Poly:
    return f * g


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


class _PolyParser:
    def __init__(self, text: str, names: Sequence[str], p: int):
        self.text = text
        self.names = {v: i for i, v in enumerate(names)}
        self.n = len(names)
        self.p = p
        self.tokens = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None or m.end() == pos:
                break
            if m.group(1) is not None:
                self.tokens.append(("num", int(m.group(1)), m.start(1)))
            elif m.group(2) is not None:
                self.tokens.append(("var", m.group(2), m.start(2)))
            else:
                self.tokens.append(("op", m.group(3), m.start(3)))
            pos = m.end()
        self.i = 0

    def error(self, msg, col=None):
        from .errors import ParseError

        if col is None:
            col = self.tokens[self.i][2] if self.i < len(self.tokens) else len(self.text)
        raise ParseError(f"{msg} in polynomial {self.text!r}", column=col + 1)

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def parse(self) -> Poly:
        if not self.tokens:
            self.error("empty expression")
        out = self.expr()
        if self.peek() is not None:
            self.error(f"unexpected {self.peek()[1]!r}")
        return out

    def expr(self) -> Poly:
        sign = 1
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] in "+-":
            self.take()
            sign = -1 if tok[1] == "-" else 1
        out = self.term().scale(sign)
        while True:
            tok = self.peek()
            if tok and tok[0] == "op" and tok[1] in "+-":
                self.take()
                t = self.term()
                out = out + t if tok[1] == "+" else out - t
            else:
                return out

    def term(self) -> Poly:
        out = self.power()
        while True:
            tok = self.peek()
            if tok is None:
                return out
            if tok[0] == "op" and tok[1] == "*":
                self.take()
                out = out * self.power()
            elif tok[0] in ("num", "var") or (tok[0] == "op" and tok[1] == "("):
                out = out * self.power()
            else:
                return out

    def power(self) -> Poly:
        base = self.atom()
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] == "^":
            self.take()
            exp = self.take()
            if exp is None or exp[0] != "num":
                self.error("exponent must be a non-negative integer")
            base = base ** exp[1]
        return base

    def atom(self) -> Poly:
        tok = self.take()
        if tok is None:
            self.error("unexpected end of expression")
        kind, val, col = tok
        if kind == "num":
            return Poly.constant(self.n, self.p, val)
        if kind == "var":
            if val not in self.names:
                self.i -= 1
                self.error(f"unknown variable {val!r}")
            return Poly.variable(self.n, self.p, self.names[val])
        if val == "(":
            inner = self.expr()
            close = self.take()
            if close is None or close[1] != ")":
                self.i -= 1
                self.error("missing ')'")
            return inner
        self.i -= 1
        self.error(f"unexpected {val!r}")


def parse_poly(text: str, names: Sequence[str], p: int) -> Poly:
    """Parse ``x^2 + 3*x*y - y`` style input; ``*`` between factors is optional."""
    return _PolyParser(text, names, p).parse()
