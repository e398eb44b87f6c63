"""Graded quotient rings, free modules, maps and finitely presented modules.

Every module is a cokernel.  Kernels, colons, tensor products and homology
are materialized through syzygy computations into cokernel form, so a
single representation flows through the whole library.
"""
from __future__ import annotations

from functools import cached_property
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from . import groebner as gb
from .errors import GradingError, InputError, RingError, ShapeError
from .groebner import (PMASK, POS_BITS, GBEngine, Vector, hilbert_from_leads, poly_times_vec,
                       poly_to_vec, remap_positions, split_positions, top_term, vec_add,
                       vec_degree)
from .poly import DEFAULT_PRIME, Poly, codec, default_names, field_inverse, is_prime, parse_poly

DEFAULT_DMAX = 12


class Ring:
    """``R = F_p[x_1..x_n] / I`` with ``I`` homogeneous, ordered by degrevlex."""

    def __init__(self, names: Sequence[str], relations: Sequence[Poly] = (),
                 p: int = DEFAULT_PRIME):
        if not is_prime(p):
            raise InputError(f"characteristic {p} is not prime")
        self.names = tuple(names)
        self.n = len(self.names)
        self.p = p
        rels = []
        for f in relations:
            if isinstance(f, str):
                f = parse_poly(f, self.names, p)
            if f.n != self.n or f.p != p:
                raise RingError("relation from a different polynomial ring")
            if not f.is_homogeneous():
                raise GradingError(f"relation {f.format(self.names)} is not homogeneous")
            if f:
                if f.degree == 0:
                    raise InputError("relations must lie in the irrelevant ideal")
                rels.append(f)
        self.relations = tuple(rels)
        self.gb = gb.ideal_gb(rels)
        self._key = (p, self.names, tuple(tuple(sorted(g.items())) for g in self.gb))
        self._cache: Dict = {}
        cd = codec(self.n)
        self._ideal_red = [(max(g), field_inverse(g[max(g)], p),
                            {(m << POS_BITS) | PMASK: c for m, c in g.items()}) for g in self.gb]
        self._one = cd.one

    @classmethod
    def polynomial(cls, names, p: int = DEFAULT_PRIME) -> "Ring":
        if isinstance(names, int):
            names = default_names(names)
        return cls(names, (), p)

    def __eq__(self, other):
        return isinstance(other, Ring) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        rels = ", ".join(self.poly_str(g) for g in self.gb)
        base = f"F_{self.p}[{','.join(self.names)}]"
        return base + (f"/({rels})" if rels else "")

    def poly_str(self, f) -> str:
        if isinstance(f, dict):
            f = Poly(self.n, self.p, f)
        return f.format(self.names)

    @property
    def is_polynomial_ring(self) -> bool:
        return not self.gb

    def parse(self, text: str) -> Poly:
        return parse_poly(text, self.names, self.p)

    def var(self, i) -> Poly:
        if isinstance(i, str):
            i = self.names.index(i)
        return Poly.variable(self.n, self.p, i)

    def poly(self, f) -> Poly:
        if isinstance(f, str):
            return self.parse(f)
        if isinstance(f, int):
            return Poly.constant(self.n, self.p, f)
        if f.n != self.n or f.p != self.p:
            raise RingError("polynomial from a different ring")
        return f

    def ambient(self) -> "Ring":
        if self.is_polynomial_ring:
            return self
        return Ring(self.names, (), self.p)

    def quotient(self, *polys) -> "Ring":
        """``R / (polys)``; the new ring keeps the ambient variables."""
        extra = [self.poly(f) for f in polys]
        rels = [Poly(self.n, self.p, g) for g in self.gb] + extra
        return Ring(self.names, rels, self.p)

    def contains_ideal_of(self, other: "Ring") -> bool:
        """True if ``self`` is a quotient of ``other`` (same ambient, bigger ideal)."""
        if (self.p, self.names) != (other.p, other.names):
            return False
        return all(not self.nf_poly(g) for g in other.gb)

    def nf(self, v: Vector) -> Vector:
        """Normal form of a TOP vector modulo ``I`` in every position."""
        if not self.gb or not v:
            return dict(v) if v else {}
        p = self.p
        divides = codec(self.n).divides
        red = self._ideal_red
        v = dict(v)
        out: Vector = {}
        while v:
            t = max(v)
            m = t >> POS_BITS
            for lead, inv, g in red:
                if divides(lead, m):
                    c = v[t] * inv % p
                    vec_add(v, g, -c, p, ((m - lead) << POS_BITS) - (PMASK - (t & PMASK)))
                    break
            else:
                out[t] = v.pop(t)
        return out

    def nf_poly(self, f) -> Dict[int, int]:
        terms = f.terms if isinstance(f, Poly) else f
        return {t >> POS_BITS: c for t, c in self.nf(poly_to_vec(terms, 0)).items()}

    def reduce(self, f: Poly) -> Poly:
        return Poly(self.n, self.p, self.nf_poly(self.poly(f)))

    def kernel(self, columns: Sequence[Vector], target_twists: Sequence[int],
               source_twists: Optional[Sequence[int]] = None) -> List[Vector]:
        """Generators of the kernel of ``R^k -> F`` sending ``e_j`` to ``columns[j]``.

        Vectors are over column indices, reduced modulo ``I``; zero and
        duplicate generators are dropped.
        """
        syz = gb.syzygies(columns, target_twists, self.n, self.p, self.gb)
        out, seen = [], set()
        for s in syz:
            s = self.nf(s)
            if s:
                key = tuple(sorted(s.items()))
                if key not in seen:
                    seen.add(key)
                    out.append(s)
        return out

    def kernel_by_elimination(self, columns, target_twists) -> List[Vector]:
        syz = gb.syzygies_by_elimination(columns, target_twists, self.n, self.p, self.gb)
        return [s for s in (self.nf(s) for s in syz) if s]

    @cached_property
    def krull_dim(self) -> int:
        """Dimension of ``R``, read off the lead monomials of ``I``."""
        cd = codec(self.n)
        supports = [frozenset(i for i, e in enumerate(cd.decode(max(g))) if e) for g in self.gb]
        for size in range(self.n, -1, -1):
            for U in combinations(range(self.n), size):
                u = set(U)
                if not any(s <= u for s in supports):
                    return size
        return 0

    def depth(self) -> int:
        from .homology import depth

        if "depth" not in self._cache:
            self._cache["depth"] = depth(FPModule.free(self, [0]))
        return self._cache["depth"]

    def is_cohen_macaulay(self) -> bool:
        return self.depth() == self.krull_dim


class FreeModule:
    """Graded free module ``⊕ R(-d_i)``; ``twists`` are generator degrees."""

    def __init__(self, ring: Ring, twists: Sequence[int]):
        self.ring = ring
        self.twists = tuple(int(t) for t in twists)

    @property
    def rank(self) -> int:
        return len(self.twists)

    def __eq__(self, other):
        return isinstance(other, FreeModule) and (self.ring, self.twists) == (other.ring, other.twists)

    def __repr__(self):
        return f"FreeModule(rank={self.rank}, twists={list(self.twists)})"

    def dual(self) -> "FreeModule":
        return FreeModule(self.ring, [-t for t in self.twists])


def _check_columns(ring: Ring, columns, target_twists, source_twists=None, what="map"):
    out = []
    for j, c in enumerate(columns):
        for t in c:
            if PMASK - (t & PMASK) >= len(target_twists):
                raise ShapeError(f"{what}: column {j} has an entry outside the target")
        c = ring.nf(c)
        if c:
            if not gb.is_homogeneous_vec(c, target_twists, ring.n):
                raise GradingError(f"{what}: column {j} is not homogeneous")
            if source_twists is not None:
                d = vec_degree(c, target_twists, ring.n)
                if d != source_twists[j]:
                    raise GradingError(
                        f"{what}: column {j} has degree {d}, expected {source_twists[j]}")
        out.append(c)
    return out


class ModuleMap:
    """Homogeneous matrix between graded free modules, stored by columns.

    Entry ``(i, j)`` has degree ``source.twists[j] - target.twists[i]``.
    """

    def __init__(self, source: FreeModule, target: FreeModule, columns: Sequence[Vector]):
        if source.ring != target.ring:
            raise RingError("source and target over different rings")
        if len(columns) != source.rank:
            raise ShapeError(f"{len(columns)} columns for a source of rank {source.rank}")
        self.source, self.target = source, target
        self.columns = _check_columns(source.ring, columns, target.twists, source.twists)

    @property
    def ring(self) -> Ring:
        return self.source.ring

    @classmethod
    def from_entries(cls, ring: Ring, rows, target_twists=None, source_twists=None) -> "ModuleMap":
        """Build from a list of rows of polynomials (or strings).

        Missing source twists are inferred from the column entries.
        """
        rows = [[ring.poly(f) for f in row] for row in rows]
        r = len(rows)
        k = len(rows[0]) if rows else 0
        if any(len(row) != k for row in rows):
            raise ShapeError("ragged matrix")
        target_twists = list(target_twists) if target_twists is not None else [0] * r
        cols = []
        for j in range(k):
            v: Vector = {}
            for i in range(r):
                v.update(poly_to_vec(rows[i][j].terms, i))
            cols.append(v)
        if source_twists is None:
            source_twists = []
            for j, c in enumerate(cols):
                c = ring.nf(c)
                if not c:
                    raise GradingError(f"cannot infer the degree of zero column {j}")
                if not gb.is_homogeneous_vec(c, target_twists, ring.n):
                    raise GradingError(f"column {j} is not homogeneous")
                source_twists.append(vec_degree(c, target_twists, ring.n))
        return cls(FreeModule(ring, source_twists), FreeModule(ring, target_twists), cols)

    def entry(self, i: int, j: int) -> Poly:
        parts = split_positions(self.columns[j])
        return Poly(self.ring.n, self.ring.p, parts.get(i, {}))

    def rows(self) -> List[List[Poly]]:
        return [[self.entry(i, j) for j in range(self.source.rank)] for i in range(self.target.rank)]

    def transpose(self) -> "ModuleMap":
        return ModuleMap(self.target.dual(), self.source.dual(), transpose_columns(
            self.columns, self.target.rank))

    def compose(self, other: "ModuleMap") -> "ModuleMap":
        """``self ∘ other``."""
        return ModuleMap(other.source, self.target, compose_columns(
            self.ring, self.columns, other.columns))

    def is_zero(self) -> bool:
        return not any(self.columns)

    def __repr__(self):
        return f"ModuleMap({self.target.rank}x{self.source.rank})"


def transpose_columns(columns: Sequence[Vector], target_rank: int) -> List[Vector]:
    out: List[Vector] = [dict() for _ in range(target_rank)]
    for j, c in enumerate(columns):
        for t, a in c.items():
            i = PMASK - (t & PMASK)
            out[i][((t >> POS_BITS) << POS_BITS) | (PMASK - j)] = a
    return out


def compose_columns(ring: Ring, left: Sequence[Vector], right: Sequence[Vector]) -> List[Vector]:
    """Columns of ``A∘B`` where ``A`` has columns ``left``."""
    p, one = ring.p, ring._one
    out = []
    for c in right:
        acc: Vector = {}
        for pos, f in split_positions(c).items():
            vec_add(acc, poly_times_vec(f, left[pos], p, one), 1, p)
        out.append(ring.nf(acc))
    return out


def _unit_terms(v: Vector, one: int):
    for t, c in v.items():
        if t >> POS_BITS == one:
            yield PMASK - (t & PMASK), c


def prune_generators(ring: Ring, syz: Sequence[Vector], k: int) -> Tuple[List[int], List[Vector]]:
    """Drop generators made redundant by syzygies with unit coefficients.

    ``syz`` generates all relations among ``k`` homogeneous generators.
    Returns the surviving generator indices and a generating set of the
    relations among the survivors (re-indexed); after pruning, no relation
    has a unit coefficient, so the survivors generate minimally.
    """
    p, one = ring.p, ring._one
    syz = [dict(s) for s in syz if s]
    alive = [True] * k
    while True:
        best = None
        for si, s in enumerate(syz):
            for j, c in _unit_terms(s, one):
                if best is None or j > best[1]:
                    best = (si, j, c)
        if best is None:
            break
        si, j, u = best
        s = syz.pop(si)
        uinv = field_inverse(u, p)
        nxt = []
        for z in syz:
            zj = split_positions(z).get(j)
            if zj:
                z = dict(z)
                f = {m: -c * uinv % p for m, c in zj.items()}
                vec_add(z, poly_times_vec(f, s, p, one), 1, p)
                z = ring.nf(z)
            if z:
                nxt.append(z)
        syz = nxt
        alive[j] = False
    keep = [j for j in range(k) if alive[j]]
    index = {j: i for i, j in enumerate(keep)}
    out = []
    for z in syz:
        out.append(remap_positions(z, index.__getitem__))
    return keep, out


def eliminate_unit_entries(ring: Ring, twists: Sequence[int], columns: Sequence[Vector]):
    """Remove generator/relation pairs joined by a unit entry.

    Returns ``(twists, columns, kept_generator_indices)``.
    """
    p, one = ring.p, ring._one
    cols = [ring.nf(c) for c in columns]
    cols = [c for c in cols if c]
    alive = [True] * len(twists)
    while True:
        best = None
        for ci, c in enumerate(cols):
            for i, u in _unit_terms(c, one):
                if best is None or i > best[1]:
                    best = (ci, i, u)
        if best is None:
            break
        ci, i, u = best
        c = cols.pop(ci)
        uinv = field_inverse(u, p)
        nxt = []
        for z in cols:
            zi = split_positions(z).get(i)
            if zi:
                z = dict(z)
                f = {m: -a * uinv % p for m, a in zi.items()}
                vec_add(z, poly_times_vec(f, c, p, one), 1, p)
                z = ring.nf(z)
            if z:
                nxt.append(z)
        cols = nxt
        alive[i] = False
    keep = [i for i in range(len(twists)) if alive[i]]
    index = {j: i for i, j in enumerate(keep)}
    cols = [remap_positions(c, index.__getitem__) for c in cols]
    return [twists[i] for i in keep], cols, keep


class FPModule:
    """``coker(F_1 -> F_0)`` over a graded ring.

    ``twists`` are the degrees of the generators of ``F_0``; ``relations``
    are the columns of the presentation matrix.
    """

    def __init__(self, ring: Ring, twists: Sequence[int], relations: Sequence[Vector] = (),
                 name: Optional[str] = None):
        self.ring = ring
        self.twists = tuple(int(t) for t in twists)
        rels = _check_columns(ring, relations, self.twists, what="presentation")
        self.relations = [c for c in rels if c]
        self.name = name
        self._cache: Dict = {}

    # -- constructors -----------------------------------------------------

    @classmethod
    def free(cls, ring: Ring, twists: Sequence[int] = (0,)) -> "FPModule":
        return cls(ring, twists, [])

    @classmethod
    def zero(cls, ring: Ring) -> "FPModule":
        return cls(ring, [], [])

    @classmethod
    def cyclic(cls, ring: Ring, gens: Sequence, twist: int = 0) -> "FPModule":
        """``R/(gens)`` with its generator in degree ``twist``."""
        cols = [poly_to_vec(ring.poly(f).terms, 0) for f in gens]
        return cls(ring, [twist], cols)

    @classmethod
    def residue_field(cls, ring: Ring) -> "FPModule":
        return cls.cyclic(ring, [ring.var(i) for i in range(ring.n)])

    @classmethod
    def from_rows(cls, ring: Ring, rows, twists=None) -> "FPModule":
        """Cokernel of the matrix given by rows of polynomials or strings."""
        A = ModuleMap.from_entries(ring, rows, target_twists=twists)
        return make_module(ring, A)

    # -- basic data -------------------------------------------------------

    @property
    def rank(self) -> int:
        return len(self.twists)

    @property
    def n(self) -> int:
        return self.ring.n

    def relation_degrees(self) -> List[int]:
        return [vec_degree(c, self.twists, self.n) for c in self.relations]

    def presentation(self) -> ModuleMap:
        return ModuleMap(FreeModule(self.ring, self.relation_degrees()),
                         FreeModule(self.ring, self.twists), self.relations)

    def cover(self) -> FreeModule:
        return FreeModule(self.ring, self.twists)

    def __repr__(self):
        label = f"{self.name}: " if self.name else ""
        return f"FPModule({label}{self.rank} gens, {len(self.relations)} rels over {self.ring})"

    def rows(self) -> List[List[Poly]]:
        return self.presentation().rows()

    def gb(self) -> GBEngine:
        """Gröbner basis of ``im(presentation) + I * F_0``."""
        if "gb" not in self._cache:
            self._cache["gb"] = GBEngine(self.relations, self.twists, self.n, self.ring.p,
                                         ideal=self.ring.gb)
        return self._cache["gb"]

    def is_zero(self) -> bool:
        if "zero" not in self._cache:
            eng = self.gb()
            one = self.ring._one
            self._cache["zero"] = all(eng.contains({top_term(one, i): 1})
                                      for i in range(self.rank))
        return self._cache["zero"]

    def hilbert_function(self, d_max: int = DEFAULT_DMAX, d_min: int = 0) -> List[int]:
        return hilbert_function(self, d_max, d_min)

    def initial_degree(self) -> Optional[int]:
        """Lowest degree of a generator surviving in the module (None if zero)."""
        if self.is_zero():
            return None
        eng = self.gb()
        one = self.ring._one
        degs = [t for i, t in enumerate(self.twists) if not eng.contains({top_term(one, i): 1})]
        return min(degs)

    def minimal_presentation(self) -> "FPModule":
        return minimal_presentation(self)

    def as_ambient(self) -> "FPModule":
        """The same module viewed over the ambient polynomial ring."""
        if self.ring.is_polynomial_ring:
            return self
        S = self.ring.ambient()
        extra = [poly_to_vec(g, i) for i in range(self.rank)
                 for g in (f.terms for f in self.ring.relations)]
        return FPModule(S, self.twists, list(self.relations) + extra, name=self.name)

    def base_change(self, ring: Ring) -> "FPModule":
        """``M ⊗_R R'`` for a quotient ring ``R'`` of ``R``."""
        if not ring.contains_ideal_of(self.ring):
            raise RingError("target ring is not a quotient of the module's ring")
        return FPModule(ring, self.twists, self.relations, name=self.name)

    def twist(self, k: int) -> "FPModule":
        """``M(k)``: every degree lowered by ``k``."""
        return FPModule(self.ring, [t - k for t in self.twists], self.relations)


def make_module(ring: Ring, presentation: ModuleMap) -> FPModule:
    """Validated module ``coker(presentation)``; entries are normal-formed mod I."""
    if presentation.ring != ring:
        raise RingError("presentation over a different ring")
    return FPModule(ring, presentation.target.twists, presentation.columns)


def _same_ring(*mods):
    r = mods[0].ring
    for m in mods[1:]:
        if m.ring != r:
            raise RingError("modules over different rings")
    return r


def direct_sum(*mods: FPModule) -> FPModule:
    ring = _same_ring(*mods)
    twists, rels, off = [], [], 0
    for M in mods:
        twists.extend(M.twists)
        rels.extend(remap_positions(c, lambda i, o=off: i + o) for c in M.relations)
        off += M.rank
    return FPModule(ring, twists, rels)


def tensor_columns(ring: Ring, left: Sequence[Vector], right_rank: int, right_index: int,
                   left_rank: int) -> List[Vector]:
    """Columns of ``A ⊗ e_b`` for a fixed ``b``: entry rows ``(i, b) -> i*right_rank + b``."""
    return [remap_positions(c, lambda i: i * right_rank + right_index) for c in left]


def tensor_product(M: FPModule, N: FPModule) -> FPModule:
    """``M ⊗_R N`` presented by ``[A ⊗ 1 | 1 ⊗ B]`` on ``F_0 ⊗ G_0``."""
    ring = _same_ring(M, N)
    r, s = M.rank, N.rank
    twists = [a + b for a in M.twists for b in N.twists]
    cols = []
    for b in range(s):
        cols.extend(remap_positions(c, lambda i, b=b: i * s + b) for c in M.relations)
    for a in range(r):
        cols.extend(remap_positions(c, lambda j, a=a: a * s + j) for c in N.relations)
    return FPModule(ring, twists, cols)


def quotient_mod_element(M: FPModule, x, target: str = "R") -> FPModule:
    """``M/xM``, either as an R-module or base-changed to ``R/xR``."""
    ring = M.ring
    x = ring.poly(x)
    if not x.is_homogeneous():
        raise GradingError("element must be homogeneous")
    if not ring.nf_poly(x):
        raise InputError("element is zero in the ring")
    if x.degree == 0:
        raise InputError("element is a unit")
    if target in ("R", "ring"):
        extra = [poly_to_vec(x.terms, i) for i in range(M.rank)]
        return FPModule(ring, M.twists, list(M.relations) + extra)
    if target in ("Rbar", "quotient"):
        return M.base_change(ring.quotient(x))
    raise InputError(f"unknown target {target!r}")


class Subquotient:
    """``(Z + W) / W`` inside a free module with generator degrees ``twists``."""

    def __init__(self, ring: Ring, twists: Sequence[int], gens: Sequence[Vector],
                 rels: Sequence[Vector]):
        self.ring = ring
        self.twists = tuple(twists)
        self.gens = [g for g in (ring.nf(g) for g in gens) if g]
        self.rels = [w for w in (ring.nf(w) for w in rels) if w]
        self._rel_gb = None
        self._all_gb = None

    def rel_gb(self) -> GBEngine:
        if self._rel_gb is None:
            self._rel_gb = GBEngine(self.rels, self.twists, self.ring.n, self.ring.p,
                                    ideal=self.ring.gb)
        return self._rel_gb

    def all_gb(self) -> GBEngine:
        if self._all_gb is None:
            self._all_gb = GBEngine(self.gens + self.rels, self.twists, self.ring.n,
                                    self.ring.p, ideal=self.ring.gb)
        return self._all_gb

    def is_zero(self) -> bool:
        eng = self.rel_gb()
        return all(eng.contains(g) for g in self.gens)

    def hilbert_function(self, d_max: int = DEFAULT_DMAX, d_min: int = 0) -> List[int]:
        if not self.gens:
            return [0] * (d_max - d_min + 1)
        n = self.ring.n
        outer = hilbert_from_leads(self.rel_gb().leads(), self.twists, n, d_max, d_min)
        inner = hilbert_from_leads(self.all_gb().leads(), self.twists, n, d_max, d_min)
        return [a - b for a, b in zip(outer, inner)]

    def to_module(self) -> FPModule:
        """Cokernel presentation: generators ``Z``, relations their syzygies mod ``W``."""
        k = len(self.gens)
        degs = [vec_degree(g, self.twists, self.ring.n) for g in self.gens]
        if k == 0:
            return FPModule.zero(self.ring)
        syz = self.ring.kernel(self.gens + self.rels, self.twists)
        rels = []
        for s in syz:
            z = {t: c for t, c in s.items() if PMASK - (t & PMASK) < k}
            if z:
                rels.append(z)
        return minimal_presentation(FPModule(self.ring, degs, rels))


def colon_subquotient(M: FPModule, x) -> Subquotient:
    ring = M.ring
    x = ring.poly(x)
    cols = [poly_to_vec(x.terms, i) for i in range(M.rank)] + list(M.relations)
    syz = ring.kernel(cols, M.twists)
    r = M.rank
    gens = []
    for s in syz:
        z = {t: c for t, c in s.items() if PMASK - (t & PMASK) < r}
        if z:
            gens.append(z)
    return Subquotient(ring, M.twists, gens, M.relations)


def colon_kernel(M: FPModule, x) -> FPModule:
    """``(0 :_M x)``, the kernel of multiplication by ``x`` on ``M``."""
    x = M.ring.poly(x)
    if not x.is_homogeneous():
        raise GradingError("element must be homogeneous")
    if not M.ring.nf_poly(x):
        return minimal_presentation(M)
    return colon_subquotient(M, x).to_module()


def is_regular_on(x, modules: Sequence[FPModule]) -> bool:
    """True iff multiplication by ``x`` is injective on every listed module."""
    for M in modules:
        x_ = M.ring.poly(x)
        if x_.degree is None or x_.degree == 0:
            raise InputError("regular elements must be nonzero and lie in m")
        if M.is_zero():
            continue
        if not M.ring.nf_poly(x_):
            return False
        if not colon_subquotient(M, x_).is_zero():
            return False
    return True


def hilbert_function(M: FPModule, d_max: int = DEFAULT_DMAX, d_min: int = 0) -> List[int]:
    """``dim_k M_d`` for ``d = d_min..d_max`` from standard monomials."""
    key = ("hf", d_max, d_min)
    if key not in M._cache:
        M._cache[key] = hilbert_from_leads(M.gb().leads(), M.twists, M.n, d_max, d_min)
    return list(M._cache[key])


def minimal_presentation(M: FPModule) -> FPModule:
    """Isomorphic presentation with every matrix entry in ``m``.

    Unit entries are eliminated first; redundant relations are then pruned
    using the syzygies among them, which are kept for the resolution code.
    """
    if "minimal" in M._cache:
        return M._cache["minimal"]
    ring = M.ring
    twists, cols, _ = eliminate_unit_entries(ring, M.twists, M.relations)
    syz = ring.kernel(cols, twists) if cols else []
    keep, syz = prune_generators(ring, syz, len(cols))
    out = FPModule(ring, twists, [cols[j] for j in keep], name=M.name)
    out._cache["relation_syzygies"] = syz
    out._cache["minimal"] = out
    M._cache["minimal"] = out
    return out


def is_minimal_presentation(M: FPModule) -> bool:
    one = M.ring._one
    return not any(True for c in M.relations for _ in _unit_terms(c, one))
