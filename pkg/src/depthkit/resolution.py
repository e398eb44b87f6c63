"""Minimal graded free resolutions, syzygy modules and Betti tables.

Each step computes the kernel of the newest differential and prunes it to
a minimal generating set using the relations among the kernel generators;
those relations are then the (non-minimal) kernel of the next step, so
every map costs exactly one syzygy computation.
"""
from __future__ import annotations

from typing import Dict, List, Optional

from .errors import BoundError, InternalInconsistency
from .fpmodule import (FPModule, FreeModule, ModuleMap, Ring, compose_columns,
                       minimal_presentation, prune_generators)
from .groebner import GBEngine, POS_BITS, vec_degree


def default_bound(ring: Ring) -> int:
    return 2 * (ring.n + 1)


class Resolution:
    """``... -> F_2 -> F_1 -> F_0`` with ``maps[i-1]`` the columns of ``d_i``.

    ``truncated_at`` is ``None`` when the resolution is complete (the kernel
    of the last map is zero), otherwise the length at which it was cut.
    """

    def __init__(self, ring: Ring, twists: List[List[int]], maps: List[List[dict]],
                 pending: Optional[List[dict]], over: str, minimal: bool = True):
        self.ring = ring
        self.twists = twists
        self.maps = maps
        self._pending = pending
        self.over = over
        self.minimal = minimal

    @property
    def length(self) -> int:
        return len(self.maps)

    @property
    def complete(self) -> bool:
        return not self._pending

    @property
    def truncated_at(self) -> Optional[int]:
        return None if self.complete else self.length

    def free_module(self, i: int) -> FreeModule:
        if i < 0:
            raise BoundError("negative homological degree")
        if i < len(self.twists):
            return FreeModule(self.ring, self.twists[i])
        if self.complete:
            return FreeModule(self.ring, [])
        raise BoundError(f"F_{i} not computed (resolution truncated at {self.length})")

    def differential(self, i: int) -> ModuleMap:
        """``d_i : F_i -> F_{i-1}`` (zero beyond a complete resolution)."""
        if i < 1:
            raise BoundError("differentials start at d_1")
        if i <= len(self.maps):
            return ModuleMap(FreeModule(self.ring, self.twists[i]),
                             FreeModule(self.ring, self.twists[i - 1]), self.maps[i - 1])
        if self.complete:
            return ModuleMap(FreeModule(self.ring, []), self.free_module(i - 1), [])
        raise BoundError(f"d_{i} not computed (resolution truncated at {self.length})")

    def has(self, i: int) -> bool:
        return self.complete or i <= self.length

    def extend(self, length: int) -> "Resolution":
        ring = self.ring
        while not self.complete and self.length < length:
            kernel = self._pending
            prev = self.twists[-1]
            degs = [vec_degree(c, prev, ring.n) for c in kernel]
            syz = ring.kernel(kernel, prev)
            keep, syz = prune_generators(ring, syz, len(kernel))
            self.maps.append([kernel[j] for j in keep])
            self.twists.append([degs[j] for j in keep])
            self._pending = syz
        return self

    def betti_table(self) -> Dict[tuple, int]:
        return betti_table(self)

    def betti_numbers(self) -> List[int]:
        return [len(t) for t in self.twists]

    def shifted(self, k: int) -> "Resolution":
        """Resolution of the ``k``-th syzygy module, sharing computed maps."""
        if k > self.length:
            raise BoundError("cannot shift past the computed length")
        return Resolution(self.ring, [list(t) for t in self.twists[k:]],
                          [list(m) for m in self.maps[k:]],
                          list(self._pending) if self._pending else [], self.over,
                          self.minimal)

    def truncated(self, length: int) -> "Resolution":
        """View of the first ``length`` maps (the cache may hold more)."""
        if length >= self.length:
            return self
        return Resolution(self.ring, [list(t) for t in self.twists[:length + 1]],
                          [list(m) for m in self.maps[:length]], list(self.maps[length]),
                          self.over, self.minimal)

    def certify(self) -> Dict[str, bool]:
        """Check ``d∘d = 0``, two-sided exactness and minimality exactly.

        The kernel of each differential is recomputed by the elimination
        route, independently of the Schreyer lifts that built the resolution.
        """
        ring = self.ring
        one = ring._one
        compose_ok = exact_ok = minimal_ok = True
        for i in range(1, self.length):
            comp = compose_columns(ring, self.maps[i - 1], self.maps[i])
            if any(comp):
                compose_ok = False
        for i in range(1, self.length + 1):
            cols = self.maps[i - 1]
            kernel = ring.kernel_by_elimination(cols, self.twists[i - 1])
            if i < self.length:
                image = self.maps[i]
            elif self.complete:
                image = []
            else:
                continue
            eng = GBEngine(image, self.twists[i], ring.n, ring.p, ideal=ring.gb)
            if not all(eng.contains(v) for v in kernel):
                exact_ok = False
            # image ⊆ kernel: each image column maps to zero
            comp = compose_columns(ring, cols, image)
            if any(comp):
                exact_ok = False
        if self.minimal:
            for cols in self.maps:
                for c in cols:
                    if any((t >> POS_BITS) == one for t in c):
                        minimal_ok = False
        return {"d_squared_zero": compose_ok, "exact": exact_ok, "minimal": minimal_ok}


def _start(M: FPModule, over: str) -> Resolution:
    Mm = minimal_presentation(M)
    ring = Mm.ring
    twists = [list(Mm.twists)]
    maps: List[List[dict]] = []
    pending: List[dict] = []
    if Mm.relations:
        maps.append(list(Mm.relations))
        twists.append(Mm.relation_degrees())
        if "relation_syzygies" in Mm._cache:
            pending = list(Mm._cache["relation_syzygies"])
        else:
            keep, pending = prune_generators(ring, ring.kernel(Mm.relations, Mm.twists),
                                             len(Mm.relations))
            if len(keep) != len(Mm.relations):
                raise InternalInconsistency("cached presentation was not minimal")
    return Resolution(ring, twists, maps, pending, over)


def free_resolution(M: FPModule, length_bound: Optional[int] = None, over: str = "R") -> Resolution:
    """Minimal free resolution of ``M`` up to ``length_bound`` maps.

    ``over="S"`` resolves ``M`` as a module over the ambient polynomial ring,
    which always terminates by length ``n``.  Results are cached on ``M``
    and extended on demand.
    """
    if over not in ("R", "S"):
        raise ValueError("over must be 'R' or 'S'")
    if over == "S" and not M.ring.is_polynomial_ring:
        key, base = "res_S", M.as_ambient
    else:
        key, base = "res_R", lambda: M
    if key not in M._cache:
        M._cache[key] = _start(base(), over)
    res = M._cache[key]
    if length_bound is None:
        length_bound = M.ring.n + 1 if over == "S" else default_bound(M.ring)
    return res.extend(length_bound)


def syzygy(M: FPModule, i: int, over: str = "R", res: Optional[Resolution] = None) -> FPModule:
    """``Ω_i(M)``: the image of ``d_i``, presented by ``d_{i+1}``.

    ``Ω_0`` is the minimal presentation of ``M`` itself.
    """
    if i < 0:
        raise BoundError("syzygy index must be non-negative")
    if res is None:
        res = free_resolution(M, i + 1, over)
    elif not res.has(i + 1):
        raise BoundError(f"resolution too short for Ω_{i}")
    if i == 0:
        return minimal_presentation(M if over == "R" else M.as_ambient())
    if res.complete and i > res.length:
        return FPModule.zero(res.ring)
    if i == res.length:
        out = FPModule(res.ring, res.twists[i], [])
    else:
        out = FPModule(res.ring, res.twists[i], res.maps[i])
    out._cache["minimal"] = out
    out._cache["res_R"] = res.shifted(i)
    return out


def projective_dimension_ambient(M: FPModule) -> int:
    """Length of the minimal resolution of ``M`` over the polynomial ring."""
    res = free_resolution(M, M.ring.n + 1, over="S")
    if not res.complete:
        raise InternalInconsistency("resolution over S longer than the number of variables")
    return res.length


def projective_dimension(M: FPModule, bound: Optional[int] = None) -> Optional[int]:
    """pd over ``R`` if the resolution terminates within ``bound``, else None."""
    res = free_resolution(M, bound, over="R")
    return res.length if res.complete else None


def betti_table(res: Resolution) -> Dict[tuple, int]:
    """``{(homological degree, internal degree): rank}``."""
    out: Dict[tuple, int] = {}
    for i, tw in enumerate(res.twists):
        for d in tw:
            out[(i, d)] = out.get((i, d), 0) + 1
    return dict(sorted(out.items()))


def betti_rows(res: Resolution) -> List[List[int]]:
    """Betti table as nested arrays in Macaulay2 layout (rows are ``d - i``)."""
    table = betti_table(res)
    if not table:
        return []
    rows = sorted({d - i for i, d in table})
    return [[table.get((i, r + i), 0) for i in range(len(res.twists))] for r in rows]
