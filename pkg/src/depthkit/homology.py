"""Tor, Ext, grade, depth and bounded homological verdicts.

Homology of a complex of free modules tensored with (or mapped into) a
finitely presented module is computed as a subquotient ``(Z + W)/W`` of a
free module, so vanishing is decided by exact membership and dimensions by
standard monomials.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Sequence

from .errors import BoundError, InputError, InternalInconsistency, RingError
from .fpmodule import (DEFAULT_DMAX, FPModule, Subquotient, hilbert_function,
                       minimal_presentation, transpose_columns)
from .groebner import GBEngine, PMASK, Vector, remap_positions, top_term, vec_degree
from .resolution import Resolution, default_bound, free_resolution, syzygy


class Status(str, Enum):
    HOLDS = "Holds"
    FAILS = "Fails"
    INCONCLUSIVE = "InconclusiveUpToBound"


@dataclass
class Verdict:
    """Outcome of a bounded check.

    ``Fails`` carries a witness ``(index, module)``; ``InconclusiveUpToBound``
    carries the bound that was exhausted.  ``value`` holds a computed number
    when the check produces one (a G-dimension, a depth).
    """

    status: Status
    witness: Optional[tuple] = None
    bound: Optional[int] = None
    value: Optional[int] = None
    detail: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.status is Status.HOLDS

    @property
    def fails(self) -> bool:
        return self.status is Status.FAILS

    @property
    def inconclusive(self) -> bool:
        return self.status is Status.INCONCLUSIVE

    def to_dict(self) -> dict:
        out = {"status": self.status.value}
        if self.bound is not None:
            out["bound"] = self.bound
        if self.value is not None:
            out["value"] = self.value
        if self.witness is not None:
            i, mod = self.witness
            w = {"index": i}
            if isinstance(mod, FPModule):
                w["generators"] = mod.rank
                w["hilbert"] = mod.hilbert_function(self.detail.get("d_max", DEFAULT_DMAX))
            elif mod is not None:
                w["info"] = mod
            out["witness"] = w
        extra = {k: v for k, v in self.detail.items() if k != "d_max"}
        if extra:
            out["detail"] = extra
        return out


def _check_same_ring(M: FPModule, N: FPModule):
    if M.ring != N.ring:
        raise RingError("modules over different rings")


def complex_homology(ring, mid_twists: Sequence[int], out_cols: Optional[List[Vector]],
                     out_twists: Sequence[int], in_cols: List[Vector], N: FPModule) -> Subquotient:
    """Homology at ``E`` of ``E_in -> E -> E_out`` tensored with ``N``.

    Maps are given by columns between free modules; ``out_cols=None`` means
    the outgoing map is zero.  Generators of ``E ⊗ G_0`` are indexed
    ``a * rank(N) + b``.
    """
    g = N.rank
    twists = [a + b for a in mid_twists for b in N.twists]
    if g == 0 or not mid_twists:
        return Subquotient(ring, twists, [], [])
    one = ring._one
    B = N.relations

    def tensor_left(cols):
        out = []
        for c in cols:
            for b in range(g):
                out.append(remap_positions(c, lambda r, b=b: r * g + b))
        return out

    def tensor_right(rank):
        out = []
        for a in range(rank):
            out.extend(remap_positions(c, lambda j, a=a: a * g + j) for c in B)
        return out

    k = len(twists)
    if not out_cols or not any(out_cols):
        Z = [{top_term(one, j): 1} for j in range(k)]
    else:
        tw_out = [a + b for a in out_twists for b in N.twists]
        cols = tensor_left(out_cols) + tensor_right(len(out_twists))
        Z = []
        for s in ring.kernel(cols, tw_out):
            z = {t: c for t, c in s.items() if PMASK - (t & PMASK) < k}
            if z:
                Z.append(z)
    W = tensor_left(in_cols) + tensor_right(len(mid_twists))
    return Subquotient(ring, twists, Z, W)


def tor_subquotient(M: FPModule, N: FPModule, i: int, res: Optional[Resolution] = None) -> Subquotient:
    _check_same_ring(M, N)
    if i < 0:
        raise BoundError("negative homological degree")
    if res is None:
        res = free_resolution(M, i + 1)
    if not res.has(i + 1):
        raise BoundError(f"resolution too short for Tor_{i}")
    F = res.free_module(i).twists
    out_cols = res.differential(i).columns if i >= 1 else None
    out_tw = res.free_module(i - 1).twists if i >= 1 else ()
    in_cols = res.differential(i + 1).columns
    return complex_homology(M.ring, F, out_cols, out_tw, in_cols, N)


def tor(M: FPModule, N: FPModule, i: int, res: Optional[Resolution] = None) -> FPModule:
    """``Tor_i^R(M, N)`` as ``H_i(F ⊗ N)`` for the minimal resolution ``F`` of ``M``."""
    return tor_subquotient(M, N, i, res).to_module()


def ext_subquotient(M: FPModule, N: FPModule, i: int, res: Optional[Resolution] = None) -> Subquotient:
    _check_same_ring(M, N)
    if i < 0:
        raise BoundError("negative homological degree")
    if res is None:
        res = free_resolution(M, i + 1)
    if not res.has(i + 1):
        raise BoundError(f"resolution too short for Ext^{i}")
    F = res.free_module(i).twists
    dual = [-t for t in F]
    nxt = res.free_module(i + 1).twists
    out_cols = transpose_columns(res.differential(i + 1).columns, len(F))
    if i >= 1:
        prev = res.free_module(i - 1).twists
        in_cols = transpose_columns(res.differential(i).columns, len(prev))
    else:
        in_cols = []
    return complex_homology(M.ring, dual, out_cols, [-t for t in nxt], in_cols, N)


def ext(M: FPModule, N: FPModule, i: int, res: Optional[Resolution] = None) -> FPModule:
    """``Ext^i_R(M, N)`` as ``H^i(Hom(F, N))``; ``Hom(F_i, R)`` has negated twists."""
    return ext_subquotient(M, N, i, res).to_module()


def _ambient_residue_field(ring):
    S = ring.ambient()
    if "residue_field" not in S._cache:
        S._cache["residue_field"] = FPModule.residue_field(S)
    return S._cache["residue_field"]


def depth_ab(M: FPModule) -> int:
    """``n - pd_S(M)`` over the ambient polynomial ring."""
    from .resolution import projective_dimension_ambient

    return M.ring.n - projective_dimension_ambient(M)


def depth_ext(M: FPModule) -> int:
    """First ``i`` with ``Ext^i_S(k, M) != 0``."""
    k = _ambient_residue_field(M.ring)
    MS = M.as_ambient()
    res = free_resolution(k, M.ring.n + 1)
    for i in range(M.ring.n + 1):
        if not ext_subquotient(k, MS, i, res).is_zero():
            return i
    raise InputError("module is zero")


def depth(M: FPModule) -> int:
    """Depth of a nonzero module, checked by two independent routes."""
    if "depth" in M._cache:
        return M._cache["depth"]
    if M.is_zero():
        raise InputError("depth of the zero module is undefined")
    a = depth_ab(M)
    b = depth_ext(M)
    if a != b:
        raise InternalInconsistency(f"depth routes disagree: AB gives {a}, Ext gives {b}")
    M._cache["depth"] = a
    return a


def grade(M: FPModule, bound: Optional[int] = None):
    """Smallest ``i`` with ``Ext^i_R(M, R) != 0``.

    Returns an int, or an inconclusive Verdict if none is found up to the bound.
    """
    if M.is_zero():
        raise InputError("grade of the zero module is undefined")
    R = FPModule.free(M.ring, [0])
    top = min(M.ring.n, bound if bound is not None else default_bound(M.ring))
    res = free_resolution(M, top + 1)
    for i in range(top + 1):
        if not res.has(i + 1):
            break
        if not ext_subquotient(M, R, i, res).is_zero():
            return i
    return Verdict(Status.INCONCLUSIVE, bound=top)


def is_tor_independent(M: FPModule, N: FPModule, bound: Optional[int] = None) -> Verdict:
    """Bounded test of ``Tor_i(M, N) = 0`` for ``i >= 1``.

    Holds is certified when either module has a finite resolution over ``R``
    found within the bound, since Tor vanishes beyond it.
    """
    _check_same_ring(M, N)
    if bound is None:
        bound = default_bound(M.ring)
    if bound < 1:
        raise InputError("bound must be at least 1")
    rM = free_resolution(M, bound + 1)
    rN = free_resolution(N, bound + 1)
    # resolve the module with the shorter resolution
    first, second, res = M, N, rM
    if rN.complete and (not rM.complete or rN.length < rM.length):
        first, second, res = N, M, rN
    top = min(bound, res.length) if res.complete else bound
    for i in range(1, top + 1):
        sq = tor_subquotient(first, second, i, res)
        if not sq.is_zero():
            return Verdict(Status.FAILS, witness=(i, sq.to_module()), bound=bound)
    if res.complete:
        return Verdict(Status.HOLDS, bound=bound, detail={"pd": res.length})
    return Verdict(Status.INCONCLUSIVE, bound=bound)


# -- duals and G-dimension ---------------------------------------------------

def dual_generators(M: FPModule):
    """Generators of ``M* = Hom(M, R)`` inside ``F_0^*`` and their degrees.

    ``M*`` is the kernel of ``A^T : F_0^* -> F_1^*`` for the presentation ``A``.
    """
    ring = M.ring
    dual_tw = [-t for t in M.twists]
    one = ring._one
    if not M.relations:
        gens = [{top_term(one, j): 1} for j in range(M.rank)]
    else:
        AT = transpose_columns(M.relations, M.rank)
        gens = ring.kernel(AT, [-d for d in M.relation_degrees()])
    degs = [vec_degree(g, dual_tw, ring.n) for g in gens]
    return gens, degs


def dual_module(M: FPModule) -> FPModule:
    """``Hom_R(M, R)`` with generators in the order of :func:`dual_generators`."""
    ring = M.ring
    gens, degs = dual_generators(M)
    if not gens:
        return FPModule.zero(ring)
    rels = ring.kernel(gens, [-t for t in M.twists])
    return FPModule(ring, degs, rels)


def biduality_check(M: FPModule, d_max: int = DEFAULT_DMAX) -> dict:
    """Exact injectivity/surjectivity of ``M -> M**`` plus Hilbert-function equality.

    With ``B`` the matrix of generators of ``M*`` and ``C`` its relations,
    ``M** = ker(C^T)`` and the natural map is induced by ``B^T``.
    """
    ring = M.ring
    M = minimal_presentation(M)
    gens, degs = dual_generators(M)
    one = ring._one
    if not gens:
        return {"injective": M.is_zero(), "surjective": True, "hilbert": M.is_zero()}
    Mstar = FPModule(ring, degs, ring.kernel(gens, [-t for t in M.twists]))
    BT = transpose_columns(gens, M.rank)
    tw2 = [-d for d in degs]
    # kernel of theta must lie in im A + I F_0
    ker = ring.kernel(BT, tw2)
    eng = M.gb()
    injective = all(eng.contains(v) for v in ker)
    if Mstar.relations:
        CT = transpose_columns(Mstar.relations, len(degs))
        bidual = ring.kernel(CT, [-d for d in Mstar.relation_degrees()])
    else:
        bidual = [{top_term(one, j): 1} for j in range(len(degs))]
    img = GBEngine(BT, tw2, ring.n, ring.p, ideal=ring.gb)
    surjective = all(img.contains(v) for v in bidual)
    hf_bidual = Subquotient(ring, tw2, bidual, []).hilbert_function(d_max)
    hilbert = hf_bidual == M.hilbert_function(d_max)
    return {"injective": injective, "surjective": surjective, "hilbert": hilbert}


def _ext_vanishes(M: FPModule, bound: int) -> Optional[int]:
    """First ``1 <= i <= bound`` with ``Ext^i(M, R) != 0``, or None."""
    R = FPModule.free(M.ring, [0])
    res = free_resolution(M, bound + 1)
    for i in range(1, bound + 1):
        if res.complete and i > res.length:
            return None
        if not ext_subquotient(M, R, i, res).is_zero():
            return i
    return None


def totally_reflexive_up_to(M: FPModule, bound: int, d_max: int = DEFAULT_DMAX) -> dict:
    out = {"zero": M.is_zero()}
    if out["zero"]:
        out["passes"] = True
        return out
    out["ext"] = _ext_vanishes(M, bound)
    out["dual_ext"] = None
    if out["ext"] is None:
        D = dual_module(M)
        if not D.is_zero():
            out["dual_ext"] = _ext_vanishes(minimal_presentation(D), bound)
    out["biduality"] = biduality_check(M, d_max) if out["ext"] is None and out["dual_ext"] is None else None
    out["passes"] = (out["ext"] is None and out["dual_ext"] is None
                     and all(out["biduality"].values()))
    return out


def gdim_estimate(M: FPModule, bound: Optional[int] = None, d_max: int = DEFAULT_DMAX) -> Verdict:
    """Smallest ``g <= depth R`` with ``Ω_g(M)`` totally reflexive up to ``bound``."""
    if M.is_zero():
        raise InputError("G-dimension of the zero module is undefined")
    ring = M.ring
    if bound is None:
        bound = default_bound(ring)
    dR = ring.depth()
    res = free_resolution(M, dR + 1)
    log = []
    for g in range(dR + 1):
        om = syzygy(M, g, res=res)
        check = totally_reflexive_up_to(om, bound, d_max)
        log.append({"g": g, "passes": check["passes"]})
        if check["passes"]:
            return Verdict(Status.HOLDS, value=g, bound=bound, detail={"trace": log})
    return Verdict(Status.INCONCLUSIVE, bound=bound, detail={"trace": log})


def tor_hilbert(M: FPModule, N: FPModule, i: int, d_max: int = DEFAULT_DMAX, d_min: int = 0,
                res: Optional[Resolution] = None) -> List[int]:
    return tor_subquotient(M, N, i, res).hilbert_function(d_max, d_min)


__all__ = [
    "Status", "Verdict", "complex_homology", "tor", "tor_subquotient", "tor_hilbert", "ext",
    "ext_subquotient", "depth", "depth_ab", "depth_ext", "grade", "is_tor_independent",
    "dual_module", "dual_generators", "biduality_check", "gdim_estimate",
    "totally_reflexive_up_to", "hilbert_function",
]
