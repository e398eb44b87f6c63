"""Instance families, worked examples and the lemma-check harness."""
from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from importlib import resources
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from . import depthcheck as dc
from .errors import (DepthkitError, GenerationError, PreconditionError, RegularElementError,
                     DepthZeroWitness)
from .fpmodule import FPModule, Ring, minimal_presentation
from .groebner import poly_to_vec
from .homology import Status, Verdict, depth
from .instance import InstanceFile, parse_instance_file, serialize
from .poly import DEFAULT_PRIME, Poly
from .resolution import default_bound, syzygy


# -- rings and modules ---------------------------------------------------------

def _form(ring: Ring, d: int, rng: random.Random, density: float = 1.0,
          variables: Optional[Sequence[int]] = None) -> Poly:
    """Random form of degree ``d``; ``variables`` restricts the support."""
    n, p = ring.n, ring.p
    f = Poly.zero(n, p)
    if d < 0:
        return f
    for e in dc._monomials(n, d):
        if variables is not None and any(e[i] for i in range(n) if i not in variables):
            continue
        if rng.random() <= density:
            c = rng.randrange(1, p)
            f = f + Poly.from_exponents(n, p, {e: c})
    return f


def gen_random_module(ring: Ring, gens: int, rels: int, max_deg: int, seed: int,
                      syzygy_shift: int = 0, variables: Optional[Sequence[int]] = None,
                      retries: int = 20) -> FPModule:
    """Random homogeneous presentation, minimalized and nonzero.

    Generators sit in degrees 0 or 1; each relation picks a degree so that
    every entry has degree at most ``max_deg``.  With ``syzygy_shift = j``
    the result is replaced by ``Ω_j`` of the module, which raises depth.
    """
    if gens < 1:
        raise GenerationError("need at least one generator")
    rng = random.Random(seed)
    for _ in range(retries):
        twists = [rng.choice((0, 0, 1)) if max_deg > 1 else 0 for _ in range(gens)]
        lo, hi = max(twists) + 1, min(twists) + max_deg
        cols = []
        for _ in range(rels):
            D = rng.randint(lo, max(lo, hi))
            v = {}
            for i, t in enumerate(twists):
                if D - t > max_deg:
                    continue
                density = 1.0 if D - t <= 1 else 0.6
                f = _form(ring, D - t, rng, density, variables)
                if rng.random() < 0.2 and rels > 1:
                    f = Poly.zero(ring.n, ring.p)
                v.update(poly_to_vec(f.terms, i))
            cols.append(v)
        M = minimal_presentation(FPModule(ring, twists, cols))
        if syzygy_shift:
            M = syzygy(M, syzygy_shift)
        if not M.is_zero():
            return M
    raise GenerationError(f"no nonzero module after {retries} attempts")


def _regular_sequence(ring: Ring, M: FPModule, length: int, rng: random.Random,
                      max_degree: int = 1) -> List[Poly]:
    """Linear forms forming a regular sequence on ``R`` and ``M``."""
    seq: List[Poly] = []
    R_ = ring
    Mq = M
    for _ in range(length):
        mods = [FPModule.free(R_, [0]), Mq]
        try:
            x = dc.find_regular_element(mods, max_degree=max_degree, trials=8,
                                        seed=rng.randrange(1 << 30))
        except RegularElementError:
            break
        seq.append(x)
        R_ = R_.quotient(x)
        Mq = FPModule(R_, Mq.twists, Mq.relations)
    return seq


@dataclass
class InstanceFamily:
    """A ring recipe plus module recipes.

    ``relation_degrees`` lists the degrees of random relations for ``R``;
    the relations are re-drawn until they form a regular sequence, so every
    family ring is a complete intersection.
    """

    name: str
    n: int
    relation_degrees: Tuple[int, ...] = ()
    count: int = 10
    seed: int = 0
    gens: Tuple[int, int] = (1, 2)
    rels: Tuple[int, int] = (1, 3)
    max_deg: int = 2
    syzygy_prob: float = 0.5
    p: int = DEFAULT_PRIME

    def ring(self) -> Ring:
        S = Ring.polynomial(self.n, self.p)
        if not self.relation_degrees:
            return S
        rng = random.Random(f"ring:{self.name}:{self.seed}")
        for _ in range(50):
            fs = [_form(S, d, rng) for d in self.relation_degrees]
            R = Ring(S.names, fs, self.p)
            if R.krull_dim == self.n - len(fs) and R.depth() == R.krull_dim:
                return R
        raise GenerationError(f"family {self.name}: no complete intersection found")

    def to_dict(self) -> dict:
        return {"name": self.name, "n": self.n, "relation_degrees": list(self.relation_degrees),
                "count": self.count, "seed": self.seed, "gens": list(self.gens),
                "rels": list(self.rels), "max_deg": self.max_deg, "p": self.p}


def default_families(count: int = 10, seed: int = 0) -> List[InstanceFamily]:
    return [
        InstanceFamily("regular-2", 2, (), count, seed),
        InstanceFamily("regular-3", 3, (), count, seed),
        InstanceFamily("hypersurface-3", 3, (2,), count, seed),
        InstanceFamily("ci-3", 3, (2, 2), count, seed, max_deg=1),
        InstanceFamily("ci-4", 4, (2, 2), count, seed, max_deg=1),
    ]


@dataclass
class Instance:
    family: str
    index: int
    ring: Ring
    M: FPModule
    N: FPModule
    strategy: str

    def to_text(self) -> str:
        return serialize(InstanceFile(self.ring, {"M": self.M, "N": self.N}, [("M", "N")]))

    @property
    def label(self) -> str:
        return f"{self.family}#{self.index}"


def _pair_for(ring: Ring, M: FPModule, rng: random.Random, fam: InstanceFamily) -> Tuple[FPModule, str]:
    """A partner ``N`` chosen to make ``(M, N)`` Tor-independent."""
    options = ["regular-sequence", "syzygy-of-regular-sequence", "free"]
    if ring.is_polynomial_ring and ring.n >= 2:
        options.append("split-variables")
    choice = rng.choice(options)
    if choice == "free":
        k = rng.randint(1, 2)
        return FPModule.free(ring, [rng.randint(0, 1) for _ in range(k)]), choice
    if choice == "split-variables":
        return None, choice
    dM, dR = depth(M), ring.depth()
    top = min(dM, dR)
    if top == 0:
        return FPModule.free(ring, [0]), "free"
    seq = _regular_sequence(ring, M, rng.randint(1, top), rng)
    if not seq:
        return FPModule.free(ring, [0]), "free"
    N = FPModule.cyclic(ring, seq)
    if choice == "syzygy-of-regular-sequence" and len(seq) >= 1:
        N = syzygy(N, rng.randint(1, len(seq)))
        if N.is_zero():
            N = FPModule.cyclic(ring, seq)
    return N, choice


def generate_instances(fam: InstanceFamily) -> List[Instance]:
    """Seeded Tor-independent pairs for one family."""
    ring = fam.ring()
    out = []
    for idx in range(fam.count):
        rng = random.Random(f"{fam.name}:{fam.seed}:{idx}")
        strategy_rng = random.Random(rng.randrange(1 << 30))
        gens = rng.randint(*fam.gens)
        rels = rng.randint(*fam.rels)
        shift = 1 if rng.random() < fam.syzygy_prob else 0
        mseed = rng.randrange(1 << 30)
        M = gen_random_module(ring, gens, rels, fam.max_deg, mseed, syzygy_shift=shift)
        N, strategy = _pair_for(ring, M, strategy_rng, fam)
        if strategy == "split-variables":
            a = strategy_rng.randint(1, ring.n - 1)
            left, right = list(range(a)), list(range(a, ring.n))
            M = gen_random_module(ring, gens, rels, fam.max_deg, mseed, variables=left)
            N = gen_random_module(ring, rng.randint(*fam.gens), rng.randint(*fam.rels),
                                  fam.max_deg, rng.randrange(1 << 30), variables=right)
        out.append(Instance(fam.name, idx, ring, M, N, strategy))
    return out


# -- worked examples -----------------------------------------------------------

@dataclass
class KnownExample:
    name: str
    description: str
    instance: InstanceFile
    expected: dict

    @property
    def M(self) -> FPModule:
        return self.instance.module("M")

    @property
    def N(self) -> FPModule:
        return self.instance.module("N")


_KNOWN = [
    ("K1", "k1.inst", "regular ring, M = S/(x), N = S/(y)",
     {"depths": [1, 1, 2, 0], "defect": 0, "tor": "Holds"}),
    ("K2", "k2.inst", "hypersurface xy, M = N = R/(x)",
     {"depths": [1, 1, 1, 1], "tor": "Fails", "tor_witness": 1,
      "tor_hilbert": {str(i): [1 if d == i and i % 2 else 0 for d in range(13)]
                      for i in range(1, 9)}}),
    ("K3", "k3.inst", "quadric cone, matrix factorization module with R/(x)",
     {"depths": [2, 1, 2, 1], "defect": 0, "tor": "Holds"}),
]

# Slot for a published counterexample pair; its modules are not reproduced
# here and must be supplied from the literature.
RESERVED = {"K4": "reserved: counterexample modules over a power series ring in 5 variables"}


def fixture_text(filename: str) -> str:
    path = resources.files("depthkit").joinpath("fixtures").joinpath(filename)
    return path.read_text(encoding="utf-8")


def known_examples() -> List[KnownExample]:
    return [KnownExample(name, desc, parse_instance_file(fixture_text(fn)), exp)
            for name, fn, desc, exp in _KNOWN]


# -- checks --------------------------------------------------------------------

@dataclass
class CheckSpec:
    name: str
    run: Callable
    theorem_backed: bool = True


def _checks(bound: int, seed: int, d_max: int, p_max: int, max_degree: int) -> Dict[str, CheckSpec]:
    return {
        "depth_oracles": CheckSpec("depth_oracles", lambda I: _all(
            dc.check_depth_oracles(I.M), dc.check_depth_oracles(I.N))),
        "resolution_certificate": CheckSpec("resolution_certificate", lambda I: _all(
            dc.check_resolution_certificate(I.M, min(bound, 4)),
            dc.check_resolution_certificate(I.N, min(bound, 4)))),
        "pd_shift": CheckSpec("pd_shift", lambda I: dc.check_pd_shift(I.M)),
        "syzygy_depth": CheckSpec("syzygy_depth", lambda I: dc.check_syzygy_depth(I.N)),
        "depth_formula": CheckSpec("depth_formula", lambda I: dc.check_depth_formula(
            I.M, I.N, bound)),
        "main_inequality": CheckSpec("main_inequality", lambda I: dc.check_main_inequality(
            I.M, I.N, bound)),
        "lemma_depth": CheckSpec("lemma_depth", lambda I: dc.check_lemma_depth(
            I.M, I.N, seed, max_degree)),
        "depth_reduct": CheckSpec("depth_reduct", lambda I: dc.check_depth_reduct(
            I.M, I.N, seed, bound, max_degree)),
        "gdim_dichotomy": CheckSpec("gdim_dichotomy", lambda I: dc.check_gdim_dichotomy(
            I.M, I.N)),
        "corollary_depth_reduct": CheckSpec("corollary_depth_reduct",
                                            lambda I: dc.check_corollary_depth_reduct(
                                                I.M, I.N, seed, bound, max_degree)),
        "les_spect": CheckSpec("les_spect", lambda I: dc.check_les(
            I.M, I.N, seed, p_max, d_max, max_degree)),
        "cor_spect": CheckSpec("cor_spect", lambda I: dc.check_cor_spect(
            I.M, I.N, seed, p_max, d_max, bound, max_degree)),
    }


CHECK_NAMES = tuple(_checks(1, 0, 1, 1, 1))


def _all(*verdicts: Verdict) -> Verdict:
    for v in verdicts:
        if not v.holds:
            return v
    return verdicts[0]


def run_check(spec: CheckSpec, inst) -> Tuple[str, Optional[Verdict], Optional[str]]:
    """Run one check, mapping unmet hypotheses to ``Skipped``."""
    try:
        v = spec.run(inst)
    except (PreconditionError, DepthZeroWitness) as exc:
        return "Skipped", None, str(exc)
    except RegularElementError as exc:
        return Status.INCONCLUSIVE.value, None, str(exc)
    except DepthkitError as exc:
        return Status.FAILS.value, None, f"{type(exc).__name__}: {exc}"
    return v.status.value, v, None


@dataclass
class SuiteReport:
    tallies: Dict[str, Dict[str, int]] = field(default_factory=dict)
    failures: List[dict] = field(default_factory=list)
    inconclusive: List[dict] = field(default_factory=list)
    timings: Dict[str, float] = field(default_factory=dict)
    instances: int = 0
    defect_suspects: List[dict] = field(default_factory=list)
    options: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self, timings: bool = False) -> dict:
        out = {"instances": self.instances, "tallies": self.tallies,
               "failures": self.failures, "inconclusive": self.inconclusive,
               "defect_suspects": self.defect_suspects, "options": self.options}
        if timings:
            out["timings"] = {k: round(v, 3) for k, v in self.timings.items()}
        return out

    def to_json(self) -> str:
        """Deterministic machine report; wall-clock times are left out."""
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, default=str)

    def to_text(self) -> str:
        lines = [f"instances: {self.instances}"]
        for name, t in self.tallies.items():
            lines.append(f"{name:24s} holds {t['Holds']:4d}  fails {t['Fails']:4d}  "
                         f"inconclusive {t['InconclusiveUpToBound']:4d}  "
                         f"skipped {t['Skipped']:4d}")
        for f in self.failures:
            lines.append(f"FAIL {f['check']} on {f['instance']}: {f['reason']}")
        return "\n".join(lines)


def run_lemma_suite(families: Sequence[InstanceFamily] = (), checks: Optional[Sequence[str]] = None,
                    bound: Optional[int] = None, seed: int = 0, d_max: int = 12, p_max: int = 4,
                    max_degree: int = 3, instances: Optional[Sequence] = None) -> SuiteReport:
    """Run the named checks over every instance of every family.

    ``instances`` may supply extra ready-made instances (anything with
    ``M``, ``N``, ``label`` and ``to_text``).  Per-instance errors are
    recorded in the report, never raised.
    """
    pool = []
    for fam in families:
        pool.extend(generate_instances(fam))
    if instances:
        pool.extend(instances)
    report = SuiteReport()
    report.instances = len(pool)
    if not pool:
        return report
    b = bound if bound is not None else max(default_bound(i.M.ring) for i in pool)
    report.options = {"bound": b, "seed": seed, "d_max": d_max, "p_max": p_max,
                      "max_degree": max_degree,
                      "families": [f.to_dict() for f in families]}
    registry = _checks(b, seed, d_max, p_max, max_degree)
    names = list(checks) if checks else list(registry)
    for name in names:
        if name not in registry:
            raise KeyError(f"unknown check {name!r}")
    for name in names:
        spec = registry[name]
        tally = {"Holds": 0, "Fails": 0, "InconclusiveUpToBound": 0, "Skipped": 0}
        start = time.perf_counter()
        for inst in pool:
            status, v, reason = run_check(spec, inst)
            tally[status] += 1
            if status == "Fails":
                entry = {"check": name, "instance": inst.label,
                         "reason": reason or _reason(v), "serialized": inst.to_text()}
                if v is not None:
                    entry["verdict"] = v.to_dict()
                report.failures.append(entry)
                if spec.theorem_backed:
                    report.defect_suspects.append({"check": name, "instance": inst.label})
            elif status == Status.INCONCLUSIVE.value:
                report.inconclusive.append({"check": name, "instance": inst.label,
                                            "reason": reason or "bound exhausted"})
        report.timings[name] = time.perf_counter() - start
        report.tallies[name] = tally
    return report


def _reason(v: Optional[Verdict]) -> str:
    if v is None or v.witness is None:
        return "violated"
    i, what = v.witness
    return f"{what} at {i}" if isinstance(what, str) else f"witness at {i}"
