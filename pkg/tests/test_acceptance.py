"""Acceptance criteria 1-10, one pass/fail line each.

Run with ``pytest tests/test_acceptance.py -v``; the lines are printed even
when output capture is on.
"""
import io
import time
from math import comb

import pytest

from depthkit.cli import main
from depthkit.depthcheck import depth_formula_defect, reduce_pair
from depthkit.errors import PreconditionError
from depthkit.fpmodule import FPModule, Ring
from depthkit.homology import tor, tor_hilbert
from depthkit.resolution import betti_table, free_resolution
from depthkit.suite import (InstanceFamily, default_families, generate_instances,
                            known_examples, run_lemma_suite)


@pytest.fixture
def report(capsys):
    def emit(n, ok, note, elapsed):
        with capsys.disabled():
            print(f"\n[criterion {n:2d}] {'PASS' if ok else 'FAIL'}  {note}  ({elapsed:.1f}s)")
    return emit


@pytest.fixture(scope="module")
def known():
    return {k.name: k for k in known_examples()}


@pytest.fixture(scope="module")
def suite_pool():
    pool = []
    for fam in default_families(8, seed=0):
        pool.extend(generate_instances(fam))
    return pool


def test_criterion_01_koszul(report):
    t = time.perf_counter()
    bad = []
    for n in (2, 3, 4):
        S = Ring.polynomial(n)
        k = FPModule.residue_field(S)
        for i in range(n + 2):
            dim = sum(tor(k, k, i).hilbert_function(n + 1))
            if dim != (comb(n, i) if i <= n else 0):
                bad.append((n, i, dim))
        if betti_table(free_resolution(k)) != {(i, i): comb(n, i) for i in range(n + 1)}:
            bad.append((n, "betti"))
    dt = time.perf_counter() - t
    ok = not bad and dt < 10
    report(1, ok, f"Koszul Tor/Betti for n=2,3,4, mismatches {bad}", dt)
    assert ok


def test_criterion_02_depth_double_oracle(report):
    t = time.perf_counter()
    rep = run_lemma_suite(default_families(40, seed=0), ["depth_oracles"])
    dt = time.perf_counter() - t
    tally = rep.tallies["depth_oracles"]
    ok = rep.instances >= 200 and tally["Holds"] == rep.instances and dt < 300
    report(2, ok, f"{rep.instances} instances, AB = Ext route on {tally['Holds']}", dt)
    assert ok, rep.failures[:3]


def test_criterion_03_fixtures(report, known):
    """K1 defect and K2 witness, plus the stated claim Tor_i(K2) = k for 1 <= i <= 8.

    The last claim is false: Tor_i^R(R/(x), R/(x)) over k[x,y]/(xy) is k(-i)
    for odd i and 0 for even i.  It is checked as stated and fails.
    """
    t = time.perf_counter()
    k1, k2 = known["K1"], known["K2"]
    rec = depth_formula_defect(k1.M, k1.N)
    k1_ok = rec.defect == 0 and [rec.depth_M, rec.depth_N, rec.depth_R, rec.depth_MN] == [1, 1, 2, 0]
    rec2 = depth_formula_defect(k2.M, k2.N, 8)
    witness_ok = rec2.tor_verdict.fails and rec2.tor_verdict.witness[0] == 1
    dims = {i: sum(tor_hilbert(k2.M, k2.N, i, 12)) for i in range(1, 9)}
    claim_ok = all(d == 1 for d in dims.values())
    dt = time.perf_counter() - t
    ok = k1_ok and witness_ok and claim_ok and dt < 5
    report(3, ok, f"K1 defect {rec.defect}, K2 witness i={rec2.tor_verdict.witness[0]}, "
                  f"dim Tor_i(K2) for i=1..8: {list(dims.values())}", dt)
    assert k1_ok and witness_ok
    assert claim_ok, f"Tor_i of K2 is not k for every 1 <= i <= 8: {dims}"


def test_criterion_03_k2_true_pattern(known):
    k2 = known["K2"]
    for i in range(1, 9):
        h = tor_hilbert(k2.M, k2.N, i, 12)
        assert h == [1 if (d == i and i % 2) else 0 for d in range(13)]


def test_criterion_04_regular_rings(report):
    t = time.perf_counter()
    fams = [InstanceFamily("regular-2", 2, (), 25, seed=4),
            InstanceFamily("regular-3", 3, (), 25, seed=4)]
    defects, count = [], 0
    for fam in fams:
        for inst in generate_instances(fam):
            rec = depth_formula_defect(inst.M, inst.N)
            count += 1
            if not rec.tor_verdict.holds or rec.defect != 0:
                defects.append((inst.label, rec.tor_verdict.status.value, rec.defect))
    dt = time.perf_counter() - t
    ok = count == 50 and not defects and dt < 120
    report(4, ok, f"{count} pairs over regular rings, bad {defects}", dt)
    assert ok


def test_criterion_05_complete_intersections(report):
    t = time.perf_counter()
    fams = [InstanceFamily("hypersurface-3", 3, (2,), 9, seed=5),
            InstanceFamily("ci-3", 3, (2, 2), 8, seed=5, max_deg=1),
            InstanceFamily("ci-4", 4, (2, 2), 8, seed=5, max_deg=1)]
    holds, inconclusive, bad = 0, 0, []
    for fam in fams:
        for inst in generate_instances(fam):
            rec = depth_formula_defect(inst.M, inst.N)
            v = rec.tor_verdict
            if v.holds:
                holds += 1
                if rec.defect != 0:
                    bad.append((inst.label, rec.defect))
            elif v.inconclusive:
                inconclusive += 1
            else:
                bad.append((inst.label, "Tor fails"))
    dt = time.perf_counter() - t
    ok = holds + inconclusive == 25 and not bad and dt < 600
    report(5, ok, f"25 CI pairs: {holds} Holds with defect 0, {inconclusive} inconclusive "
                  f"(not counted), bad {bad}", dt)
    assert ok


def test_criterion_06_reduction_round_trip(report, suite_pool):
    t = time.perf_counter()
    applied, bad = 0, []
    for inst in suite_pool:
        try:
            step = reduce_pair(inst.M, inst.N)
        except PreconditionError:
            continue
        applied += 1
        b, a = step.depths_before, step.depths_after
        want = {k: v - 1 for k, v in b.items()}
        if a != want or not step.postconditions["Tor-independent over quotient"]:
            bad.append((inst.label, b, a))
    dt = time.perf_counter() - t
    ok = applied > 0 and not bad
    report(6, ok, f"{applied}/{len(suite_pool)} instances reduced, violations {len(bad)}", dt)
    assert ok, bad


def test_criterion_07_exact_sequences(report, suite_pool):
    t = time.perf_counter()
    rep = run_lemma_suite([], ["les_spect", "cor_spect"], p_max=4, d_max=12,
                          instances=suite_pool)
    dt = time.perf_counter() - t
    les, cor = rep.tallies["les_spect"], rep.tallies["cor_spect"]
    ok = (les["Fails"] == cor["Fails"] == 0 and les["InconclusiveUpToBound"] == 0
          and cor["InconclusiveUpToBound"] == 0 and les["Holds"] > 0 and cor["Holds"] > 0)
    report(7, ok, f"les Holds {les['Holds']} skipped {les['Skipped']}; "
                  f"cor Holds {cor['Holds']} skipped {cor['Skipped']}", dt)
    assert ok, rep.failures[:3]


def test_criterion_08_main_inequality(report, suite_pool):
    t = time.perf_counter()
    rep = run_lemma_suite([], ["main_inequality"], instances=suite_pool)
    dt = time.perf_counter() - t
    tl = rep.tallies["main_inequality"]
    ok = tl["Fails"] == 0 and tl["Holds"] > 0
    report(8, ok, f"Holds {tl['Holds']}, skipped {tl['Skipped']}, fails {tl['Fails']}", dt)
    assert ok, rep.failures[:3]


def test_criterion_09_resolution_certificates(report, suite_pool, known):
    t = time.perf_counter()
    mods = [m for inst in suite_pool for m in (inst.M, inst.N)]
    mods += [m for k in known.values() for m in (k.M, k.N)]
    mods += [FPModule.residue_field(Ring.polynomial(n)) for n in (2, 3, 4)]
    bad = []
    for idx, M in enumerate(mods):
        for over in ("R", "S"):
            res = free_resolution(M, 4, over=over)
            cert = res.certify()
            if not all(cert.values()):
                bad.append((idx, over, cert))
    dt = time.perf_counter() - t
    ok = not bad
    report(9, ok, f"{2 * len(mods)} resolutions certified, violations {len(bad)}", dt)
    assert ok, bad


def test_criterion_10_determinism(report):
    t = time.perf_counter()
    argv = ["suite", "--count", "2", "--seed", "3", "--format", "machine"]
    outs = []
    for _ in range(2):
        buf = io.StringIO()
        main(argv, out=buf)
        outs.append(buf.getvalue().encode())
    dt = time.perf_counter() - t
    ok = outs[0] == outs[1] and len(outs[0]) > 0
    report(10, ok, f"two suite runs, {len(outs[0])} bytes, identical={outs[0] == outs[1]}", dt)
    assert ok
