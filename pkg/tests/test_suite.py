import json

import pytest

from depthkit.depthcheck import depth_formula_defect
from depthkit.errors import GenerationError
from depthkit.fpmodule import Ring
from depthkit.suite import (CHECK_NAMES, RESERVED, InstanceFamily, default_families,
                            gen_random_module, generate_instances, known_examples,
                            run_lemma_suite)


def test_gen_random_module_is_seeded():
    S = Ring.polynomial(3)
    a = gen_random_module(S, 2, 2, 2, seed=11)
    b = gen_random_module(S, 2, 2, 2, seed=11)
    assert a.twists == b.twists and a.relations == b.relations
    assert not a.is_zero()


def test_gen_random_module_syzygy_shift():
    S = Ring.polynomial(3)
    M = gen_random_module(S, 1, 1, 2, seed=3, syzygy_shift=1)
    assert not M.is_zero()


def test_gen_random_module_errors():
    S = Ring.polynomial(2)
    with pytest.raises(GenerationError):
        gen_random_module(S, 0, 1, 2, seed=0)


def test_family_rings_are_complete_intersections():
    for fam in default_families(1):
        R = fam.ring()
        assert R.krull_dim == fam.n - len(fam.relation_degrees)
        assert R.depth() == R.krull_dim


def test_generate_instances_deterministic():
    fam = InstanceFamily("hypersurface-3", 3, (2,), 3, seed=5)
    a = [i.to_text() for i in generate_instances(fam)]
    b = [i.to_text() for i in generate_instances(fam)]
    assert a == b and len(a) == 3


def test_known_examples_listed():
    names = [k.name for k in known_examples()]
    assert names == ["K1", "K2", "K3"]
    assert "K4" in RESERVED


def test_empty_report():
    rep = run_lemma_suite([])
    assert rep.instances == 0 and rep.ok and rep.tallies == {}
    assert json.loads(rep.to_json())["instances"] == 0


def test_unknown_check():
    fam = InstanceFamily("regular-2", 2, (), 1)
    with pytest.raises(KeyError):
        run_lemma_suite([fam], ["no_such_check"])


def test_small_suite_tallies():
    fams = default_families(2, seed=1)
    rep = run_lemma_suite(fams)
    assert rep.instances == 10
    assert set(rep.tallies) == set(CHECK_NAMES)
    for name, t in rep.tallies.items():
        assert sum(t.values()) == 10, name
    assert rep.failures == [], rep.failures
    # the depth formula never needs skipping on generated pairs, which are Tor-independent
    assert rep.tallies["depth_formula"]["Skipped"] == 0


def test_known_examples_in_suite():
    K = {k.name: k for k in known_examples()}
    from depthkit.suite import Instance

    insts = [Instance(n, 0, K[n].instance.ring, K[n].M, K[n].N, "known") for n in K]
    rep = run_lemma_suite([], ["depth_formula"], instances=insts)
    t = rep.tallies["depth_formula"]
    assert t["Holds"] == 2 and t["Skipped"] == 1 and rep.ok


def test_report_json_is_deterministic():
    fams = [InstanceFamily("regular-3", 3, (), 2, seed=4)]
    a = run_lemma_suite(fams, ["depth_formula", "depth_oracles"]).to_json()
    b = run_lemma_suite(fams, ["depth_formula", "depth_oracles"]).to_json()
    assert a == b and "timings" not in a


def test_regular_instances_have_zero_defect():
    fam = InstanceFamily("regular-3", 3, (), 50, seed=2)
    for inst in generate_instances(fam):
        rec = depth_formula_defect(inst.M, inst.N)
        assert rec.tor_verdict.holds, inst.label
        assert rec.defect == 0, inst.label
