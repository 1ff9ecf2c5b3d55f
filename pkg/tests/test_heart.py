import json

import pytest

from silting.algebra import direct_sum, enumerate_modules, hom_space, is_isomorphic
from silting.complexes import GeneralTwoTerm, cohomology, stalk
from silting.errors import PreconditionError
from silting.functors import H_P, endo_algebra
from silting.heart import (
    DEFAULT_CHECKS,
    heart_sides,
    heart_test_complexes,
    hom_heart,
    in_heart,
    inventories,
    roundtrip_heart,
    run_suite,
)
from silting.torsion import TorsionPair, in_F, in_T


def test_stalks_in_the_heart(tp, inv):
    for M in inv:
        if in_T(tp, M):
            assert in_heart(tp, stalk(M, 0))
        if in_F(tp, M):
            assert in_heart(tp, stalk(M, -1))


def test_S2_in_degree_zero_is_not_in_the_heart(tp, S2):
    assert heart_sides(tp, stalk(S2, 0)) == (False, False)


def test_hom_heart_on_stalks(Pbar, tp, inv):
    for M in inv:
        if in_T(tp, M):
            assert is_isomorphic(hom_heart(Pbar, stalk(M, 0)), H_P(Pbar, M, 0)) is not None
        if in_F(tp, M):
            assert is_isomorphic(hom_heart(Pbar, stalk(M, -1)), H_P(Pbar, M, 1)) is not None


def test_hom_heart_of_shifted_S2(Pbar, S2):
    Y = hom_heart(Pbar, stalk(S2, -1))
    assert Y.dim == 2
    assert Y.algebra is endo_algebra(Pbar).algebra


def test_roundtrip_examples(tp, S1, S2):
    T = tp.T
    rt = roundtrip_heart(tp, stalk(T, 0))
    assert rt.ok
    rt = roundtrip_heart(tp, stalk(S2, -1))
    assert rt.ok and rt.hom_dim == 2
    X = GeneralTwoTerm(S2, S1, S1.field.zeros((1, 1)), "S2[1]+S1")
    rt = roundtrip_heart(tp, X)
    assert rt.ok and rt.hom_dim == 3


def test_roundtrip_needs_heart_object(tp, S2):
    with pytest.raises(PreconditionError):
        roundtrip_heart(tp, stalk(S2, 0))


def test_heart_criteria_agree_on_generated_complexes(tp, inv):
    cands = heart_test_complexes(inv, 60)
    assert len(cands) == 60
    seen = set()
    for X in cands:
        a, b_ = heart_sides(tp, X)
        assert a == b_
        seen.add(a)
    assert seen == {True, False}


def test_roundtrip_on_all_heart_objects(tp, inv):
    n = 0
    for X in heart_test_complexes(inv, 60):
        if in_heart(tp, X):
            assert roundtrip_heart(tp, X).ok
            n += 1
    assert n >= 10


def test_nonsplit_heart_object(tp, P1, S1, S2):
    # P(1) -> S(1) onto: kernel S(2) torsion-free, cokernel 0
    f = next(iter(hom_space(P1, S1).basis))
    X = GeneralTwoTerm(P1, S1, f, "P1->S1")
    assert in_heart(tp, X)
    assert is_isomorphic(cohomology(X, -1)[0], S2) is not None
    assert roundtrip_heart(tp, X).ok


@pytest.fixture(scope="module")
def report(tp):
    R, E = inventories(tp, 3)
    return run_suite(tp, R, E, algebra="A2")


def test_suite_passes_on_pbar(report):
    js = report.to_json()
    assert js["summary"] == {"passed": len(DEFAULT_CHECKS), "failed": 0, "skipped": 0}
    assert [c["name"] for c in js["checks"]] == DEFAULT_CHECKS
    json.dumps(js)


def test_suite_bijection_table(report):
    rows = {r["F"]: r for r in report.tables["F_U"]}
    by_dim = {(r["dim_F"], r["defect_dim"]): r["K_T_dim"] for r in rows.values()}
    # S(2): defect 2, recovered with K_T dim 1; P(1): defect 1, K_T dim 2
    assert by_dim[(1, 2)] == 1 and by_dim[(2, 1)] == 2
    assert all(r["recovered"] for r in rows.values())


def test_suite_skips_after_failed_equality(single):
    tp1 = TorsionPair.of(single)
    R = enumerate_modules(single.algebra, 3)
    rep = run_suite(tp1, R, [])
    js = rep.to_json()
    eq = rep.check("silting_equality")
    assert eq["status"] == "failed" and eq["failures"]
    assert all("action" in f["module"] for f in eq["failures"])
    skipped = [c for c in js["checks"] if c["status"] == "skipped"]
    assert skipped and all(c["reason"] for c in skipped)
    assert not rep.ok


def test_suite_on_regular_stalk(regular):
    tpr = TorsionPair.of(regular)
    R, E = inventories(tpr, 3)
    rep = run_suite(tpr, R, E)
    assert rep.ok
    # only the zero module is torsion-free
    assert rep.check("zeta_F")["instances"] == 1


def test_suite_selected_checks_and_unknown(tp, inv, E_inv):
    rep = run_suite(tp, inv, E_inv, checks=["kt_tor", "silting_equality"])
    assert [c.name for c in rep.checks] == ["silting_equality", "kt_tor"]
    with pytest.raises(KeyError):
        run_suite(tp, inv, E_inv, checks=["nope"])


def test_optional_in_V_check(tp, inv, E_inv):
    rep = run_suite(tp, inv, E_inv, checks=["in_V"])
    assert rep.check("in_V")["status"] == "passed"


def test_failure_records_carry_witnesses(tp, inv, E_inv):
    from silting.heart import CheckRecord
    rec = CheckRecord("x", "y")
    M = direct_sum([inv[1], inv[2]])
    rec.fail("demo", module={"dim": M.dim})
    assert rec.to_json()["status"] == "failed"
    assert rec.to_json()["failures"][0]["module"]["dim"] == 2
