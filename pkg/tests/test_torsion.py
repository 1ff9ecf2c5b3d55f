import oracle
from silting import linalg as la
from silting.algebra import direct_sum
from silting.torsion import TorsionPair, defect, in_F, in_T, torsion_decompose, verify_silting_equality


def rank_a(M):
    return la.rank(M.act(M.algebra.element({"a": 1})), M.field) if M.dim else 0

def test_torsion_class_matches_oracle(tp, inv):
    got = sorted(M.dim_vector() for M in inv if in_T(tp, M))
    assert got == [tuple(x) for x in oracle.FROZEN["torsion"]]

def test_torsion_free_class_matches_oracle(tp, inv):
    got = sorted((*M.dim_vector(), rank_a(M)) for M in inv if in_F(tp, M))
    assert got == [tuple(x) for x in oracle.FROZEN["torsion_free"]]

def test_defects(Pbar, S2, P1, inv):
    assert defect(Pbar, S2).dim == oracle.FROZEN["defect_S2"]
    assert defect(Pbar, P1).dim == oracle.FROZEN["defect_P1"]
    for M in inv:
        d1, d2 = M.dim_vector()
        # independent formula 2 d2 - rank(a) from the oracle
        assert defect(Pbar, M).dim == 2 * d2 - rank_a(M)

def test_gen_equals_defect_kernel(tp, inv):
    rep_ = verify_silting_equality(tp, inv)
    assert rep_.ok and not rep_.counterexamples
    assert rep_.to_json()["ok"]

def test_single_summand_counterexample(single, inv, P1):
    tp1 = TorsionPair.of(single)
    assert not tp1.is_silting
    rep_ = verify_silting_equality(tp1, inv)
    assert not rep_.ok
    got = sorted(M.dim_vector() for _, M in rep_.counterexamples)
    assert got == [tuple(x) for x in oracle.FROZEN["single_counterexamples"]]
    # P(1) is the smallest witness: defect zero but not generated by S(1)
    assert defect(single, P1).dim == 0 and not tp1.in_gen(P1)

def test_torsion_decomposition(tp, S1, P1):
    M = direct_sum([P1, S1])
    (t, inc), (q, proj) = torsion_decompose(tp, M)
    assert t.dim == 1 and in_T(tp, t)
    assert q.dim == 2 and in_F(tp, q)
    inc.check()
    proj.check()

def test_regular_stalk_torsion_is_everything(regular, inv):
    tpr = TorsionPair.of(regular)
    assert all(in_T(tpr, M) for M in inv)
    assert [M for M in inv if in_F(tpr, M) and M.dim] == []
