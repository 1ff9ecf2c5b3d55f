import numpy as np
import pytest

import oracle
from silting.algebra import (
    Quiver,
    direct_sum,
    enumerate_modules,
    enumerate_submodules,
    hom_space,
    is_isomorphic,
    module_from_representation,
    path_algebra,
    projective_module,
    regular_module,
    split_idempotents,
)
from silting.errors import InfiniteDimensionalError, PreconditionError
from silting.linalg import GF, QQ


def rep_module(A, X):
    d1, d2, M = X
    return module_from_representation(A, {"1": d1, "2": d2}, {"a": [list(r) for r in M]} if d1 * d2 else {})


def test_a2_basis_and_projectives(A):
    assert A.dim == 3
    A.check()
    assert projective_module(A, "1").dim_vector() == (1, 1)
    assert projective_module(A, "2").dim_vector() == (0, 1)


def test_relations_cut_down_dimension():
    q = Quiver(["1", "2", "3"], [("a", "1", "2"), ("b", "2", "3")])
    assert path_algebra(q, [], GF(3)).dim == 6
    A = path_algebra(q, [[(1, ("a", "b"))]], GF(3))
    assert A.dim == 5
    A.check()


def test_loop_needs_a_nilpotent_relation():
    q = Quiver(["1"], [("x", "1", "1")])
    with pytest.raises(InfiniteDimensionalError):
        path_algebra(q, [], QQ)
    assert path_algebra(q, [[(1, ("x", "x"))]], QQ).dim == 2


def test_relation_terms_must_have_length_two():
    q = Quiver(["1", "2"], [("a", "1", "2")])
    with pytest.raises(PreconditionError):
        path_algebra(q, [[(1, ("a",))]], GF(2))


def test_unknown_vertex_is_named():
    with pytest.raises(ValueError, match=r"arrows\[0\]\.target"):
        Quiver(["1"], [("a", "1", "9")])


def test_inventory_matches_oracle(inv):
    assert len(inv) == oracle.FROZEN["inventory_size"] == len(oracle.iso_classes(3))
    assert sorted(M.dim_vector() for M in inv) == sorted(X[:2] for X in oracle.iso_classes(3))


def test_hom_dimensions_match_oracle(A):
    classes = oracle.iso_classes(2)
    mods = [rep_module(A, X) for X in classes]
    for X, M in zip(classes, mods):
        for Y, N in zip(classes, mods):
            assert len(hom_space(M, N)) == oracle.hom_dim(X, Y)


def test_isomorphism_matches_oracle(A):
    classes = oracle.reps(2)
    mods = [(X, rep_module(A, X)) for X in classes]
    for X, M in mods[:12]:
        for Y, N in mods:
            assert (is_isomorphic(M, N) is not None) == oracle.isomorphic(X, Y)


def test_isomorphism_witness_intertwines(A, P1, S1, S2):
    M = direct_sum([S1, S2])
    N = direct_sum([S2, S1])
    f = is_isomorphic(M, N)
    assert f is not None and f.is_iso()
    f.check()
    assert is_isomorphic(P1, M) is None


def test_regular_module_is_sum_of_projectives(A):
    R = regular_module(A)
    assert is_isomorphic(R, direct_sum([projective_module(A, "1"), projective_module(A, "2")])) is not None


def test_submodules_of_p1(P1):
    subs = enumerate_submodules(P1)
    # 0, the socle S(2), P(1)
    assert sorted(S.dim for S, _ in subs) == [0, 1, 2]
    for S, inc in subs:
        inc.check()
        assert inc.is_injective()


def test_split_idempotents_of_a2(A):
    es = split_idempotents(A)
    assert len(es) == 2
    F = A.field
    assert np.array_equal(F.add(es[0], es[1]), A.unit)
    for e in es:
        assert np.array_equal(A.multiply(e, e), e)


def test_enumeration_over_gf3_counts_classes():
    A = path_algebra(Quiver(["1", "2"], [("a", "1", "2")]), [], GF(3))
    # classes of representations of A2 depend only on (d1, d2, rank)
    assert len(enumerate_modules(A, 2)) == 1 + 2 + 4
