import numpy as np
import pytest

import oracle
from silting import instances
from silting.complexes import (
    ChainMapClass,
    cohomology,
    compose,
    direct_sum,
    hom_D_module,
    hom_K,
    identity,
    is_presilting,
    is_silting,
    module_stalk,
    projective_complex,
    silting_certificate,
)
from silting.errors import PreconditionError


def test_end_K_of_pbar_matches_oracle(Pbar):
    assert hom_K(Pbar, Pbar, 0).dim == oracle.FROZEN["end_K_pbar"] == oracle.end_K_pbar()


def test_presilting(Pbar, single, tilting, regular):
    for X in (Pbar, single, tilting, regular):
        assert is_presilting(X)
        assert hom_K(X, X, 1).dim == 0


def test_stalk_of_p2_in_degree_zero_plus_shift_is_not_presilting(A):
    P2 = projective_complex(A, [], ["2"], [], "P2")
    X = direct_sum([P2, instances.shifted_p2(A)])
    assert not is_presilting(X)


def test_certificate_for_pbar(Pbar):
    cert = silting_certificate(Pbar)
    assert cert is not None
    assert cert.d == oracle.FROZEN["certificate_d"] == oracle.certificate_d()
    assert all(cert.verify().values())


def test_single_summand_is_not_silting(single):
    assert is_presilting(single)
    assert silting_certificate(single) is None
    assert not is_silting(single)


def test_regular_stalk_is_silting_with_empty_precover(regular, tilting):
    cert = silting_certificate(regular)
    assert cert is not None and cert.d == 0
    assert is_silting(tilting)


def test_certificate_requires_presilting(A):
    P2 = projective_complex(A, [], ["2"], [], "P2")
    X = direct_sum([P2, instances.shifted_p2(A)])
    with pytest.raises(PreconditionError):
        silting_certificate(X)


def test_cohomology_of_pbar(Pbar, S1):
    T, pi = cohomology(Pbar, 0)
    assert T.dim == 1 and T.dim_vector() == S1.dim_vector()
    K, inc = cohomology(Pbar, -1)
    assert K.dim == 1  # the P(2) in degree -1


def test_hom_into_module_stalks_is_defect(Pbar, S2, P1):
    assert hom_D_module(Pbar, S2, 1).dim == oracle.FROZEN["defect_S2"]
    assert hom_D_module(Pbar, P1, 1).dim == oracle.FROZEN["defect_P1"]


def test_composition_is_associative_and_unital(Pbar):
    H = hom_K(Pbar, Pbar, 0)
    basis = H.basis
    for f in basis:
        assert np.array_equal(H.coords(compose(identity(Pbar), f)), H.coords(f))
        assert np.array_equal(H.coords(compose(f, identity(Pbar))), H.coords(f))
        for g in basis:
            for h in basis:
                lhs = compose(h, compose(g, f))
                rhs = compose(compose(h, g), f)
                assert np.array_equal(H.coords(lhs), H.coords(rhs))


def test_shift_one_composition_with_degree_zero(Pbar, regular):
    # Hom_K(P, R[1]) composed with End_K(P) stays in Hom_K(P, R[1])
    H1 = hom_K(Pbar, regular, 1)
    E = hom_K(Pbar, Pbar, 0)
    for u in H1.basis:
        for e in E.basis:
            v = compose(u, e)
            assert v.shift == 1
            H1.coords(v)


def test_contractible_complex_has_null_identity(A):
    F = A.field
    C = projective_complex(A, ["1"], ["1"], [[A.vertex_idempotent("1")]], "cone")
    assert identity(C).is_null()
    assert hom_K(C, C, 0).dim == 0
    X = instances.arrow_complex(A)
    assert not identity(X).is_null()
    z = ChainMapClass(X, X, 0, (F.zeros((X.m1.dim, X.m1.dim)), F.zeros((X.m0.dim, X.m0.dim))))
    assert z.is_null()


def test_module_stalk_is_cached(S2):
    assert module_stalk(S2) is module_stalk(S2)
