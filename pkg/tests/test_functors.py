import numpy as np
import pytest

from silting import linalg as la
from silting.algebra import ModuleMap, enumerate_modules, enumerate_submodules, is_isomorphic, quotient_module, regular_module, zero_module
from silting.complexes import add_membership
from silting.errors import PreconditionError
from silting.functors import (
    H_P,
    K_T_linear,
    T_P,
    T_P_map,
    beta_star,
    endo_algebra,
    epsilon,
    in_scriptE,
    in_U,
    in_V,
    phi,
    psi,
    six_term,
    tensor_hom_bijective,
    tor1,
    zeta,
)
from silting.torsion import TorsionPair, in_F, in_T


def test_endo_algebra_is_a2(Pbar):
    E = endo_algebra(Pbar)
    assert E.dim == 3
    Ealg = E.algebra
    Ealg.check()
    assert len(Ealg.idempotents) == 2
    # the radical: one element u with u^2 = 0 and e_i u e_j = u for a unique (i, j)
    e1, e2 = Ealg.idempotents
    rad = [v for v in (Ealg.basis_vector(k) for k in range(3)) if not any(np.array_equal(v, e) for e in (e1, e2))]
    assert len(rad) == 1
    u = rad[0]
    assert la.is_zero(Ealg.multiply(u, u))
    corners = [(i, j) for i, ei in enumerate((e1, e2)) for j, ej in enumerate((e1, e2))
               if np.array_equal(Ealg.multiply(Ealg.multiply(ei, u), ej), u)]
    assert len(corners) == 1 and corners[0][0] != corners[0][1]


def test_endo_of_regular_stalk_is_A(A, regular):
    E = endo_algebra(regular)
    assert E.dim == A.dim
    assert is_isomorphic(regular_module(E.algebra), H_P(regular, regular_module(A), 0)) is not None


def test_epsilon(Pbar, regular):
    e = epsilon(Pbar)
    assert e.E.dim == 1 and e.kernel_dim == 2
    assert epsilon(regular).kernel_dim == 0


def test_add_membership(Pbar, regular):
    assert add_membership(Pbar, Pbar) is not None
    assert add_membership(regular, Pbar) is None


def test_H_P_examples(Pbar, S1, S2):
    assert H_P(Pbar, S1, 0).dim == 1
    Y = H_P(Pbar, S2, 1)
    assert Y.dim == 2
    # idempotents are the summand projections (P2->P1, P2->0); each acts with rank 1
    assert Y.algebra.idempotent_labels == ["P2->P1", "P2->0"]
    assert [la.rank(Y.act(e), Y.field) for e in Y.algebra.idempotents] == [1, 1]


def test_H_P_over_regular_stalk_is_identity(regular, inv):
    for M in inv:
        assert H_P(regular, M, 0).dim == M.dim
        assert H_P(regular, M, 1).dim == 0


def test_T_P_and_phi(Pbar, tp, inv, S1, S2):
    assert is_isomorphic(T_P(Pbar, H_P(Pbar, S1, 0)), S1) is not None
    f = phi(Pbar, S2, tp)
    assert f.source.dim == 0
    for M in inv:
        m = phi(Pbar, M, tp)
        assert m.is_injective()
        if in_T(tp, M):
            assert m.is_iso()


def test_psi_round_trip_on_image(Pbar, S1):
    X = H_P(Pbar, S1, 0)
    assert psi(Pbar, X).is_iso()


def test_T_P_lands_in_torsion_class(Pbar, tp, E_inv):
    for X in E_inv:
        M = T_P(Pbar, X)
        assert in_T(tp, M)
        assert H_P(Pbar, M, 1).dim == 0
        assert T_P_map(Pbar, psi(Pbar, X)).is_iso()


def test_beta_star(b):
    assert b.source.dim == 9 and b.target.dim == 9
    assert not b.is_mono
    assert b.cokernel.dim == 1


def test_kt_vanishes_on_H_P_zero(Pbar, b, inv):
    for M in inv:
        assert K_T_linear(H_P(Pbar, M, 0), b).dim == 0
        assert T_P(Pbar, H_P(Pbar, M, 1)).dim == 0


def test_defect_table(Pbar, b, S2, P1):
    # Def(S(2)) = 2 -> K_T dim 1, Def(P(1)) = 1 -> K_T dim 2
    assert [H_P(Pbar, M, 1).dim for M in (S2, P1)] == [2, 1]
    assert [K_T_linear(H_P(Pbar, M, 1), b).dim for M in (S2, P1)] == [1, 2]


def test_zeta_is_iso_on_torsion_free(Pbar, tp, b, inv):
    for M in inv:
        if in_F(tp, M) and M.dim:
            z = zeta(M, b)
            assert z.shape == (M.dim, M.dim) and la.rank(z, M.field) == M.dim


def test_tor1_routes_agree_and_epi(b, E_inv):
    for X in E_inv:
        t = tor1(X, b)
        assert t.dim == t.dim_route_free
        assert t.epi_rank == t.dim <= t.kt_dim


def test_tor1_equals_kt_for_tilting(tilting):
    tpt = TorsionPair.of(tilting)
    bt = beta_star(tpt.certificate)
    assert bt.is_mono
    for X in enumerate_modules(endo_algebra(tilting).algebra, 3):
        t = tor1(X, bt)
        assert t.is_iso


def test_tor1_equals_kt_for_regular_stalk(regular):
    tpr = TorsionPair.of(regular)
    br = beta_star(tpr.certificate)
    assert br.source.dim == 0
    for X in enumerate_modules(endo_algebra(regular).algebra, 2):
        assert tor1(X, br).is_iso and K_T_linear(X, br).dim == 0


def test_six_term_on_all_short_exact_sequences(b, E_inv):
    n = 0
    for X in E_inv:
        for S, inc in enumerate_submodules(X):
            Q, proj, _ = quotient_module(X, inc.matrix)
            p = ModuleMap(X, Q, proj.reshape(Q.dim, X.dim))
            assert six_term(inc, p, b).ok
            n += 1
    assert n > 50


def test_six_term_rejects_non_exact(b, E_inv):
    X = next(Y for Y in E_inv if Y.dim == 2)
    z = ModuleMap(X, X, X.field.zeros((2, 2)))
    with pytest.raises(PreconditionError):
        six_term(z, z, b)


def test_classes_U_V_E(Pbar, b, E_inv):
    E = endo_algebra(Pbar)
    free = regular_module(E.algebra)
    assert not in_U(Pbar, free)
    Z = zero_module(E.algebra)
    assert in_U(Pbar, Z) and in_scriptE(Pbar, Z, b) and in_V(Pbar, Z)
    simples_in_U = [X for X in E_inv if X.dim == 1 and in_U(Pbar, X)]
    assert len(simples_in_U) == 1
    # nothing nonzero is killed by both T_P and K_T
    assert [X for X in E_inv if X.dim and in_scriptE(Pbar, X, b)] == []


def test_tensor_hom_pairing(Pbar, tp, inv):
    cert = tp.certificate
    for M in inv:
        for Q in (Pbar, cert.Q1, cert.Q2):
            assert tensor_hom_bijective(Pbar, M, Q)
