"""Computing - (x)^L P through the truncated dg endomorphism algebra.

For the silting pair, P^0 = P(1) is not flat over the degree-zero part of
the dg algebra, so tensoring the modules naively loses H^-1. Resolving the
module first fixes this; for the tilting complex both agree.
"""
from silting import instances
from silting.algebra import projective_module, simple_module
from silting.complexes import cohomology
from silting.dg import build_B, tensor_dg, tensor_dg_literal
from silting.functors import H_P, K_T_linear, T_P, beta_star
from silting.torsion import TorsionPair


def compare(P, modules):
    tdg = build_B(P)
    b = beta_star(TorsionPair.of(P).certificate)
    print(f"{P.name}: B^-1 dim {tdg.dim_Bm1}, B^0 dim {tdg.dim_B0}")
    print("  Y              T_P  K_T | derived H0 H-1 | naive H0 H-1")
    for Y in modules:
        d, n = tensor_dg(Y, tdg), tensor_dg_literal(Y, tdg)
        dh = [cohomology(d, i)[0].dim for i in (0, -1)]
        nh = [cohomology(n, i)[0].dim for i in (0, -1)]
        print(f"  {Y.name:14s} {T_P(P, Y).dim:3d}  {K_T_linear(Y, b).dim:3d} | "
              f"{dh[0]:10d} {dh[1]:3d} | {nh[0]:8d} {nh[1]:3d}")
    print()


A = instances.a2()
S1, S2, P1 = simple_module(A, "1", "S1"), simple_module(A, "2", "S2"), projective_module(A, "1", "P1")
for P in (instances.silting_pair(A), instances.tilting_pair(A)):
    compare(P, [H_P(P, M, n) for M in (S1, S2, P1) for n in (0, 1)])
