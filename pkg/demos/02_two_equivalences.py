"""The two halves of the torsion pair seen from the endomorphism ring.

Torsion modules M come back from H_P(M, 0) via - (x) T, while torsion-free
modules F are recovered from their defect H_P(F, 1) by the tensor defect
K_T, the kernel of - (x) beta*.
"""
from silting import instances
from silting.algebra import enumerate_modules, is_isomorphic
from silting.dg import K_T
from silting.functors import H_P, T_P, beta_star, endo_algebra, epsilon, phi
from silting.torsion import TorsionPair, in_F, in_T

A = instances.a2()
Pbar = instances.silting_pair(A)
tp = TorsionPair.of(Pbar)
b = beta_star(tp.certificate)
inv = enumerate_modules(A, 3)

E = endo_algebra(Pbar)
e = epsilon(Pbar)
print(f"End(P) has dim {E.dim}, End(T) has dim {e.E.dim}, kernel of H^0 has dim {e.kernel_dim}")
print(f"beta*: {b.source.dim} -> {b.target.dim}, mono={b.is_mono}, cokernel dim {b.cokernel.dim}\n")

print("torsion side: M -> T_P(H_P(M, 0))")
for M in inv:
    if in_T(tp, M):
        print(f"  {M.name:14s} phi iso: {phi(Pbar, M, tp).is_iso()}  "
              f"round trip iso: {is_isomorphic(T_P(Pbar, H_P(Pbar, M, 0)), M) is not None}")

print("\ntorsion-free side: F -> K_T(H_P(F, 1))")
for M in inv:
    if in_F(tp, M) and M.dim:
        Y = H_P(Pbar, M, 1)
        back = K_T(Y, Pbar, b)
        print(f"  {M.name:14s} dim {M.dim}  defect dim {Y.dim}  K_T dim {back.dim}  "
              f"recovered: {is_isomorphic(back, M) is not None}")
