"""Which two-term complexes over 1 -a-> 2 are silting?

The arrow complex P(2) -> P(1) is presilting on its own, but it only becomes
silting once P(2)[1] is added. We certify the sum, then look at the modules
that break the equality Gen(T) = D_sigma for the single summand.
"""
from silting import instances
from silting.algebra import enumerate_modules
from silting.complexes import is_presilting, silting_certificate
from silting.torsion import TorsionPair, defect, in_F, in_T, verify_silting_equality

A = instances.a2()
inv = enumerate_modules(A, 3)
print(f"{A.name} over F_2 has {len(inv)} modules of dimension <= 3 up to isomorphism\n")

for X in (instances.arrow_complex(A), instances.silting_pair(A), instances.tilting_pair(A)):
    cert = silting_certificate(X) if is_presilting(X) else None
    status = f"silting, d = {cert.d}" if cert else "not silting"
    print(f"{X.name:8s} presilting={is_presilting(X)}  {status}")

single = instances.arrow_complex(A)
eq = verify_silting_equality(TorsionPair.of(single), inv)
print("\nfor the single summand the equality fails at:")
for name, M in eq.counterexamples:
    print(f"  {name}  dim vector {tuple(M.dim_vector())}  defect dim {defect(single, M).dim}")

Pbar = instances.silting_pair(A)
tp = TorsionPair.of(Pbar)
print(f"\nwith P(2)[1] added, T = H^0 has dim vector {tuple(tp.T.dim_vector())}")
print("module          torsion  torsion-free  defect")
for M in inv:
    print(f"  {M.name:14s} {in_T(tp, M)!s:8s} {in_F(tp, M)!s:13s} {defect(Pbar, M).dim}")
print(f"Gen(T) = D_sigma everywhere: {verify_silting_equality(tp, inv).ok}")
