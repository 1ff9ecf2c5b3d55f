"""Heart membership, the functor Hom_D(P, -) on heart objects and the
verification harness.

A heart object is a two-term complex X = (X^-1 --alpha--> X^0) of arbitrary
modules with Ker(alpha) torsion-free and Coker(alpha) torsion. Since P has
projective entries, Hom_D(P, X[n]) is the cohomology of

    Hom(P^0, X^-1) -> Hom(P^-1, X^-1) x Hom(P^0, X^0) -> Hom(P^-1, X^0)

with maps h -> (h sigma, alpha h) and (f, g) -> alpha f - g sigma.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Optional

import numpy as np

from . import linalg as la
from .algebra import (
    DEFAULT_CONFIG,
    Config,
    FdModule,
    ModuleMap,
    enumerate_modules,
    enumerate_submodules,
    hom_space,
    is_isomorphic,
    quotient_module,
    zero_module,
)
from .complexes import (
    GeneralTwoTerm,
    TwoTermComplex,
    cohomology,
    compose,
    hom_K,
    module_stalk,
    precompose_matrix,
    stalk,
)
from .dg import build_B, is_acyclic, K_T, lift_cross_check, tensor_dg
from .errors import InvariantViolation, PreconditionError, SiltingError
from .functors import (
    H_P,
    H_P_map,
    K_T_linear,
    K_T_map,
    T_P,
    T_P_map,
    beta_star,
    endo_algebra,
    epsilon,
    ext1,
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
from .io import module_json as _mod
from .torsion import TorsionPair, defect, in_F, in_T, verify_silting_equality


# ---------------------------------------------------------------------------
# the three-term Hom complex


@dataclass
class HomTriple:
    """dims of Hom(P^0, X^-1), the middle term and Hom(P^-1, X^0), with the
    two differentials in hom_space coordinates."""

    d0: np.ndarray
    d1: np.ndarray
    dims: tuple

    def cohomology_dims(self, F) -> tuple:
        r0 = la.rank(self.d0, F) if self.d0.size else 0
        r1 = la.rank(self.d1, F) if self.d1.size else 0
        a, b, c = self.dims
        return a - r0, b - r0 - r1, c - r1


def hom_triple(P: TwoTermComplex, X: TwoTermComplex) -> HomTriple:
    F = P.field
    A = hom_space(P.m0, X.m1)
    Bf, Bg = hom_space(P.m1, X.m1), hom_space(P.m0, X.m0)
    C = hom_space(P.m1, X.m0)
    s, a = P.dmat, X.dmat
    mid = len(Bf) + len(Bg)
    cols0 = [np.concatenate([Bf.coords(F.matmul(h, s)), Bg.coords(F.matmul(a, h))]) for h in A.basis]
    d0 = la.as_columns(cols0, mid, F)
    cols1 = [C.coords(F.matmul(a, f)) for f in Bf.basis]
    cols1 += [C.coords(F.neg(F.matmul(g, s))) for g in Bg.basis]
    d1 = la.as_columns(cols1, len(C), F)
    if d0.size and d1.size and not la.is_zero(F.matmul(d1, d0)):
        raise InvariantViolation("Hom complex does not square to zero")
    return HomTriple(d0, d1, (len(A), mid, len(C)))


def heart_sides(tp: TorsionPair, X: TwoTermComplex) -> tuple:
    """(criterion on cohomology modules, criterion on the Hom complex)."""
    F = X.field
    ker, _ = cohomology(X, -1)
    cok, _ = cohomology(X, 0)
    first = in_F(tp, ker) and in_T(tp, cok)
    left, _, right = hom_triple(tp.P, X).cohomology_dims(F)
    # cross-check the outer terms against the homotopy-category code
    if left != hom_K(tp.P, X, -1).dim or right != hom_K(tp.P, X, 1).dim:
        raise InvariantViolation("Hom complex disagrees with hom_K")
    return first, left == 0 and right == 0


def in_heart(tp: TorsionPair, X: TwoTermComplex) -> bool:
    first, second = heart_sides(tp, X)
    if first != second:
        raise InvariantViolation(f"heart criteria disagree on {X.name}: {first} vs {second}")
    return first


def hom_heart(P: TwoTermComplex, X: TwoTermComplex) -> FdModule:
    """Hom_D(P, X) as a right E-module, E acting by precomposition."""
    cache = X.__dict__.setdefault("_hom_heart", {})
    if id(P) in cache:
        return cache[id(P)][1]
    F = P.field
    E = endo_algebra(P)
    H = hom_K(P, X, 0)
    if H.dim != hom_triple(P, X).cohomology_dims(F)[1]:
        raise InvariantViolation("middle cohomology disagrees with hom_K")
    act = F.zeros((E.dim, H.dim, H.dim))
    for k, e in enumerate(E.basis_classes):
        act[k] = precompose_matrix(H, e)
    Y = FdModule(E.algebra, act, f"Hom(P,{X.name})", origin=("hom_heart", P, X, 0, H))
    Y.check()
    cache[id(P)] = (P, Y)
    return Y


@dataclass
class RoundTrip:
    X: str
    hom_dim: int
    h_minus1: bool
    h_zero: bool

    @property
    def ok(self) -> bool:
        return self.h_minus1 and self.h_zero


def roundtrip_heart(tp: TorsionPair, X: TwoTermComplex) -> RoundTrip:
    """Hom_D(P, X) (x)^L P recovers both cohomology modules of X."""
    if not in_heart(tp, X):
        raise PreconditionError(f"{X.name} is not in the heart")
    Y = hom_heart(tp.P, X)
    C = tensor_dg(Y, build_B(tp.P))
    got = [cohomology(C, i)[0] for i in (-1, 0)]
    want = [cohomology(X, i)[0] for i in (-1, 0)]
    ok = [is_isomorphic(g, w) is not None for g, w in zip(got, want)]
    return RoundTrip(X.name, Y.dim, ok[0], ok[1])


def heart_test_complexes(modules: list, limit: int = 50) -> list:
    """Two-term complexes alpha: M -> N from pairs of nonzero inventory
    modules, taking the zero map and each basis map of Hom(M, N).

    Pairs are visited by increasing total dimension so that the first
    ``limit`` complexes mix many different sources and targets.
    """
    out = []
    mods = [M for M in modules if M.dim]
    pairs = sorted(itertools.product(range(len(mods)), repeat=2),
                   key=lambda ij: (mods[ij[0]].dim + mods[ij[1]].dim, ij))
    for i, j in pairs:
        M, N = mods[i], mods[j]
        H = hom_space(M, N)
        maps = [M.field.zeros((N.dim, M.dim))] + list(H.basis)
        for k, m in enumerate(maps):
            out.append(GeneralTwoTerm(M, N, m, f"{M.name}->{N.name}#{k}"))
            if len(out) >= limit:
                return out
    return out


# ---------------------------------------------------------------------------
# report


@dataclass
class CheckRecord:
    name: str
    description: str
    instances: int = 0
    failures: list = dc_field(default_factory=list)
    status: str = "passed"
    reason: str = ""

    def fail(self, instance: str, **witness) -> None:
        self.failures.append({"instance": instance, **witness})

    def to_json(self) -> dict:
        status = self.status
        if status != "skipped":
            status = "failed" if self.failures else "passed"
        out = {
            "name": self.name,
            "description": self.description,
            "instances": self.instances,
            "failures": self.failures,
            "status": status,
        }
        if self.reason:
            out["reason"] = self.reason
        return out


@dataclass
class VerificationReport:
    algebra: str
    complex: str
    checks: list
    tables: dict = dc_field(default_factory=dict)

    @property
    def summary(self) -> dict:
        st = [c.to_json()["status"] for c in self.checks]
        return {k: st.count(k) for k in ("passed", "failed", "skipped")}

    @property
    def ok(self) -> bool:
        return self.summary["failed"] == 0

    def check(self, name: str) -> dict:
        for c in self.checks:
            if c.name == name:
                return c.to_json()
        raise KeyError(name)

    def to_json(self) -> dict:
        return {
            "algebra": self.algebra,
            "complex": self.complex,
            "checks": [c.to_json() for c in self.checks],
            "summary": self.summary,
            "tables": self.tables,
        }


# (name, description) in execution order
CHECKS = [
    ("silting_equality", "Gen(T) equals the modules with vanishing defect"),
    ("endo_data", "E = End_K(P) maps onto End(T)"),
    ("torsion_pair", "every module splits into torsion part and torsion-free quotient"),
    ("envelope", "maps from R into torsion modules factor through H^0(Q1)"),
    ("equiv_T", "H_P and T_P are mutually inverse on the torsion class"),
    ("tp_image", "T_P lands in the torsion class and T_P(psi) is an isomorphism"),
    ("tensor_hom", "H_P(M, 0) (x) Hom_K(Q, P) -> Hom_K(Q, M) is bijective for Q in add P"),
    ("kt_hp0", "K_T vanishes on H_P(M, 0)"),
    ("tp_hp1", "T_P vanishes on H_P(M, 1)"),
    ("zeta_F", "zeta: K_T(H_P(F, 1)) -> F is a natural isomorphism on the torsion-free class"),
    ("F_U_bijection", "Def = Hom_D(P, -[1]) gives a bijection between torsion-free modules and the U-members that arise"),
    ("six_term", "K_T and Coker(- (x) beta*) form a six-term exact sequence"),
    ("kt_tor", "K_T maps onto Tor_1(-, T)"),
    ("dg_model", "H^0 and H^-1 of Y (x)^L P are Y (x) T and K_T(Y)"),
    ("lift_action", "lifting left multiplication through the triangle gives the dg action on K_T"),
    ("compact", "no nonzero E-module is killed by both T_P and K_T"),
    ("heart_criteria", "the two heart criteria agree"),
    ("heart_roundtrip", "Hom_D(P, -) followed by - (x)^L P recovers both cohomologies"),
]

DEFAULT_CHECKS = [n for n, _ in CHECKS]
# exponential in the module dimension; opt-in only
OPTIONAL_CHECKS = ["in_V"]
_DESC = dict(CHECKS)
_DESC["in_V"] = "images H_P(M, 0) have no nonzero submodule in U"


@dataclass(eq=False)
class Context:
    tp: TorsionPair
    R_inv: list
    E_inv: list
    config: Config
    heart_limit: int = 50

    @property
    def P(self) -> TwoTermComplex:
        return self.tp.P


def _run(name, ctx: Context, rec: CheckRecord, tables: dict) -> None:
    tp, P = ctx.tp, ctx.P
    cert = tp.certificate
    if name == "endo_data":
        e = epsilon(P)
        rec.instances = 1
        tables["endo"] = {"endo_dim": e.endo.dim, "end_T_dim": e.E.dim, "kernel_dim": e.kernel_dim}
        return
    b = beta_star(cert)
    if name == "torsion_pair":
        for M in ctx.R_inv:
            rec.instances += 1
            t = in_T(tp, M)
            f = in_F(tp, M)
            if t and f and M.dim:
                rec.fail(M.name, reason="torsion and torsion-free", module=_mod(M))
        return
    if name == "envelope":
        alpha = cert.alpha
        for M in ctx.R_inv:
            if not in_T(tp, M):
                continue
            rec.instances += 1
            S = module_stalk(M)
            src, tgt = hom_K(cert.Q1, S, 0), hom_K(cert.R, S, 0)
            cols = [tgt.coords(compose(f, alpha)) for f in src.basis]
            r = la.rank(la.as_columns(cols, tgt.dim, P.field), P.field) if cols else 0
            if r != tgt.dim:
                rec.fail(M.name, rank=r, expected=tgt.dim, module=_mod(M))
        return
    if name == "equiv_T":
        scriptE = [X for X in ctx.E_inv if X.dim and in_scriptE(P, X, b)]
        for M in ctx.R_inv:
            if not in_T(tp, M):
                continue
            rec.instances += 1
            try:
                phi(P, M, tp)
                Y = H_P(P, M, 0)
                psi(P, Y)
                back = T_P(P, Y)
                if is_isomorphic(back, M) is None:
                    rec.fail(M.name, reason="T_P(H_P(M)) not isomorphic to M", module=_mod(M))
                for Z in scriptE:
                    if len(hom_space(Z, Y)) or ext1(Z, Y):
                        rec.fail(M.name, reason=f"not orthogonal to {Z.name}", module=_mod(M))
            except InvariantViolation as exc:
                rec.fail(M.name, reason=str(exc), module=_mod(M))
        return
    if name == "in_V":
        for M in ctx.R_inv:
            if in_T(tp, M):
                rec.instances += 1
                if not in_V(P, H_P(P, M, 0), ctx.config):
                    rec.fail(M.name, module=_mod(M))
        return
    if name == "tp_image":
        for X in ctx.E_inv:
            rec.instances += 1
            try:
                M = T_P(P, X)
                ok = in_T(tp, M) and H_P(P, M, 1).dim == 0 and T_P_map(P, psi(P, X)).is_iso()
            except InvariantViolation as exc:
                rec.fail(X.name, reason=str(exc), module=_mod(X))
                continue
            if not ok:
                rec.fail(X.name, module=_mod(X))
        return
    if name == "tensor_hom":
        for Q in (cert.Q1, cert.Q2, P):
            for M in ctx.R_inv:
                rec.instances += 1
                if not tensor_hom_bijective(P, M, Q):
                    rec.fail(f"{Q.name},{M.name}", module=_mod(M))
        return
    if name == "kt_hp0":
        for M in ctx.R_inv:
            rec.instances += 1
            k = K_T_linear(H_P(P, M, 0), b).dim
            if k:
                rec.fail(M.name, kt_dim=k, module=_mod(M))
        return
    if name == "tp_hp1":
        for M in ctx.R_inv:
            rec.instances += 1
            t = T_P(P, H_P(P, M, 1)).dim
            if t:
                rec.fail(M.name, tp_dim=t, module=_mod(M))
        return
    if name == "zeta_F":
        Fs = [M for M in ctx.R_inv if in_F(tp, M)]
        F = P.field
        zs = {}
        for M in Fs:
            rec.instances += 1
            try:
                z = zeta(M, b)
            except InvariantViolation as exc:
                rec.fail(M.name, reason=str(exc), module=_mod(M))
                continue
            zs[id(M)] = z
            if z.shape != (M.dim, M.dim) or (M.dim and la.rank(z, F) != M.dim):
                rec.fail(M.name, reason="zeta is not invertible", module=_mod(M))
        # naturality on a basis of each Hom(F, F')
        for M, N in itertools.product(Fs, repeat=2):
            if id(M) not in zs or id(N) not in zs:
                continue
            for g in hom_space(M, N).basis:
                rec.instances += 1
                gm = ModuleMap(M, N, g)
                kg = K_T_map(H_P_map(P, gm, 1), b)
                lhs = F.matmul(zs[id(N)], kg) if kg.size else F.zeros((N.dim, M.dim))
                rhs = F.matmul(g, zs[id(M)])
                if not np.array_equal(lhs, rhs):
                    rec.fail(f"{M.name}->{N.name}", reason="naturality square", map=[[str(x) for x in r] for r in g])
        return
    if name == "F_U_bijection":
        rows = []
        Fs = [M for M in ctx.R_inv if in_F(tp, M) and M.dim]
        images = []
        for M in Fs:
            rec.instances += 1
            Y = H_P(P, M, 1)
            back = K_T(Y, P, b)
            ok = in_U(P, Y) and is_isomorphic(back, M) is not None
            images.append(Y)
            rows.append({"F": M.name, "dim_F": M.dim, "defect_dim": defect(P, M).dim,
                         "Y_dim": Y.dim, "K_T_dim": back.dim, "recovered": ok})
            if not ok:
                rec.fail(M.name, module=_mod(M))
        # injectivity on classes
        for i, j in itertools.combinations(range(len(Fs)), 2):
            if (is_isomorphic(images[i], images[j]) is not None) != (is_isomorphic(Fs[i], Fs[j]) is not None):
                rec.fail(f"{Fs[i].name},{Fs[j].name}", reason="not injective on classes")
        # the other direction on enumerated U-members
        for Y in ctx.E_inv:
            if not (Y.dim and in_U(P, Y)):
                continue
            if not any(is_isomorphic(Y, Z) is not None for Z in images):
                continue
            rec.instances += 1
            K = K_T(Y, P, b)
            if not in_F(tp, K) or is_isomorphic(H_P(P, K, 1), Y) is None:
                rec.fail(Y.name, reason="H_P(K_T(Y), 1) is not Y", module=_mod(Y))
        tables["F_U"] = rows
        return
    if name == "six_term":
        for X in ctx.E_inv:
            if not X.dim:
                continue
            for S, inc in enumerate_submodules(X, ctx.config):
                if S.dim == 0 or S.dim == X.dim:
                    continue
                Q, proj, _ = quotient_module(X, inc.matrix, f"{X.name}/{S.dim}")
                p = ModuleMap(X, Q, proj.reshape(Q.dim, X.dim))
                rec.instances += 1
                st = six_term(inc, p, b)
                if not st.ok:
                    rec.fail(f"{S.dim}->{X.name}->{Q.dim}", dims=st.dims, exact=st.exact, module=_mod(X))
        return
    if name == "kt_tor":
        rows = []
        for X in ctx.E_inv:
            rec.instances += 1
            try:
                t = tor1(X, b)
            except InvariantViolation as exc:
                rec.fail(X.name, reason=str(exc), module=_mod(X))
                continue
            rows.append({"Y": X.name, "K_T_dim": t.kt_dim, "tor1_dim": t.dim, "iso": t.is_iso})
        tables["K_T_vs_Tor1"] = rows
        return
    if name == "dg_model":
        from .dg import h0_check
        for X in ctx.E_inv:
            rec.instances += 1
            try:
                # both raise InvariantViolation on a mismatch with the linear functors
                h0_check(X, P)
                K_T(X, P, b)
                if is_acyclic(X, P) != in_scriptE(P, X, b):
                    rec.fail(X.name, reason="acyclicity differs from membership in E", module=_mod(X))
            except InvariantViolation as exc:
                rec.fail(X.name, reason=str(exc), module=_mod(X))
        return
    if name == "lift_action":
        for X in ctx.E_inv:
            if K_T_linear(X, b).dim == 0:
                continue
            rec.instances += 1
            res = lift_cross_check(X, b)
            if not all(res.values()):
                rec.fail(X.name, **res, module=_mod(X))
        return
    if name == "compact":
        for X in ctx.E_inv:
            if not X.dim:
                continue
            rec.instances += 1
            if in_U(P, X) and K_T_linear(X, b).dim == 0 and is_acyclic(X, P):
                rec.fail(X.name, reason="nonzero module killed by - (x)^L P", module=_mod(X))
        return
    if name in ("heart_criteria", "heart_roundtrip"):
        cands = heart_test_complexes(ctx.R_inv, ctx.heart_limit)
        cands += [stalk(M, -1, f"{M.name}[1]") for M in ctx.R_inv if M.dim and in_F(tp, M)]
        counts = {"in_heart": 0, "not_in_heart": 0}
        for X in cands:
            if name == "heart_criteria":
                rec.instances += 1
                a, c = heart_sides(tp, X)
                if a != c:
                    rec.fail(X.name, cohomology_side=a, hom_side=c,
                             alpha=[[str(x) for x in r] for r in X.dmat], source=_mod(X.m1), target=_mod(X.m0))
                counts["in_heart" if a else "not_in_heart"] += 1
            elif in_heart(tp, X):
                rec.instances += 1
                rt = roundtrip_heart(tp, X)
                if not rt.ok:
                    rec.fail(X.name, h_minus1=rt.h_minus1, h_zero=rt.h_zero,
                             alpha=[[str(x) for x in r] for r in X.dmat], source=_mod(X.m1), target=_mod(X.m0))
        if name == "heart_criteria":
            tables["heart"] = counts
        return
    raise KeyError(f"unknown check {name!r}")


def run_suite(tp: TorsionPair, R_inv: list, E_inv: list, config: Config = DEFAULT_CONFIG,
              checks: Optional[list] = None, algebra: str = "", complex_name: str = "",
              heart_limit: int = 50) -> VerificationReport:
    """Run the named checks (default: all but the optional ones) in a fixed order."""
    names = list(checks) if checks else list(DEFAULT_CHECKS)
    unknown = [n for n in names if n not in _DESC]
    if unknown:
        raise KeyError(f"unknown checks: {unknown}")
    order = [n for n, _ in CHECKS] + OPTIONAL_CHECKS
    names = [n for n in order if n in names]
    ctx = Context(tp, R_inv, E_inv, config, heart_limit)
    tables: dict = {}
    recs = []
    eq = verify_silting_equality(tp, R_inv)
    for name in names:
        rec = CheckRecord(name, _DESC[name])
        if name == "silting_equality":
            rec.instances = len(R_inv)
            for n, M in eq.counterexamples:
                rec.fail(n, in_gen=tp.in_gen(M), defect_dim=defect(tp.P, M).dim, module=_mod(M))
        elif tp.certificate is None and name != "endo_data":
            rec.status = "skipped"
            rec.reason = "no silting certificate"
        elif not eq.ok and name != "endo_data":
            rec.status = "skipped"
            rec.reason = "Gen(T) differs from the defect kernel"
        else:
            try:
                _run(name, ctx, rec, tables)
            except (SiltingError, ValueError, AssertionError) as exc:
                rec.fail("<check>", reason=f"{type(exc).__name__}: {exc}")
        recs.append(rec)
    tables.setdefault("silting_equality", eq.to_json()["rows"])
    return VerificationReport(algebra, complex_name or tp.P.name, recs, tables)


def inventories(tp: TorsionPair, max_dim: int = 3, e_max_dim: Optional[int] = None,
                config: Config = DEFAULT_CONFIG) -> tuple:
    """(R-module inventory, E-module inventory) up to the given dimensions."""
    R_inv = enumerate_modules(tp.P.algebra, max_dim, config)
    E = endo_algebra(tp.P, config)
    E_inv = enumerate_modules(E.algebra, max_dim if e_max_dim is None else e_max_dim, config) if E.dim else [zero_module(E.algebra)]
    return R_inv, E_inv


__all__ = [
    "HomTriple", "hom_triple", "heart_sides", "in_heart", "hom_heart", "RoundTrip", "roundtrip_heart",
    "heart_test_complexes", "CheckRecord", "VerificationReport", "CHECKS", "DEFAULT_CHECKS",
    "OPTIONAL_CHECKS", "run_suite", "inventories",
]
