"""The truncated dg endomorphism algebra of P and the two-term model of
Y (x)^L_B P for E-modules Y.

B^-1 = Hom(P^0, P^-1), B^0 = chain endomorphisms (f^-1, f^0) of P, and
d(h) = (h sigma, sigma h), the Hom-complex differential in degree -1. The
cokernel of d is E.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg as la
from .algebra import FdModule, ModuleMap, hom_space, is_isomorphic
from .complexes import ChainMapClass, TwoTermComplex, compose, hom_K, cohomology
from .errors import InvariantViolation
from .functors import BetaStar, K_T_linear, T_P, endo_algebra, precompose_matrix, tensor_map


@dataclass(eq=False)
class TruncatedDg:
    P: TwoTermComplex
    Bm1: np.ndarray  # (k, dim P^-1, dim P^0) stack of maps P^0 -> P^-1
    B0: list  # chain endomorphisms as (f^-1, f^0)
    d: np.ndarray  # B^-1 -> B^0 in B^0 coordinates
    proj: np.ndarray  # B^0 -> E coordinates
    h1_dim: int

    @property
    def dim_Bm1(self) -> int:
        return self.Bm1.shape[0]

    @property
    def dim_B0(self) -> int:
        return len(self.B0)


def build_B(P: TwoTermComplex) -> TruncatedDg:
    if "_dgB" in P.__dict__:
        return P.__dict__["_dgB"]
    F = P.field
    H = hom_K(P, P, 0)
    E = endo_algebra(P)
    Hm1 = hom_space(P.m0, P.m1)
    zdim = H.Z.shape[1]
    B0 = [H._from_w(H.Z[:, k]).parts for k in range(zdim)]
    # d(h) = (h sigma, sigma h) in chain coordinates
    dcols = []
    for h in Hm1.basis:
        c = ChainMapClass(P, P, 0, (F.matmul(h, P.dmat), F.matmul(P.dmat, h)))
        dcols.append(H.chain_coords(c))
    dmat = la.as_columns(dcols, zdim, F)
    proj = H.proj if H.dim else F.zeros((0, zdim))
    if dmat.shape[1] and proj.size and not la.is_zero(F.matmul(proj, dmat)):
        raise InvariantViolation("d(B^-1) is not killed by the projection to E")
    coker_dim = zdim - (la.rank(dmat, F) if dmat.size else 0)
    if coker_dim != E.dim:
        raise InvariantViolation(f"coker(d) has dim {coker_dim}, E has dim {E.dim}")
    # proj is multiplicative: class of f o g is proj(f) * proj(g)
    for i in range(zdim):
        for j in range(zdim):
            fi, fj = B0[i], B0[j]
            prod = ChainMapClass(P, P, 0, (F.matmul(fi[0], fj[0]), F.matmul(fi[1], fj[1])))
            lhs = H.coords(prod)
            rhs = E.algebra.multiply(proj[:, i], proj[:, j]) if E.dim else F.zeros(0)
            if not np.array_equal(lhs, rhs):
                raise InvariantViolation("projection B^0 -> E is not multiplicative")
    # degree-one part: B^0 -> Hom(P^-1, P^0), (f, g) -> sigma f - g sigma; H^1 = Hom_K(P, P[1])
    h1 = hom_K(P, P, 1).dim
    out = TruncatedDg(P, Hm1.basis, B0, dmat, proj, h1)
    P.__dict__["_dgB"] = out
    return out


def _tensor_over_B0(Y: FdModule, tdg: TruncatedDg, entry: int, extra: np.ndarray = None):
    """(proj, lift) for Y (x)_{B0} P^entry, optionally modulo ``extra`` columns."""
    F = Y.field
    P = tdg.P
    M = P.m1 if entry == -1 else P.m0
    n = Y.dim * M.dim
    cols = []
    if n:
        Iy, Im = F.eye(Y.dim), F.eye(M.dim)
        for k, b in enumerate(tdg.B0):
            yact = Y.act(tdg.proj[:, k]) if Y.algebra.dim else F.zeros((Y.dim, Y.dim))
            comp = b[0] if entry == -1 else b[1]
            cols.append(F.sub(np.kron(yact, Im), np.kron(Iy, comp)))
    rel = np.concatenate(cols, axis=1) if cols else F.zeros((n, 0))
    if extra is not None and extra.shape[1]:
        rel = np.concatenate([rel, extra], axis=1)
    rel = la.span_basis(rel.astype(F.dtype), F) if rel.shape[1] else F.zeros((n, 0))
    return la.quotient_basis(rel, n, F)


def _module_on(R, proj, lift, blocks, name) -> FdModule:
    """R-module on a quotient of a direct sum of (multiplicity, module) blocks."""
    F = R.field
    n = proj.shape[0]
    act = F.zeros((R.dim, n, n))
    if n:
        for k in range(R.dim):
            big = _block_diag(F, [np.kron(F.eye(m), M.action[k]).astype(F.dtype) for m, M in blocks])
            act[k] = F.matmul(proj, F.matmul(big, lift))
    return FdModule(R, act, name)


def _block_diag(F, mats) -> np.ndarray:
    r = sum(m.shape[0] for m in mats)
    c = sum(m.shape[1] for m in mats)
    out = F.zeros((r, c))
    i = j = 0
    for m in mats:
        out[i:i + m.shape[0], j:j + m.shape[1]] = m
        i += m.shape[0]
        j += m.shape[1]
    return out


def tensor_dg_literal(Y: FdModule, tdg: TruncatedDg) -> TwoTermComplex:
    """0 -> (Y (x)_{B0} P^-1)/U -> Y (x)_{B0} P^0 -> 0 with U = <y (x) h(p)>.

    This is the underived tensor product Y (x)_B P. It agrees with the
    derived one when the entries of P are flat enough over B^0, but not in
    general: see ``tensor_dg``.
    """
    F = Y.field
    P = tdg.P
    R = P.algebra
    d1 = P.m1.dim
    ucols = []
    if Y.dim and d1:
        Iy = F.eye(Y.dim)
        for h in tdg.Bm1:
            ucols.append(np.kron(Iy, h).astype(F.dtype))
    U = np.concatenate(ucols, axis=1) if ucols else F.zeros((Y.dim * d1, 0))
    p1, l1 = _tensor_over_B0(Y, tdg, -1, U)
    p0, l0 = _tensor_over_B0(Y, tdg, 0)
    C1 = _module_on(R, p1, l1, [(Y.dim, P.m1)], "Y(x)P-1/U")
    C0 = _module_on(R, p0, l0, [(Y.dim, P.m0)], "Y(x)P0")
    if C1.dim and C0.dim:
        dm = F.matmul(p0, F.matmul(np.kron(F.eye(Y.dim), P.dmat).astype(F.dtype), l1))
    else:
        dm = F.zeros((C0.dim, C1.dim))
    d = ModuleMap(C1, C0, dm)
    d.check()
    return TwoTermComplex(C1, C0, d, f"{Y.name}(x)P")


@dataclass(eq=False)
class Resolution:
    """Semi-free B-module Y' -> Y with generators in degrees 0, -1, -2,
    exact in degrees 0 and -1.

    ``z`` holds d(x) for the degree -1 generators in F^0 coordinates
    (G0 x B^0), ``w`` holds d(w) for the degree -2 generators in F^-1
    coordinates (G0 x B^-1 then G1 x B^0).
    """

    g0: int
    z: np.ndarray
    w: np.ndarray

    @property
    def g1(self) -> int:
        return self.z.shape[1]

    @property
    def g2(self) -> int:
        return self.w.shape[1]


def _products(tdg: TruncatedDg):
    """Right-multiplication matrices of B^0 on B^0 and of B^-1 on B^0."""
    cache = tdg.__dict__
    if "_prod" in cache:
        return cache["_prod"]
    P = tdg.P
    F = P.field
    H = hom_K(P, P, 0)
    Hm1 = hom_space(P.m0, P.m1)
    n0, n1 = tdg.dim_B0, tdg.dim_Bm1
    r00 = F.zeros((n0, n0, n0))  # r00[j] @ c = coords of c * b_j
    r0m = F.zeros((n1, n1, n0))  # r0m[k] @ c = coords of c * h_k (c in B^0)
    for j, bj in enumerate(tdg.B0):
        for i, bi in enumerate(tdg.B0):
            prod = ChainMapClass(P, P, 0, (F.matmul(bi[0], bj[0]), F.matmul(bi[1], bj[1])))
            r00[j][:, i] = H.chain_coords(prod)
    for k, h in enumerate(tdg.Bm1):
        for i, bi in enumerate(tdg.B0):
            r0m[k][:, i] = Hm1.coords(F.matmul(bi[0], h))
    cache["_prod"] = (r00, r0m)
    return r00, r0m


def _complement(sub: np.ndarray, amb: np.ndarray, n: int, F) -> np.ndarray:
    """Columns of ``amb`` extending a basis of span(sub) to one of span(sub + amb)."""
    base = la.span_basis(sub, F) if sub.shape[1] else F.zeros((n, 0))
    chosen = []
    for c in range(amb.shape[1]):
        v = amb[:, c]
        cur = np.concatenate([base] + [x.reshape(-1, 1) for x in chosen], axis=1) if chosen else base
        if not la.in_span(cur, v, F):
            chosen.append(v)
    return la.as_columns(chosen, n, F)


def resolve(Y: FdModule, tdg: TruncatedDg) -> Resolution:
    F = Y.field
    n0, n1 = tdg.dim_B0, tdg.dim_Bm1
    r00, r0m = _products(tdg)
    # degree 0 generators: a basis of Y (simple and always enough)
    g0 = Y.dim
    # eps: F^0 = G0 x B^0 -> Y, (g, b_j) -> y_g . proj(b_j)
    eps_cols = []
    for g in range(g0):
        yg = F.unit_vector(Y.dim, g)
        for j in range(n0):
            eps_cols.append(F.matmul(Y.act(tdg.proj[:, j]), yg) if Y.algebra.dim else F.zeros(Y.dim))
    eps = la.as_columns(eps_cols, Y.dim, F)
    f0 = g0 * n0
    # d: F^-1 (G0 x B^-1) -> F^0
    d10 = _block_diag(F, [tdg.d] * g0) if g0 else F.zeros((0, 0))
    ker0 = la.kernel_basis(eps, F) if f0 else F.zeros((0, 0))
    z = _complement(d10 if d10.size else F.zeros((f0, 0)), ker0, f0, F)
    g1 = z.shape[1]
    # F^-1 = G0 x B^-1 (+) G1 x B^0 ; F^-2 = G1 x B^-1
    fm1 = g0 * n1 + g1 * n0
    fm2 = g1 * n1
    # d: F^-1 -> F^0
    dA = F.zeros((f0, fm1))
    if g0 and n1:
        dA[:, :g0 * n1] = d10
    for x in range(g1):
        for j in range(n0):
            col = g0 * n1 + x * n0 + j
            zx = z[:, x].reshape(g0, n0)
            dA[:, col] = np.concatenate([F.matmul(r00[j], zx[g]) for g in range(g0)]) if g0 else F.zeros(0)
    # d: F^-2 -> F^-1, d(x h_k) = z_x h_k - x d(h_k)
    dB = F.zeros((fm1, fm2))
    for x in range(g1):
        zx = z[:, x].reshape(g0, n0)
        for k in range(n1):
            col = x * n1 + k
            top = np.concatenate([F.matmul(r0m[k], zx[g]) for g in range(g0)]) if g0 else F.zeros(0)
            bottom = F.zeros(g1 * n0)
            bottom[x * n0:(x + 1) * n0] = F.neg(tdg.d[:, k])
            dB[:, col] = np.concatenate([top, bottom])
    if dA.size and dB.size and not la.is_zero(F.matmul(dA, dB)):
        raise InvariantViolation("resolution differential does not square to zero")
    cyc = la.kernel_basis(dA, F) if fm1 else F.zeros((0, 0))
    if f0 == 0 and fm1:
        cyc = F.eye(fm1)
    w = _complement(dB if dB.size else F.zeros((fm1, 0)), cyc, fm1, F)
    return Resolution(g0, z, w)


def tensor_dg(Y: FdModule, tdg: TruncatedDg) -> TwoTermComplex:
    """Two-term model of Y (x)^L_B P.

    Y is replaced by a semi-free resolution Y' exact in degrees 0 and -1;
    the result is the truncation [ (Y' (x)_B P)^-1 / boundaries -> (Y' (x)_B P)^0 ],
    a complex of R-modules with the same H^-1 and H^0 as the derived tensor
    product.
    """
    cache = Y.__dict__.setdefault("_tensor_dg", {})
    if id(tdg) in cache:
        return cache[id(tdg)][1]
    F = Y.field
    P = tdg.P
    R = P.algebra
    res = resolve(Y, tdg)
    g0, g1, g2 = res.g0, res.g1, res.g2
    n0, n1 = tdg.dim_B0, tdg.dim_Bm1
    p1, p0 = P.m1.dim, P.m0.dim
    s = P.dmat
    # V0 = G0 (x) P^0 ; V1 = G0 (x) P^-1 (+) G1 (x) P^0 ; V2 = G1 (x) P^-1 (+) G2 (x) P^0
    v0, v1, v2 = g0 * p0, g0 * p1 + g1 * p0, g1 * p1 + g2 * p0
    d1 = F.zeros((v0, v1))
    for g in range(g0):
        d1[g * p0:(g + 1) * p0, g * p1:(g + 1) * p1] = s
    for x in range(g1):
        zx = res.z[:, x].reshape(g0, n0)
        for g in range(g0):
            blk = F.lincomb(zx[g], np.stack([b[1] for b in tdg.B0])) if n0 else F.zeros((p0, p0))
            d1[g * p0:(g + 1) * p0, g0 * p1 + x * p0:g0 * p1 + (x + 1) * p0] = blk
    d2 = F.zeros((v1, v2))
    for x in range(g1):
        zx = res.z[:, x].reshape(g0, n0)
        for g in range(g0):
            blk = F.lincomb(zx[g], np.stack([b[0] for b in tdg.B0])) if n0 else F.zeros((p1, p1))
            d2[g * p1:(g + 1) * p1, x * p1:(x + 1) * p1] = blk
        d2[g0 * p1 + x * p0:g0 * p1 + (x + 1) * p0, x * p1:(x + 1) * p1] = F.neg(s)
    for wi in range(g2):
        wv = res.w[:, wi]
        cw = wv[:g0 * n1].reshape(g0, n1)
        bw = wv[g0 * n1:].reshape(g1, n0)
        col = slice(g1 * p1 + wi * p0, g1 * p1 + (wi + 1) * p0)
        for g in range(g0):
            if n1:
                d2[g * p1:(g + 1) * p1, col] = F.lincomb(cw[g], tdg.Bm1)
        for x in range(g1):
            if n0:
                d2[g0 * p1 + x * p0:g0 * p1 + (x + 1) * p0, col] = F.lincomb(bw[x], np.stack([b[1] for b in tdg.B0]))
    if d1.size and d2.size and not la.is_zero(F.matmul(d1, d2)):
        raise InvariantViolation("tensored resolution is not a complex")
    img = la.span_basis(d2, F) if d2.size else F.zeros((v1, 0))
    q1, l1 = la.quotient_basis(img, v1, F)
    blocks1 = [(g0, P.m1), (g1, P.m0)]
    C1 = _module_on(R, q1, l1, blocks1, "(Y'(x)P)^-1")
    I0 = F.eye(v0)
    C0 = _module_on(R, I0, I0, [(g0, P.m0)], "(Y'(x)P)^0")
    dm = F.matmul(d1, l1) if C1.dim and C0.dim else F.zeros((C0.dim, C1.dim))
    d = ModuleMap(C1, C0, dm)
    d.check()
    C1.check()
    C0.check()
    out = TwoTermComplex(C1, C0, d, f"{Y.name}(x)^L P")
    cache[id(tdg)] = (tdg, out)
    return out


def K_T(Y: FdModule, P: TwoTermComplex, b: BetaStar = None) -> FdModule:
    """H^-1 of the dg model, an R-module; checked against Ker(Y (x) beta*)."""
    C = tensor_dg(Y, build_B(P))
    K, _ = cohomology(C, -1)
    K.name = f"K_T({Y.name})"
    if b is not None and K.dim != K_T_linear(Y, b).dim:
        raise InvariantViolation(f"H^-1 has dim {K.dim}, Ker(Y (x) beta*) has dim {K_T_linear(Y, b).dim}")
    return K


def h0_check(Y: FdModule, P: TwoTermComplex) -> FdModule:
    """H^0 of the dg model; checked to be isomorphic to Y (x)_E T."""
    C = tensor_dg(Y, build_B(P))
    H0, _ = cohomology(C, 0)
    if is_isomorphic(H0, T_P(P, Y)) is None:
        raise InvariantViolation(f"H^0 of the dg model is not Y (x) T for {Y.name}")
    return H0


def is_acyclic(Y: FdModule, P: TwoTermComplex) -> bool:
    C = tensor_dg(Y, build_B(P))
    r = la.rank(C.dmat, Y.field) if C.dmat.size else 0
    return r == C.m1.dim == C.m0.dim


# ---------------------------------------------------------------------------
# R-action on K_T by lifting left multiplication through the triangle


def _lift_system(cert, r: np.ndarray):
    """Linear system for (f, g) in End(Q1) x End(Q2) with f alpha = alpha t_r,
    g beta = beta f and gamma g = t_r[1] gamma; returns (matrix, rhs, H1, H2)."""
    F = cert.P.field
    A = cert.P.algebra
    R = cert.R
    tr = ChainMapClass(R, R, 0, (F.zeros((0, 0)), A.left_mult_matrix(r)))
    H1, H2 = hom_K(cert.Q1, cert.Q1, 0), hom_K(cert.Q2, cert.Q2, 0)
    S_a = hom_K(R, cert.Q1, 0)
    S_b = hom_K(cert.Q1, cert.Q2, 0)
    S_c = hom_K(cert.Q2, R, 1)
    blocks_f, blocks_g = [], []
    # rows: [S_a; S_b; S_c]
    for f in H1.basis:
        blocks_f.append(np.concatenate([S_a.coords(compose(f, cert.alpha)),
                                        F.neg(S_b.coords(compose(cert.beta, f))),
                                        F.zeros(S_c.dim)]))
    for g in H2.basis:
        blocks_g.append(np.concatenate([F.zeros(S_a.dim),
                                        S_b.coords(compose(g, cert.beta)),
                                        S_c.coords(compose(cert.gamma, g))]))
    rows = S_a.dim + S_b.dim + S_c.dim
    M = la.as_columns(blocks_f + blocks_g, rows, F)
    rhs = np.concatenate([S_a.coords(compose(cert.alpha, tr)), F.zeros(S_b.dim),
                          S_c.coords(compose(tr, cert.gamma))]).astype(F.dtype)
    return M, rhs, H1, H2


def lifted_action(Y: FdModule, b: BetaStar, alternative: bool = False) -> np.ndarray:
    """Action matrices (R.dim, k, k) on Ker(Y (x) beta*) from lifted maps.

    With ``alternative`` the lift is shifted by the last kernel vector of
    the lifting system, giving a second, generally different, lift.
    """
    cert = b.cert
    F = cert.P.field
    A = cert.P.algebra
    kt = K_T_linear(Y, b)
    out = F.zeros((A.dim, kt.dim, kt.dim))
    S = b.source.origin[3]
    for k in range(A.dim):
        M, rhs, H1, H2 = _lift_system(cert, A.basis_vector(k))
        x = la.solve(M, rhs, F)
        if x is None:
            raise InvariantViolation("left multiplication does not lift through the triangle")
        if alternative:
            ker = la.kernel_basis(M, F)
            if ker.shape[1]:
                x = F.add(x, ker[:, -1])
        g = H2.element(x[H1.dim:])
        gsharp = precompose_matrix(S, g)  # u -> u o g on Hom(Q2, P)
        m = tensor_map(kt.source, kt.source, None, gsharp)
        if kt.dim == 0:
            continue
        img = F.matmul(m, kt.basis)
        sol = la.solve(kt.basis, img, F)
        if sol is None:
            raise InvariantViolation("lifted action does not preserve K_T")
        out[k] = sol
    return out


def lift_cross_check(Y: FdModule, b: BetaStar) -> dict:
    """Two different lifts give the same matrices, and the resulting module
    is isomorphic to the dg H^-1."""
    a1 = lifted_action(Y, b)
    a2 = lifted_action(Y, b, alternative=True)
    same = np.array_equal(a1, a2)
    M = FdModule(b.cert.P.algebra, a1, f"K_T({Y.name})~")
    try:
        M.check()
        valid = True
    except ValueError:
        valid = False
    iso = valid and is_isomorphic(M, K_T(Y, b.cert.P, b)) is not None
    return {"same_matrices": same, "module": valid, "iso_to_dg": iso}
