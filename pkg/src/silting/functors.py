"""Endomorphism algebras and the functors between Mod R and Mod E.

Here E is End_K(P). Its multiplication is composition, so Hom(P, M) is a
right E-module by precomposition and T = H^0(P) is a left E-module. Left
E-modules are stored as right modules over ``E.opposite()`` with the same
matrices.

Tensor products X (x)_E L are quotients of the Kronecker space
X (x)_k L (index i * dim L + j) by the relations x.g (x) l - x (x) g.l for
algebra generators g.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import linalg as la
from .algebra import (
    Config,
    DEFAULT_CONFIG,
    FdModule,
    FiniteDimAlgebra,
    ModuleMap,
    algebra_from_constants,
    direct_sum as direct_sum_modules,
    enumerate_submodules,
    hom_space,
    is_isomorphic,
    quotient_module,
    regular_module,
    split_idempotents,
    submodule_on,
    zero_module,
)
from .complexes import (
    ChainMapClass,
    HomK,
    SiltingCertificate,
    TwoTermComplex,
    cohomology,
    compose,
    hom_K,
    identity,
    module_stalk,
    postcompose_matrix,
    precompose_matrix,
    stalk_map,
    summand_maps,
)
from .errors import InvariantViolation, PreconditionError


# ---------------------------------------------------------------------------
# E = End_K(P) and E = End_R(T)


@dataclass(eq=False)
class EndoAlgebra:
    P: TwoTermComplex
    hom: HomK
    algebra: FiniteDimAlgebra

    @property
    def basis_classes(self) -> list:
        return self.hom.basis

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def element_class(self, c) -> ChainMapClass:
        return self.hom.element(c)

    def class_coords(self, f: ChainMapClass) -> np.ndarray:
        return self.hom.coords(f)


def endo_algebra(P: TwoTermComplex, config: Config = DEFAULT_CONFIG) -> EndoAlgebra:
    """End_K(P) with multiplication b_i * b_j = b_i o b_j (cached on P)."""
    if "_endo" in P.__dict__:
        return P.__dict__["_endo"]
    F = P.field
    H = hom_K(P, P, 0)
    n = H.dim
    mult = F.zeros((n, n, n))
    for i, bi in enumerate(H.basis):
        for j, bj in enumerate(H.basis):
            mult[i, j] = H.coords(compose(bi, bj))
    unit = H.coords(identity(P)) if n else F.zeros(0)
    idem, labels = [], []
    for (iota, pi), S in zip(summand_maps(P), P.summands or []):
        x = H.coords(compose(iota, pi))
        if not la.is_zero(x):
            idem.append(x)
            labels.append(S.name or f"X{len(labels) + 1}")
    alg = algebra_from_constants(F, [f"b{i + 1}" for i in range(n)], mult, unit,
                                 idem or ([unit.copy()] if n else []), labels or None, name=f"End({P.name})")
    if not idem and n:
        parts = split_idempotents(alg, config)
        alg.idempotents = parts
        alg.idempotent_labels = [f"x{i + 1}" for i in range(len(parts))]
    alg.check()
    E = EndoAlgebra(P, H, alg)
    P.__dict__["_endo"] = E
    return E


@dataclass(eq=False)
class Epsilon:
    """The ring map E(P) -> End_R(T), f -> H^0(f)."""

    endo: EndoAlgebra
    E: FiniteDimAlgebra
    T: FdModule
    matrix: np.ndarray  # dim End(T) x dim E(P)

    @property
    def kernel_dim(self) -> int:
        return self.endo.dim - la.rank(self.matrix, self.E.field) if self.matrix.size else self.endo.dim


def t_module(P: TwoTermComplex) -> tuple:
    """(T, projection P^0 -> T, lift T -> P^0), cached on P."""
    if "_T" not in P.__dict__:
        F = P.field
        mc_T, pi = cohomology(P, 0)
        _, lift = la.quotient_basis(P.dmat, P.m0.dim, F)
        mc_T.name = "T"
        P.__dict__["_T"] = (mc_T, pi, lift)
    return P.__dict__["_T"]


def epsilon(P: TwoTermComplex) -> Epsilon:
    """H^0 on endomorphisms; checks it is multiplicative and surjective."""
    F = P.field
    E = endo_algebra(P)
    T, pi, lift = t_module(P)
    ET = hom_space(T, T)
    k = len(ET)
    mult = F.zeros((k, k, k))
    for i in range(k):
        for j in range(k):
            mult[i, j] = ET.coords(F.matmul(ET.basis[i], ET.basis[j]))
    unit = ET.coords(F.eye(T.dim)) if k else F.zeros(0)
    Ealg = algebra_from_constants(F, [f"t{i + 1}" for i in range(k)], mult, unit, name="End(T)")
    cols = [ET.coords(F.matmul(pi.matrix, F.matmul(b.parts[1], lift))) for b in E.basis_classes] if k else []
    mat = la.as_columns(cols, k, F) if cols else F.zeros((k, E.dim))
    r = la.rank(mat, F) if mat.size else 0
    if r != k:
        raise InvariantViolation("H^0 is not surjective onto End(T)")
    for i in range(E.dim):
        for j in range(E.dim):
            lhs = F.matmul(mat, E.algebra.mult[i, j])
            rhs = Ealg.multiply(mat[:, i], mat[:, j]) if k else F.zeros(0)
            if not np.array_equal(lhs, rhs):
                raise InvariantViolation("H^0 is not multiplicative")
    return Epsilon(E, Ealg, T, mat)


# ---------------------------------------------------------------------------
# H_P and the bimodule T


def H_P(P: TwoTermComplex, M: FdModule, n: int = 0) -> FdModule:
    """Hom_D(P, M[n]) as a right E-module (precomposition), cached on M."""
    cache = M.__dict__.setdefault("_HP", {})
    key = (id(P), n)
    if key in cache:
        return cache[key][1]
    F = P.field
    E = endo_algebra(P)
    H = hom_K(P, module_stalk(M), n)
    act = F.zeros((E.dim, H.dim, H.dim))
    for k, e in enumerate(E.basis_classes):
        act[k] = precompose_matrix(H, e)
    X = FdModule(E.algebra, act, f"H{n}({M.name})", origin=("H_P", P, M, n, H))
    cache[key] = (P, X)
    return X


def H_P_map(P: TwoTermComplex, g: ModuleMap, n: int = 0) -> ModuleMap:
    """H_P applied to a module map: postcomposition."""
    X, Y = H_P(P, g.source, n), H_P(P, g.target, n)
    H = X.origin[4]
    mat = postcompose_matrix(H, stalk_map(g))
    return ModuleMap(X, Y, mat.reshape(Y.dim, X.dim))


@dataclass(eq=False)
class BimoduleT:
    """T = H^0(P) with left E-action (as an E^op-module) and right R-action."""

    P: TwoTermComplex
    left: FdModule  # over E^op
    right: FdModule  # over R

    @property
    def dim(self) -> int:
        return self.right.dim

    def check(self) -> None:
        F = self.P.field
        self.left.check()
        self.right.check()
        for e in self.left.action:
            for r in self.right.action:
                if not np.array_equal(F.matmul(e, r), F.matmul(r, e)):
                    raise InvariantViolation("left and right actions on T do not commute")


def bimodule_T(P: TwoTermComplex) -> BimoduleT:
    if "_bimodT" in P.__dict__:
        return P.__dict__["_bimodT"]
    F = P.field
    E = endo_algebra(P)
    T, pi, lift = t_module(P)
    lam = F.zeros((E.dim, T.dim, T.dim))
    for k, e in enumerate(E.basis_classes):
        lam[k] = F.matmul(pi.matrix, F.matmul(e.parts[1], lift))
    left = FdModule(E.algebra.opposite(), lam, "T")
    B = BimoduleT(P, left, T)
    B.check()
    P.__dict__["_bimodT"] = B
    return B


# ---------------------------------------------------------------------------
# tensor products over E


@dataclass(eq=False)
class Tensor:
    """X (x)_E L as a quotient of the Kronecker space."""

    X: FdModule
    L: FdModule
    proj: np.ndarray  # dim x (dim X * dim L)
    lift: np.ndarray
    relations: np.ndarray

    @property
    def dim(self) -> int:
        return self.proj.shape[0]

    def kron_vector(self, x, l) -> np.ndarray:
        return self.X.field.kron(np.asarray(x).reshape(-1), np.asarray(l).reshape(-1))


def tensor(X: FdModule, L: FdModule) -> Tensor:
    """X (x)_E L for a right E-module X and a left E-module L (over E^op)."""
    A = X.algebra
    if L.algebra is not A.opposite():
        raise PreconditionError("tensor: L must be a module over the opposite algebra")
    cache = X.__dict__.setdefault("_tensors", {})
    if id(L) in cache:
        return cache[id(L)][1]
    F = X.field
    dx, dl = X.dim, L.dim
    n = dx * dl
    rels = []
    if n:
        Ix, Il = F.eye(dx), F.eye(dl)
        for g in A.generators:
            rels.append(F.sub(np.kron(X.act(g), Il), np.kron(Ix, L.act(g))))
    R = la.span_basis(np.concatenate(rels, axis=1), F) if rels else F.zeros((n, 0))
    proj, lift = la.quotient_basis(R, n, F)
    t = Tensor(X, L, proj, lift, R)
    cache[id(L)] = (L, t)
    return t


def tensor_map(t1: Tensor, t2: Tensor, f: Optional[np.ndarray], g: Optional[np.ndarray]) -> np.ndarray:
    """Matrix of f (x) g: t1 -> t2 (``None`` means identity)."""
    F = t1.X.field
    fm = F.eye(t1.X.dim) if f is None else f
    gm = F.eye(t1.L.dim) if g is None else g
    if t1.dim == 0 or t2.dim == 0:
        return F.zeros((t2.dim, t1.dim))
    return F.matmul(t2.proj, F.matmul(np.kron(fm, gm).astype(F.dtype), t1.lift))


def T_P(P: TwoTermComplex, X: FdModule) -> FdModule:
    """X (x)_E T with the right R-action of T."""
    cache = X.__dict__.setdefault("_TP", {})
    if id(P) in cache:
        return cache[id(P)][1]
    F = P.field
    B = bimodule_T(P)
    t = tensor(X, B.left)
    R = P.algebra
    act = F.zeros((R.dim, t.dim, t.dim))
    if t.dim:
        Ix = F.eye(X.dim)
        for k in range(R.dim):
            act[k] = F.matmul(t.proj, F.matmul(np.kron(Ix, B.right.action[k]).astype(F.dtype), t.lift))
    M = FdModule(R, act, f"T({X.name})", origin=("T_P", P, X, t))
    cache[id(P)] = (P, M)
    return M


def T_P_map(P: TwoTermComplex, f: ModuleMap) -> ModuleMap:
    A, B = T_P(P, f.source), T_P(P, f.target)
    m = tensor_map(A.origin[3], B.origin[3], f.matrix, None)
    return ModuleMap(A, B, m.reshape(B.dim, A.dim))


def phi(P: TwoTermComplex, M: FdModule, tp=None) -> ModuleMap:
    """Evaluation T_P(H_P(M)) -> M, f (x) t -> f(t).

    Always checks injectivity; when ``tp`` is given and M is torsion, also
    checks bijectivity.
    """
    F = P.field
    X = H_P(P, M, 0)
    TX = T_P(P, X)
    t = TX.origin[3]
    T, pi, lift = t_module(P)
    H = X.origin[4]
    dt = T.dim
    kron_cols = F.zeros((M.dim, X.dim * dt))
    for i, f in enumerate(H.basis):
        kron_cols[:, i * dt:(i + 1) * dt] = F.matmul(f.parts[1], lift)
    if t.relations.shape[1] and not la.is_zero(F.matmul(kron_cols, t.relations)):
        raise InvariantViolation("evaluation does not factor through the tensor product")
    mat = F.matmul(kron_cols, t.lift) if t.dim else F.zeros((M.dim, 0))
    f = ModuleMap(TX, M, mat.reshape(M.dim, TX.dim))
    f.check()
    if not f.is_injective():
        raise InvariantViolation(f"phi is not monic on {M.name}")
    if tp is not None:
        from .torsion import in_T

        if in_T(tp, M) and not f.is_iso():
            raise InvariantViolation(f"phi is not an isomorphism on torsion module {M.name}")
    return f


def psi(P: TwoTermComplex, X: FdModule) -> ModuleMap:
    """Unit X -> H_P(T_P(X)), x -> (p -> x (x) pi(p)); checks the triangle identity."""
    F = P.field
    TX = T_P(P, X)
    t = TX.origin[3]
    T, pi, _ = t_module(P)
    Y = H_P(P, TX, 0)
    H = Y.origin[4]
    S = module_stalk(TX)
    cols = []
    for i in range(X.dim):
        comp = F.matmul(t.proj, np.kron(F.unit_vector(X.dim, i).reshape(-1, 1), pi.matrix).astype(F.dtype)) if t.dim else F.zeros((0, P.m0.dim))
        cls = ChainMapClass(P, S, 0, (F.zeros((0, P.m1.dim)), comp.reshape(TX.dim, P.m0.dim)))
        cols.append(H.coords(cls))
    mat = la.as_columns(cols, Y.dim, F)
    u = ModuleMap(X, Y, mat.reshape(Y.dim, X.dim))
    u.check()
    # 1 = phi_{T X} o T(psi_X)
    tpsi = T_P_map(P, u)
    ph = phi(P, TX)
    if not np.array_equal(F.matmul(ph.matrix, tpsi.matrix), F.eye(TX.dim)):
        raise InvariantViolation("triangle identity fails for psi")
    return u


# ---------------------------------------------------------------------------
# beta*, K_T and Tor_1


def left_hom_module(Q: TwoTermComplex, P: TwoTermComplex, name: str = "") -> FdModule:
    """Hom_K(Q, P) as a left E(P)-module (postcomposition), over E^op."""
    F = P.field
    E = endo_algebra(P)
    H = hom_K(Q, P, 0)
    act = F.zeros((E.dim, H.dim, H.dim))
    for k, e in enumerate(E.basis_classes):
        act[k] = postcompose_matrix(H, e)
    return FdModule(E.algebra.opposite(), act, name or f"Hom({Q.name},{P.name})", origin=("left_hom", Q, P, H))


@dataclass(eq=False)
class BetaStar:
    """Precomposition with beta: Hom_K(Q2, P) -> Hom_K(Q1, P)."""

    cert: SiltingCertificate
    source: FdModule
    target: FdModule
    matrix: np.ndarray
    cokernel: FdModule
    image: np.ndarray  # columns spanning im(beta*) in the target

    @property
    def is_mono(self) -> bool:
        return la.rank(self.matrix, self.source.field) == self.source.dim if self.matrix.size else self.source.dim == 0


def beta_star(cert: SiltingCertificate) -> BetaStar:
    P = cert.P
    if "_beta_star" in cert.__dict__:
        return cert.__dict__["_beta_star"]
    F = P.field
    S = left_hom_module(cert.Q2, P, "Hom(Q2,P)")
    Hm = left_hom_module(cert.Q1, P, "Hom(Q1,P)")
    mat = precompose_matrix(S.origin[3], cert.beta).reshape(Hm.dim, S.dim)
    b = ModuleMap(S, Hm, mat)
    b.check()
    img = la.span_basis(mat, F) if mat.size else F.zeros((Hm.dim, 0))
    coker, _, _ = quotient_module(Hm, img, "coker(beta*)")
    B = bimodule_T(P)
    if is_isomorphic(coker, B.left) is None:
        raise InvariantViolation("coker(beta*) is not isomorphic to T")
    for Q, w, mod in ((cert.Q1, cert.add_Q1, Hm), (cert.Q2, cert.add_Q2, S)):
        _check_projective(P, Q, w, mod)
    out = BetaStar(cert, S, Hm, mat, coker, img)
    cert.__dict__["_beta_star"] = out
    return out


def _check_projective(P, Q, w, mod) -> None:
    """Hom(Q, P) is a retract of Hom(P^m, P), a free E-module of rank m."""
    F = P.field
    E = endo_algebra(P)
    HQ = mod.origin[3]
    to_free = precompose_matrix(HQ, w.e)  # u -> u o e
    free = hom_K(w.e.source, P, 0)
    if free.dim != w.m * E.dim:
        raise InvariantViolation("Hom(P^m, P) is not free of rank m")
    if free.dim == 0:
        if HQ.dim:
            raise InvariantViolation("nonzero Hom(Q, P) with Q in add 0")
        return
    back = precompose_matrix(free, w.s)  # v -> v o s
    if not np.array_equal(F.matmul(back, to_free), F.eye(HQ.dim)):
        raise InvariantViolation("Hom(Q, P) is not a retract of a free module")


@dataclass(eq=False)
class KTLinear:
    X: FdModule
    source: Tensor  # X (x) Hom(Q2, P)
    target: Tensor  # X (x) Hom(Q1, P)
    map: np.ndarray
    basis: np.ndarray  # kernel, columns in source coordinates

    @property
    def dim(self) -> int:
        return self.basis.shape[1]


def K_T_linear(X: FdModule, b: BetaStar) -> KTLinear:
    """Ker(X (x) beta*) as a vector space."""
    cache = X.__dict__.setdefault("_KT", {})
    if id(b) in cache:
        return cache[id(b)][1]
    F = X.field
    ts, tt = tensor(X, b.source), tensor(X, b.target)
    m = tensor_map(ts, tt, None, b.matrix)
    ker = la.kernel_basis(m, F) if ts.dim else F.zeros((0, 0))
    if tt.dim == 0 and ts.dim:
        ker = F.eye(ts.dim)
    out = KTLinear(X, ts, tt, m, ker)
    cache[id(b)] = (b, out)
    return out


def K_T_map(f: ModuleMap, b: BetaStar) -> np.ndarray:
    """K_T applied to a map of right E-modules, in kernel coordinates."""
    F = f.field
    k1, k2 = K_T_linear(f.source, b), K_T_linear(f.target, b)
    m = tensor_map(k1.source, k2.source, f.matrix, None)
    img = F.matmul(m, k1.basis) if k1.dim else F.zeros((k2.source.dim, 0))
    if k2.dim == 0:
        return F.zeros((0, k1.dim))
    out = la.solve(k2.basis, img, F)
    if out is None:
        raise InvariantViolation("K_T of a map leaves the kernel")
    return out


def coker_tensor_beta(X: FdModule, b: BetaStar) -> int:
    k = K_T_linear(X, b)
    return k.target.dim - (la.rank(k.map, X.field) if k.map.size else 0)


@dataclass
class Tor1:
    dim: int
    dim_route_free: int
    epi_rank: int
    kt_dim: int
    is_iso: bool


def _generating_set(M: FdModule) -> list:
    """Greedy minimal-by-inclusion generating set (basis vectors)."""
    F = M.field
    gens = []
    span = F.zeros((M.dim, 0))
    stack = np.stack(list(M.action)) if M.algebra.dim else F.zeros((0, M.dim, M.dim))
    for i in range(M.dim):
        v = F.unit_vector(M.dim, i)
        if la.in_span(span, v, F):
            continue
        gens.append(v)
        cols = [F.matmul(a, g) for g in gens for a in stack]
        span = la.span_basis(la.as_columns(cols, M.dim, F), F)
        if span.shape[1] == M.dim:
            break
    return gens


def free_cover(M: FdModule) -> tuple:
    """(free module A^g, ModuleMap A^g ->> M) from a greedy generating set."""
    A = M.algebra
    F = M.field
    gens = _generating_set(M)
    reg = regular_module(A)
    if not gens:
        Z = zero_module(A)
        return Z, ModuleMap(Z, M, F.zeros((M.dim, 0)))
    free = direct_sum_modules([reg] * len(gens), f"free^{len(gens)}")
    cols = []
    for g in gens:
        for k in range(A.dim):
            cols.append(F.matmul(M.action[k], g))
    mat = la.as_columns(cols, M.dim, F)
    f = ModuleMap(free, M, mat)
    f.check()
    if not f.is_surjective():
        raise InvariantViolation("generating set does not generate")
    return free, f


def tor1(X: FdModule, b: BetaStar) -> Tor1:
    """Tor_1^E(X, T) two ways, and the natural epimorphism K_T(X) ->> Tor_1.

    Route A uses 0 -> im(beta*) -> Hom(Q1, P) -> T -> 0, route B a free
    cover F0 ->> T with kernel K0; in both cases Tor_1 is the kernel of
    X (x) (sub) -> X (x) (ambient) because the ambient module is projective.
    """
    F = X.field
    Hm = b.target
    I = submodule_on(Hm, b.image, "im(beta*)") if b.image.shape[1] else zero_module(Hm.algebra)
    tI, tH = tensor(X, I), tensor(X, Hm)
    incl = b.image if b.image.shape[1] else F.zeros((Hm.dim, 0))
    mA = tensor_map(tI, tH, None, incl)
    torA = la.kernel_basis(mA, F) if tI.dim else F.zeros((0, 0))
    if tH.dim == 0 and tI.dim:
        torA = F.eye(tI.dim)
    # route B
    B = bimodule_T(b.cert.P)
    free, cov = free_cover(B.left)
    mc_ker = la.kernel_basis(cov.matrix, F) if free.dim else F.zeros((0, 0))
    K0 = submodule_on(free, mc_ker, "K0") if mc_ker.shape[1] else zero_module(free.algebra)
    tK, tF = tensor(X, K0), tensor(X, free)
    mB = tensor_map(tK, tF, None, mc_ker if mc_ker.shape[1] else F.zeros((free.dim, 0)))
    dimB = tK.dim - (la.rank(mB, F) if mB.size else 0)
    # epimorphism K_T -> Tor_1, induced by Hom(Q2, P) ->> im(beta*)
    kt = K_T_linear(X, b)
    corestrict = la.solve(incl, b.matrix, F) if incl.shape[1] else F.zeros((0, b.source.dim))
    m_SI = tensor_map(kt.source, tI, None, corestrict)
    img = F.matmul(m_SI, kt.basis) if kt.dim else F.zeros((tI.dim, 0))
    if img.size and not la.is_zero(F.matmul(mA, img)):
        raise InvariantViolation("K_T does not map into Tor_1")
    r = la.rank(img, F) if img.size else 0
    dA = torA.shape[1]
    if dA != dimB:
        raise InvariantViolation(f"Tor_1 routes disagree: {dA} vs {dimB}")
    if r != dA:
        raise InvariantViolation("K_T -> Tor_1 is not surjective")
    return Tor1(dA, dimB, r, kt.dim, r == kt.dim == dA)


def ext1(Z: FdModule, X: FdModule) -> int:
    """dim Ext^1_E(Z, X) from a free cover of Z."""
    F = X.field
    free, cov = free_cover(Z)
    ker = la.kernel_basis(cov.matrix, F) if free.dim else F.zeros((0, 0))
    if ker.shape[1] == 0:
        return 0
    K = submodule_on(free, ker, "K")
    HK = hom_space(K, X)
    if len(HK) == 0:
        return 0
    HF = hom_space(free, X)
    cols = [HK.coords(F.matmul(f, ker)) for f in HF.basis]
    r = la.rank(la.as_columns(cols, len(HK), F), F) if cols else 0
    return len(HK) - r


def in_U(P: TwoTermComplex, X: FdModule) -> bool:
    return T_P(P, X).dim == 0


def in_scriptE(P: TwoTermComplex, X: FdModule, b: BetaStar) -> bool:
    return in_U(P, X) and K_T_linear(X, b).dim == 0


def in_V(P: TwoTermComplex, X: FdModule, config: Config = DEFAULT_CONFIG) -> bool:
    """No nonzero submodule of X is killed by - (x) T."""
    for S, _ in enumerate_submodules(X, config):
        if S.dim and in_U(P, S):
            return False
    return True


# ---------------------------------------------------------------------------
# six-term sequence


@dataclass
class SixTerm:
    dims: list  # K(L), K(M), K(N), C(L), C(M), C(N)
    exact: list  # exactness at each of the six positions
    maps: list

    @property
    def ok(self) -> bool:
        return all(self.exact)


def _exact_at(f: Optional[np.ndarray], g: Optional[np.ndarray], mid: int, F) -> bool:
    """im f = ker g at a space of dimension ``mid``; None is a zero map."""
    rf = la.rank(f, F) if f is not None and f.size else 0
    rg = la.rank(g, F) if g is not None and g.size else 0
    if f is not None and g is not None and f.size and g.size and not la.is_zero(F.matmul(g, f)):
        return False
    return rf + rg == mid


def six_term(i: ModuleMap, p: ModuleMap, b: BetaStar) -> SixTerm:
    """0 -> K(L) -> K(M) -> K(N) -> C(L) -> C(M) -> C(N) -> 0 for the short
    exact sequence L --i--> M --p--> N, with C(X) = Coker(X (x) beta*)."""
    F = i.field
    L, M, N = i.source, i.target, p.target
    if p.source is not M:
        raise PreconditionError("six_term: maps do not compose")
    if not (i.is_injective() and p.is_surjective() and (i.matrix.size == 0 or la.is_zero(F.matmul(p.matrix, i.matrix)))
            and i.rank() + p.rank() == M.dim):
        raise PreconditionError("six_term: input is not a short exact sequence")
    kL, kM, kN = (K_T_linear(X, b) for X in (L, M, N))
    # cokernels of X (x) beta*
    cok = []
    for k in (kL, kM, kN):
        img = la.span_basis(k.map, F) if k.map.size else F.zeros((k.target.dim, 0))
        cok.append(la.quotient_basis(img, k.target.dim, F))
    Ki = K_T_map(i, b)
    Kp = K_T_map(p, b)
    iH = tensor_map(kL.target, kM.target, i.matrix, None)
    pH = tensor_map(kM.target, kN.target, p.matrix, None)
    Ci = F.matmul(cok[1][0], F.matmul(iH, cok[0][1])) if cok[0][0].shape[0] and cok[1][0].shape[0] else None
    Cp = F.matmul(cok[2][0], F.matmul(pH, cok[1][1])) if cok[1][0].shape[0] and cok[2][0].shape[0] else None
    # connecting map
    pS = tensor_map(kM.source, kN.source, p.matrix, None)
    cols = []
    for c in range(kN.dim):
        x = la.solve(pS, kN.basis[:, c], F)
        if x is None:
            raise InvariantViolation("X (x) S does not preserve the epimorphism")
        y = F.matmul(kM.map, x)
        z = la.solve(iH, y, F)
        if z is None:
            raise InvariantViolation("connecting map: no preimage")
        cols.append(F.matmul(cok[0][0], z))
    delta = la.as_columns(cols, cok[0][0].shape[0], F) if cols else None
    dims = [kL.dim, kM.dim, kN.dim, cok[0][0].shape[0], cok[1][0].shape[0], cok[2][0].shape[0]]
    exact = [
        _exact_at(None, Ki, dims[0], F),
        _exact_at(Ki, Kp, dims[1], F),
        _exact_at(Kp, delta, dims[2], F),
        _exact_at(delta, Ci, dims[3], F),
        _exact_at(Ci, Cp, dims[4], F),
        (la.rank(Cp, F) if Cp is not None and Cp.size else 0) == dims[5],
    ]
    return SixTerm(dims, exact, [Ki, Kp, delta, Ci, Cp])


# ---------------------------------------------------------------------------
# zeta and the tensor-hom pairing


def theta_matrix(Y: FdModule, L: FdModule, target: HomK) -> np.ndarray:
    """Pairing Y (x)_E Hom_K(Q, P) -> Hom_K(Q, Z[n]), y (x) u -> y o u.

    ``Y`` must come from H_P (its classes are P -> Z[n]) and ``L`` from
    left_hom_module.
    """
    F = Y.field
    HY = Y.origin[4]
    HL = L.origin[3]
    t = tensor(Y, L)
    cols = []
    for y in HY.basis:
        for u in HL.basis:
            cols.append(target.coords(compose(y, u)))
    kron = la.as_columns(cols, target.dim, F)
    if t.relations.shape[1] and kron.size and not la.is_zero(F.matmul(kron, t.relations)):
        raise InvariantViolation("pairing is not balanced over E")
    if t.dim == 0:
        return F.zeros((target.dim, 0))
    return F.matmul(kron, t.lift)


def tensor_hom_bijective(P: TwoTermComplex, M: FdModule, Q: TwoTermComplex) -> bool:
    """The pairing H_P(M) (x)_E Hom_K(Q, P) -> Hom_K(Q, M) is bijective."""
    Y = H_P(P, M, 0)
    L = left_hom_module(Q, P)
    target = hom_K(Q, module_stalk(M), 0)
    th = theta_matrix(Y, L, target)
    n = th.shape[1]
    if n != target.dim:
        return False
    return n == 0 or la.rank(th, P.field) == n


def zeta(Fm: FdModule, b: BetaStar) -> np.ndarray:
    """zeta_F: K_T(H_P(F, 1)) -> F as a matrix (F.dim x dim K_T).

    An element k of the kernel pairs to a map Q2 -> F[1] killed by beta,
    which factors uniquely as x[1] o gamma with x in Hom(R, F) = F.
    """
    cert = b.cert
    P = cert.P
    F = P.field
    Y = H_P(P, Fm, 1)
    kt = K_T_linear(Y, b)
    S = module_stalk(Fm)
    target = hom_K(cert.Q2, S, 1)
    th = theta_matrix(Y, b.source, target)
    img = F.matmul(th, kt.basis) if kt.dim and th.size else F.zeros((target.dim, kt.dim))
    HR = hom_K(cert.R, S, 0)
    gstar = la.as_columns([target.coords(compose(x, cert.gamma)) for x in HR.basis], target.dim, F)
    if kt.dim == 0:
        return F.zeros((Fm.dim, 0))
    sol = la.solve(gstar, img, F) if HR.dim else None
    if sol is None:
        raise InvariantViolation("Theta(k) does not factor through gamma")
    evals = la.as_columns([F.matmul(x.parts[1], P.algebra.unit) for x in HR.basis], Fm.dim, F)
    return F.matmul(evals, sol)
