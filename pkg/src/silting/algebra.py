"""Finite-dimensional algebras and their right modules.

Conventions used throughout the package:

* paths compose left to right: ``a*b`` means "a, then b", so ``e_i a = a``
  when ``a`` starts at ``i``;
* right modules are covariant quiver representations and are stored by one
  action matrix per algebra basis element, acting on column vectors. With
  columns, ``act(x*y) == act(y) @ act(x)``;
* a module map is a matrix ``F`` with ``F @ act_M(b) == act_N(b) @ F``;
* ``Hom(e_v A, M) = M e_v`` via ``f -> f(e_v)``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from functools import cached_property, lru_cache
from typing import Optional, Sequence

import numpy as np

from . import linalg as la
from .errors import CapExceededError, InfiniteDimensionalError, PreconditionError, UndecidedError
from .linalg import Field


@dataclass
class Config:
    """Caps for the brute-force steps.

    ``max_dim`` bounds module enumeration, ``hom_cap`` bounds the number of
    Hom-space elements an isomorphism search may visit, ``subspace_dim``
    bounds submodule enumeration.
    """

    max_dim: int = 4
    hom_cap: int = 1 << 20
    subspace_dim: int = 6
    candidate_cap: int = 1 << 20
    iso_fallback: bool = True
    seed: int = 0
    path_length_cap: int = 32


DEFAULT_CONFIG = Config()


# ---------------------------------------------------------------------------
# quivers and algebras


@dataclass(frozen=True)
class Quiver:
    vertices: tuple
    arrows: tuple  # (name, source, target)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(str(v) for v in self.vertices))
        object.__setattr__(self, "arrows", tuple((str(a), str(s), str(t)) for a, s, t in self.arrows))
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("vertex labels must be unique")
        names = [a for a, _, _ in self.arrows]
        if len(set(names)) != len(names):
            raise ValueError("arrow names must be unique")
        for k, (a, s, t) in enumerate(self.arrows):
            if s not in self.vertices:
                raise ValueError(f"arrows[{k}].source: unknown vertex {s!r}")
            if t not in self.vertices:
                raise ValueError(f"arrows[{k}].target: unknown vertex {t!r}")

    def vertex_index(self, v) -> int:
        try:
            return self.vertices.index(str(v))
        except ValueError:
            raise KeyError(f"unknown vertex {v!r}") from None

    def arrow_index(self, name) -> int:
        for k, (a, _, _) in enumerate(self.arrows):
            if a == name:
                return k
        raise KeyError(f"unknown arrow {name!r}")


@dataclass(eq=False)
class FiniteDimAlgebra:
    """Algebra given by structure constants ``mult[i, j, k]`` (coefficient
    of basis element k in ``b_i * b_j``), a unit and a complete set of
    orthogonal idempotents."""

    field: Field
    labels: list
    mult: np.ndarray
    unit: np.ndarray
    idempotents: list
    idempotent_labels: Optional[list] = None
    quiver: Optional[Quiver] = None
    paths: Optional[list] = None  # (start vertex, arrow indices) per basis element
    name: str = ""

    def __post_init__(self):
        n = len(self.labels)
        if self.mult.shape != (n, n, n):
            raise ValueError("structure constants have the wrong shape")
        if self.idempotent_labels is None:
            self.idempotent_labels = [f"x{i + 1}" for i in range(len(self.idempotents))]

    @property
    def dim(self) -> int:
        return len(self.labels)

    def __repr__(self) -> str:
        return f"<FiniteDimAlgebra {self.name or '?'} dim={self.dim} over {self.field!r}>"

    def basis_vector(self, i: int) -> np.ndarray:
        return self.field.unit_vector(self.dim, i)

    def multiply(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        n = self.dim
        if n == 0:
            return self.field.zeros(0)
        t = self.field.matmul(x.reshape(1, n), self.mult.reshape(n, n * n)).reshape(n, n)
        return self.field.matmul(y.reshape(1, n), t).reshape(n)

    def left_mult_matrix(self, x: np.ndarray) -> np.ndarray:
        """Matrix of y -> x*y."""
        n = self.dim
        if n == 0:
            return self.field.zeros((0, 0))
        return self.field.matmul(x.reshape(1, n), self.mult.reshape(n, n * n)).reshape(n, n).T.copy()

    def right_mult_matrix(self, y: np.ndarray) -> np.ndarray:
        """Matrix of x -> x*y."""
        n = self.dim
        if n == 0:
            return self.field.zeros((0, 0))
        m = np.transpose(self.mult, (1, 0, 2)).reshape(n, n * n)
        return self.field.matmul(y.reshape(1, n), m).reshape(n, n).T.copy()

    @cached_property
    def regular_action(self) -> np.ndarray:
        """Action matrices of the right regular module A_A."""
        F = self.field
        n = self.dim
        if n == 0:
            return F.zeros((0, 0, 0))
        # act(b)[k, j] = mult[j, b, k]
        return np.ascontiguousarray(np.transpose(self.mult, (1, 2, 0)))

    def check(self) -> None:
        F, n = self.field, self.dim
        if n == 0:
            return
        e = F.eye(n)
        for i in range(n):
            if not np.array_equal(self.multiply(self.unit, e[i]), e[i]) or not np.array_equal(
                self.multiply(e[i], self.unit), e[i]
            ):
                raise ValueError("unit law fails")
        # (b_i b_j) b_k == b_i (b_j b_k)
        m2 = self.mult.reshape(n * n, n)
        lhs = F.matmul(m2, self.mult.reshape(n, n * n)).reshape(n, n, n, n)
        # rhs[i,j,k,l] = sum_m mult[j,k,m] mult[i,m,l]
        rhs = F.reduce(np.tensordot(self.mult, self.mult, axes=([1], [2])))  # [i, l, j, k]
        rhs = rhs.transpose(0, 2, 3, 1)
        if not np.array_equal(lhs, rhs):
            raise ValueError("multiplication is not associative")
        total = F.zeros(n)
        for i, x in enumerate(self.idempotents):
            total = F.add(total, x)
            for j, y in enumerate(self.idempotents):
                xy = self.multiply(x, y)
                want = x if i == j else F.zeros(n)
                if not np.array_equal(xy, want):
                    raise ValueError("idempotents are not orthogonal")
        if not np.array_equal(total, self.unit):
            raise ValueError("idempotents do not sum to the unit")

    def opposite(self) -> "FiniteDimAlgebra":
        """The opposite algebra; left modules are right modules over it."""
        if "_opposite" not in self.__dict__:
            op = FiniteDimAlgebra(
                self.field,
                list(self.labels),
                np.ascontiguousarray(np.transpose(self.mult, (1, 0, 2))),
                self.unit.copy(),
                [x.copy() for x in self.idempotents],
                list(self.idempotent_labels),
                name=f"{self.name}^op",
            )
            op.__dict__["_opposite"] = self
            self.__dict__["_opposite"] = op
        return self.__dict__["_opposite"]

    # -- generation -----------------------------------------------------
    def subalgebra_basis(self, gens: Sequence[np.ndarray]) -> np.ndarray:
        """Canonical basis (columns) of the unital subalgebra generated by ``gens``."""
        F, n = self.field, self.dim
        if n == 0:
            return F.zeros((0, 0))
        cur = la.span_basis(la.as_columns([self.unit, *gens], n, F), F)
        rmats = [self.right_mult_matrix(g) for g in gens]
        while True:
            parts = [cur] + [F.matmul(r, cur) for r in rmats]
            new = la.span_basis(np.concatenate(parts, axis=1), F)
            if new.shape[1] == cur.shape[1]:
                return new
            cur = new

    @cached_property
    def generators(self) -> list:
        """Greedy list of basis vectors generating the algebra (with the unit)."""
        gens: list = []
        span = self.subalgebra_basis(gens)
        for i in range(self.dim):
            b = self.basis_vector(i)
            if not la.in_span(span, b, self.field):
                gens.append(b)
                span = self.subalgebra_basis(gens)
            if span.shape[1] == self.dim:
                break
        return gens

    def peirce_basis(self, i: int, j: int) -> np.ndarray:
        """Basis (columns) of e_i A e_j."""
        ei, ej = self.idempotents[i], self.idempotents[j]
        m = self.field.matmul(self.left_mult_matrix(ei), self.right_mult_matrix(ej))
        return la.span_basis(m, self.field)

    @cached_property
    def peirce_generators(self) -> list:
        """Homogeneous generators (i, j, x) with x in e_i A e_j that, together
        with the idempotents, generate the algebra."""
        F = self.field
        base = list(self.idempotents)
        chosen: list = []
        span = self.subalgebra_basis(base)
        m = len(self.idempotents)
        order = [(i, j) for i in range(m) for j in range(m) if i != j] + [(i, i) for i in range(m)]
        for i, j in order:
            pb = self.peirce_basis(i, j)
            for c in range(pb.shape[1]):
                if span.shape[1] == self.dim:
                    break
                x = pb[:, c]
                if not la.in_span(span, x, F):
                    chosen.append((i, j, x))
                    span = self.subalgebra_basis(base + [g for _, _, g in chosen])
        if span.shape[1] != self.dim:
            raise ValueError("idempotents and Peirce generators do not generate the algebra")
        return chosen

    @cached_property
    def words(self) -> tuple:
        """Words expressing the basis through idempotents + Peirce generators.

        Returns ``(words, coeff)`` where each word is a tuple of indices into
        ``idempotents + [x for _, _, x in peirce_generators]`` and
        ``basis_k = sum_w coeff[w, k] * word_w``.
        """
        F, n = self.field, self.dim
        gens = list(self.idempotents) + [x for _, _, x in self.peirce_generators]
        words: list = []
        vecs: list = []
        span = F.zeros((n, 0))
        frontier = [((), self.unit)]
        while frontier and len(words) < n:
            nxt = []
            for w, v in frontier:
                if la.in_span(span, v, F):
                    continue
                words.append(w)
                vecs.append(v)
                span = la.as_columns(vecs, n, F)
                for gi, g in enumerate(gens):
                    nxt.append((w + (gi,), self.multiply(v, g)))
            frontier = nxt
        if len(words) != n:
            raise ValueError("generators do not span the algebra")
        coeff = la.inverse(la.as_columns(vecs, n, F), F)  # words x basis
        return tuple(words), coeff

    def element(self, coeffs: dict) -> np.ndarray:
        v = self.field.zeros(self.dim)
        for label, c in coeffs.items():
            v[self.labels.index(label)] = self.field.scalar(c)
        return v

    def vertex_idempotent(self, v) -> np.ndarray:
        if self.quiver is not None:
            return self.idempotents[self.quiver.vertex_index(v)]
        if isinstance(v, int):
            return self.idempotents[v]
        return self.idempotents[self.idempotent_labels.index(str(v))]

    def path_element(self, terms) -> np.ndarray:
        """Element from ``[(coeff, arrow-name tuple or ("e", vertex)), ...]``."""
        if self.quiver is None:
            raise PreconditionError("path_element needs a path algebra")
        F = self.field
        out = F.zeros(self.dim)
        for c, path in terms:
            if isinstance(path, tuple) and len(path) == 2 and path[0] == "e":
                x = self.vertex_idempotent(path[1])
            else:
                if not path:
                    raise ValueError("empty path needs a vertex")
                x = self.basis_vector(self.labels.index(path[0]))
                for a in path[1:]:
                    x = self.multiply(x, self.basis_vector(self.labels.index(a)))
            out = F.add(out, F.scale(F.scalar(c), x))
        return out


def _path_sort_key(path):
    start, arrows = path
    return (len(arrows), arrows if arrows else (start,))


def _paths_up_to(q: Quiver, length: int) -> list:
    src = [q.vertex_index(s) for _, s, _ in q.arrows]
    tgt = [q.vertex_index(t) for _, _, t in q.arrows]
    layer = [(v, ()) for v in range(len(q.vertices))]
    out = list(layer)
    for _ in range(length):
        nxt = []
        for start, arrows in layer:
            end = tgt[arrows[-1]] if arrows else start
            for k in range(len(q.arrows)):
                if src[k] == end:
                    nxt.append((start, arrows + (k,)))
        layer = nxt
        out.extend(nxt)
    return sorted(out, key=_path_sort_key)


def _path_end(q: Quiver, path) -> int:
    start, arrows = path
    if not arrows:
        return start
    return q.vertex_index(q.arrows[arrows[-1]][2])


def _concat(q: Quiver, p, r):
    if _path_end(q, p) != r[0]:
        return None
    return (p[0], p[1] + r[1])


def _path_label(q: Quiver, path) -> str:
    start, arrows = path
    if not arrows:
        return f"e_{q.vertices[start]}"
    return "*".join(q.arrows[k][0] for k in arrows)


def _add_scalars(field: Field, x, y):
    s = x + y
    return s % field.p if field.p else s


def _normalize_relation(q: Quiver, field: Field, rel) -> list:
    """Relation as {path: coeff}, split into uniform (source, target) parts."""
    terms: dict = {}
    for c, names in rel:
        names = tuple(names)
        if len(names) < 2:
            raise PreconditionError("relations must be combinations of paths of length >= 2")
        ks = tuple(q.arrow_index(a) for a in names)
        for x, y in zip(ks, ks[1:]):
            if q.arrows[x][2] != q.arrows[y][1]:
                raise PreconditionError(f"path {'*'.join(names)} is not composable")
        start = q.vertex_index(q.arrows[ks[0]][1])
        key = (start, ks)
        terms[key] = _add_scalars(field, terms.get(key, 0), field.scalar(c))
    parts: dict = {}
    for path, c in terms.items():
        if c == 0:
            continue
        parts.setdefault((path[0], _path_end(q, path)), {})[path] = c
    return list(parts.values())


def path_algebra(q: Quiver, relations, field: Field, config: Config = DEFAULT_CONFIG, name: str = "") -> FiniteDimAlgebra:
    """kQ/I for an admissible ideal I (every relation term has length >= 2 and
    I contains all long enough paths).

    ``relations`` is a list of relations, each a list of ``(coeff, arrow
    names)``. The basis consists of residues of paths, ordered by length
    and then by arrow order.
    """
    rels = [part for rel in relations for part in _normalize_relation(q, field, rel)]
    F = field
    for L in range(1, config.path_length_cap + 1):
        paths = _paths_up_to(q, L)
        index = {p: i for i, p in enumerate(paths)}
        rows = []
        for rel in rels:
            minlen = min(len(p[1]) for p in rel)
            rs, rt = next(iter(rel))[0], _path_end(q, next(iter(rel)))
            for left in paths:
                if _path_end(q, left) != rs or len(left[1]) + minlen > L:
                    continue
                for right in paths:
                    if right[0] != rt or len(left[1]) + minlen + len(right[1]) > L:
                        continue
                    v = F.zeros(len(paths))
                    for p, c in rel.items():
                        full = (left[0], left[1] + p[1] + right[1])
                        if len(full[1]) <= L:
                            v[index[full]] = _add_scalars(F, v[index[full]], c)
                    if np.any(v != 0):
                        rows.append(v)
        # columns in descending order so leading terms are the largest paths
        order = list(range(len(paths) - 1, -1, -1))
        ideal = np.stack(rows).astype(F.dtype) if rows else F.zeros((0, len(paths)))
        red, piv_desc = la.rref(ideal[:, order], F) if rows else (F.zeros((0, len(paths))), [])
        pivots = {order[c] for c in piv_desc}
        top = [i for i, p in enumerate(paths) if len(p[1]) == L]
        if all(i in pivots for i in top):
            break
    else:
        raise InfiniteDimensionalError(f"path algebra does not stabilize below length {config.path_length_cap}")
    red_full = F.zeros((red.shape[0], len(paths)))
    red_full[:, order] = red
    piv_rows = {order[c]: r for r, c in enumerate(piv_desc)}
    basis_idx = [i for i in range(len(paths)) if i not in pivots]
    pos = {i: k for k, i in enumerate(basis_idx)}
    n = len(basis_idx)

    def normal_form(v: np.ndarray) -> np.ndarray:
        v = v.copy()
        for i, r in piv_rows.items():
            if v[i] != 0:
                v = F.reduce(v - v[i] * red_full[r])
        return v[basis_idx].astype(F.dtype)

    mult = F.zeros((n, n, n))
    for a, ia in enumerate(basis_idx):
        for b, ib in enumerate(basis_idx):
            c = _concat(q, paths[ia], paths[ib])
            if c is None or len(c[1]) > L or c not in index:
                continue
            mult[a, b] = normal_form(F.unit_vector(len(paths), index[c]))
    idem = [F.unit_vector(n, pos[index[(v, ())]]) for v in range(len(q.vertices))]
    unit = F.zeros(n)
    for e in idem:
        unit = F.add(unit, e)
    alg = FiniteDimAlgebra(
        F,
        [_path_label(q, paths[i]) for i in basis_idx],
        mult,
        unit,
        idem,
        list(q.vertices),
        quiver=q,
        paths=[paths[i] for i in basis_idx],
        name=name,
    )
    return alg


def algebra_from_constants(field: Field, labels, mult, unit, idempotents=None, idempotent_labels=None, name="") -> FiniteDimAlgebra:
    mult = np.asarray(mult).astype(field.dtype)
    unit = np.asarray(unit).astype(field.dtype)
    if idempotents is None:
        idempotents = [unit.copy()] if len(labels) else []
    alg = FiniteDimAlgebra(field, list(labels), mult, unit, list(idempotents), idempotent_labels, name=name)
    return alg


# ---------------------------------------------------------------------------
# modules and maps


@dataclass(eq=False)
class FdModule:
    algebra: FiniteDimAlgebra
    action: np.ndarray  # (algebra.dim, dim, dim)
    name: str = ""
    origin: object = dc_field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return self.action.shape[1]

    @property
    def field(self) -> Field:
        return self.algebra.field

    def __repr__(self) -> str:
        tag = f" {self.name}" if self.name else ""
        return f"<FdModule{tag} dim={self.dim} dimvec={self.dim_vector()}>"

    def act(self, x: np.ndarray) -> np.ndarray:
        if self.algebra.dim == 0:
            return self.field.zeros((self.dim, self.dim))
        return self.field.lincomb(x, self.action)

    def dim_vector(self) -> tuple:
        F = self.field
        return tuple(la.rank(self.act(e), F) if self.dim else 0 for e in self.algebra.idempotents)

    def check(self) -> None:
        A, F, d = self.algebra, self.field, self.dim
        if self.action.shape != (A.dim, d, d):
            raise ValueError("action has the wrong shape")
        if A.dim == 0:
            if d:
                raise ValueError("the zero ring has only the zero module")
            return
        if not np.array_equal(self.act(A.unit), F.eye(d)):
            raise ValueError("unit does not act as the identity")
        if d == 0:
            return
        n = A.dim
        lhs = F.reduce(np.einsum("jab,ibc->ijac", self.action, self.action))
        rhs = F.reduce(np.tensordot(A.mult, self.action, axes=(2, 0)))
        if not np.array_equal(lhs, rhs.reshape(n, n, d, d)):
            raise ValueError("action does not respect the structure constants")

    def is_zero(self) -> bool:
        return self.dim == 0


def zero_module(A: FiniteDimAlgebra, name: str = "0") -> FdModule:
    return FdModule(A, A.field.zeros((A.dim, 0, 0)), name)


def regular_module(A: FiniteDimAlgebra, name: str = "") -> FdModule:
    return FdModule(A, A.regular_action.copy(), name or (A.name or "A"))


def submodule_on(M: FdModule, basis: np.ndarray, name: str = "") -> FdModule:
    """The module structure on an invariant subspace (columns of ``basis``)."""
    F = M.field
    L = la.left_inverse(basis, F)
    k = basis.shape[1]
    if M.algebra.dim == 0:
        return FdModule(M.algebra, F.zeros((0, k, k)), name)
    act = F.reduce(np.einsum("ab,kbc,cd->kad", L, M.action, basis))
    sub = FdModule(M.algebra, act, name)
    if not np.array_equal(F.reduce(np.einsum("ab,kbc->kac", basis, act)), F.reduce(np.einsum("kab,bc->kac", M.action, basis))):
        raise ValueError("subspace is not invariant")
    return sub


def quotient_module(M: FdModule, sub: np.ndarray, name: str = "") -> tuple:
    """(M/span(sub), projection matrix, lift matrix)."""
    F = M.field
    proj, lift = la.quotient_basis(sub, M.dim, F)
    k = proj.shape[0]
    if M.algebra.dim == 0:
        return FdModule(M.algebra, F.zeros((0, k, k)), name), proj, lift
    act = F.reduce(np.einsum("ab,kbc,cd->kad", proj, M.action, lift))
    return FdModule(M.algebra, act, name), proj, lift


def projective_module(A: FiniteDimAlgebra, v, name: str = "") -> FdModule:
    """P(v) = e_v A with the right regular action."""
    F = A.field
    e = A.vertex_idempotent(v)
    basis = la.span_basis(A.left_mult_matrix(e), F)
    P = submodule_on(regular_module(A), basis, name or f"P({v})")
    return P


def direct_sum(mods: Sequence[FdModule], name: str = "") -> FdModule:
    if not mods:
        raise ValueError("direct_sum of nothing; use zero_module")
    A = mods[0].algebra
    F = A.field
    d = sum(M.dim for M in mods)
    act = F.zeros((A.dim, d, d))
    off = 0
    for M in mods:
        if M.algebra is not A:
            raise PreconditionError("modules over different algebras")
        act[:, off:off + M.dim, off:off + M.dim] = M.action
        off += M.dim
    return FdModule(A, act, name or "+".join(M.name or "?" for M in mods))


def simple_module(A: FiniteDimAlgebra, v, name: str = "") -> FdModule:
    """The simple top of P(v) for a path algebra (1-dim, vertex v)."""
    if A.quiver is None:
        raise PreconditionError("simple_module needs a path algebra")
    dims = {u: (1 if u == str(v) else 0) for u in A.quiver.vertices}
    return module_from_representation(A, dims, {}, name or f"S({v})")


def module_from_representation(A: FiniteDimAlgebra, dims: dict, arrows: dict, name: str = "") -> FdModule:
    """Right module from a quiver representation.

    ``arrows[a]`` is the (d_target x d_source) matrix of arrow ``a``; missing
    arrows act by zero. Raises ``ValueError`` if the relations fail.
    """
    q = A.quiver
    if q is None:
        raise PreconditionError("representation data needs a path algebra")
    F = A.field
    dv = [int(dims.get(v, 0)) for v in q.vertices]
    off = np.concatenate([[0], np.cumsum(dv)]).astype(int)
    d = int(off[-1])
    mats = {}
    for k, (a, s, t) in enumerate(q.arrows):
        si, ti = q.vertex_index(s), q.vertex_index(t)
        m = arrows.get(a)
        m = F.zeros((dv[ti], dv[si])) if m is None else F.array(m).reshape(dv[ti], dv[si]) if dv[ti] * dv[si] else F.zeros((dv[ti], dv[si]))
        full = F.zeros((d, d))
        full[off[ti]:off[ti + 1], off[si]:off[si + 1]] = m
        mats[k] = full
    act = F.zeros((A.dim, d, d))
    for b, (start, path) in enumerate(A.paths):
        if not path:
            proj = F.zeros((d, d))
            for i in range(off[start], off[start + 1]):
                proj[i, i] = 1
            act[b] = proj
        else:
            m = mats[path[0]]
            for k in path[1:]:
                m = F.matmul(mats[k], m)
            act[b] = m
    M = FdModule(A, act, name)
    M.check()
    return M


def restrict_scalars(M: FdModule, B: FiniteDimAlgebra, phi: np.ndarray, name: str = "") -> FdModule:
    """B-module from an A-module along an algebra map B -> A (matrix A.dim x B.dim)."""
    F = M.field
    if B.dim == 0:
        return FdModule(B, F.zeros((0, M.dim, M.dim)), name)
    act = F.reduce(np.tensordot(phi.T, M.action, axes=(1, 0))) if M.algebra.dim else F.zeros((B.dim, M.dim, M.dim))
    return FdModule(B, act, name or M.name)


@dataclass(eq=False)
class ModuleMap:
    source: FdModule
    target: FdModule
    matrix: np.ndarray

    def __post_init__(self):
        if self.matrix.shape != (self.target.dim, self.source.dim):
            raise ValueError(f"map matrix shape {self.matrix.shape} != {(self.target.dim, self.source.dim)}")

    @property
    def field(self) -> Field:
        return self.source.field

    def check(self) -> None:
        F = self.field
        A = self.source.algebra
        if self.target.algebra is not A:
            raise PreconditionError("map between modules over different algebras")
        for g in A.generators:
            if not np.array_equal(F.matmul(self.matrix, self.source.act(g)), F.matmul(self.target.act(g), self.matrix)):
                raise ValueError("matrix is not a module homomorphism")

    def compose(self, other: "ModuleMap") -> "ModuleMap":
        """self o other."""
        return ModuleMap(other.source, self.target, self.field.matmul(self.matrix, other.matrix))

    def rank(self) -> int:
        return la.rank(self.matrix, self.field) if self.matrix.size else 0

    def is_injective(self) -> bool:
        return self.rank() == self.source.dim

    def is_surjective(self) -> bool:
        return self.rank() == self.target.dim

    def is_iso(self) -> bool:
        return self.source.dim == self.target.dim and self.is_injective()


def identity_map(M: FdModule) -> ModuleMap:
    return ModuleMap(M, M, M.field.eye(M.dim))


def zero_map(M: FdModule, N: FdModule) -> ModuleMap:
    return ModuleMap(M, N, M.field.zeros((N.dim, M.dim)))


class HomSpace(Sequence):
    """Basis of Hom_A(M, N), usable as a list of ModuleMaps."""

    def __init__(self, M: FdModule, N: FdModule):
        if M.algebra is not N.algebra:
            raise PreconditionError("hom_space: modules over different algebras")
        self.source, self.target = M, N
        F = M.field
        self.field = F
        dm, dn = M.dim, N.dim
        A = M.algebra
        if dm * dn == 0:
            self.basis = F.zeros((0, dn, dm))
        else:
            blocks = []
            eye_m, eye_n = F.eye(dm), F.eye(dn)
            for g in A.generators:
                rm, rn = M.act(g), N.act(g)
                # vec_r(F rm - rn F) = (I_n (x) rm^T - rn (x) I_m) vec_r(F)
                blocks.append(F.sub(np.kron(eye_n, rm.T), np.kron(rn, eye_m)))
            cons = np.concatenate(blocks, axis=0) if blocks else F.zeros((0, dn * dm))
            ker = la.kernel_basis(cons, F)
            self.basis = np.ascontiguousarray(ker.T.reshape(-1, dn, dm))
        self._flat = None
        self._linv = None

    def __len__(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return len(self)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self[k] for k in range(*i.indices(len(self)))]
        return ModuleMap(self.source, self.target, self.basis[i])

    @property
    def flat(self) -> np.ndarray:
        if self._flat is None:
            n = self.source.dim * self.target.dim
            self._flat = np.ascontiguousarray(self.basis.reshape(len(self), n).T)
        return self._flat

    def coords(self, m: np.ndarray) -> np.ndarray:
        """Coordinates of a module map matrix in this basis."""
        if self._linv is None:
            self._linv = la.left_inverse(self.flat, self.field)
        v = np.asarray(m).reshape(-1)
        c = self.field.matmul(self._linv, v)
        if not np.array_equal(self.field.matmul(self.flat, c), self.field.reduce(v)):
            raise ValueError("matrix is not in this Hom space")
        return c

    def combine(self, c: np.ndarray) -> np.ndarray:
        if len(self) == 0:
            return self.field.zeros((self.target.dim, self.source.dim))
        return self.field.lincomb(c, self.basis)


@lru_cache(maxsize=50000)
def hom_space(M: FdModule, N: FdModule) -> HomSpace:
    """Basis of the intertwiner space Hom_A(M, N) (deterministic order)."""
    return HomSpace(M, N)


@dataclass
class MapCalculus:
    kernel: FdModule
    kernel_inclusion: ModuleMap
    image: FdModule
    image_inclusion: ModuleMap
    cokernel: FdModule
    cokernel_projection: ModuleMap
    cokernel_lift: np.ndarray


def map_calculus(f: ModuleMap) -> MapCalculus:
    F = f.field
    M, N = f.source, f.target
    kb = la.kernel_basis(f.matrix, F) if M.dim else F.zeros((0, 0))
    K = submodule_on(M, kb, "ker") if kb.shape[1] else zero_module(M.algebra, "ker")
    ib = la.span_basis(f.matrix, F) if M.dim and N.dim else F.zeros((N.dim, 0))
    I = submodule_on(N, ib, "im") if ib.shape[1] else zero_module(M.algebra, "im")
    C, proj, lift = quotient_module(N, ib, "coker")
    return MapCalculus(
        K, ModuleMap(K, M, kb.reshape(M.dim, K.dim)),
        I, ModuleMap(I, N, ib.reshape(N.dim, I.dim)),
        C, ModuleMap(N, C, proj.reshape(C.dim, N.dim)), lift,
    )


def _quick_invariants(M: FdModule) -> tuple:
    F = M.field
    if M.dim == 0:
        return (0,)
    return tuple(la.rank(M.action[k], F) for k in range(M.algebra.dim))


def _coefficient_vectors(p: int, k: int, start: int, stop: int) -> np.ndarray:
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.zeros((len(idx), k), dtype=np.int64)
    for j in range(k - 1, -1, -1):
        out[:, j] = idx % p
        idx //= p
    return out


def is_isomorphic(M: FdModule, N: FdModule, config: Config = DEFAULT_CONFIG) -> Optional[ModuleMap]:
    """An isomorphism M -> N, or None.

    Over F_p the Hom space is searched exhaustively when it has at most
    ``config.hom_cap`` elements; otherwise random samples are tried first
    and the exhaustive search is the fallback. Over Q the determinant
    polynomial is evaluated at integer points; a vanishing result on the
    full grid {0..n}^k proves non-isomorphism. Raises ``UndecidedError``
    instead of guessing.
    """
    if M.algebra is not N.algebra:
        raise PreconditionError("is_isomorphic: modules over different algebras")
    F = M.field
    n = M.dim
    if n != N.dim:
        return None
    if n == 0:
        return ModuleMap(M, N, F.zeros((0, 0)))
    if _quick_invariants(M) != _quick_invariants(N):
        return None
    H = hom_space(M, N)
    k = len(H)
    if k == 0 or k != len(hom_space(M, M)) or k != len(hom_space(N, N)):
        return None
    if F.is_finite:
        return _iso_search_fp(H, config)
    return _iso_search_q(H, config)


def _iso_search_fp(H: HomSpace, config: Config) -> Optional[ModuleMap]:
    F = H.field
    p, k = F.p, len(H)
    total = p ** k
    chunk = 4096

    def try_coeffs(coeffs: np.ndarray):
        mats = F.reduce(np.tensordot(coeffs.astype(F.dtype), H.basis, axes=(1, 0)))
        ok = la.batch_invertible(mats, F)
        hit = np.flatnonzero(ok)
        if hit.size:
            return ModuleMap(H.source, H.target, mats[hit[0]])
        return None

    if total > config.hom_cap:
        rng = np.random.default_rng(config.seed)
        for _ in range(4):
            found = try_coeffs(rng.integers(0, p, size=(chunk, k)))
            if found is not None:
                return found
        if not config.iso_fallback:
            raise UndecidedError(f"Hom space has {p}^{k} elements; exhaustive fallback disabled")
    for start in range(0, total, chunk):
        found = try_coeffs(_coefficient_vectors(p, k, start, min(total, start + chunk)))
        if found is not None:
            return found
    return None


def _iso_search_q(H: HomSpace, config: Config) -> Optional[ModuleMap]:
    F = H.field
    k, n = len(H), H.source.dim

    def try_point(c):
        m = H.combine(np.array(c, dtype=object))
        if la.rank(m, F) == n:
            return ModuleMap(H.source, H.target, m)
        return None

    for i in range(k):
        found = try_point([1 if j == i else 0 for j in range(k)])
        if found is not None:
            return found
    rng = np.random.default_rng(config.seed)
    for _ in range(16):
        found = try_point([int(x) for x in rng.integers(-3 * n - 3, 3 * n + 4, size=k)])
        if found is not None:
            return found
    # det is a polynomial of degree <= n in each coefficient: the grid
    # {0..n}^k certifies vanishing.
    if (n + 1) ** k > config.hom_cap:
        raise UndecidedError(f"grid of size {(n + 1) ** k} exceeds the cap")
    for c in itertools.product(range(n + 1), repeat=k):
        found = try_point(list(c))
        if found is not None:
            return found
    return None


def trace_of(T: FdModule, M: FdModule) -> tuple:
    """(trace submodule, inclusion): sum of images of all maps T -> M."""
    F = M.field
    H = hom_space(T, M)
    if len(H) == 0 or M.dim == 0:
        Z = zero_module(M.algebra, "tr")
        return Z, ModuleMap(Z, M, F.zeros((M.dim, 0)))
    cols = np.concatenate(list(H.basis), axis=1)
    basis = la.span_basis(cols, F)
    if basis.shape[1] == 0:
        Z = zero_module(M.algebra, "tr")
        return Z, ModuleMap(Z, M, F.zeros((M.dim, 0)))
    S = submodule_on(M, basis, "tr")
    return S, ModuleMap(S, M, basis)


# ---------------------------------------------------------------------------
# enumeration


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def enumerate_modules(A: FiniteDimAlgebra, max_dim: int, config: Config = DEFAULT_CONFIG, reverse: bool = False) -> list:
    """All modules of dimension <= max_dim, one per isomorphism class.

    Brute force over the matrices of the Peirce generators in a basis
    adapted to the idempotent decomposition; ``reverse`` flips the
    iteration order of the candidate matrices.
    """
    F = A.field
    if not F.is_finite:
        raise PreconditionError("module enumeration needs a finite field")
    if max_dim > config.max_dim:
        raise CapExceededError(f"max_dim {max_dim} exceeds cap {config.max_dim}")
    if A.dim == 0:
        return [zero_module(A)]
    m = len(A.idempotents)
    gens = A.peirce_generators
    words, coeff = A.words
    out: list = []
    for total in range(max_dim + 1):
        for dv in _compositions(total, m):
            found: list = []
            off = np.concatenate([[0], np.cumsum(dv)]).astype(int)
            d = total
            idem_mats = []
            for i in range(m):
                e = F.zeros((d, d))
                for r in range(off[i], off[i + 1]):
                    e[r, r] = 1
                idem_mats.append(e)
            shapes = [(dv[j], dv[i]) for i, j, _ in gens]
            nfree = sum(a * b for a, b in shapes)
            count = F.p ** nfree
            if count > config.candidate_cap:
                raise CapExceededError(f"{count} candidate modules for dimension vector {dv}")
            values = range(count - 1, -1, -1) if reverse else range(count)
            for idx in values:
                digits = []
                x = idx
                for _ in range(nfree):
                    digits.append(x % F.p)
                    x //= F.p
                digits.reverse()
                gm = []
                pos = 0
                for (i, j, _), (r, c) in zip(gens, shapes):
                    block = F.zeros((d, d))
                    if r * c:
                        block[off[j]:off[j + 1], off[i]:off[i + 1]] = np.array(digits[pos:pos + r * c]).reshape(r, c)
                    pos += r * c
                    gm.append(block)
                mats = idem_mats + gm
                wm = []
                for w in words:
                    acc = F.eye(d)
                    for g in w:
                        acc = F.matmul(mats[g], acc)
                    wm.append(acc)
                action = F.reduce(np.tensordot(coeff.T, np.stack(wm), axes=(1, 0))) if d else F.zeros((A.dim, 0, 0))
                M = FdModule(A, action.astype(F.dtype))
                try:
                    M.check()
                except ValueError:
                    continue
                key = _quick_invariants(M)
                if any(key == k2 and is_isomorphic(M, N, config) is not None for k2, N in found):
                    continue
                found.append((key, M))
            out.extend(M for _, M in found)
    for i, M in enumerate(out):
        M.name = f"M{i}{list(M.dim_vector())}"
    return out


def enumerate_submodules(M: FdModule, config: Config = DEFAULT_CONFIG) -> list:
    """All submodules of M as (module, inclusion), by exhaustion over subspaces."""
    F = M.field
    if not F.is_finite:
        raise PreconditionError("submodule enumeration needs a finite field")
    n = M.dim
    if n > config.subspace_dim:
        raise CapExceededError(f"dim {n} exceeds subspace cap {config.subspace_dim}")
    gens = [M.act(g) for g in M.algebra.generators] if n else []
    out = []
    p = F.p
    for k in range(n + 1):
        for piv in itertools.combinations(range(n), k):
            free = [(r, c) for r in range(k) for c in range(piv[r] + 1, n) if c not in piv]
            for vals in itertools.product(range(p), repeat=len(free)):
                R = F.zeros((k, n))
                for r, c in enumerate(piv):
                    R[r, c] = 1
                for (r, c), v in zip(free, vals):
                    R[r, c] = v
                S = R.T.copy()
                ok = True
                for g in gens:
                    w = F.matmul(g, S)
                    if not np.array_equal(F.matmul(S, w[list(piv), :]), w):
                        ok = False
                        break
                if not ok:
                    continue
                if k == 0:
                    sub = zero_module(M.algebra, "0")
                else:
                    sub = submodule_on(M, S)
                out.append((sub, ModuleMap(sub, M, S.reshape(n, k))))
    return out


def split_idempotents(A: FiniteDimAlgebra, config: Config = DEFAULT_CONFIG) -> list:
    """Primitive orthogonal idempotents summing to 1, by brute force over F_p.

    Each idempotent is split while its corner ring e A e contains an
    idempotent other than 0 and e; corners larger than ``config.hom_cap``
    elements are left unsplit.
    """
    F = A.field
    if A.dim == 0:
        return []
    if not F.is_finite:
        return [A.unit.copy()]
    todo = [A.unit.copy()]
    done = []
    while todo:
        e = todo.pop(0)
        corner = la.span_basis(F.matmul(A.left_mult_matrix(e), A.right_mult_matrix(e)), F)
        k = corner.shape[1]
        found = None
        if F.p ** k <= config.hom_cap:
            for c in _coefficient_vectors(F.p, k, 1, F.p ** k):
                f = F.matmul(corner, c.astype(F.dtype))
                if np.array_equal(f, e) or not np.array_equal(A.multiply(f, f), f):
                    continue
                found = f
                break
        if found is None:
            done.append(e)
        else:
            todo[:0] = [found, F.sub(e, found)]
    return done
