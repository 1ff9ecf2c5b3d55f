"""Exact linear algebra over prime fields and the rationals.

Matrices are plain numpy arrays. Over F_p with small p they use ``int64``
storage reduced mod p; over Q (and for very large p) they use ``object``
arrays holding ``Fraction``/``int`` entries. No floating point is used.

Pivoting always takes the first nonzero entry in column order, so every
basis returned here is reproducible bit for bit.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

__all__ = [
    "Field",
    "GF",
    "QQ",
    "rref",
    "rank",
    "kernel_basis",
    "solve",
    "inverse",
    "span_basis",
    "left_inverse",
    "quotient_basis",
    "batch_invertible",
]

_SMALL_PRIME = 1 << 16


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class Field:
    """A prime field F_p (``p`` set) or the rationals (``p is None``)."""

    p: Optional[int] = None

    def __post_init__(self):
        if self.p is not None and not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    # -- description -------------------------------------------------
    @property
    def is_finite(self) -> bool:
        return self.p is not None

    @property
    def dtype(self):
        if self.p is not None and self.p < _SMALL_PRIME:
            return np.int64
        return object

    def __repr__(self) -> str:
        return "QQ" if self.p is None else f"GF({self.p})"

    def to_json(self) -> dict:
        return {"type": "Q"} if self.p is None else {"type": "Fp", "p": self.p}

    # -- scalars -----------------------------------------------------
    def scalar(self, x):
        """Parse an int, Fraction or decimal/fraction string into the field."""
        if isinstance(x, str):
            x = Fraction(x.strip())
        if self.p is None:
            return Fraction(x)
        q = Fraction(x)
        if q.denominator % self.p == 0:
            raise ZeroDivisionError(f"{x} has no image in GF({self.p})")
        return (q.numerator * pow(q.denominator, -1, self.p)) % self.p

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.p is None:
            return Fraction(1) / Fraction(x)
        return pow(int(x), -1, self.p)

    def elements(self) -> list:
        if self.p is None:
            raise ValueError("QQ is infinite")
        return list(range(self.p))

    def format(self, x) -> str:
        return str(x)

    # -- arrays ------------------------------------------------------
    def reduce(self, a: np.ndarray) -> np.ndarray:
        if self.p is None:
            return a
        if a.dtype == object:
            return np.vectorize(lambda v: int(v) % self.p, otypes=[object])(a) if a.size else a
        return np.mod(a, self.p)

    def array(self, data) -> np.ndarray:
        """Build a field matrix/vector from nested lists (ints, strings, Fractions)."""
        if isinstance(data, np.ndarray) and data.dtype != object and self.dtype != object:
            return np.mod(data.astype(np.int64), self.p)
        raw = np.array(data, dtype=object)
        if raw.size == 0:
            return np.zeros(raw.shape, dtype=self.dtype)
        out = np.vectorize(self.scalar, otypes=[object])(raw)
        if self.dtype is np.int64:
            out = out.astype(np.int64)
        return out

    def zeros(self, shape) -> np.ndarray:
        return np.zeros(shape, dtype=self.dtype)

    def eye(self, n: int) -> np.ndarray:
        return np.eye(n, dtype=np.int64).astype(self.dtype)

    def unit_vector(self, n: int, i: int) -> np.ndarray:
        v = self.zeros(n)
        v[i] = 1
        return v

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.reduce(a @ b)

    def kron(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.reduce(np.kron(a, b))

    def add(self, a, b):
        return self.reduce(a + b)

    def sub(self, a, b):
        return self.reduce(a - b)

    def scale(self, c, a):
        return self.reduce(a * c)

    def neg(self, a):
        return self.reduce(-a)

    def lincomb(self, coeffs, mats) -> np.ndarray:
        """sum_i coeffs[i] * mats[i] for an array stack ``mats`` (k, ...)."""
        coeffs = np.asarray(coeffs)
        if len(mats) == 0:
            raise ValueError("empty combination")
        out = np.tensordot(coeffs, mats, axes=(0, 0))
        return self.reduce(np.asarray(out))


def GF(p: int) -> Field:
    return Field(p)


QQ = Field(None)


def _infer(field: Field, m: np.ndarray) -> np.ndarray:
    return np.array(m, dtype=field.dtype, copy=True)


def rref(m: np.ndarray, field: Field) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form. Returns (nonzero rows, pivot columns)."""
    a = _infer(field, m)
    if a.ndim != 2:
        raise ValueError("rref expects a matrix")
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        a[r] = field.reduce(a[r] * field.inv(a[r, c]))
        col = a[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            a[hit] = field.reduce(a[hit] - np.outer(col[hit], a[r]))
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rank(m: np.ndarray, field: Field) -> int:
    if m.size == 0:
        return 0
    return len(rref(m, field)[1])


def kernel_basis(m: np.ndarray, field: Field) -> np.ndarray:
    """Right null space of ``m`` as the columns of a (cols x k) matrix.

    One vector per free column f, with a 1 at f and zeros at the other free
    columns, so the transposed basis is in reduced echelon form with respect
    to the reversed pivot rule.
    """
    rows, cols = m.shape
    if rows == 0:
        return field.eye(cols)
    r, piv = rref(m, field)
    free = [c for c in range(cols) if c not in set(piv)]
    out = field.zeros((cols, len(free)))
    for k, f in enumerate(free):
        out[f, k] = 1
        if piv:
            out[piv, k] = field.neg(r[:, f])
    return out


def solve(m: np.ndarray, b: np.ndarray, field: Field) -> Optional[np.ndarray]:
    """Some x with m @ x == b (free variables zero), or None if inconsistent.

    ``b`` may be a vector or a matrix of right-hand sides (then all must be
    consistent).
    """
    m = np.asarray(m)
    b = np.asarray(b)
    vec = b.ndim == 1
    bb = b.reshape(-1, 1) if vec else b
    if m.shape[0] != bb.shape[0]:
        raise ValueError(f"dimension mismatch: {m.shape} vs {b.shape}")
    rows, cols = m.shape
    aug = np.concatenate([_infer(field, m), _infer(field, bb)], axis=1)
    r, piv = rref(aug, field)
    if any(c >= cols for c in piv):
        return None
    x = field.zeros((cols, bb.shape[1]))
    if piv:
        x[piv] = r[:, cols:]
    return x[:, 0] if vec else x


def inverse(m: np.ndarray, field: Field) -> np.ndarray:
    n = m.shape[0]
    if m.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    x = solve(m, field.eye(n), field)
    if x is None or rank(m, field) != n:
        raise ZeroDivisionError("matrix is singular")
    return x


def span_basis(vectors: np.ndarray, field: Field) -> np.ndarray:
    """Canonical basis (columns) of the column span of ``vectors``.

    The basis is the transposed RREF of ``vectors.T``: it depends only on the
    subspace, not on the spanning set.
    """
    n = vectors.shape[0]
    if vectors.shape[1] == 0:
        return field.zeros((n, 0))
    r, _ = rref(vectors.T, field)
    return np.ascontiguousarray(r.T)


def left_inverse(s: np.ndarray, field: Field) -> np.ndarray:
    """L with L @ s == I for a full-column-rank ``s`` (n x k)."""
    n, k = s.shape
    if k == 0:
        return field.zeros((0, n))
    _, rows = rref(s.T, field)
    if len(rows) != k:
        raise ValueError("left_inverse needs full column rank")
    out = field.zeros((k, n))
    out[:, rows] = inverse(s[rows, :], field)
    return out


def quotient_basis(sub: np.ndarray, ambient_dim: int, field: Field) -> tuple[np.ndarray, np.ndarray]:
    """Projection V -> V/span(sub) and a lift V/span(sub) -> V.

    ``sub`` holds vectors as columns. The quotient basis is given by the
    standard unit vectors at the non-pivot positions of the canonical
    basis of span(sub); ``proj @ lift`` is the identity.
    """
    if sub.size == 0:
        sub = field.zeros((ambient_dim, 0))
    if sub.shape[0] != ambient_dim:
        raise ValueError("sub vectors do not live in the ambient space")
    s = span_basis(sub, field)
    pivots = set()
    for j in range(s.shape[1]):
        pivots.add(int(np.flatnonzero(s[:, j])[0]))
    comp = [i for i in range(ambient_dim) if i not in pivots]
    lift = field.zeros((ambient_dim, len(comp)))
    for k, i in enumerate(comp):
        lift[i, k] = 1
    full = np.concatenate([s, lift], axis=1)
    inv = inverse(full, field) if ambient_dim else field.zeros((0, 0))
    proj = np.ascontiguousarray(inv[s.shape[1]:, :])
    return proj, lift


def batch_invertible(mats: np.ndarray, field: Field) -> np.ndarray:
    """Boolean mask of invertible matrices in a stack (N, n, n) over F_p."""
    if field.p is None or field.dtype is object:
        return np.array([rank(m, field) == m.shape[0] for m in mats], dtype=bool)
    p = field.p
    a = np.mod(mats.astype(np.int64), p)
    count, n, _ = a.shape
    ok = np.ones(count, dtype=bool)
    idx = np.arange(count)
    inv_table = np.zeros(p, dtype=np.int64)
    for v in range(1, p):
        inv_table[v] = pow(v, -1, p)
    for c in range(n):
        sub = a[:, c:, c]
        has = sub != 0
        found = has.any(axis=1)
        ok &= found
        r = c + np.argmax(has, axis=1)
        rows_c = a[idx, c].copy()
        a[idx, c] = a[idx, r]
        a[idx, r] = rows_c
        piv = a[idx, c, c]
        a[:, c] = np.mod(a[:, c] * inv_table[piv][:, None], p)
        factors = a[:, :, c].copy()
        factors[:, c] = 0
        a = np.mod(a - factors[:, :, None] * a[:, c][:, None, :], p)
    return ok


def as_columns(vectors: Iterable[np.ndarray], n: int, field: Field) -> np.ndarray:
    vs = list(vectors)
    if not vs:
        return field.zeros((n, 0))
    return np.stack([np.asarray(v).reshape(-1) for v in vs], axis=1).astype(field.dtype)


def is_zero(a: np.ndarray) -> bool:
    return not np.any(a != 0)


def in_span(basis: np.ndarray, v: np.ndarray, field: Field) -> bool:
    if basis.shape[1] == 0:
        return is_zero(v)
    return solve(basis, v, field) is not None


def dense(seq: Sequence[np.ndarray], shape, field: Field) -> np.ndarray:
    if len(seq) == 0:
        return field.zeros((0,) + tuple(shape))
    return np.stack(seq).astype(field.dtype)
