"""The torsion pair (Gen T, Ker Hom(T, -)) of T = H^0(P) and the defect of sigma."""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Optional

import numpy as np

from . import linalg as la
from .algebra import FdModule, ModuleMap, hom_space, quotient_module, trace_of
from .complexes import SiltingCertificate, TwoTermComplex, cohomology, is_presilting, silting_certificate
from .errors import InvariantViolation


@dataclass
class Defect:
    """Coker(Hom(P^0, M) -> Hom(P^-1, M)), in coordinates of hom_space(P^-1, M)."""

    M: FdModule
    image: np.ndarray  # columns spanning the image of Hom(sigma, M)
    proj: np.ndarray
    lift: np.ndarray

    @property
    def dim(self) -> int:
        return self.proj.shape[0]


def defect(P: TwoTermComplex, M: FdModule) -> Defect:
    F = P.field
    H0, H1 = hom_space(P.m0, M), hom_space(P.m1, M)
    cols = [H1.coords(F.matmul(f, P.dmat)) for f in H0.basis] if len(H1) else []
    img = la.as_columns(cols, len(H1), F)
    proj, lift = la.quotient_basis(img, len(H1), F)
    return Defect(M, img, proj, lift)


@dataclass(eq=False)
class TorsionPair:
    """Torsion pair generated by T = H^0(P).

    When a silting certificate is available, ``in_T`` also checks that
    trace-membership agrees with vanishing defect.
    """

    P: TwoTermComplex
    T: FdModule = None
    projection: ModuleMap = None
    certificate: Optional[SiltingCertificate] = None
    _cache_T: dict = dc_field(default_factory=dict, repr=False)
    _cache_F: dict = dc_field(default_factory=dict, repr=False)

    @classmethod
    def of(cls, P: TwoTermComplex, certify: bool = True) -> "TorsionPair":
        T, pi = cohomology(P, 0)
        T.name = "T"
        cert = None
        if certify and is_presilting(P):
            cert = silting_certificate(P)
        return cls(P, T, pi, cert)

    @property
    def is_silting(self) -> bool:
        return self.certificate is not None

    def in_gen(self, M: FdModule) -> bool:
        if id(M) not in self._cache_T:
            S, _ = trace_of(self.T, M)
            self._cache_T[id(M)] = (M, S.dim == M.dim)
        return self._cache_T[id(M)][1]

    def in_D(self, M: FdModule) -> bool:
        return defect(self.P, M).dim == 0


def in_T(tp: TorsionPair, M: FdModule) -> bool:
    ans = tp.in_gen(M)
    if tp.certificate is not None and ans != tp.in_D(M):
        raise InvariantViolation(f"Gen(T) and the defect disagree on {M!r}")
    return ans


def in_F(tp: TorsionPair, M: FdModule) -> bool:
    if id(M) not in tp._cache_F:
        tp._cache_F[id(M)] = (M, len(hom_space(tp.T, M)) == 0)
    return tp._cache_F[id(M)][1]


def torsion_decompose(tp: TorsionPair, M: FdModule) -> tuple:
    """((tM, inclusion), (M/tM, projection)) with tM the trace of T."""
    S, inc = trace_of(tp.T, M)
    Q, proj, _ = quotient_module(M, inc.matrix, "M/tM")
    S.name = "tM"
    return (S, inc), (Q, ModuleMap(M, Q, proj.reshape(Q.dim, M.dim)))


@dataclass
class EqualityReport:
    ok: bool
    rows: list  # (module name, in Gen T, defect dim)
    counterexamples: list

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "rows": [{"module": n, "in_gen": g, "defect_dim": d} for n, g, d in self.rows],
            "counterexamples": [n for n, _ in self.counterexamples],
        }


def verify_silting_equality(tp: TorsionPair, inventory) -> EqualityReport:
    """Compare M in Gen(T) with Def(M) = 0 on every inventory module."""
    rows, bad = [], []
    for M in inventory:
        g = tp.in_gen(M)
        dd = defect(tp.P, M).dim
        rows.append((M.name, g, dd))
        if g != (dd == 0):
            bad.append((M.name, M))
    return EqualityReport(not bad, rows, bad)
