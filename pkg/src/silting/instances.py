"""Small worked instances over the path algebra of 1 -a-> 2.

P(1) = e_1 A has basis {e_1, a} and P(2) = e_2 A = {e_2}; the arrow a gives
the map P(2) -> P(1), e_2 -> a.
"""
from __future__ import annotations

from .algebra import FiniteDimAlgebra, Quiver, path_algebra
from .complexes import TwoTermComplex, direct_sum, projective_complex, regular_complex
from .linalg import GF, Field


def a2(field: Field = None) -> FiniteDimAlgebra:
    return path_algebra(Quiver(["1", "2"], [("a", "1", "2")]), [], field or GF(2), name="A2")


def arrow_complex(A: FiniteDimAlgebra) -> TwoTermComplex:
    """P(2) -> P(1) given by the arrow."""
    return projective_complex(A, ["2"], ["1"], [[A.element({"a": 1})]], "P2->P1")


def shifted_p2(A: FiniteDimAlgebra) -> TwoTermComplex:
    """P(2) in degree -1."""
    return projective_complex(A, ["2"], [], [], "P2->0")


def p1_stalk(A: FiniteDimAlgebra) -> TwoTermComplex:
    return projective_complex(A, [], ["1"], [], "0->P1")


def silting_pair(A: FiniteDimAlgebra) -> TwoTermComplex:
    """(P(2) -> P(1)) + (P(2) -> 0): silting, not tilting; T = S(1)."""
    return direct_sum([arrow_complex(A), shifted_p2(A)], "Pbar")


def tilting_pair(A: FiniteDimAlgebra) -> TwoTermComplex:
    """P(1) + (P(2) -> P(1)): a tilting complex, T = P(1) + S(1)."""
    return direct_sum([p1_stalk(A), arrow_complex(A)], "Ptilt")


def regular(A: FiniteDimAlgebra) -> TwoTermComplex:
    return regular_complex(A, 0)


def a2_project(p: int = 2) -> dict:
    """Project file contents for the instances above."""
    a = [{"coeff": "1", "path": ["a"]}]
    return {
        "name": "A2",
        "field": {"type": "Fp", "p": p},
        "quiver": {"vertices": ["1", "2"], "arrows": [{"name": "a", "from": "1", "to": "2"}]},
        "relations": [],
        "modules": {
            "S1": {"dims": {"1": 1}, "arrows": {}},
            "S2": {"dims": {"2": 1}, "arrows": {}},
            "P1": {"dims": {"1": 1, "2": 1}, "arrows": {"a": [["1"]]}},
        },
        "complexes": {
            "Pbar": {"pm1": ["P2", "P2"], "p0": ["P1"], "sigma": [[a, []]]},
            "single": {"pm1": ["P2"], "p0": ["P1"], "sigma": [[a]]},
            "tilting": {"pm1": ["P2"], "p0": ["P1", "P1"], "sigma": [[[]], [a]]},
            "A": {"pm1": [], "p0": ["A"], "sigma": []},
        },
        "config": {"complex": "Pbar", "max_dim": 3, "e_max_dim": 3},
    }
