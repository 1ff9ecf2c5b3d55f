"""Silting complexes and silting modules over finite-dimensional path algebras,
computed with exact linear algebra over F_p and Q."""
from .algebra import (
    Config,
    DEFAULT_CONFIG,
    FdModule,
    FiniteDimAlgebra,
    ModuleMap,
    Quiver,
    direct_sum,
    enumerate_modules,
    hom_space,
    is_isomorphic,
    module_from_representation,
    path_algebra,
    projective_module,
    simple_module,
)
from .complexes import (
    GeneralTwoTerm,
    TwoTermComplex,
    hom_K,
    is_presilting,
    is_silting,
    projective_complex,
    silting_certificate,
    stalk,
)
from .dg import K_T, build_B, tensor_dg, tensor_dg_literal
from .errors import (
    CapExceededError,
    InfiniteDimensionalError,
    InvariantViolation,
    PreconditionError,
    ProjectError,
    SiltingError,
    UndecidedError,
)
from .functors import H_P, K_T_linear, T_P, beta_star, endo_algebra, epsilon, tor1, zeta
from .heart import hom_heart, in_heart, roundtrip_heart, run_suite
from .io import load, loads, save
from .linalg import GF, QQ, Field
from .torsion import TorsionPair, defect, in_F, in_T, verify_silting_equality

__version__ = "0.1.0"
