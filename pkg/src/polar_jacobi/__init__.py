"""Polar Jacobi polynomials: construction, identities, moments and zero geometry."""
from .errors import (
    BranchAmbiguity,
    CapacityExceeded,
    DegenerateParams,
    DegreeTooLarge,
    DegreeZero,
    GammaPole,
    NearDegenerateWarning,
    NoConvergence,
    PolarJacobiError,
    PreconditionFailed,
    RegimeError,
)
from .jacobi import (
    JacobiParams,
    Regime,
    gamma,
    jacobi_eval,
    jacobi_poly,
    phi,
    recurrence_coeffs,
    squared_norm,
    structure_coeffs,
)
from .moments import MomentTable, build_moments, inner_product, verify_theorem1
from .polar import (
    PolarSpec,
    factorization_check,
    operator_identity_residual,
    polar_poly,
    polar_poly_divdiff,
    polar_poly_recurrence,
    polar_recurrence_coeffs,
    reflect_check,
    sobolev_Q,
    structure_expansion_residual,
)
from .zeros import ZeroSet, find_roots

__version__ = "0.1.0"
