"""Numerical verification of dynamical, Hecke-type R-matrices and their twisted Yang-Baxter identities."""

__version__ = "0.1.0"

from .coefficients import (  # noqa: E402
    BZero,
    CoefficientScheme,
    GradingSignature,
    a_of_p,
    b_of_p,
    beta_family,
    check_constraints,
    check_recursions,
    deformation,
    nonresonant_momenta,
    q_bracket,
    validate_b0,
)
from .errors import (  # noqa: E402
    ConfigError,
    DegenerateDeformationError,
    DimensionError,
    PoleError,
    SamplingError,
    TwistedYBEError,
)
from .momentum import Momentum, random_generic, resonance_check, shift  # noqa: E402
from .reports import CheckReport  # noqa: E402
from .rmatrix import (  # noqa: E402
    RMatrixSpec,
    build_baxterized,
    build_classical_r0,
    build_constant_r,
    build_dynamical_r,
    build_dynamical_sl,
    build_super_sl,
    build_yangian_r,
    gl_scheme,
    spectral_parameter,
)
from .tensor_core import Operator, embed, identity, kron, permutation, residual  # noqa: E402
from .verify import (  # noqa: E402
    check_additive_dybe,
    check_constant_ybe,
    check_dynamical_ybe,
    check_hecke,
    check_hermiticity,
    check_reflection,
    check_spectral_dybe,
    check_unitarity,
)

__all__ = [
    "__version__",
    "a_of_p",
    "b_of_p",
    "beta_family",
    "build_baxterized",
    "build_classical_r0",
    "build_constant_r",
    "build_dynamical_r",
    "build_dynamical_sl",
    "build_super_sl",
    "build_yangian_r",
    "BZero",
    "check_additive_dybe",
    "check_constant_ybe",
    "check_constraints",
    "check_dynamical_ybe",
    "check_hecke",
    "check_hermiticity",
    "check_recursions",
    "check_reflection",
    "check_spectral_dybe",
    "check_unitarity",
    "CheckReport",
    "CoefficientScheme",
    "ConfigError",
    "deformation",
    "DegenerateDeformationError",
    "DimensionError",
    "embed",
    "gl_scheme",
    "GradingSignature",
    "identity",
    "kron",
    "Momentum",
    "nonresonant_momenta",
    "Operator",
    "permutation",
    "PoleError",
    "q_bracket",
    "random_generic",
    "residual",
    "resonance_check",
    "RMatrixSpec",
    "SamplingError",
    "shift",
    "spectral_parameter",
    "TwistedYBEError",
    "validate_b0",
]
