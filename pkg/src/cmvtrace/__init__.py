"""Trace identities for periodic CMV operators.

Construct finite and Floquet CMV matrices from periodic Verblunsky
coefficients, extract Dirichlet points, spectral weights, and band/gap
structure, and certify a family of trace and determinant identities by
evaluating both sides along independent numerical routes.
"""

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import (
    BetaNotUnimodular,
    CmvTraceError,
    CoefficientOutsideDisk,
    DegreeExceedsK,
    EmptyWord,
    IllConditioned,
    IndexOutOfRange,
    LambdaNotUnimodular,
    LayoutUnavailable,
    NoConvergence,
    NonpositiveDenominator,
    NotNormalized,
    NotOnCircle,
    NotUnitary,
    NumericalError,
    OddDimension,
    OddPeriod,
    ParseError,
    PatternMismatch,
    PairingFailure,
    PeriodTooSmall,
    RootCountMismatch,
    UnsupportedPower,
    ValidationError,
)
from .opuc import (
    ComplexPolynomial,
    FinalizedWord,
    RhoSequence,
    VerblunskyWord,
    eval_with_derivative,
    finalize_word,
    orthonormal_pth,
    radial_modulus_derivative,
    reverse_poly,
    rho_of,
    szego_iterate,
    validate_word,
)
from .cmv import (
    UnitaryMatrix,
    build_finite_cmv,
    build_floquet,
    determinant,
    structure_mask,
    theta_block,
    trace_power,
    unitarity_defect,
)
from .spectra import (
    BandStructure,
    DirichletData,
    UnitarySpectrum,
    band_edges,
    band_layout,
    char_poly_oracle,
    dirichlet_points,
    dirichlet_points_oracle,
    dirichlet_weights,
    eigenvalue_oracle,
    multiset_distance,
    polynomial_roots,
    tilde_word,
    unitary_eigenvalues,
    weights_oracle,
)
from .traces import (
    ResidualRecord,
    ResidualReport,
    aleksandrov_residuals,
    full_report,
    residual_det1,
    residual_det2,
    residual_polys2,
    residual_tr1,
    residual_tr2,
    rotate_word,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # config
    "DEFAULT_TOLERANCES",
    "Tolerances",
    # errors
    "CmvTraceError",
    "ValidationError",
    "ParseError",
    "OddPeriod",
    "EmptyWord",
    "CoefficientOutsideDisk",
    "OddDimension",
    "BetaNotUnimodular",
    "LambdaNotUnimodular",
    "IndexOutOfRange",
    "DegreeExceedsK",
    "NotOnCircle",
    "NotNormalized",
    "UnsupportedPower",
    "NotUnitary",
    "PeriodTooSmall",
    "NumericalError",
    "LayoutUnavailable",
    "NoConvergence",
    "RootCountMismatch",
    "PatternMismatch",
    "PairingFailure",
    "NonpositiveDenominator",
    "IllConditioned",
    # opuc
    "VerblunskyWord",
    "FinalizedWord",
    "ComplexPolynomial",
    "RhoSequence",
    "validate_word",
    "finalize_word",
    "rho_of",
    "szego_iterate",
    "reverse_poly",
    "orthonormal_pth",
    "eval_with_derivative",
    "radial_modulus_derivative",
    # cmv
    "UnitaryMatrix",
    "theta_block",
    "build_finite_cmv",
    "build_floquet",
    "trace_power",
    "determinant",
    "unitarity_defect",
    "structure_mask",
    # spectra
    "UnitarySpectrum",
    "DirichletData",
    "BandStructure",
    "unitary_eigenvalues",
    "char_poly_oracle",
    "polynomial_roots",
    "eigenvalue_oracle",
    "tilde_word",
    "dirichlet_points",
    "dirichlet_points_oracle",
    "dirichlet_weights",
    "weights_oracle",
    "band_edges",
    "band_layout",
    "multiset_distance",
    # traces
    "ResidualRecord",
    "ResidualReport",
    "rotate_word",
    "residual_polys2",
    "residual_det1",
    "residual_det2",
    "residual_tr1",
    "residual_tr2",
    "aleksandrov_residuals",
    "full_report",
]
