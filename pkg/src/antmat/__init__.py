"""Antagonistic random matrices: ensembles, spectra, exact expectations,
perturbative eigenvalue predictions, and empirical law checks.

An antagonistic matrix has zero diagonal and every off-diagonal pair
``(M[i, j], M[j, i])`` of strictly opposite signs (or both zero).  The package
samples such ensembles and their companions (antisymmetric, elliptic, dilute,
diagonally shifted), computes their spectra and the closed-form expectations
of determinant-like functionals, predicts extreme eigenvalues under weak
coupling, and fits the standard limiting laws, all behind deterministic,
seedable interfaces and an ``antmat`` command-line runner.
"""

from .errors import (
    AntmatError,
    DegenerateExtremesError,
    DimensionCapError,
    EmptySpectrumError,
    InvalidSpecError,
    NotDegenerateError,
    NumericalError,
    SingularDiagonalError,
    ZeroVarianceError,
)
from .exact import (
    Estimate,
    PolynomialInZ,
    ThetaArray,
    determinant,
    expected_char_poly,
    expected_char_poly_enum,
    expected_char_poly_perm,
    expected_det,
    expected_pf_pft,
    matching_count,
    mc_expect,
    pfaffian,
    polynomial_to_csv,
)
from .laws import (
    EllipseModel,
    FitReport,
    RadiusCheck,
    WidthTrend,
    circular_radius_check,
    decaying_family,
    elliptic_fit,
    ks_threshold,
    normalized_spectrum,
    rho_from_density,
    sym_antisym_family,
    width_trend,
    widths_to_csv,
)
from .matgen import (
    Antagonistic,
    Antisymmetric,
    DiagPlusAntagonistic,
    DiagPlusAntisym,
    Dilute,
    EllipticGaussian,
    EnsembleSpec,
    PairDensity,
    PairMoments,
    ScalarDensity,
    SmallSymBigAntisym,
    closure_transform,
    haar_orthogonal,
    is_antagonistic,
    pair_moments,
    sample_batch,
    sample_matrix,
    sample_pair,
    scalar_moments,
    spec_from_json,
    spec_to_json,
    stream,
)
from .perturb import (
    PerturbationInput,
    PerturbationPrediction,
    ResidualReport,
    predict_degenerate,
    predict_extremes,
    report_to_csv,
    verify_prediction,
)
from .spectral import (
    BendixsonBox,
    Histogram,
    Spectrum,
    StabilityReport,
    bendixson_box,
    eigenvalues,
    esd_histogram,
    histogram_to_csv,
    spectrum_to_csv,
    stability_report,
)
from .verify import SUITE_NAMES, run_suite

__version__ = "0.1.0"

__all__ = [
    "AntmatError",
    "InvalidSpecError",
    "DimensionCapError",
    "DegenerateExtremesError",
    "NotDegenerateError",
    "EmptySpectrumError",
    "SingularDiagonalError",
    "ZeroVarianceError",
    "NumericalError",
    "PairDensity",
    "ScalarDensity",
    "PairMoments",
    "EnsembleSpec",
    "Antagonistic",
    "Antisymmetric",
    "DiagPlusAntisym",
    "DiagPlusAntagonistic",
    "EllipticGaussian",
    "Dilute",
    "SmallSymBigAntisym",
    "stream",
    "sample_pair",
    "pair_moments",
    "scalar_moments",
    "sample_matrix",
    "sample_batch",
    "is_antagonistic",
    "closure_transform",
    "haar_orthogonal",
    "spec_to_json",
    "spec_from_json",
    "Spectrum",
    "BendixsonBox",
    "StabilityReport",
    "Histogram",
    "eigenvalues",
    "bendixson_box",
    "stability_report",
    "esd_histogram",
    "spectrum_to_csv",
    "histogram_to_csv",
    "ThetaArray",
    "PolynomialInZ",
    "Estimate",
    "pfaffian",
    "matching_count",
    "expected_char_poly",
    "expected_char_poly_enum",
    "expected_char_poly_perm",
    "expected_det",
    "expected_pf_pft",
    "mc_expect",
    "determinant",
    "polynomial_to_csv",
    "PerturbationInput",
    "PerturbationPrediction",
    "ResidualReport",
    "predict_extremes",
    "predict_degenerate",
    "verify_prediction",
    "report_to_csv",
    "EllipseModel",
    "FitReport",
    "RadiusCheck",
    "WidthTrend",
    "rho_from_density",
    "elliptic_fit",
    "normalized_spectrum",
    "ks_threshold",
    "circular_radius_check",
    "width_trend",
    "decaying_family",
    "sym_antisym_family",
    "widths_to_csv",
    "SUITE_NAMES",
    "run_suite",
    "__version__",
]
