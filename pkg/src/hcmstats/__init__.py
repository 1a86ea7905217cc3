"""Full counting statistics of homodyne correlation measurements.

Closed-form outcome densities w(M) of the product of two photocurrent
fluctuations for coherent, Gaussian, and photon-number signals; their
moments; two sufficient nonclassicality tests (the Cauchy-Schwarz quantity
D and the variance ratio r); and independent Monte-Carlo and quadrature
oracles validating every closed form.
"""

__version__ = "0.1.0"

from .densities import (
    CorrelationPdf,
    GaussianJointParams,
    correlation_pdf,
    gaussian_joint_params,
    pdf_coherent,
    pdf_fock,
    pdf_gaussian,
)
from .errors import (
    ConfigError,
    HcmError,
    NonconvergenceError,
    NumericalValidityError,
    RegimeWarning,
)
from .moments import (
    MomentReport,
    NormalOrderedMoments,
    cauchy_schwarz_d,
    conditional_moment,
    gaussian_normal_ordered_moments,
    mean_decomposition_cc,
    mean_var_m,
    moment_report,
    nonclassicality_r,
)
from .network import (
    DetectionContext,
    DetectorConfig,
    LocalOscillator,
    LonMatrix,
    build_context,
    make_cross_correlation_lon,
    make_intensity_correlation_lon,
    output_amplitude,
    symmetric_cross_lon,
)
from .oracles import (
    ClassicalPSampler,
    SimulationRun,
    empirical_product_histogram,
    joint_pdf_numeric,
    pdf_via_product_integral,
    simulate_counts,
)
from .states import Coherent, Fock, Gaussian, SignalState

__all__ = [
    "__version__",
    "Coherent",
    "Gaussian",
    "Fock",
    "SignalState",
    "LonMatrix",
    "DetectorConfig",
    "LocalOscillator",
    "DetectionContext",
    "make_cross_correlation_lon",
    "make_intensity_correlation_lon",
    "symmetric_cross_lon",
    "output_amplitude",
    "build_context",
    "CorrelationPdf",
    "GaussianJointParams",
    "correlation_pdf",
    "gaussian_joint_params",
    "pdf_coherent",
    "pdf_gaussian",
    "pdf_fock",
    "MomentReport",
    "NormalOrderedMoments",
    "conditional_moment",
    "mean_var_m",
    "gaussian_normal_ordered_moments",
    "mean_decomposition_cc",
    "cauchy_schwarz_d",
    "nonclassicality_r",
    "moment_report",
    "ClassicalPSampler",
    "SimulationRun",
    "simulate_counts",
    "empirical_product_histogram",
    "joint_pdf_numeric",
    "pdf_via_product_integral",
    "HcmError",
    "ConfigError",
    "NumericalValidityError",
    "NonconvergenceError",
    "RegimeWarning",
]
