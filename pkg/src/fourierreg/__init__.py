"""Weighted least-squares regression on random Fourier features.

Closed-form generalization errors, dense-trace cross-checks, Monte Carlo
validation, width-selection bounds, and kernel eigenvalue spectra.
"""

__version__ = "0.1.0"

from .bounds import (BoundInputs, BoundResult, bound_general_feature,
                     bound_noisy_training)
from .estimator import (EstimationResult, empirical_sq_error, solve_operator,
                        weighted_ls_solve)
from .model import (DETERMINED, OVER, UNDER, CoefficientPrior, ConfigError,
                    ExperimentConfig, FeatureMatrix, RegimeError, WeightScheme,
                    build_diagonal_decay_matrix, build_rff_matrix, replicate_stream,
                    rff_entries, sample_noise, sample_theta, synthesize_data)
from .oracles import (circulant_eigendecomposition, trace_oracle_clean,
                      trace_oracle_noise, xi_identity_check)
from .simulate import (SimulationReport, simulate_generalization,
                       simulate_noise_variance)
from .spectra import (KernelSpectrum, algebraic_decay_spectrum, bessel_i,
                      gaussian_sphere_spectrum, multiplicity, ntk_decay_spectrum,
                      polynomial_sphere_spectrum)
from .theory import (TheoryError, UnderparamSpectral, chi_vector, error_clean_over,
                     error_clean_under, error_noise_over, error_noise_under,
                     theory_error)

__all__ = [
    "__version__",
    "BoundInputs", "BoundResult", "bound_general_feature", "bound_noisy_training",
    "EstimationResult", "empirical_sq_error", "solve_operator", "weighted_ls_solve",
    "DETERMINED", "OVER", "UNDER", "CoefficientPrior", "ConfigError",
    "ExperimentConfig", "FeatureMatrix", "RegimeError", "WeightScheme",
    "build_diagonal_decay_matrix", "build_rff_matrix", "replicate_stream",
    "rff_entries", "sample_noise", "sample_theta", "synthesize_data",
    "circulant_eigendecomposition", "trace_oracle_clean", "trace_oracle_noise",
    "xi_identity_check",
    "SimulationReport", "simulate_generalization", "simulate_noise_variance",
    "KernelSpectrum", "algebraic_decay_spectrum", "bessel_i",
    "gaussian_sphere_spectrum", "multiplicity", "ntk_decay_spectrum",
    "polynomial_sphere_spectrum",
    "TheoryError", "UnderparamSpectral", "chi_vector", "error_clean_over",
    "error_clean_under", "error_noise_over", "error_noise_under", "theory_error",
]
