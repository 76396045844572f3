"""Monte Carlo validation of the closed-form error predictions.

Nested design: noise draws are the outer loop, coefficient draws the inner one,
so the spread of inner means estimates the noise-only variance of the
coefficient-averaged error. Replicate r always uses RNG stream r regardless of
worker count, making parallel and serial runs identical.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .estimator import solve_operator
from .model import (ConfigError, CoefficientPrior, ExperimentConfig, FeatureMatrix,
                    WeightScheme, build_rff_matrix, replicate_stream)


@dataclass(frozen=True)
class SimulationReport:
    mean_error: float           # grand mean of squared errors over all draws
    std_error: float            # naive standard error of mean_error
    noise_var_estimate: float   # bias-corrected variance of the inner means
    n_theta: int
    n_noise: int
    seed: int
    theory_total: float | None = None
    z_score: float | None = None  # None when no prediction or spread is exactly zero


def _replicate_stats(index: int, config: ExperimentConfig, operator: np.ndarray,
                     psi_entries: np.ndarray, theta_scale: np.ndarray,
                     n_theta: int) -> tuple[float, float]:
    """(mean, sample variance) of squared errors for one noise draw."""
    rng = replicate_stream(config.seed, index)
    if config.sigma == 0.0:
        delta = np.zeros(config.n)
    else:
        delta = config.sigma * rng.standard_normal(config.n)
    g = rng.standard_normal((n_theta, 2, config.p_total))
    thetas = theta_scale[None, :] * (g[:, 0, :] + 1j * g[:, 1, :])

    y = thetas @ psi_entries.T + delta[None, :]
    theta_hat_learned = y @ operator.T
    p = config.p
    errors = (np.sum(np.abs(theta_hat_learned - thetas[:, :p]) ** 2, axis=1)
              + np.sum(np.abs(thetas[:, p:]) ** 2, axis=1))
    if not np.all(np.isfinite(errors)):
        raise RuntimeError(f"replicate {index}: non-finite squared error")
    mean = float(errors.mean())
    var = float(errors.var(ddof=1)) if n_theta > 1 else 0.0
    return mean, var


def simulate_generalization(config: ExperimentConfig, n_theta: int, n_noise: int,
                            theory_total: float | None = None, n_workers: int = 1,
                            psi: FeatureMatrix | None = None) -> SimulationReport:
    """Estimate the expected squared error by simulation.

    n_theta coefficient draws are fitted against each of n_noise noise draws.
    An alternative feature matrix psi (matching the configured shape) may be
    supplied; by default the Fourier one is built.
    """
    if n_theta < 1 or n_noise < 1:
        raise ConfigError(f"need n_theta, n_noise >= 1, got {n_theta}, {n_noise}")
    if psi is None:
        psi = build_rff_matrix(config)
    if psi.shape != (config.n, config.p_total):
        raise ConfigError(
            f"feature matrix shape {psi.shape} does not match config "
            f"({config.n}, {config.p_total})")

    weights = WeightScheme.from_config(config)
    prior = CoefficientPrior.from_config(config)
    operator = solve_operator(psi, weights, config.p)
    theta_scale = np.sqrt(prior.variances() / 2.0)

    def run(index: int) -> tuple[float, float]:
        try:
            return _replicate_stats(index, config, operator, psi.entries,
                                    theta_scale, n_theta)
        except RuntimeError:
            raise
        except Exception as exc:  # attach the replicate index to solver errors
            raise RuntimeError(f"replicate {index}: {exc}") from exc

    if n_workers > 1:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            stats = list(pool.map(run, range(n_noise)))
    else:
        stats = [run(r) for r in range(n_noise)]

    inner_means = np.array([s[0] for s in stats])
    inner_vars = np.array([s[1] for s in stats])
    n_total = n_theta * n_noise
    grand_mean = float(inner_means.mean())

    # Exact pooled sum of squares from per-replicate summaries.
    ss = float(np.sum((n_theta - 1) * inner_vars
                      + n_theta * (inner_means - grand_mean) ** 2))
    sample_var = ss / (n_total - 1) if n_total > 1 else 0.0
    std_error = math.sqrt(max(0.0, sample_var) / n_total)

    if config.sigma == 0.0 or n_noise < 2:
        noise_var = 0.0
    else:
        # Spread of inner means includes leakage from averaging only n_theta
        # coefficient draws; subtract its estimated share.
        raw = float(inner_means.var(ddof=1))
        noise_var = max(0.0, raw - float(inner_vars.mean()) / n_theta)

    # A zero prediction leaves no relative scale to test against (the empirical
    # spread is pure rounding noise there), so z stays undefined.
    z_score = None
    if theory_total is not None and theory_total != 0.0 and std_error > 0.0:
        z_score = (grand_mean - theory_total) / std_error

    return SimulationReport(mean_error=grand_mean, std_error=std_error,
                            noise_var_estimate=noise_var, n_theta=n_theta,
                            n_noise=n_noise, seed=config.seed,
                            theory_total=theory_total, z_score=z_score)


def simulate_noise_variance(config: ExperimentConfig, n_theta: int, n_noise: int,
                            n_workers: int = 1) -> float:
    """Bias-corrected Monte Carlo estimate of the noise-only error variance."""
    if n_noise < 2:
        raise ConfigError(f"variance estimation needs n_noise >= 2, got {n_noise}")
    report = simulate_generalization(config, n_theta=n_theta, n_noise=n_noise,
                                     n_workers=n_workers)
    return report.noise_var_estimate
