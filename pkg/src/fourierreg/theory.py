"""Closed-form generalization errors of the weighted least-squares fit.

Mean errors split as e_total = e_clean + e_noise; var_noise is the variance of
the coefficient-averaged error across noise draws. The formulas are exact for
the Fourier feature model with width ratios mu = p_total/n and (above the
interpolation point) nu = p/n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import (DETERMINED, OVER, UNDER, CoefficientPrior, ExperimentConfig,
                    RegimeError, rff_entries)


@dataclass(frozen=True)
class TheoryError:
    e_clean: float     # error with noise-free data
    e_noise: float     # additional mean error due to observation noise
    var_noise: float   # variance of the coefficient-averaged error over noise
    regime: str        # "over", "under", or "determined"

    @property
    def e_total(self) -> float:
        return self.e_clean + self.e_noise


# =============================================================================
# FOLDED MODE SUMS
# =============================================================================

def _ladder(p_total: int) -> np.ndarray:
    return np.arange(1, p_total + 1, dtype=float)


def _folded_sums(t: np.ndarray, n: int, etas: range, exponent: float) -> np.ndarray:
    """For each residue k < n, sum t[k + n*eta]**exponent over eta in etas."""
    if len(etas) == 0:
        return np.zeros(n)
    idx = np.arange(n)[:, None] + n * np.asarray(etas, dtype=int)[None, :]
    return (t[idx] ** exponent).sum(axis=1)


def chi_vector(config: ExperimentConfig) -> np.ndarray:
    """Aliasing weights: chi[m] = sum over eta >= 1 of t_(m + n*eta)^(-2*gamma).

    chi[m] collects the prior weight (before normalization) of all modes beyond
    the first n that alias onto grid mode m. Zero when p_total == n.
    """
    t = _ladder(config.p_total)
    return _folded_sums(t, config.n, range(1, config.mu), -2.0 * config.gamma)


# =============================================================================
# OVERPARAMETERIZED (p >= n, p a multiple of n)
# =============================================================================

def _require_over(config: ExperimentConfig) -> None:
    if config.p < config.n or config.p % config.n != 0:
        raise RegimeError(
            f"overparameterized formulas need p a multiple of n with p >= n, "
            f"got p={config.p}, n={config.n}")


def error_clean_over(config: ExperimentConfig) -> float:
    """Expected squared error with noise-free data, overparameterized branch."""
    _require_over(config)
    t = _ladder(config.p_total)
    n, nu, mu = config.n, config.nu, config.mu
    cg = CoefficientPrior.from_config(config).c_gamma

    s_bg = _folded_sums(t, n, range(nu), -2.0 * (config.beta + config.gamma))
    s_b = _folded_sums(t, n, range(nu), -2.0 * config.beta)
    s_4b = _folded_sums(t, n, range(nu), -4.0 * config.beta)
    s_g = _folded_sums(t, n, range(mu), -2.0 * config.gamma)

    return (1.0
            - 2.0 * cg * math.fsum(s_bg / s_b)
            + cg * math.fsum(s_4b * s_g / s_b ** 2))


def error_noise_over(config: ExperimentConfig) -> tuple[float, float]:
    """(mean, variance) of the noise-induced error, overparameterized branch."""
    _require_over(config)
    t = _ladder(config.p_total)
    n, nu = config.n, config.nu
    s_b = _folded_sums(t, n, range(nu), -2.0 * config.beta)
    s_4b = _folded_sums(t, n, range(nu), -4.0 * config.beta)

    mean = (config.sigma ** 2 / n) * math.fsum(s_4b / s_b ** 2)
    var = (2.0 * config.sigma ** 4 / n ** 2) * math.fsum(s_4b ** 2 / s_b ** 4)
    return mean, var


# =============================================================================
# UNDERPARAMETERIZED (p <= n)
# =============================================================================

@dataclass(frozen=True)
class UnderparamSpectral:
    """SVD data of the weighted unlearned block diag(t^alpha) @ psi[:, p:n].

    e_tilde and e_hat are the congruences of the data weights and of the folded
    prior weights into the singular basis; both are Hermitian of size n - p.
    """

    singular_values: np.ndarray  # length n - p, descending
    e_tilde: np.ndarray          # (n-p) x (n-p): basis-weighted data powers t^(2*alpha)
    e_hat: np.ndarray            # (n-p) x (n-p): basis-weighted folded prior variances

    @classmethod
    def from_config(cls, config: ExperimentConfig) -> "UnderparamSpectral":
        if config.p > config.n:
            raise RegimeError(
                f"spectral block needs p <= n, got p={config.p}, n={config.n}")
        n, p = config.n, config.p
        t = _ladder(config.p_total)
        m = n - p
        if m == 0:
            empty = np.zeros((0, 0), dtype=complex)
            return cls(np.zeros(0), empty, empty)

        tail = rff_entries(n, n)[:, p:]
        weighted = (t[:n] ** config.alpha)[:, None] * tail
        u, s, vh = np.linalg.svd(weighted, full_matrices=False)

        t2a = t[:n] ** (2.0 * config.alpha)
        e_tilde = (u.conj().T * t2a[None, :]) @ u

        # Prior variance carried by each unlearned grid mode, including the
        # weight of all higher modes that alias onto it.
        cg = CoefficientPrior.from_config(config).c_gamma
        chi = chi_vector(config)
        kappa = cg * (t[p:n] ** (-2.0 * config.gamma) + chi[p:n])
        e_hat = (vh * kappa[None, :]) @ vh.conj().T
        return cls(s, e_tilde, e_hat)


def _paired_trace(e1: np.ndarray, e2: np.ndarray, s: np.ndarray, power: int) -> float:
    """sum_ij e1[i,j] * e2[j,i] / (s[i]**power * s[j]**power)."""
    if s.size == 0:
        return 0.0
    scaled1 = e1 / (s ** power)[:, None]
    scaled2 = e2 / (s ** power)[:, None]
    return float(np.sum(scaled1 * scaled2.T).real)


def error_clean_under(config: ExperimentConfig) -> float:
    """Expected squared error with noise-free data, underparameterized branch."""
    if config.p > config.n:
        raise RegimeError(
            f"underparameterized formulas need p <= n, got p={config.p}, n={config.n}")
    n, p = config.n, config.p
    t = _ladder(config.p_total)
    cg = CoefficientPrior.from_config(config).c_gamma
    chi = chi_vector(config)

    unresolved_tail = cg * math.fsum(t[n:] ** (-2.0 * config.gamma))
    aliased_onto_learned = cg * math.fsum(chi[:p])
    aliased_onto_unlearned = cg * math.fsum(chi[p:n])

    spectral = 0.0
    if p < n:
        block = UnderparamSpectral.from_config(config)
        spectral = n * _paired_trace(block.e_tilde, block.e_hat,
                                     block.singular_values, power=1)

    return unresolved_tail + aliased_onto_learned - aliased_onto_unlearned + spectral


def error_noise_under(config: ExperimentConfig) -> tuple[float, float]:
    """(mean, variance) of the noise-induced error, underparameterized branch.

    Only valid for p > n/2; below that the closed form does not apply and a
    RegimeError is raised.
    """
    if config.p > config.n:
        raise RegimeError(
            f"underparameterized formulas need p <= n, got p={config.p}, n={config.n}")
    if 2 * config.p <= config.n:
        raise RegimeError(
            f"noise formulas in the underparameterized regime require p > n/2, "
            f"got p={config.p}, n={config.n} (outside stated validity)")
    n, p = config.n, config.p

    diag_term = 0.0
    pair_term = 0.0
    if p < n:
        block = UnderparamSpectral.from_config(config)
        s = block.singular_values
        diag_term = float(np.sum(np.diag(block.e_tilde).real / s ** 2))
        pair_term = _paired_trace(block.e_tilde, block.e_tilde, s, power=2)

    mean = config.sigma ** 2 * ((2.0 * p - n) / n + diag_term)
    var = 2.0 * config.sigma ** 4 * ((2.0 * p - n) / n ** 2 + pair_term)
    return mean, var


# =============================================================================
# DISPATCH
# =============================================================================

def theory_error(config: ExperimentConfig) -> TheoryError:
    """All closed-form error components for one configuration.

    At p == n both branches agree; the underparameterized one is used since its
    spectral block is empty there. With sigma == 0 the noise components are
    exactly zero and no noise-validity constraint applies.
    """
    regime = config.regime
    if regime == OVER:
        e_clean = error_clean_over(config)
        noise = error_noise_over if config.sigma > 0 else None
    else:
        e_clean = error_clean_under(config)
        noise = error_noise_under if config.sigma > 0 else None

    if noise is None:
        e_noise, var_noise = 0.0, 0.0
    else:
        e_noise, var_noise = noise(config)
    return TheoryError(e_clean=e_clean, e_noise=e_noise, var_noise=var_noise,
                       regime=regime)
