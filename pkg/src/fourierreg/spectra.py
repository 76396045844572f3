"""Eigenvalue spectra of rotation-invariant kernels on the sphere.

These provide realistic singular-value decays for the general feature bounds.
The modified Bessel function is evaluated by its ascending power series; the
arguments arising here (2/sigma_k**2 at desk scale) are small, so no asymptotic
branch is needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import ConfigError

# Beyond this the ascending series would need too many terms; refuse rather
# than return something slow or inaccurate.
BESSEL_ARG_CAP = 1e3


def bessel_i(nu: float, x: float, rel_tol: float = 1e-16, max_terms: int = 500) -> float:
    """Modified Bessel function of the first kind, real order nu >= 0, x >= 0.

    Ascending series sum_m (x/2)^(2m+nu) / (m! * Gamma(m+nu+1)); all terms are
    positive, so stopping when a term falls below rel_tol of the running total
    bounds the tail by a geometric series.
    """
    if nu < 0:
        raise ConfigError(f"order must be >= 0, got {nu}")
    if x < 0:
        raise ConfigError(f"argument must be >= 0, got {x}")
    if x > BESSEL_ARG_CAP:
        raise ConfigError(f"argument {x} exceeds series cap {BESSEL_ARG_CAP}")
    if x == 0.0:
        return 1.0 if nu == 0.0 else 0.0

    term = math.exp(nu * math.log(x / 2.0) - math.lgamma(nu + 1.0))
    total = term
    quarter_sq = (x / 2.0) ** 2
    for m in range(max_terms):
        term *= quarter_sq / ((m + 1.0) * (m + 1.0 + nu))
        total += term
        if term <= rel_tol * total:
            return total
    raise ConfigError(f"Bessel series did not converge within {max_terms} terms")


def multiplicity(n: int, k: int) -> int:
    """Dimension of the degree-k spherical-harmonic space on the sphere in R^n."""
    if n < 2:
        raise ConfigError(f"ambient dimension must be >= 2, got {n}")
    if k < 0:
        raise ConfigError(f"degree must be >= 0, got {k}")
    if k == 0:
        return 1
    numerator = (2 * k + n - 2) * math.comb(k + n - 3, k - 1)
    if numerator % k != 0:
        raise ConfigError(f"multiplicity formula not integral at n={n}, k={k}")
    return numerator // k


@dataclass(frozen=True)
class KernelSpectrum:
    """Per-degree eigenvalues of a spherical kernel with their multiplicities."""

    kind: str                   # "gaussian_sphere", "polynomial_sphere", "ntk_decay", "algebraic_decay"
    orders: np.ndarray          # harmonic degrees k
    multiplicities: np.ndarray  # dimension of each degree-k eigenspace
    values: np.ndarray          # eigenvalue lambda_k per degree

    def __post_init__(self):
        if not (len(self.orders) == len(self.multiplicities) == len(self.values)):
            raise ConfigError("orders, multiplicities, values must align")
        if np.any(self.values < 0):
            raise ConfigError("kernel eigenvalues must be nonnegative")

    @property
    def eigenvalues(self) -> np.ndarray:
        """All eigenvalues with multiplicities expanded, sorted descending."""
        expanded = np.repeat(self.values, self.multiplicities)
        return np.sort(expanded)[::-1]


def gaussian_sphere_spectrum(n: int, sigma_k: float, k_max: int) -> KernelSpectrum:
    """Spectrum of the Gaussian kernel exp(-|x-y|^2/sigma_k^2) on the sphere in R^n.

    lambda_k = exp(-2/sigma_k^2) * sigma_k^(n-2) * I_(k+n/2-1)(2/sigma_k^2) * Gamma(n/2).
    Decreasing in k whenever sigma_k >= sqrt(2/n).
    """
    if n < 2:
        raise ConfigError(f"ambient dimension must be >= 2, got {n}")
    if sigma_k <= 0:
        raise ConfigError(f"kernel width must be > 0, got {sigma_k}")
    if k_max < 0:
        raise ConfigError(f"k_max must be >= 0, got {k_max}")
    x = 2.0 / sigma_k ** 2
    if x > BESSEL_ARG_CAP:
        raise ConfigError(
            f"2/sigma_k^2 = {x} exceeds the Bessel series cap {BESSEL_ARG_CAP}")

    front = math.exp(-x) * sigma_k ** (n - 2) * math.gamma(n / 2.0)
    orders = np.arange(k_max + 1)
    values = np.array([front * bessel_i(k + n / 2.0 - 1.0, x) for k in orders])
    mults = np.array([multiplicity(n, int(k)) for k in orders])
    return KernelSpectrum(kind="gaussian_sphere", orders=orders,
                          multiplicities=mults, values=values)


def polynomial_sphere_spectrum(n: int, d: int, k_max: int | None = None) -> KernelSpectrum:
    """Spectrum of the polynomial kernel (1 + <x,y>)^d on the sphere in R^n.

    lambda_k = 2^(d+n-2) * d!/(d-k)! * Gamma(d+(n-1)/2) * Gamma(n/2)
               / (sqrt(pi) * Gamma(d+k+n-1))   for 0 <= k <= d, zero beyond.
    """
    if n < 2:
        raise ConfigError(f"ambient dimension must be >= 2, got {n}")
    if d < 0:
        raise ConfigError(f"degree must be >= 0, got {d}")
    if k_max is None:
        k_max = d + 3  # include a few zero orders to make the cutoff visible
    if k_max < 0:
        raise ConfigError(f"k_max must be >= 0, got {k_max}")

    log_front = ((d + n - 2) * math.log(2.0) + math.lgamma(d + 1)
                 + math.lgamma(d + (n - 1) / 2.0) + math.lgamma(n / 2.0)
                 - 0.5 * math.log(math.pi))
    orders = np.arange(k_max + 1)
    values = np.zeros(k_max + 1)
    for k in range(min(d, k_max) + 1):
        values[k] = math.exp(log_front - math.lgamma(d - k + 1)
                             - math.lgamma(d + k + n - 1))
    mults = np.array([multiplicity(n, int(k)) for k in orders])
    return KernelSpectrum(kind="polynomial_sphere", orders=orders,
                          multiplicities=mults, values=values)


def ntk_decay_spectrum(n: int, k_max: int) -> KernelSpectrum:
    """Shape of the neural-tangent-kernel spectrum on the sphere in R^n.

    mu_0 = mu_1 = 1, mu_k = k^-n for even k >= 2, and mu_k = 0 for odd k >= 3;
    the overall constant is normalized to 1. A decay-shape generator for the
    general feature bound, not a quantitative kernel.
    """
    if n < 2:
        raise ConfigError(f"ambient dimension must be >= 2, got {n}")
    if k_max < 0:
        raise ConfigError(f"k_max must be >= 0, got {k_max}")
    orders = np.arange(k_max + 1)
    values = np.zeros(k_max + 1)
    for k in orders:
        if k <= 1:
            values[k] = 1.0
        elif k % 2 == 0:
            values[k] = float(k) ** (-n)
    mults = np.array([multiplicity(n, int(k)) for k in orders])
    return KernelSpectrum(kind="ntk_decay", orders=orders,
                          multiplicities=mults, values=values)


def algebraic_decay_spectrum(zeta: float, k_max: int) -> KernelSpectrum:
    """Plain power-law spectrum lambda_k = (1+k)^-zeta with unit multiplicities."""
    if zeta < 0:
        raise ConfigError(f"zeta must be >= 0, got {zeta}")
    if k_max < 0:
        raise ConfigError(f"k_max must be >= 0, got {k_max}")
    orders = np.arange(k_max + 1)
    values = (orders + 1.0) ** (-zeta)
    mults = np.ones(k_max + 1, dtype=int)
    return KernelSpectrum(kind="algebraic_decay", orders=orders,
                          multiplicities=mults, values=values)
