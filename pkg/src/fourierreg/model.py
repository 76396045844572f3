"""Problem setup: feature matrices, weight ladders, coefficient priors, synthetic data.

Everything here is deterministic given an explicit RNG stream; no module-level state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

OVER = "over"
UNDER = "under"
DETERMINED = "determined"


class ConfigError(ValueError):
    """An experiment configuration violates a structural constraint."""


class RegimeError(ValueError):
    """An operation was asked to run outside its admissible parameter regime."""


# =============================================================================
# CONFIGURATION
# =============================================================================

@dataclass(frozen=True)
class ExperimentConfig:
    """Scalar knobs of a single experiment.

    n        -- number of data points / grid size
    p_total  -- true model width (must be an integer multiple of n)
    p        -- learned model width, 1 <= p <= p_total; p > n additionally
                requires p to be a multiple of n
    alpha    -- data-side weight exponent
    beta     -- parameter-side weight exponent
    gamma    -- prior decay exponent (>= 0)
    sigma    -- noise scale, per-entry standard deviation (>= 0)
    seed     -- master RNG seed
    """

    n: int
    p_total: int
    p: int
    alpha: float = 0.0
    beta: float = 0.0
    gamma: float = 0.0
    sigma: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ConfigError(f"n must be >= 1, got {self.n}")
        if self.p_total < 1:
            raise ConfigError(f"p_total must be >= 1, got {self.p_total}")
        if self.p_total % self.n != 0:
            raise ConfigError(
                f"p_total must be a multiple of n, got p_total={self.p_total}, n={self.n}")
        if not 1 <= self.p <= self.p_total:
            raise ConfigError(f"p must satisfy 1 <= p <= p_total, got p={self.p}")
        if self.p > self.n and self.p % self.n != 0:
            raise ConfigError(
                f"p > n requires p to be a multiple of n, got p={self.p}, n={self.n}")
        if self.gamma < 0:
            raise ConfigError(f"gamma must be >= 0, got {self.gamma}")
        if self.sigma < 0:
            raise ConfigError(f"sigma must be >= 0, got {self.sigma}")

    @property
    def mu(self) -> int:
        return self.p_total // self.n

    @property
    def nu(self) -> int:
        """Width ratio p/n; only defined when p is a multiple of n."""
        if self.p % self.n != 0:
            raise RegimeError(f"p={self.p} is not a multiple of n={self.n}")
        return self.p // self.n

    @property
    def regime(self) -> str:
        """'over' (p > n), 'under' (p < n), or 'determined' (p == n)."""
        if self.p > self.n:
            return OVER
        if self.p < self.n:
            return UNDER
        return DETERMINED

    def replace(self, **kwargs) -> "ExperimentConfig":
        fields_now = {
            "n": self.n, "p_total": self.p_total, "p": self.p,
            "alpha": self.alpha, "beta": self.beta, "gamma": self.gamma,
            "sigma": self.sigma, "seed": self.seed,
        }
        fields_now.update(kwargs)
        return ExperimentConfig(**fields_now)


# =============================================================================
# WEIGHTS AND PRIOR
# =============================================================================

@dataclass(frozen=True)
class WeightScheme:
    """Diagonal weight ladder t_k = 1 + k and the two exponents applied to it."""

    p_total: int
    alpha: float
    beta: float
    t: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "t", np.arange(1, self.p_total + 1, dtype=float))

    @classmethod
    def from_config(cls, config: ExperimentConfig) -> "WeightScheme":
        return cls(p_total=config.p_total, alpha=config.alpha, beta=config.beta)

    def powers(self, exponent: float, m: int) -> np.ndarray:
        """Diagonal of the m x m weight matrix with entries t_k**exponent, k < m."""
        if not 0 <= m <= self.p_total:
            raise ConfigError(f"weight block size {m} outside [0, {self.p_total}]")
        return self.t[:m] ** exponent


@dataclass(frozen=True)
class CoefficientPrior:
    """Mean-zero coefficient prior with diagonal covariance c_gamma * t_k^(-2*gamma).

    The normalization c_gamma makes the expected squared norm of a draw exactly 1.
    """

    gamma: float
    p_total: int
    c_gamma: float = field(init=False)

    def __post_init__(self):
        t = np.arange(1, self.p_total + 1, dtype=float)
        object.__setattr__(self, "c_gamma", 1.0 / math.fsum(t ** (-2.0 * self.gamma)))

    @classmethod
    def from_config(cls, config: ExperimentConfig) -> "CoefficientPrior":
        return cls(gamma=config.gamma, p_total=config.p_total)

    def variances(self) -> np.ndarray:
        """Per-mode variance of the prior, length p_total, sums to 1."""
        t = np.arange(1, self.p_total + 1, dtype=float)
        return self.c_gamma * t ** (-2.0 * self.gamma)


# =============================================================================
# FEATURE MATRICES
# =============================================================================

@dataclass(frozen=True)
class FeatureMatrix:
    """Complex sampling matrix with a tag describing how it was built."""

    entries: np.ndarray
    kind: str  # "rff", "diagonal", or "custom"
    omega: complex | None = None
    zeta: float | None = None

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape


def rff_entries(n: int, width: int) -> np.ndarray:
    """n x width matrix with entry (j, k) = omega_n**(j*k), omega_n = exp(2*pi*i/n).

    The exponent is reduced mod n before exponentiation so that column k + n*eta
    is bit-identical to column k.
    """
    if n < 1 or width < 1:
        raise ConfigError(f"matrix dimensions must be positive, got {n} x {width}")
    exponents = (np.arange(n)[:, None] * np.arange(width)[None, :]) % n
    return np.exp(2j * np.pi * exponents / n)


def build_rff_matrix(config: ExperimentConfig) -> FeatureMatrix:
    """Fourier feature matrix of the configured size (n rows, p_total columns)."""
    entries = rff_entries(config.n, config.p_total)
    omega = complex(np.exp(2j * np.pi / config.n))
    return FeatureMatrix(entries=entries, kind="rff", omega=omega)


def build_diagonal_decay_matrix(m: int, zeta: float) -> FeatureMatrix:
    """m x m diagonal feature matrix with singular values t_k**(-zeta)."""
    if m < 1:
        raise ConfigError(f"matrix dimension must be positive, got {m}")
    if zeta < 0:
        raise ConfigError(f"zeta must be >= 0, got {zeta}")
    t = np.arange(1, m + 1, dtype=float)
    entries = np.diag(t ** (-zeta)).astype(complex)
    return FeatureMatrix(entries=entries, kind="diagonal", zeta=zeta)


# =============================================================================
# SAMPLING
# =============================================================================

def replicate_stream(seed: int, index: int) -> np.random.Generator:
    """Independent RNG stream for one replicate, deterministic in (seed, index).

    Parallel and serial runs agree because stream `index` never depends on how
    many replicates ran before it.
    """
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def sample_theta(prior: CoefficientPrior, rng: np.random.Generator) -> np.ndarray:
    """Draw a coefficient vector: complex circular Gaussian matching the prior."""
    scale = np.sqrt(prior.variances() / 2.0)
    g = rng.standard_normal((2, prior.p_total))
    return scale * (g[0] + 1j * g[1])


def sample_noise(n: int, sigma: float, rng: np.random.Generator) -> np.ndarray:
    """Draw a real Gaussian noise vector with per-entry variance sigma**2."""
    if sigma < 0:
        raise ConfigError(f"sigma must be >= 0, got {sigma}")
    if sigma == 0.0:
        return np.zeros(n)
    return sigma * rng.standard_normal(n)


def synthesize_data(psi: FeatureMatrix, theta: np.ndarray, delta: np.ndarray) -> np.ndarray:
    """Noisy observations: psi @ theta + delta."""
    n, width = psi.shape
    if theta.shape != (width,):
        raise ConfigError(f"theta has length {theta.shape}, expected ({width},)")
    if delta.shape != (n,):
        raise ConfigError(f"delta has length {delta.shape}, expected ({n},)")
    return psi.entries @ theta + delta
