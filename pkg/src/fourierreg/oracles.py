"""Independent dense-matrix routes to the same error quantities as theory.py.

Everything here is deliberately literal: build the weighted design, take a
pseudoinverse, multiply matrices, take traces. No folded-sum shortcuts, no
spectral identities. Slow but transparent; intended for cross-checking the
closed forms on small systems.
"""

from __future__ import annotations

import numpy as np

from .model import (ConfigError, CoefficientPrior, ExperimentConfig, RegimeError,
                    rff_entries)

# Dense algebra only; keep sizes honest.
MAX_DENSE_N = 256
MAX_DENSE_WIDTH = 8192


def _check_dense_size(n: int, width: int) -> None:
    if n > MAX_DENSE_N or width > MAX_DENSE_WIDTH:
        raise ConfigError(
            f"dense oracle limited to n <= {MAX_DENSE_N}, width <= {MAX_DENSE_WIDTH}; "
            f"got n={n}, width={width}")


def _weighted_blocks(config: ExperimentConfig):
    """Weighted design over learned columns, its complement, and prior diagonals."""
    n, p, width = config.n, config.p, config.p_total
    _check_dense_size(n, width)
    t = np.arange(1, width + 1, dtype=float)
    psi = rff_entries(n, width)

    lam_a = t[:n] ** (-config.alpha)
    phi_learned = lam_a[:, None] * psi[:, :p] * (t[:p] ** (-config.beta))[None, :]
    phi_rest = lam_a[:, None] * psi[:, p:] * (t[p:] ** (-config.beta))[None, :]
    prior_diag = CoefficientPrior.from_config(config).variances()
    return t, phi_learned, phi_rest, prior_diag


def trace_oracle_clean(config: ExperimentConfig) -> float:
    """Expected squared error with noise-free data, via dense traces."""
    t, phi, phi_rest, k_diag = _weighted_blocks(config)
    p = config.p

    pinv = np.linalg.pinv(phi, rcond=1e-12)
    proj = pinv @ phi  # projection onto the row space of the weighted design

    lam_b2_inv = np.diag(t[:p] ** (-2.0 * config.beta))
    lam_b_pos = np.diag(t[:p] ** config.beta)
    k_learned = np.diag(k_diag[:p])
    k_rest = np.diag(k_diag[p:])
    lam_b_pos_rest = np.diag(t[p:] ** config.beta)

    total = float(np.sum(k_diag))
    learned_part = (np.trace(proj @ lam_b2_inv @ proj @ lam_b_pos @ k_learned @ lam_b_pos)
                    - 2.0 * np.trace(k_learned @ proj))
    rest_part = np.trace(pinv.conj().T @ lam_b2_inv @ pinv
                         @ phi_rest @ lam_b_pos_rest @ k_rest @ lam_b_pos_rest
                         @ phi_rest.conj().T)
    return total + float(learned_part.real) + float(rest_part.real)


def _noise_quadratic_matrix(config: ExperimentConfig) -> np.ndarray:
    """Hermitian matrix A with e_noise = sigma^2 tr(A): how raw noise maps to error."""
    t, phi, _, _ = _weighted_blocks(config)
    n, p = config.n, config.p
    pinv = np.linalg.pinv(phi, rcond=1e-12)
    lam_a = np.diag(t[:n] ** (-config.alpha))
    lam_b2_inv = np.diag(t[:p] ** (-2.0 * config.beta))
    return lam_a @ pinv.conj().T @ lam_b2_inv @ pinv @ lam_a


def trace_oracle_noise(config: ExperimentConfig) -> tuple[float, float]:
    """(mean, variance) of the noise-induced error, via dense traces."""
    a = _noise_quadratic_matrix(config)
    mean = config.sigma ** 2 * float(np.trace(a).real)
    var = 2.0 * config.sigma ** 4 * float(np.trace(a @ a).real)
    return mean, var


# =============================================================================
# STRUCTURAL IDENTITIES
# =============================================================================

def circulant_eigendecomposition(config: ExperimentConfig, zeta: float,
                                 part: str = "learned") -> np.ndarray:
    """Eigenvalues of psi_block @ diag(t^-zeta) @ psi_block^* in the Fourier basis.

    The block is the first p columns ("learned", eta in [0, nu)) or the
    remaining columns ("unlearned", eta in [nu, mu)). Because column k + n*eta
    repeats column k, the product is circulant and diagonalized by the feature
    matrix itself, with eigenvalue sum(t_(m + n*eta)^-zeta over eta) at mode m.
    Requires p to be a multiple of n.
    """
    n = config.n
    if config.p % n != 0:
        raise RegimeError(
            f"circulant structure needs p to be a multiple of n, got p={config.p}")
    nu, mu = config.nu, config.mu
    if part == "learned":
        etas = range(0, nu)
    elif part == "unlearned":
        etas = range(nu, mu)
    else:
        raise ConfigError(f"part must be 'learned' or 'unlearned', got {part!r}")

    t = np.arange(1, config.p_total + 1, dtype=float)
    eigenvalues = np.zeros(n)
    for eta in etas:
        eigenvalues += t[n * eta:n * (eta + 1)] ** (-zeta)
    return eigenvalues


def xi_identity_check(n: int, p: int, alpha: float) -> float:
    """Max deviation in the cross-term identity for the unlearned-mode response.

    Xi maps unlearned-mode content into the learned-mode fit through the
    weighted normal equations. Its Gram matrix admits a second expression in
    terms of the unlearned block alone; this returns the elementwise gap
    between the two, which should sit at rounding level.
    """
    if not 1 <= p < n:
        raise ConfigError(f"identity needs 1 <= p < n, got p={p}, n={n}")
    _check_dense_size(n, n)
    t = np.arange(1, n + 1, dtype=float)
    psi = rff_entries(n, n)
    psi_learned, psi_rest = psi[:, :p], psi[:, p:]

    lam_2a_inv = np.diag(t ** (-2.0 * alpha))
    lam_2a = np.diag(t ** (2.0 * alpha))
    lam_4a = np.diag(t ** (4.0 * alpha))

    gram = psi_learned.conj().T @ lam_2a_inv @ psi_learned
    xi = np.linalg.solve(gram, psi_learned.conj().T @ lam_2a_inv @ psi_rest)
    lhs = xi.conj().T @ xi

    x = psi_rest.conj().T @ lam_2a @ psi_rest
    x_inv = np.linalg.inv(x)
    rhs = (n * x_inv.conj().T @ (psi_rest.conj().T @ lam_4a @ psi_rest) @ x_inv
           - np.eye(n - p))
    return float(np.max(np.abs(lhs - rhs)))
