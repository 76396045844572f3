"""Weighted least-squares estimator over the first p feature columns."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import ConfigError, FeatureMatrix, WeightScheme

# Relative singular value cutoff for the pseudoinverse.
SV_CUTOFF = 1e-12


@dataclass(frozen=True)
class EstimationResult:
    theta_hat: np.ndarray   # length p_total; entries past p are exactly zero
    residual_norm: float    # data-weighted residual of the fit
    rank_used: int          # singular values kept by the pseudoinverse


def _weighted_design(psi: FeatureMatrix, weights: WeightScheme, p: int) -> np.ndarray:
    """Both-sided weighted design: diag(t^-alpha) @ psi[:, :p] @ diag(t^-beta)."""
    n = psi.shape[0]
    lam_a = weights.powers(-weights.alpha, n)
    lam_b = weights.powers(-weights.beta, p)
    return lam_a[:, None] * psi.entries[:, :p] * lam_b[None, :]


def _truncated_svd(matrix: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, int]:
    u, s, vh = np.linalg.svd(matrix, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return u, s, vh, 0
    rank = int(np.count_nonzero(s > SV_CUTOFF * s[0]))
    return u, s, vh, rank


def weighted_ls_solve(psi: FeatureMatrix, weights: WeightScheme, y_delta: np.ndarray,
                      p: int) -> EstimationResult:
    """Minimum-norm weighted least-squares fit using the first p columns of psi.

    Solves min ||w|| over minimizers of ||diag(t^-alpha) (psi[:, :p] diag(t^-beta) w - y)||
    and returns theta_hat = diag(t^-beta) w, zero-padded to the full width.
    """
    n, width = psi.shape
    if not 1 <= p <= width:
        raise ConfigError(f"p must satisfy 1 <= p <= {width}, got {p}")
    if y_delta.shape != (n,):
        raise ConfigError(f"y has shape {y_delta.shape}, expected ({n},)")
    if not np.all(np.isfinite(y_delta)):
        raise ConfigError("y contains non-finite entries")

    lam_a = weights.powers(-weights.alpha, n)
    lam_b = weights.powers(-weights.beta, p)
    phi = _weighted_design(psi, weights, p)

    u, s, vh, rank = _truncated_svd(phi)
    y_weighted = lam_a * y_delta
    coeffs = (u[:, :rank].conj().T @ y_weighted) / s[:rank]
    w_hat = vh[:rank].conj().T @ coeffs

    theta_hat = np.zeros(width, dtype=complex)
    theta_hat[:p] = lam_b * w_hat

    residual = lam_a * (psi.entries[:, :p] @ theta_hat[:p] - y_delta)
    return EstimationResult(theta_hat=theta_hat,
                            residual_norm=float(np.linalg.norm(residual)),
                            rank_used=rank)


def solve_operator(psi: FeatureMatrix, weights: WeightScheme, p: int) -> np.ndarray:
    """p x n map taking raw observations y directly to theta_hat[:p].

    Same fit as weighted_ls_solve; precomputing it amortizes the SVD across
    many right-hand sides.
    """
    n, width = psi.shape
    if not 1 <= p <= width:
        raise ConfigError(f"p must satisfy 1 <= p <= {width}, got {p}")
    lam_a = weights.powers(-weights.alpha, n)
    lam_b = weights.powers(-weights.beta, p)
    u, s, vh, rank = _truncated_svd(_weighted_design(psi, weights, p))
    # diag(t^-beta) @ pinv(phi) @ diag(t^-alpha)
    pinv = vh[:rank].conj().T @ (u[:, :rank].conj().T / s[:rank, None])
    return lam_b[:, None] * pinv * lam_a[None, :]


def empirical_sq_error(theta_hat: np.ndarray, theta: np.ndarray) -> float:
    """Squared Euclidean distance between estimate and truth."""
    if theta_hat.shape != theta.shape:
        raise ConfigError(f"shape mismatch: {theta_hat.shape} vs {theta.shape}")
    diff = theta_hat - theta
    return float(np.real(np.vdot(diff, diff)))
