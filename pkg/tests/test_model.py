"""Problem-setup invariants: configs, feature matrices, weights, prior, sampling."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fourierreg.model import (CoefficientPrior, ConfigError, ExperimentConfig,
                              WeightScheme, build_diagonal_decay_matrix,
                              build_rff_matrix, replicate_stream, rff_entries,
                              sample_noise, sample_theta, synthesize_data)


def make_config(n=8, mu=2, p=8, **kw):
    return ExperimentConfig(n=n, p_total=mu * n, p=p, **kw)


# -----------------------------------------------------------------------------
# configuration validation
# -----------------------------------------------------------------------------

def test_config_regimes():
    assert make_config(p=4).regime == "under"
    assert make_config(p=8).regime == "determined"
    assert make_config(p=16).regime == "over"
    assert make_config(p=16).nu == 2
    assert make_config(mu=3).mu == 3


@pytest.mark.parametrize("kw", [
    dict(n=0, p_total=4, p=1),           # empty grid
    dict(n=4, p_total=6, p=4),           # width not a multiple of n
    dict(n=4, p_total=8, p=0),           # p below range
    dict(n=4, p_total=8, p=9),           # p above width
    dict(n=4, p_total=8, p=6),           # p > n but not a multiple of n
    dict(n=4, p_total=8, p=4, gamma=-0.1),
    dict(n=4, p_total=8, p=4, sigma=-1.0),
])
def test_config_rejects(kw):
    with pytest.raises(ConfigError):
        ExperimentConfig(**kw)


def test_config_replace():
    base = make_config(p=4, alpha=0.5)
    other = base.replace(p=16, sigma=1.0)
    assert other.p == 16 and other.sigma == 1.0 and other.alpha == 0.5
    assert base.p == 4  # original untouched
    with pytest.raises(ConfigError):
        base.replace(p=100)


def test_nu_requires_multiple():
    from fourierreg.model import RegimeError
    with pytest.raises(RegimeError):
        _ = make_config(p=5).nu


# -----------------------------------------------------------------------------
# feature matrices
# -----------------------------------------------------------------------------

@pytest.mark.parametrize("n", [1, 2, 3, 8, 16, 64])
def test_rff_square_block_unitary(n):
    psi = rff_entries(n, n)
    gram = psi.conj().T @ psi / n
    assert np.max(np.abs(gram - np.eye(n))) < 1e-12


def test_rff_columns_bit_exact_periodic():
    psi = rff_entries(8, 32)
    for k in range(32):
        assert np.array_equal(psi[:, k], psi[:, k % 8])


def test_rff_entry_values():
    n = 6
    psi = rff_entries(n, n)
    omega = np.exp(2j * np.pi / n)
    assert abs(psi[1, 1] - omega) < 1e-15
    assert abs(psi[2, 3] - omega ** 6) < 1e-14
    assert np.max(np.abs(np.abs(psi) - 1.0)) < 1e-15


@settings(max_examples=30, deadline=None)
@given(n=st.integers(1, 48), extra=st.integers(0, 3))
def test_rff_property_unitary_and_periodic(n, extra):
    width = n * (1 + extra)
    psi = rff_entries(n, width)
    assert np.max(np.abs(psi[:, :n].conj().T @ psi[:, :n] / n - np.eye(n))) < 1e-10
    if width > n:
        assert np.array_equal(psi[:, n:2 * n], psi[:, :n])


def test_build_rff_matrix_from_config():
    config = make_config(n=4, mu=3, p=4)
    psi = build_rff_matrix(config)
    assert psi.shape == (4, 12)
    assert psi.kind == "rff"
    assert abs(psi.omega - np.exp(2j * np.pi / 4)) < 1e-15


def test_diagonal_decay_matrix():
    mat = build_diagonal_decay_matrix(5, 1.5)
    expected = np.diag(np.arange(1, 6, dtype=float) ** -1.5)
    assert np.allclose(mat.entries, expected)
    assert mat.entries.dtype == complex
    assert mat.zeta == 1.5
    with pytest.raises(ConfigError):
        build_diagonal_decay_matrix(0, 1.0)
    with pytest.raises(ConfigError):
        build_diagonal_decay_matrix(4, -0.5)


# -----------------------------------------------------------------------------
# weights and prior
# -----------------------------------------------------------------------------

def test_weight_powers():
    w = WeightScheme(p_total=6, alpha=0.5, beta=0.0)
    assert np.allclose(w.t, [1, 2, 3, 4, 5, 6])
    assert np.allclose(w.powers(-2.0, 3), [1.0, 0.25, 1.0 / 9.0])
    assert w.powers(1.0, 0).size == 0
    with pytest.raises(ConfigError):
        w.powers(1.0, 7)


@pytest.mark.parametrize("gamma,width", [(0.0, 7), (0.5, 16), (1.3, 32)])
def test_prior_normalization(gamma, width):
    prior = CoefficientPrior(gamma=gamma, p_total=width)
    var = prior.variances()
    assert abs(math.fsum(var) - 1.0) < 1e-14
    assert np.all(var > 0)
    if gamma == 0.0:
        assert np.allclose(var, 1.0 / width)


@settings(max_examples=25, deadline=None)
@given(gamma=st.floats(0.0, 3.0), width=st.integers(1, 200))
def test_prior_normalization_property(gamma, width):
    prior = CoefficientPrior(gamma=gamma, p_total=width)
    assert abs(math.fsum(prior.variances()) - 1.0) < 1e-12


# -----------------------------------------------------------------------------
# sampling
# -----------------------------------------------------------------------------

def test_replicate_stream_determinism():
    a = replicate_stream(42, 3).standard_normal(5)
    b = replicate_stream(42, 3).standard_normal(5)
    c = replicate_stream(42, 4).standard_normal(5)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_sample_theta_moments():
    prior = CoefficientPrior(gamma=0.7, p_total=12)
    rng = replicate_stream(0, 0)
    draws = np.array([sample_theta(prior, rng) for _ in range(4000)])
    # unit expected squared norm, split evenly between real and imaginary parts
    sq_norms = np.sum(np.abs(draws) ** 2, axis=1)
    assert abs(sq_norms.mean() - 1.0) < 0.05
    per_mode = np.mean(np.abs(draws) ** 2, axis=0)
    assert np.max(np.abs(per_mode / prior.variances() - 1.0)) < 0.15
    imbalance = np.mean(draws.real ** 2) / np.mean(draws.imag ** 2)
    assert abs(imbalance - 1.0) < 0.1


def test_sample_noise():
    assert np.array_equal(sample_noise(5, 0.0, replicate_stream(1, 0)), np.zeros(5))
    draws = sample_noise(200000, 0.5, replicate_stream(1, 0))
    assert abs(draws.var() - 0.25) < 0.01
    assert abs(draws.mean()) < 0.01
    with pytest.raises(ConfigError):
        sample_noise(5, -1.0, replicate_stream(1, 0))


def test_synthesize_data():
    config = make_config(n=4, mu=2, p=4)
    psi = build_rff_matrix(config)
    theta = np.arange(8, dtype=complex)
    delta = np.ones(4)
    y = synthesize_data(psi, theta, delta)
    assert np.allclose(y, psi.entries @ theta + delta)
    with pytest.raises(ConfigError):
        synthesize_data(psi, theta[:5], delta)
    with pytest.raises(ConfigError):
        synthesize_data(psi, theta, delta[:3])
