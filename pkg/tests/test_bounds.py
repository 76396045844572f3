"""Width-selection bounds: frozen constants, branch logic, selector consistency."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fourierreg.bounds import (BoundInputs, _two_power_bound,
                               bound_general_feature, bound_noisy_training)
from fourierreg.model import (ConfigError, ExperimentConfig,
                              build_diagonal_decay_matrix)
from fourierreg.simulate import simulate_generalization


def make_config(n=16, mu=2, p=16, **kw):
    return ExperimentConfig(n=n, p_total=mu * n, p=p, **kw)


# -----------------------------------------------------------------------------
# frozen constants
# -----------------------------------------------------------------------------

def test_inputs_hand_values():
    config = make_config(n=4, mu=2, p=4, alpha=0.5, beta=1.0, gamma=0.0, sigma=2.0)
    inputs = BoundInputs.from_config(config)
    # sigma^2 * (1 + 1/2 + 1/3 + 1/4), uniform prior 1/8 per mode, t^-2 weights
    assert abs(inputs.e_delta_weighted - 4.0 * (1 + 0.5 + 1 / 3 + 0.25)) < 1e-14
    assert abs(inputs.e_theta_weighted
               - (1 + 0.25 + 1 / 9 + 1 / 16) / 8.0) < 1e-14
    assert inputs.alpha_hat == 0.5  # p == n keeps the raw exponent


def test_effective_exponent_shifts_above_threshold():
    below = BoundInputs.from_config(make_config(p=8, alpha=0.3))
    above = BoundInputs.from_config(make_config(p=32, alpha=0.3))
    assert below.alpha_hat == 0.3
    assert abs(above.alpha_hat - 0.8) < 1e-15


@settings(max_examples=40, deadline=None)
@given(beta=st.floats(0.0, 2.0), gamma=st.floats(0.0, 2.0),
       p=st.integers(1, 16))
def test_coefficient_term_bounded_by_total_mass(beta, gamma, p):
    # truncation and the extra nonpositive-power weights only shrink the sum
    config = make_config(n=16, mu=1, p=p, beta=beta, gamma=gamma, sigma=0.5)
    inputs = BoundInputs.from_config(config)
    assert inputs.e_theta_weighted <= 1.0 + 1e-12


# -----------------------------------------------------------------------------
# noisy-training selector
# -----------------------------------------------------------------------------

def test_nonnegative_exponent_is_monotone():
    result = bound_noisy_training(make_config(p=32, alpha=0.2, beta=0.5,
                                              gamma=0.5, sigma=0.7))
    assert result.monotone and result.p_star == 32
    grid = [result.bound(q) for q in range(1, 33)]
    assert all(a >= b - 1e-12 for a, b in zip(grid, grid[1:]))


def test_noiseless_data_is_monotone_even_with_negative_exponent():
    result = bound_noisy_training(make_config(p=8, alpha=-0.8, beta=0.5,
                                              gamma=0.5, sigma=0.0))
    assert result.monotone and result.p_star == 32
    assert result.inputs.e_delta_weighted == 0.0


def test_interior_selector_matches_grid_argmin():
    config = ExperimentConfig(n=16, p_total=128, p=32, alpha=-1.0, beta=0.5,
                              gamma=0.4, sigma=0.7)
    result = bound_noisy_training(config)
    assert not result.monotone
    grid = [result.bound(q) for q in range(1, 129)]
    assert abs((int(np.argmin(grid)) + 1) - result.p_star) <= 1


def test_balanced_value_is_common_term_value():
    config = ExperimentConfig(n=16, p_total=128, p=32, alpha=-1.0, beta=0.5,
                              gamma=0.4, sigma=0.7)
    result = bound_noisy_training(config)
    inputs = result.inputs
    exponent = 1.0 / (2.0 * (config.beta - inputs.alpha_hat))
    p_balance = (inputs.e_theta_weighted / inputs.e_delta_weighted) ** exponent
    assert abs(result.bound(p_balance) / 2.0 - result.balanced_value) \
        <= 1e-12 * result.balanced_value


def test_degenerate_balance_raises():
    with pytest.raises(ConfigError, match="alpha_hat"):
        bound_noisy_training(make_config(p=8, alpha=-0.7, beta=-0.7, sigma=0.5))


def test_growing_terms_pick_smallest_width():
    result = bound_noisy_training(ExperimentConfig(n=16, p_total=64, p=32,
                                                   alpha=-1.0, beta=0.0,
                                                   gamma=0.5, sigma=0.7))
    assert result.p_star == 1 and not result.monotone
    assert result.bound(1) <= result.bound(2)


def test_rounding_prefers_smaller_bound_value():
    config = ExperimentConfig(n=16, p_total=128, p=32, alpha=-1.0, beta=0.5,
                              gamma=0.4, sigma=0.7)
    result = bound_noisy_training(config)
    floor_p = result.p_star
    assert result.bound(floor_p) <= min(result.bound(max(1, floor_p - 1)),
                                        result.bound(min(128, floor_p + 1))) + 1e-15


# -----------------------------------------------------------------------------
# general-feature selector
# -----------------------------------------------------------------------------

def test_flat_singular_decay_matches_noise_exponent_zero():
    # zeta == alpha: noise term flat, bound never increases
    result = bound_general_feature(make_config(p=16, alpha=0.5, beta=0.3,
                                               gamma=0.5, sigma=0.5), zeta=0.5)
    assert result.monotone and result.p_star == 32


def test_flat_case_takes_precedence_over_collision():
    # zeta == alpha with beta == 0 also zeroes the balance exponent; no raise
    result = bound_general_feature(make_config(p=16, alpha=0.5, beta=0.0,
                                               gamma=0.5, sigma=0.5), zeta=0.5)
    assert result.monotone and result.p_star == 32


def test_general_collision_raises():
    with pytest.raises(ConfigError, match="zeta"):
        bound_general_feature(make_config(p=16, alpha=0.5, beta=0.3,
                                          gamma=0.5, sigma=0.5), zeta=0.2)


def test_negative_decay_rejected():
    with pytest.raises(ConfigError, match="zeta"):
        bound_general_feature(make_config(p=16, sigma=0.5), zeta=-0.1)


def test_general_interior_selector_and_local_minimum():
    config = ExperimentConfig(n=32, p_total=32, p=32, alpha=0.0, beta=0.5,
                              gamma=1.0, sigma=0.02)
    result = bound_general_feature(config, zeta=1.0)
    assert not result.monotone
    grid = [result.bound(q) for q in range(1, 33)]
    assert abs((int(np.argmin(grid)) + 1) - result.p_star) <= 1
    # continuous stationary point sits between rising flanks
    exponent = 1.0 / (2.0 * (1.0 + config.beta - config.alpha))
    p_cont = (config.beta * result.inputs.e_theta_weighted
              / (1.0 * result.inputs.e_delta_weighted)) ** exponent
    assert result.bound(0.9 * p_cont) > result.bound(p_cont)
    assert result.bound(1.1 * p_cont) > result.bound(p_cont)


def test_general_growth_without_shrinkage_picks_one():
    result = bound_general_feature(make_config(p=16, alpha=0.2, beta=0.0,
                                               gamma=0.5, sigma=0.5), zeta=0.8)
    assert result.p_star == 1 and not result.monotone


def test_general_smoothing_with_weight_decay_is_monotone():
    result = bound_general_feature(make_config(p=16, alpha=1.0, beta=0.4,
                                               gamma=0.5, sigma=0.5), zeta=0.3)
    assert result.monotone and result.p_star == 32


def test_general_endpoint_comparison():
    result = bound_general_feature(make_config(p=16, alpha=1.5, beta=-0.5,
                                               gamma=0.5, sigma=0.5), zeta=0.3)
    assert result.p_star in (1, 32) and not result.monotone
    assert result.bound_at_p_star == min(result.bound(1), result.bound(32))


def test_symmetric_exponents_minimize_at_one():
    # unit constants with growth p^2 against decay p^-2: stationary point at 1
    bound = _two_power_bound(1.0, 2.0, 1.0, -2.0)
    grid = np.geomspace(0.1, 10.0, 401)
    values = [bound(q) for q in grid]
    assert abs(grid[int(np.argmin(values))] - 1.0) < 0.02
    for q in (0.3, 0.7, 2.5):
        assert abs(bound(q) - bound(1.0 / q)) < 1e-12 * bound(q)


def test_diagonal_features_dominated_within_modest_constant():
    # singular decay 1, 64 modes, light noise: measured error at the selected
    # width stays within 3x of the bare bound value
    config = ExperimentConfig(n=64, p_total=64, p=64, alpha=0.5, beta=0.5,
                              gamma=1.0, sigma=0.1, seed=6)
    result = bound_general_feature(config, zeta=1.0)
    assert result.p_star == 4
    psi = build_diagonal_decay_matrix(64, 1.0)
    report = simulate_generalization(config.replace(p=result.p_star),
                                     n_theta=8, n_noise=300, psi=psi)
    assert report.mean_error <= 3.0 * result.bound_at_p_star


def test_diagonal_features_stay_under_bound_at_selected_width():
    # unweighted data side, singular values t_k^-1: simulate at the selected
    # width and confirm the bound dominates the measured error outright
    config = ExperimentConfig(n=32, p_total=32, p=32, alpha=0.0, beta=0.5,
                              gamma=1.0, sigma=0.02, seed=4)
    result = bound_general_feature(config, zeta=1.0)
    psi = build_diagonal_decay_matrix(32, 1.0)
    report = simulate_generalization(config.replace(p=result.p_star),
                                     n_theta=8, n_noise=300, psi=psi)
    assert report.mean_error <= result.bound_at_p_star
