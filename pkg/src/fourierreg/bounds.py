"""Upper bounds on the noisy-training error and the width that minimizes them.

Both bounds have the form E_delta * p^a + E_theta * p^b with constants frozen
from the configuration; the hidden prefactors are reported as 1. The returned
p_star is the continuous stationary point rounded by evaluating the bound at
floor and ceil and keeping the smaller value (ties go to the smaller p).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .model import ConfigError, CoefficientPrior, ExperimentConfig


@dataclass(frozen=True)
class BoundInputs:
    """Constants entering the bounds, frozen at the configured width.

    e_delta_weighted -- expected squared data-weighted noise norm,
                        sigma^2 * sum over k < n of t_k^(-2*alpha)
    e_theta_weighted -- expected squared parameter-weighted coefficient norm
                        over the learned modes, c_gamma * sum over k < p of
                        t_k^(-2*beta-2*gamma); at most 1 when beta >= 0
    alpha_hat        -- effective data exponent: alpha + 1/2 above the
                        interpolation point, alpha at or below it
    zeta             -- singular decay exponent (general feature path only)
    """

    e_delta_weighted: float
    e_theta_weighted: float
    alpha_hat: float
    zeta: float | None = None

    @classmethod
    def from_config(cls, config: ExperimentConfig,
                    zeta: float | None = None) -> "BoundInputs":
        t = np.arange(1, config.p_total + 1, dtype=float)
        e_delta = config.sigma ** 2 * math.fsum(t[:config.n] ** (-2.0 * config.alpha))
        prior = CoefficientPrior.from_config(config)
        e_theta = math.fsum(prior.variances()[:config.p]
                            * t[:config.p] ** (-2.0 * config.beta))
        alpha_hat = config.alpha + 0.5 if config.p > config.n else config.alpha
        return cls(e_delta_weighted=e_delta, e_theta_weighted=e_theta,
                   alpha_hat=alpha_hat, zeta=zeta)


@dataclass(frozen=True)
class BoundResult:
    p_star: int
    bound: Callable[[float], float] = field(compare=False)
    monotone: bool            # bound never increases up to the width cap
    bound_at_p_star: float
    inputs: BoundInputs
    balanced_value: float | None = None  # bound value at the exact balance point


def _two_power_bound(e_delta: float, exp_delta: float, e_theta: float,
                     exp_theta: float) -> Callable[[float], float]:
    def bound(p: float) -> float:
        if p <= 0:
            raise ConfigError(f"width must be positive, got {p}")
        return e_delta * p ** exp_delta + e_theta * p ** exp_theta
    return bound


def _round_to_grid(p_cont: float, bound: Callable[[float], float],
                   p_cap: int) -> int:
    p_cont = min(max(p_cont, 1.0), float(p_cap))
    lo = int(math.floor(p_cont))
    hi = min(int(math.ceil(p_cont)), p_cap)
    if lo == hi:
        return lo
    return lo if bound(lo) <= bound(hi) else hi


def bound_noisy_training(config: ExperimentConfig) -> BoundResult:
    """Error bound E_delta * p^(-2*alpha_hat) + E_theta * p^(-2*beta).

    alpha_hat >= 0 makes the bound nonincreasing, so p_star is the width cap.
    Otherwise the noise term grows with p and the stationary point balances it
    against the parameter term; beta == alpha_hat leaves that balance undefined
    and raises.
    """
    inputs = BoundInputs.from_config(config)
    a_hat, beta, p_cap = inputs.alpha_hat, config.beta, config.p_total
    e_delta, e_theta = inputs.e_delta_weighted, inputs.e_theta_weighted
    bound = _two_power_bound(e_delta, -2.0 * a_hat, e_theta, -2.0 * beta)

    if a_hat >= 0 or e_delta == 0.0:
        p_star, monotone, balanced = p_cap, True, None
    elif beta == a_hat:
        raise ConfigError(
            f"beta == alpha_hat == {beta}: the balance exponent 1/(2*(beta - "
            f"alpha_hat)) is undefined, no width selector exists")
    elif beta <= 0:
        # Both terms nondecreasing: smallest width wins.
        p_star, monotone, balanced = 1, False, None
    else:
        p_cont = (-beta * e_theta / (a_hat * e_delta)) ** (1.0 / (2.0 * (beta - a_hat)))
        p_star = _round_to_grid(p_cont, bound, p_cap)
        monotone = False
        balanced = (e_theta ** (-a_hat / (beta - a_hat))
                    * e_delta ** (beta / (beta - a_hat)))
    return BoundResult(p_star=p_star, bound=bound, monotone=monotone,
                       bound_at_p_star=bound(p_star), inputs=inputs,
                       balanced_value=balanced)


def bound_general_feature(config: ExperimentConfig, zeta: float) -> BoundResult:
    """Error bound E_delta * p^(2*(zeta-alpha)) + E_theta * p^(-2*beta).

    For feature matrices whose singular values decay like t_k^-zeta. zeta ==
    alpha makes the noise term flat and the bound nonincreasing; otherwise
    zeta + beta - alpha == 0 leaves the balance undefined and raises.
    """
    if zeta < 0:
        raise ConfigError(f"zeta must be >= 0, got {zeta}")
    inputs = BoundInputs.from_config(config, zeta=zeta)
    alpha, beta, p_cap = config.alpha, config.beta, config.p_total
    e_delta, e_theta = inputs.e_delta_weighted, inputs.e_theta_weighted
    growth = 2.0 * (zeta - alpha)
    bound = _two_power_bound(e_delta, growth, e_theta, -2.0 * beta)

    if zeta == alpha or e_delta == 0.0:
        p_star, monotone, balanced = p_cap, True, None
    elif zeta + beta - alpha == 0:
        raise ConfigError(
            f"zeta + beta - alpha == 0 (zeta={zeta}, beta={beta}, alpha={alpha}): "
            f"the balance exponent is undefined, no width selector exists")
    elif zeta > alpha and beta > 0:
        p_cont = (beta * e_theta / ((zeta - alpha) * e_delta)
                  ) ** (1.0 / (2.0 * (zeta + beta - alpha)))
        p_star = _round_to_grid(p_cont, bound, p_cap)
        monotone = False
        balanced = (e_theta ** ((zeta - alpha) / (zeta + beta - alpha))
                    * e_delta ** (beta / (zeta + beta - alpha)))
    elif zeta > alpha:
        # Noise term grows, parameter term does not shrink: smallest width wins.
        p_star, monotone, balanced = 1, False, None
    elif beta >= 0:
        # zeta < alpha: both terms nonincreasing.
        p_star, monotone, balanced = p_cap, True, None
    else:
        # zeta < alpha with beta < 0: interior maximum, minimum at an endpoint.
        p_star = 1 if bound(1) <= bound(p_cap) else p_cap
        monotone, balanced = False, None
    return BoundResult(p_star=p_star, bound=bound, monotone=monotone,
                       bound_at_p_star=bound(p_star), inputs=inputs,
                       balanced_value=balanced)
