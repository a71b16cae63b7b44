"""Closed-form composition and subsampling calculators.

All logarithms are natural. Any composed delta that reaches 1 raises
``NumericDomainError``; deltas are never clamped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from scipy.optimize import bisect

from .accountant import epsilon_group
from .errors import NumericDomainError

__all__ = [
    "PrivacyParams",
    "compose_basic",
    "compose_heterogeneous",
    "compose_advanced",
    "per_step_budget",
    "subsample_amplify",
    "poisson_base_epsilon",
    "poisson_amplify",
    "optimal_sampling_ratio",
    "optimal_sampling_prob",
    "compose_paramwise",
    "adaptive_allocate",
    "adaptive_epsilon_bound",
    "ADAPTIVE_MODES",
]


@dataclass(frozen=True)
class PrivacyParams:
    epsilon: float
    delta: float = 0.0

    def __post_init__(self):
        if not self.epsilon >= 0:
            raise ValueError(f"epsilon must be >= 0, got {self.epsilon}")
        if not 0 <= self.delta < 1:
            raise ValueError(f"delta must lie in [0, 1), got {self.delta}")

    def to_dict(self) -> dict:
        return {"epsilon": self.epsilon, "delta": self.delta}


def _check_steps(T) -> int:
    if isinstance(T, bool) or int(T) != T or T < 1:
        raise ValueError(f"number of steps T must be a positive integer, got {T!r}")
    return int(T)


def _check_open_unit(name: str, x: float) -> float:
    if not 0 < x < 1:
        raise ValueError(f"{name} must lie in (0, 1), got {x}")
    return float(x)


def _check_q(q: float) -> float:
    if not 0 < q <= 1:
        raise ValueError(f"sampling ratio q must lie in (0, 1], got {q}")
    return float(q)


def _composed(epsilon: float, delta: float) -> PrivacyParams:
    if delta >= 1:
        raise NumericDomainError(f"composed delta {delta:.6g} is not below 1")
    return PrivacyParams(epsilon, delta)


def _advanced_epsilon(eps: float, T: int, delta_prime: float) -> float:
    if eps == 0:
        return 0.0
    return math.sqrt(2 * T * -math.log(delta_prime)) * eps + T * eps * math.expm1(eps)


def compose_basic(p: PrivacyParams, T: int) -> PrivacyParams:
    """T-fold composition with linear growth: ``(T eps, T delta)``."""
    T = _check_steps(T)
    return _composed(T * p.epsilon, T * p.delta)


def compose_heterogeneous(eps_list: Sequence[float], delta_list: Sequence[float]) -> PrivacyParams:
    """Composition of steps with differing parameters: sums of both."""
    if len(eps_list) != len(delta_list):
        raise ValueError(
            f"eps_list and delta_list differ in length ({len(eps_list)} vs {len(delta_list)})"
        )
    for e, d in zip(eps_list, delta_list):
        PrivacyParams(e, d)
    return _composed(math.fsum(eps_list), math.fsum(delta_list))


def compose_advanced(p: PrivacyParams, T: int, delta_prime: float) -> PrivacyParams:
    """Advanced composition.

    ``eps' = sqrt(2T ln(1/delta')) eps + T eps (e^eps - 1)`` and
    ``delta'' = T delta + delta'``.
    """
    T = _check_steps(T)
    delta_prime = _check_open_unit("delta_prime", delta_prime)
    return _composed(_advanced_epsilon(p.epsilon, T, delta_prime), T * p.delta + delta_prime)


def per_step_budget(epsilon_total: float, T: int, delta_prime: float) -> float:
    """Per-step epsilon allotted from a total budget over ``T`` steps."""
    T = _check_steps(T)
    delta_prime = _check_open_unit("delta_prime", delta_prime)
    if not epsilon_total >= 0:
        raise ValueError(f"epsilon_total must be >= 0, got {epsilon_total}")
    denom = math.sqrt(2 * T * -math.log(delta_prime)) + T * math.expm1(epsilon_total / T)
    return epsilon_total / denom


def subsample_amplify(p: PrivacyParams, q: float) -> PrivacyParams:
    """Amplification by sampling a fraction ``q`` of the data per step."""
    q = _check_q(q)
    return PrivacyParams(math.log1p(q * math.expm1(p.epsilon)), q * p.delta)


def poisson_base_epsilon(delta: float, q: float) -> float:
    """Root ``eps0`` of ``q (1 - e^{-eps0}) = delta``, by bisection on [0, 1400].

    The left side increases strictly from 0 towards ``q``, so a root exists
    only for ``delta < q``.
    """
    q = _check_q(q)
    if not 0 <= delta < 1:
        raise ValueError(f"delta must lie in [0, 1), got {delta}")
    if delta >= q:
        raise NumericDomainError(
            f"no finite ε₀ exists: delta={delta:g} must be below the sampling probability q={q:g}"
        )
    if delta == 0:
        return 0.0
    return bisect(lambda e0: q * -math.expm1(-e0) - delta, 0.0, 1400.0, xtol=1e-13, maxiter=200)


def poisson_amplify(p: PrivacyParams, q: float) -> float:
    """Epsilon of Poisson-subsampled shuffling: ``ln((1-q) + q e^{eps0})``.

    ``p.epsilon`` does not enter the defining equation; only ``p.delta``
    and ``q`` determine the result.
    """
    e0 = poisson_base_epsilon(p.delta, q)
    return math.log1p(q * math.expm1(e0))


def optimal_sampling_ratio(epsilon: float, T: int) -> float:
    """``min(1, (e^{eps/T} - 1) / (e^eps - 1))``."""
    T = _check_steps(T)
    if not epsilon > 0:
        raise ValueError(f"epsilon must be > 0, got {epsilon}")
    return min(1.0, math.expm1(epsilon / T) / math.expm1(epsilon))


def optimal_sampling_prob(epsilon_prime: float, epsilon: float) -> float:
    """Sampling probability that amplifies ``epsilon`` down to ``epsilon_prime``."""
    if not epsilon > 0:
        raise ValueError(f"epsilon must be > 0, got {epsilon}")
    if not epsilon_prime >= 0:
        raise ValueError(f"epsilon_prime must be >= 0, got {epsilon_prime}")
    if epsilon_prime > epsilon:
        raise ValueError(
            f"epsilon_prime={epsilon_prime} exceeds epsilon={epsilon}; subsampling cannot increase epsilon"
        )
    return math.expm1(epsilon_prime) / math.expm1(epsilon)


def compose_paramwise(
    eps_list: Sequence[float], delta_list: Sequence[float], T: int, delta: float
) -> PrivacyParams:
    """Compose ``K`` parameter groups over ``T`` steps.

    ``eps_total = sqrt(2T ln(1/delta)) * sum(eps) + T * sum(eps) * (e^{max eps} - 1)``
    and ``delta_total = 1 - (1 - delta) (1 - sum(delta_i))^T``.
    """
    T = _check_steps(T)
    delta = _check_open_unit("delta", delta)
    if len(eps_list) != len(delta_list):
        raise ValueError(
            f"eps_list and delta_list differ in length ({len(eps_list)} vs {len(delta_list)})"
        )
    if not eps_list:
        raise ValueError("at least one parameter group is required")
    for e, d in zip(eps_list, delta_list):
        PrivacyParams(e, d)
    s = math.fsum(eps_list)
    sd = math.fsum(delta_list)
    if sd >= 1:
        raise NumericDomainError(f"sum of group deltas {sd:.6g} is not below 1")
    eps_total = math.sqrt(2 * T * -math.log(delta)) * s + T * s * math.expm1(max(eps_list))
    if sd == 0:
        delta_total = delta
    else:
        # 1 - (1-delta)(1-sd)^T, in log space so tiny deltas keep their digits
        delta_total = -math.expm1(math.log1p(-delta) + T * math.log1p(-sd))
    return _composed(eps_total, delta_total)


def adaptive_allocate(
    epsilon_total: float, epsilon_spent: float, t: int, T: int, delta_star: float
) -> float:
    """Budget for step ``t`` given what has been spent so far."""
    T = _check_steps(T)
    delta_star = _check_open_unit("delta_star", delta_star)
    if isinstance(t, bool) or int(t) != t or t < 0:
        raise ValueError(f"step index t must be a nonnegative integer, got {t!r}")
    if t >= T:
        raise ValueError(f"step index t={t} must be below T={T}")
    if not 0 <= epsilon_spent <= epsilon_total:
        raise ValueError(
            f"epsilon_spent={epsilon_spent} must lie in [0, epsilon_total={epsilon_total}]"
        )
    return per_step_budget(epsilon_total - epsilon_spent, T - t, delta_star)


ADAPTIVE_MODES = ("adaptive_max", "adaptive_two_sided", "sampled_adaptive")

_ADAPTIVE_PARAMS = {
    "adaptive_max": {"max_eps", "max_delta", "T", "delta_star"},
    "adaptive_two_sided": {"C_max", "beta_max", "d", "T", "delta"},
    "sampled_adaptive": {"max_eps", "max_delta", "q", "T", "delta_star"},
}


def _two_sided(C_max, beta_max, d, T, delta) -> PrivacyParams:
    # The per-step term is squared here, unlike the e^eps - 1 form above.
    T = _check_steps(T)
    delta = _check_open_unit("delta", delta)
    single = epsilon_group(d, beta_max, C_max)
    root = math.sqrt(2 * T * -math.log(delta))
    eps1 = root * single.eps1 + T * single.eps1**2
    eps2 = root * single.eps2 + T * single.eps2**2
    return PrivacyParams(min(eps1, eps2), delta)


def adaptive_epsilon_bound(mode: str, **params) -> PrivacyParams:
    """Whole-run guarantee for the adaptive variants.

    ``adaptive_max(max_eps, max_delta, T, delta_star)``
        advanced composition driven by the worst per-step parameters.
    ``adaptive_two_sided(C_max, beta_max, d, T, delta)``
        min of the two run-level bounds built from the largest clip value and
        block size.
    ``sampled_adaptive(max_eps, max_delta, q, T, delta_star)``
        as ``adaptive_max`` with the per-step epsilon replaced by its
        subsampled value and ``T q max_delta + delta_star``.
    """
    if mode not in _ADAPTIVE_PARAMS:
        raise ValueError(f"unknown adaptive mode {mode!r}; expected one of {ADAPTIVE_MODES}")
    expected = _ADAPTIVE_PARAMS[mode]
    if set(params) != expected:
        missing = sorted(expected - set(params))
        extra = sorted(set(params) - expected)
        raise ValueError(f"{mode} parameters malformed: missing {missing}, unexpected {extra}")

    if mode == "adaptive_two_sided":
        return _two_sided(**params)

    T = _check_steps(params["T"])
    delta_star = _check_open_unit("delta_star", params["delta_star"])
    base = PrivacyParams(params["max_eps"], params["max_delta"])
    if mode == "sampled_adaptive":
        q = _check_q(params["q"])
        eps = math.log1p(q * math.expm1(base.epsilon))
        return _composed(_advanced_epsilon(eps, T, delta_star), T * q * base.delta + delta_star)
    return _composed(_advanced_epsilon(base.epsilon, T, delta_star), T * base.delta + delta_star)
