"""Closed-form utility, variance, information and parameter-choice bounds.

The evaluators are direct transcriptions of their formulas. The three
``*_diagnostic`` functions compare a few of them against exact quantities
computed by enumeration on small gradients. Some of the published bounds do
not hold on those instances, so the diagnostics report violations and do not
raise.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass, field
from typing import Any, NamedTuple, Sequence

import numpy as np

from .errors import BoundWarning
from .gradients import (
    GradientVector,
    as_gradient,
    enumerate_block_shuffles,
    exact_shuffle_variance,
    l2_norm,
    stats,
    MAX_ENUMERATION_BLOCKS,
)

__all__ = [
    "BoundReport",
    "ConvergenceInputs",
    "ReconstructionBounds",
    "variance_bound",
    "utility_bound",
    "mi_bound",
    "reconstruction_bounds",
    "optimal_epsilon_for_utility",
    "optimal_block_size",
    "optimal_adaptive_params",
    "optimal_learning_rate",
    "blogs_sigma",
    "paramwise_sigma",
    "convergence_bound",
    "check_block_ratio",
    "shuffle_mutual_information",
    "small_instance_corpus",
    "variance_bound_diagnostic",
    "mi_bound_diagnostic",
    "utility_bound_diagnostic",
]


@dataclass
class BoundReport:
    name: str
    value: float
    inputs: dict[str, Any]
    diagnostic: str | None = None
    observed: float | None = None
    holds: bool | None = None
    details: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = asdict(self)
        if not self.details:
            del out["details"]
        return out


def _aligned(dims, betas) -> list[tuple[int, int]]:
    if len(dims) != len(betas):
        raise ValueError(f"dims and betas differ in length ({len(dims)} vs {len(betas)})")
    pairs = []
    for d, b in zip(dims, betas):
        if not 1 <= b <= d:
            raise ValueError(f"block size {b} outside [1, d={d}]")
        pairs.append((int(d), int(b)))
    return pairs


def variance_bound(beta: int, var_g: float) -> float:
    """Published per-component variance bound ``(beta - 1) / beta * Var(g)``."""
    if beta < 1:
        raise ValueError(f"beta must be >= 1, got {beta}")
    return (beta - 1) / beta * var_g


def utility_bound(dims: Sequence[int], betas: Sequence[int], C: float) -> float:
    """``sum_i (d_i - beta_i) (2C)^2 / beta_i``."""
    return math.fsum((d - b) * (2.0 * C) ** 2 / b for d, b in _aligned(dims, betas))


def mi_bound(dims: Sequence[int], betas: Sequence[int]) -> float:
    """``sum_i ln(d_i / beta_i)`` in nats; one group is the single-tensor case."""
    return math.fsum(math.log(d / b) for d, b in _aligned(dims, betas))


class ReconstructionBounds(NamedTuple):
    guess_prob: float
    log_guess_prob: float
    expected_error_lb_gap: float
    expected_error_lb_rd: float


def reconstruction_bounds(
    d: int,
    beta: int = 1,
    var_g: float = 0.0,
    min_gap_sq: float = 0.0,
    mi: float = 0.0,
) -> ReconstructionBounds:
    """Guessing probability ``1/d!`` and two lower bounds on reconstruction error.

    ``expected_error_lb_gap = (1 - 1/d!) * min_gap_sq`` and
    ``expected_error_lb_rd = (d - beta) * exp(-2 mi / d) * var_g``. The
    factorial is handled in log space, so ``guess_prob`` underflows to 0.0
    gracefully past ``d = 170`` while ``log_guess_prob`` stays exact.
    """
    if d < 1 or not 1 <= beta <= d:
        raise ValueError(f"need d >= 1 and 1 <= beta <= d, got d={d}, beta={beta}")
    log_p = -math.lgamma(d + 1)
    guess = 1.0 / math.factorial(d) if d <= 170 else math.exp(log_p)
    gap = -math.expm1(log_p) * min_gap_sq
    rd = (d - beta) * math.exp(-2.0 * mi / d) * var_g
    return ReconstructionBounds(guess, log_p, gap, rd)


def optimal_epsilon_for_utility(d: int, delta2g: float, U: float) -> float:
    """``(d / 2) ln(2 Delta^2 d / U)``; negative values come with a ``BoundWarning``."""
    if not U > 0:
        raise ValueError(f"utility target U must be > 0, got {U}")
    eps = d / 2 * math.log(2 * delta2g**2 * d / U)
    if eps < 0:
        warnings.warn(
            f"utility target U={U:g} exceeds the worst-case error 2*Delta^2*d; epsilon* is negative",
            BoundWarning,
            stacklevel=2,
        )
    return eps


def _clamped_floor(d: int, x: float) -> int:
    return min(d, max(1, math.floor(x)))


def optimal_block_size(d: int, epsilon: float, T: int, delta: float) -> int:
    """``min(d, max(1, floor(d exp(-2 eps / (sqrt(2T ln(1/delta)) d)))))``."""
    if not 0 < delta < 1:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    root = math.sqrt(2 * T * -math.log(delta))
    return _clamped_floor(d, d * math.exp(-2 * epsilon / (root * d)))


def optimal_adaptive_params(d: int, eps_t: float, U: float) -> tuple[int, float]:
    """Block size ``floor(d e^{-2 eps_t / d})`` (clamped) and clip ``sqrt(U / 2d)``."""
    if not U > 0:
        raise ValueError(f"utility target U must be > 0, got {U}")
    return _clamped_floor(d, d * math.exp(-2 * eps_t / d)), math.sqrt(U / (2 * d))


def optimal_learning_rate(R0: float, G: float, T: int) -> float:
    if not (R0 > 0 and G > 0 and T >= 1):
        raise ValueError(f"need R0 > 0, G > 0, T >= 1; got R0={R0}, G={G}, T={T}")
    return math.sqrt(R0**2 / (G**2 * T))


def blogs_sigma(beta: int, G: float) -> float:
    """Shuffle-noise std used in the utility bound: ``sqrt((beta - 1) G^2 / beta)``."""
    return math.sqrt((beta - 1) * G**2 / beta)


def paramwise_sigma(betas: Sequence[int], G_list: Sequence[float]) -> float:
    if len(betas) != len(G_list):
        raise ValueError("betas and G_list differ in length")
    return math.sqrt(math.fsum((b - 1) * g**2 / b for b, g in zip(betas, G_list)))


@dataclass(frozen=True)
class ConvergenceInputs:
    R0: float
    G: float
    sigma: float
    L: float
    eta: float
    T: int
    delta: float

    def __post_init__(self):
        if self.R0 < 0 or self.sigma < 0:
            raise ValueError("R0 and sigma must be nonnegative")
        if self.G < 0 or not self.L > 0 or not self.eta > 0:
            raise ValueError("G must be nonnegative, L and eta positive")
        if self.T < 1:
            raise ValueError(f"T must be >= 1, got {self.T}")
        if not 0 < self.delta < 1:
            raise ValueError(f"delta must lie in (0, 1), got {self.delta}")


def convergence_bound(inp: ConvergenceInputs) -> float:
    """High-probability suboptimality bound of the averaged iterate."""
    return (
        inp.R0**2 / (2 * inp.eta * inp.T)
        + inp.eta * inp.L * (inp.G**2 + inp.sigma**2) / 2
        + (inp.G + inp.sigma) * math.sqrt(2 * math.log(2 / inp.delta) / inp.T)
    )


def check_block_ratio(plan, dims: Sequence[int], rel_tol: float) -> bool:
    """Do block sizes scale like their group dimensions?

    For every ordered pair with ``beta_j >= 2``, requires
    ``|beta_i/beta_j - d_i/d_j| <= rel_tol * d_i/d_j + 1/beta_j``; the
    ``1/beta_j`` term absorbs integer rounding. ``plan`` is a ``BlockPlan`` or
    a sequence of block sizes.
    """
    betas = list(getattr(plan, "block_sizes", plan))
    if len(betas) != len(dims):
        raise ValueError(f"{len(betas)} block sizes for {len(dims)} dims")
    for bi, di in zip(betas, dims):
        for bj, dj in zip(betas, dims):
            if bj < 2:
                continue
            want = di / dj
            if abs(bi / bj - want) > rel_tol * want + 1 / bj:
                return False
    return True


# ---------------------------------------------------------------------------
# diagnostics on small instances


def small_instance_corpus(max_dim: int = 12, per_instance: int = 3, seed: int = 0):
    """``(gradient, beta)`` pairs for every ``d <= max_dim`` and ``beta | d``.

    Each pair gets ``per_instance`` seeded gradients: integer-valued ones (so
    enumeration merges nothing by accident) and a Gaussian one.
    """
    rng = np.random.default_rng(seed)
    corpus = []
    for d in range(1, max_dim + 1):
        for beta in (b for b in range(1, d + 1) if d % b == 0):
            for k in range(per_instance):
                if k % 2 == 0:
                    vals = rng.integers(-9, 10, size=d).astype(float)
                else:
                    vals = rng.normal(size=d)
                corpus.append((GradientVector(vals), beta))
    return corpus


def variance_bound_diagnostic(corpus=None) -> list[BoundReport]:
    """Exact per-component shuffle variance against ``variance_bound``.

    ``observed`` is the largest exact component variance and ``holds`` says
    whether every component respects the bound.
    """
    corpus = small_instance_corpus() if corpus is None else corpus
    reports = []
    for g, beta in corpus:
        g = as_gradient(g)
        exact = exact_shuffle_variance(g, beta).values
        bound = variance_bound(beta, stats(g).variance)
        worst = float(exact.max())
        ok = bool((exact <= bound + 1e-12).all())
        reports.append(
            BoundReport(
                name="variance_bound",
                value=bound,
                inputs={"gradient": g.tolist(), "beta": beta},
                observed=worst,
                holds=ok,
                diagnostic=None if ok else f"exact variance {worst:.6g} exceeds bound {bound:.6g}",
            )
        )
    return reports


def shuffle_mutual_information(alphabet: Sequence, beta: int, prior=None) -> float:
    """Exact mutual information (nats) between input and shuffled output.

    The input is drawn from ``alphabet`` with probabilities ``prior``
    (uniform by default); the output law given each input comes from full
    enumeration of block permutations.
    """
    alphabet = [as_gradient(a) for a in alphabet]
    n = len(alphabet)
    prior = np.full(n, 1.0 / n) if prior is None else np.asarray(prior, dtype=float)
    conditionals = [enumerate_block_shuffles(a, beta).outcomes for a in alphabet]
    marginal: dict[tuple, float] = {}
    for p_x, cond in zip(prior, conditionals):
        for y, p in cond.items():
            marginal[y] = marginal.get(y, 0.0) + p_x * p
    terms = []
    for p_x, cond in zip(prior, conditionals):
        for y, p in cond.items():
            if p_x > 0 and p > 0:
                terms.append(p_x * p * math.log(p / marginal[y]))
    return max(0.0, math.fsum(terms))


def mi_bound_diagnostic(max_dim: int = 6, seed: int = 0) -> list[BoundReport]:
    """Plug-in mutual information under a uniform two-letter prior.

    For each ``d <= max_dim`` and ``beta | d`` the prior is uniform over two
    distinct seeded integer vectors. The report carries the headline bound
    ``ln(d/beta)`` as ``value`` and the permutation entropy ``ln(m!)`` in
    ``details``; ``details["within_permutation_entropy"]`` records the
    assertion ``MI <= ln(m!) + 1e-9``.
    """
    rng = np.random.default_rng(seed)
    reports = []
    for d in range(1, max_dim + 1):
        for beta in (b for b in range(1, d + 1) if d % b == 0):
            a = rng.integers(-9, 10, size=d).astype(float)
            b = a.copy()
            while np.array_equal(a, b):
                b = rng.integers(-9, 10, size=d).astype(float)
            mi = shuffle_mutual_information([a, b], beta)
            m = -(-d // beta)
            perm_entropy = math.lgamma(m + 1)
            headline = mi_bound([d], [beta])
            within = mi <= perm_entropy + 1e-9
            reports.append(
                BoundReport(
                    name="mi_bound",
                    value=headline,
                    inputs={"alphabet": [a.tolist(), b.tolist()], "beta": beta},
                    observed=mi,
                    holds=mi <= headline + 1e-9,
                    diagnostic=None
                    if within
                    else f"MI {mi:.6g} exceeds permutation entropy ln({m}!) = {perm_entropy:.6g}",
                    details={
                        "num_blocks": m,
                        "permutation_entropy": perm_entropy,
                        "within_permutation_entropy": within,
                    },
                )
            )
    return reports


def utility_bound_diagnostic(corpus=None) -> list[BoundReport]:
    """Summed exact shuffle variance against ``utility_bound`` with inactive clipping.

    ``C`` is set to the gradient norm, the smallest value that leaves it
    unclipped. When enumeration is affordable the exact mean squared error
    ``E||M(g) - g||^2`` is added to ``details``.
    """
    corpus = small_instance_corpus() if corpus is None else corpus
    reports = []
    for g, beta in corpus:
        g = as_gradient(g)
        C = l2_norm(g.values)
        total_var = math.fsum(exact_shuffle_variance(g, beta).values.tolist())
        bound = utility_bound([g.dim], [beta], C) if C > 0 else 0.0
        details = {}
        m = -(-g.dim // beta)
        if m <= MAX_ENUMERATION_BLOCKS:
            dist = enumerate_block_shuffles(g, beta)
            details["expected_sq_error"] = math.fsum(
                p * math.fsum(((np.array(y) - g.values) ** 2).tolist())
                for y, p in dist.outcomes.items()
            )
        ok = total_var <= bound + 1e-12
        reports.append(
            BoundReport(
                name="utility_bound",
                value=bound,
                inputs={"gradient": g.tolist(), "beta": beta, "C": C},
                observed=total_var,
                holds=ok,
                diagnostic=None if ok else f"summed variance {total_var:.6g} exceeds bound {bound:.6g}",
                details=details,
            )
        )
    return reports
