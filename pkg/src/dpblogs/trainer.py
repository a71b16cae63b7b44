"""Toy SGD harness for checking the convergence bound on convex problems.

Two synthetic objectives are available:

* ``quadratic``: ``f(theta) = 0.5 ||theta - theta*||^2`` (smoothness 1). The
  ``symmetric`` variant puts ``theta* = c * ones`` so that, started from zero,
  every gradient is a constant vector and therefore a fixed point of any
  block shuffle.
* ``logistic``: mean logistic loss on 200 unit-norm feature rows plus a small
  ridge term; the optimum is found by Newton's method.

Stochastic gradients add bounded uniform noise, keeping them unbiased and
bounded. Each step is privatized by ``none`` (optional clipping only),
``blogs`` (clip and block shuffle through ``mechanism.generate``) or
``gaussian`` (clip and add ``N(0, (noise_multiplier * C)^2)`` per coordinate).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .accountant import AccountantConfig, ModelSpec
from .bounds import BoundReport, ConvergenceInputs, convergence_bound, optimal_learning_rate
from .errors import TrainingDivergedError
from .gradients import GradientVector, clip
from .mechanism import Generator, generate, init_generator

__all__ = [
    "Problem",
    "TrainingConfig",
    "StepRecord",
    "Trajectory",
    "make_problem",
    "run",
    "compare_to_bound",
    "DIVERGENCE_GUARD",
]

DIVERGENCE_GUARD = 1e12
MECHANISMS = ("none", "blogs", "gaussian")


@dataclass(frozen=True, eq=False)
class Problem:
    kind: str
    dim: int
    noise_std: float
    seed: int
    theta_star: np.ndarray
    features: np.ndarray | None = None
    labels: np.ndarray | None = None
    reg: float = 0.0

    def loss(self, theta) -> float:
        theta = np.asarray(theta, dtype=float)
        if self.kind == "quadratic":
            diff = theta - self.theta_star
            return 0.5 * float(diff @ diff)
        margins = self.labels * (self.features @ theta)
        return float(np.logaddexp(0.0, -margins).mean() + 0.5 * self.reg * theta @ theta)

    def gradient(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        if self.kind == "quadratic":
            return theta - self.theta_star
        margins = self.labels * (self.features @ theta)
        weights = self.labels * _sigmoid(-margins)
        return -(self.features.T @ weights) / len(self.labels) + self.reg * theta

    def stochastic_gradient(self, theta, rng: np.random.Generator) -> np.ndarray:
        g = self.gradient(theta)
        if self.noise_std > 0:
            half_width = math.sqrt(3.0) * self.noise_std
            g = g + rng.uniform(-half_width, half_width, size=self.dim)
        return g

    @property
    def smoothness(self) -> float:
        if self.kind == "quadratic":
            return 1.0
        row_norm_sq = float((self.features**2).sum(axis=1).max())
        return row_norm_sq / 4 + self.reg

    @property
    def optimum_loss(self) -> float:
        return self.loss(self.theta_star)


def _sigmoid(x):
    return np.exp(-np.logaddexp(0.0, -x))


def _newton_logistic(X, y, reg, iters=50):
    theta = np.zeros(X.shape[1])
    n = len(y)
    for _ in range(iters):
        margins = y * (X @ theta)
        grad = -(X.T @ (y * _sigmoid(-margins))) / n + reg * theta
        s = _sigmoid(margins)
        hess = (X.T * (s * (1 - s))) @ X / n + reg * np.eye(X.shape[1])
        step = np.linalg.solve(hess, grad)
        theta = theta - step
        if np.abs(step).max() < 1e-15:
            break
    return theta


def make_problem(
    kind: str,
    dim: int,
    noise_std: float = 0.0,
    seed: int = 0,
    *,
    symmetric: bool = False,
    center: float = 3.0,
    n_samples: int = 200,
    reg: float = 1e-2,
) -> Problem:
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    if noise_std < 0:
        raise ValueError(f"noise_std must be >= 0, got {noise_std}")
    rng = np.random.default_rng(np.random.SeedSequence([seed, 0x5EED]))
    if kind == "quadratic":
        theta_star = np.full(dim, float(center)) if symmetric else rng.uniform(-3, 3, size=dim)
        return Problem("quadratic", dim, noise_std, seed, theta_star)
    if kind == "logistic":
        X = rng.normal(size=(n_samples, dim))
        X /= np.linalg.norm(X, axis=1, keepdims=True)
        w = rng.normal(size=dim)
        y = np.where(X @ w + 0.3 * rng.normal(size=n_samples) >= 0, 1.0, -1.0)
        theta_star = _newton_logistic(X, y, reg)
        return Problem("logistic", dim, noise_std, seed, theta_star, X, y, reg)
    raise ValueError(f"unknown problem kind {kind!r}; expected 'quadratic' or 'logistic'")


@dataclass(frozen=True)
class TrainingConfig:
    """``learning_rate`` is a float or ``"optimal"`` (needs ``grad_bound``).

    For ``blogs``, ``block_sizes`` fixes one block size per group; without it
    the accountant optimizes them for ``target_epsilon``.
    """

    mechanism: str = "none"
    steps: int = 100
    learning_rate: float | str = 0.1
    clip: float = math.inf
    block_sizes: tuple[int, ...] | None = None
    noise_multiplier: float = 0.0
    grad_bound: float | None = None
    seed: int = 0
    groups: int = 1
    target_epsilon: float | None = None
    delta: float = 1e-5
    theta0: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.mechanism not in MECHANISMS:
            raise ValueError(f"mechanism must be one of {MECHANISMS}, got {self.mechanism!r}")
        if self.steps < 0:
            raise ValueError(f"steps must be >= 0, got {self.steps}")
        if self.learning_rate == "optimal":
            if self.grad_bound is None:
                raise ValueError("the optimal learning rate needs grad_bound (G)")
        elif not float(self.learning_rate) > 0:
            raise ValueError(f"learning_rate must be > 0 or 'optimal', got {self.learning_rate!r}")
        if not self.clip > 0:
            raise ValueError(f"clip must be > 0, got {self.clip}")
        if self.mechanism in ("blogs", "gaussian") and not math.isfinite(self.clip):
            raise ValueError(f"mechanism {self.mechanism!r} needs a finite clip value")
        if self.noise_multiplier < 0:
            raise ValueError("noise_multiplier must be >= 0")
        if self.groups < 1:
            raise ValueError("groups must be >= 1")


class StepRecord(NamedTuple):
    step: int
    loss: float
    dist: float
    epsilon_spent: float


@dataclass(frozen=True, eq=False)
class Trajectory:
    records: list[StepRecord]
    iterates: np.ndarray
    theta_bar: np.ndarray
    avg_loss: float
    optimum_loss: float
    learning_rate: float
    group_dims: tuple[int, ...]
    block_sizes: tuple[int, ...] | None = None
    warnings: list[str] = field(default_factory=list)

    @property
    def final_loss(self) -> float:
        return self.records[-1].loss

    @property
    def suboptimality(self) -> float:
        return self.avg_loss - self.optimum_loss


def _group_dims(dim: int, groups: int) -> list[int]:
    if groups > dim:
        raise ValueError(f"cannot split {dim} parameters into {groups} groups")
    return [len(c) for c in np.array_split(np.arange(dim), groups)]


def _blogs_generator(problem: Problem, cfg: TrainingConfig) -> Generator:
    model = ModelSpec.from_dims(_group_dims(problem.dim, cfg.groups))
    steps = max(cfg.steps, 1)
    if cfg.block_sizes is not None:
        config = AccountantConfig(cfg.target_epsilon or math.inf, cfg.delta, steps, cfg.clip)
        return Generator.from_block_sizes(model, config, cfg.block_sizes)
    if cfg.target_epsilon is None:
        raise ValueError("mechanism 'blogs' needs block_sizes or target_epsilon")
    return init_generator(model, AccountantConfig(cfg.target_epsilon, cfg.delta, steps, cfg.clip))


def run(problem: Problem, cfg: TrainingConfig) -> Trajectory:
    """Run ``cfg.steps`` privatized SGD steps and record the trajectory.

    The trajectory has ``steps + 1`` records, the first one at the starting
    point. ``theta_bar`` averages iterates 1..T (the start point when T=0).
    """
    theta = np.zeros(problem.dim) if cfg.theta0 is None else np.array(cfg.theta0, dtype=float)
    if theta.shape != (problem.dim,):
        raise ValueError(f"theta0 has shape {theta.shape}, expected ({problem.dim},)")
    R0 = float(np.linalg.norm(theta - problem.theta_star))
    if cfg.learning_rate == "optimal":
        eta = optimal_learning_rate(R0, cfg.grad_bound, max(cfg.steps, 1))
    else:
        eta = float(cfg.learning_rate)

    noise_rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, 1]))
    gauss_rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, 2]))
    gen = _blogs_generator(problem, cfg) if cfg.mechanism == "blogs" else None
    splits = np.cumsum(gen.model.dims)[:-1] if gen is not None else None

    def dist(th):
        return float(np.linalg.norm(th - problem.theta_star))

    records = [StepRecord(0, problem.loss(theta), dist(theta), 0.0)]
    iterates = [theta.copy()]
    spent = 0.0
    for t in range(cfg.steps):
        g = problem.stochastic_gradient(theta, noise_rng)
        if cfg.mechanism == "none":
            if math.isfinite(cfg.clip):
                g = clip(g, cfg.clip).values
        elif cfg.mechanism == "blogs":
            parts = np.split(g, splits)
            private, gen = generate(gen, parts, cfg.seed)
            g = np.concatenate([p.values for p in private.grads])
            spent = private.epsilon_spent
        else:
            g = clip(g, cfg.clip).values
            if cfg.noise_multiplier > 0:
                g = g + gauss_rng.normal(0.0, cfg.noise_multiplier * cfg.clip, size=problem.dim)
        theta = theta - eta * g
        loss = problem.loss(theta)
        if not loss <= DIVERGENCE_GUARD:
            raise TrainingDivergedError(t + 1, loss)
        records.append(StepRecord(t + 1, loss, dist(theta), spent))
        iterates.append(theta.copy())

    iterates = np.array(iterates)
    theta_bar = iterates[1:].mean(axis=0) if cfg.steps > 0 else iterates[0].copy()
    notes = list(gen.plan.warnings) if gen is not None else []
    return Trajectory(
        records,
        iterates,
        theta_bar,
        problem.loss(theta_bar),
        problem.optimum_loss,
        eta,
        tuple(_group_dims(problem.dim, cfg.groups)),
        gen.plan.block_sizes if gen is not None else None,
        notes,
    )


def compare_to_bound(traj: Trajectory, inp: ConvergenceInputs) -> BoundReport:
    """Observed ``f(theta_bar) - f(theta*)`` next to the convergence bound."""
    bound = convergence_bound(inp)
    observed = traj.suboptimality
    holds = observed <= bound
    return BoundReport(
        name="convergence_bound",
        value=bound,
        inputs={
            "R0": inp.R0,
            "G": inp.G,
            "sigma": inp.sigma,
            "L": inp.L,
            "eta": inp.eta,
            "T": inp.T,
            "delta": inp.delta,
        },
        observed=observed,
        holds=holds,
        diagnostic="observed suboptimality within bound" if holds else "observed suboptimality exceeds bound",
    )
