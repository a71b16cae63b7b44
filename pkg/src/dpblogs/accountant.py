"""Per-group privacy loss, whole-run totals and the block-size optimizer.

Each parameter group of dimension ``d`` shuffled with block size ``beta`` under
clip value ``C`` is charged::

    eps1 = 2 ln(1 + d (exp(2C / sqrt(d)) - 1))
    eps2 = 2 ln(1 + (beta/d) (exp(2C sqrt(beta/d)) - 1))
    eps  = min(eps1, eps2)

Per-step losses are summed over groups and the run total over ``T`` steps is::

    sqrt(2 T ln(1/delta)) * eps_step + T * eps_step * (exp(eps_step) - 1)

``optimize_block_sizes`` picks block sizes with a nested search: an outer
bisection over a shared per-group epsilon target and, for each probe, an inner
binary search for the largest block size each group can afford.
"""

from __future__ import annotations

import json
import logging
import math
import warnings
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from .errors import EpsilonOverflowWarning

__all__ = [
    "ParameterGroup",
    "ModelSpec",
    "AccountantConfig",
    "GroupEpsilon",
    "BlockPlan",
    "EXP_OVERFLOW_GUARD",
    "OUTER_TOLERANCE",
    "epsilon_group",
    "total_privacy",
    "largest_block_for_target",
    "optimize_block_sizes",
    "plan_for_block_sizes",
]

log = logging.getLogger(__name__)

EXP_OVERFLOW_GUARD = 700.0
OUTER_TOLERANCE = 1e-6


@dataclass(frozen=True)
class ParameterGroup:
    name: str
    dim: int

    def __post_init__(self):
        if isinstance(self.dim, bool) or int(self.dim) != self.dim or self.dim < 1:
            raise ValueError(f"group {self.name!r}: dim must be a positive integer, got {self.dim!r}")
        object.__setattr__(self, "dim", int(self.dim))


@dataclass(frozen=True)
class ModelSpec:
    """Ordered, uniquely named parameter groups."""

    groups: tuple[ParameterGroup, ...]

    def __post_init__(self):
        groups = tuple(self.groups)
        if not groups:
            raise ValueError("a model needs at least one parameter group")
        names = [g.name for g in groups]
        dupes = sorted({n for n in names if names.count(n) > 1})
        if dupes:
            raise ValueError(f"duplicate parameter group names: {dupes}")
        object.__setattr__(self, "groups", groups)

    @classmethod
    def from_dims(cls, dims: Sequence[int], prefix: str = "g") -> ModelSpec:
        return cls(tuple(ParameterGroup(f"{prefix}{i}", d) for i, d in enumerate(dims)))

    @classmethod
    def from_dict(cls, data: dict) -> ModelSpec:
        try:
            raw = data["groups"]
            return cls(tuple(ParameterGroup(str(g["name"]), g["dim"]) for g in raw))
        except (KeyError, TypeError) as exc:
            raise ValueError(
                'model spec must look like {"groups": [{"name": ..., "dim": ...}, ...]}'
            ) from exc

    @classmethod
    def from_json(cls, text: str) -> ModelSpec:
        return cls.from_dict(json.loads(text))

    def to_dict(self) -> dict:
        return {"groups": [{"name": g.name, "dim": g.dim} for g in self.groups]}

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(g.dim for g in self.groups)

    @property
    def total_parameters(self) -> int:
        return sum(self.dims)

    def __len__(self):
        return len(self.groups)


@dataclass(frozen=True)
class AccountantConfig:
    target_epsilon: float
    delta: float
    steps: int
    clip_value: float
    # Kept for interface parity; the per-group formulas do not use it.
    batch_size: int = 1

    def __post_init__(self):
        if not self.target_epsilon > 0:
            raise ValueError(f"target_epsilon must be > 0, got {self.target_epsilon}")
        if not 0 < self.delta < 1:
            raise ValueError(f"delta must lie in (0, 1), got {self.delta}")
        if int(self.steps) != self.steps or self.steps < 1:
            raise ValueError(f"steps must be a positive integer, got {self.steps}")
        if not self.clip_value > 0:
            raise ValueError(f"clip_value must be > 0, got {self.clip_value}")
        if int(self.batch_size) != self.batch_size or self.batch_size < 1:
            raise ValueError(f"batch_size must be a positive integer, got {self.batch_size}")
        object.__setattr__(self, "steps", int(self.steps))
        object.__setattr__(self, "batch_size", int(self.batch_size))


class GroupEpsilon(NamedTuple):
    eps1: float
    eps2: float
    eps: float


def _two_log1p_scaled_expm1(ratio: float, x: float, what: str) -> float:
    """2 ln(1 + ratio * (e^x - 1)) without intermediate overflow."""
    if x > EXP_OVERFLOW_GUARD:
        warnings.warn(
            f"{what}: exponent argument {x:.6g} exceeds {EXP_OVERFLOW_GUARD:g}; epsilon is +inf",
            EpsilonOverflowWarning,
            stacklevel=3,
        )
        return math.inf
    y = math.log(ratio) + math.log(math.expm1(x))
    if y > 0:
        return 2.0 * (y + math.log1p(math.exp(-y)))
    return 2.0 * math.log1p(math.exp(y))


def epsilon_group(d: int, block_size: int, C: float) -> GroupEpsilon:
    """Single-step privacy loss of one group (both formulas and their min)."""
    if int(d) != d or d < 1:
        raise ValueError(f"dimension d must be a positive integer, got {d!r}")
    if int(block_size) != block_size or not 1 <= block_size <= d:
        raise ValueError(f"block size must satisfy 1 <= block_size <= d={d}, got {block_size!r}")
    if not C > 0:
        raise ValueError(f"clip value C must be > 0, got {C!r}")
    d = int(d)
    r = block_size / d
    eps1 = _two_log1p_scaled_expm1(float(d), 2.0 * C / math.sqrt(d), f"eps1(d={d})")
    eps2 = _two_log1p_scaled_expm1(r, 2.0 * C * math.sqrt(r), f"eps2(d={d}, beta={block_size})")
    return GroupEpsilon(eps1, eps2, min(eps1, eps2))


def total_privacy(epsilon_per_step: float, steps: int, delta: float) -> float:
    """Whole-run epsilon from a per-step epsilon (natural logarithms)."""
    if not 0 < delta < 1:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    if int(steps) != steps or steps < 1:
        raise ValueError(f"steps must be a positive integer, got {steps}")
    if not epsilon_per_step >= 0:
        raise ValueError(f"epsilon_per_step must be >= 0, got {epsilon_per_step}")
    e = float(epsilon_per_step)
    if e == 0.0:
        return 0.0
    if e > EXP_OVERFLOW_GUARD:
        warnings.warn(
            f"per-step epsilon {e:.6g} exceeds {EXP_OVERFLOW_GUARD:g}; total is +inf",
            EpsilonOverflowWarning,
            stacklevel=2,
        )
        return math.inf
    return math.sqrt(2.0 * steps * -math.log(delta)) * e + steps * e * math.expm1(e)


def largest_block_for_target(d: int, C: float, target: float) -> int:
    """Largest block size in ``[1, d-1]`` whose epsilon stays within ``target``.

    Falls back to 1 when nothing qualifies (and for ``d == 1``). Binary search
    is valid because the group epsilon is nondecreasing in the block size.
    """
    if int(d) != d or d < 1:
        raise ValueError(f"dimension d must be a positive integer, got {d!r}")
    if not C > 0:
        raise ValueError(f"clip value C must be > 0, got {C!r}")
    low, high = 1, int(d) - 1
    best = low
    while low <= high:
        mid = (low + high) // 2
        if epsilon_group(d, mid, C).eps <= target:
            best = mid
            low = mid + 1
        else:
            high = mid - 1
    return best


@dataclass(frozen=True)
class BlockPlan:
    block_sizes: tuple[int, ...]
    per_group_epsilon: tuple[float, ...]
    epsilon_per_step: float
    epsilon_total: float
    target_gap: float
    warnings: tuple[str, ...] = field(default=())
    target_epsilon: float | None = None

    @property
    def exceeds_target(self) -> bool:
        """True when the plan spends more than the requested budget.

        The optimizer minimizes the two-sided gap, so this can happen.
        """
        return self.target_epsilon is not None and self.epsilon_total > self.target_epsilon

    def to_dict(self) -> dict:
        return {
            "block_sizes": list(self.block_sizes),
            "per_group_epsilon": list(self.per_group_epsilon),
            "epsilon_per_step": self.epsilon_per_step,
            "epsilon_total": self.epsilon_total,
            "target_gap": self.target_gap,
            "warnings": list(self.warnings),
        }


def _scalar_group_warnings(model: ModelSpec) -> list[str]:
    notes = []
    for g in model.groups:
        if g.dim == 1:
            msg = (
                f"group {g.name!r} has a single parameter; shuffling it is the identity "
                "but it is still charged its full formula epsilon"
            )
            log.warning(msg)
            notes.append(msg)
    return notes


def _evaluate(model: ModelSpec, config: AccountantConfig, block_sizes, notes) -> BlockPlan:
    per_group = tuple(
        epsilon_group(g.dim, b, config.clip_value).eps for g, b in zip(model.groups, block_sizes)
    )
    eps_step = math.fsum(per_group)
    eps_total = total_privacy(eps_step, config.steps, config.delta)
    notes = list(notes)
    for g, e in zip(model.groups, per_group):
        if math.isinf(e):
            notes.append(f"group {g.name!r}: epsilon overflowed to +inf")
    if eps_total > config.target_epsilon:
        notes.append(
            f"plan epsilon_total {eps_total:.6g} exceeds target {config.target_epsilon:.6g}"
        )
    return BlockPlan(
        block_sizes=tuple(int(b) for b in block_sizes),
        per_group_epsilon=per_group,
        epsilon_per_step=eps_step,
        epsilon_total=eps_total,
        target_gap=abs(eps_total - config.target_epsilon),
        warnings=tuple(notes),
        target_epsilon=config.target_epsilon,
    )


def plan_for_block_sizes(
    model: ModelSpec, config: AccountantConfig, block_sizes: Sequence[int]
) -> BlockPlan:
    """Account for caller-chosen block sizes instead of optimizing them."""
    if len(block_sizes) != len(model):
        raise ValueError(
            f"got {len(block_sizes)} block sizes for {len(model)} parameter groups"
        )
    return _evaluate(model, config, block_sizes, _scalar_group_warnings(model))


def optimize_block_sizes(model: ModelSpec, config: AccountantConfig) -> BlockPlan:
    """Choose per-group block sizes whose run total is closest to the target.

    The outer loop bisects the shared per-group epsilon target on
    ``[0, target_epsilon / steps]`` until the bracket is at most 1e-6 wide;
    every probe runs ``largest_block_for_target`` for each group and the probe
    with the smallest ``|epsilon_total - target_epsilon|`` wins (earliest on
    ties). The run total is only stepwise monotone in the shared target, so
    the result is the best probe seen, not a certified optimum.
    """
    C = config.clip_value
    target = config.target_epsilon
    dims = model.dims

    def run_total(block_sizes):
        eps_step = math.fsum(epsilon_group(d, b, C).eps for d, b in zip(dims, block_sizes))
        return total_privacy(eps_step, config.steps, config.delta)

    low, high = 0.0, target / config.steps
    best_sizes = None
    best_diff = math.inf
    # At least one probe, even when the bracket starts narrower than the tolerance.
    while True:
        mid = (low + high) / 2
        sizes = [largest_block_for_target(d, C, mid) for d in dims]
        total = run_total(sizes)
        diff = abs(total - target)
        if best_sizes is None or diff < best_diff:
            best_sizes, best_diff = sizes, diff
        if total > target:
            high = mid
        else:
            low = mid
        if high - low <= OUTER_TOLERANCE:
            break
    return _evaluate(model, config, best_sizes, _scalar_group_warnings(model))
