"""Per-step gradient privatization driven by an accountant plan.

A ``Generator`` holds the block plan for a model and counts steps. Each call to
``generate`` clips every group gradient to the clip value and block-shuffles
it with that group's planned block size. The reported spend is the full-run
total of the plan from the first call on; it is assigned, not accumulated.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .accountant import AccountantConfig, BlockPlan, ModelSpec, optimize_block_sizes, plan_for_block_sizes
from .gradients import GradientVector, as_gradient, block_shuffle, clip, make_rng

__all__ = [
    "Generator",
    "PrivatizedGradients",
    "PrivacySpent",
    "init_generator",
    "generate",
    "privacy_spent",
    "substream",
]


def substream(seed: int, group: int, step: int) -> np.random.Generator:
    """Independent random stream for one (seed, group, step) triple.

    The triple is hashed by ``numpy.random.SeedSequence``, so streams for
    different groups or steps do not overlap.
    """
    make_rng(seed)  # range check only
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(group), int(step)]))


@dataclass(frozen=True)
class Generator:
    model: ModelSpec
    config: AccountantConfig
    plan: BlockPlan
    epsilon_spent: float = 0.0
    steps_taken: int = 0

    def __post_init__(self):
        if len(self.plan.block_sizes) != len(self.model):
            raise ValueError(
                f"plan has {len(self.plan.block_sizes)} block sizes for {len(self.model)} groups"
            )
        if not 0 <= self.steps_taken <= self.config.steps:
            raise ValueError(f"steps_taken={self.steps_taken} outside [0, {self.config.steps}]")

    @classmethod
    def from_block_sizes(
        cls, model: ModelSpec, config: AccountantConfig, block_sizes: Sequence[int]
    ) -> Generator:
        """Skip the optimizer and account for fixed block sizes."""
        return cls(model, config, plan_for_block_sizes(model, config, block_sizes))


class PrivatizedGradients(NamedTuple):
    grads: list[GradientVector]
    epsilon_spent: float
    delta: float


class PrivacySpent(NamedTuple):
    epsilon: float
    delta: float
    fraction_elapsed: float


def init_generator(model: ModelSpec, config: AccountantConfig) -> Generator:
    return Generator(model, config, optimize_block_sizes(model, config))


def generate(gen: Generator, grads: Sequence, seed: int) -> tuple[PrivatizedGradients, Generator]:
    """Clip and shuffle one step of per-group gradients.

    Group ``i`` at step ``gen.steps_taken`` draws its permutation from
    ``substream(seed, i, gen.steps_taken)``. Returns the privatized gradients
    and the advanced generator; ``gen`` itself is unchanged.
    """
    if gen.steps_taken >= gen.config.steps:
        raise ValueError(
            f"budget horizon exhausted: all {gen.config.steps} planned steps have been taken"
        )
    if len(grads) != len(gen.model):
        raise ValueError(f"got {len(grads)} gradients for {len(gen.model)} parameter groups")
    out = []
    for i, (g, group, beta) in enumerate(zip(grads, gen.model.groups, gen.plan.block_sizes)):
        g = as_gradient(g)
        if g.dim != group.dim:
            raise ValueError(
                f"gradient for group {group.name!r} has {g.dim} components, expected {group.dim}"
            )
        clipped = clip(g, gen.config.clip_value)
        out.append(block_shuffle(clipped, beta, substream(seed, i, gen.steps_taken)))
    spent = gen.plan.epsilon_total
    new_gen = dataclasses.replace(gen, epsilon_spent=spent, steps_taken=gen.steps_taken + 1)
    return PrivatizedGradients(out, spent, gen.config.delta), new_gen


def privacy_spent(gen: Generator) -> PrivacySpent:
    return PrivacySpent(gen.epsilon_spent, gen.config.delta, gen.steps_taken / gen.config.steps)
