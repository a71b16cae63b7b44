"""Block-wise gradient shuffling with privacy accounting.

Modules:

* ``gradients``: gradient container, clipping, block shuffles and exact
  enumeration of their output distribution.
* ``accountant``: per-group epsilon, run totals and block-size optimization.
* ``composition``: composition and subsampling calculators.
* ``bounds``: utility, information and parameter-choice bounds.
* ``mechanism``: per-step clip-and-shuffle generator.
* ``trainer``: toy SGD harness on convex problems.
* ``cli``: the ``dpblogs`` command.
"""

from .accountant import (
    AccountantConfig,
    BlockPlan,
    ModelSpec,
    ParameterGroup,
    epsilon_group,
    largest_block_for_target,
    optimize_block_sizes,
    plan_for_block_sizes,
    total_privacy,
)
from .composition import PrivacyParams
from .errors import BoundWarning, EpsilonOverflowWarning, NumericDomainError, TrainingDivergedError
from .gradients import (
    GradientVector,
    ShuffleDistribution,
    block_shuffle,
    clip,
    enumerate_block_shuffles,
    exact_shuffle_variance,
    per_offset_expectation,
    stats,
)
from .mechanism import Generator, generate, init_generator, privacy_spent

__version__ = "0.1.0"

__all__ = [
    "AccountantConfig",
    "BlockPlan",
    "BoundWarning",
    "EpsilonOverflowWarning",
    "Generator",
    "GradientVector",
    "ModelSpec",
    "NumericDomainError",
    "ParameterGroup",
    "PrivacyParams",
    "ShuffleDistribution",
    "TrainingDivergedError",
    "block_shuffle",
    "clip",
    "enumerate_block_shuffles",
    "epsilon_group",
    "exact_shuffle_variance",
    "generate",
    "init_generator",
    "largest_block_for_target",
    "optimize_block_sizes",
    "per_offset_expectation",
    "plan_for_block_sizes",
    "privacy_spent",
    "stats",
    "total_privacy",
]
