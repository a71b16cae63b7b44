"""Gradient container, clipping and block-wise shuffling.

A gradient is flattened, zero-padded to a multiple of the block size, cut into
``m = ceil(d / block_size)`` contiguous blocks, and the block order is replaced
by a uniformly random permutation. Intra-block order is kept. The padded tail is
trimmed after shuffling, so when the block size does not divide ``d`` some
entries can be dropped and zeros can move forward; this matches the reference
procedure and is covered by tests.

Besides the sampler, this module carries the exact oracles used to validate it
at small dimension: full enumeration of the ``m!`` block permutations and the
closed-form per-offset mean and variance of a shuffled component.

Norms and moments are accumulated with ``math.fsum`` so they are exactly
invariant under permutation of the entries. Several exact-equality properties
(clip/shuffle commutation, norm preservation) depend on this.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "GradientVector",
    "GradientStats",
    "ShuffleDistribution",
    "as_gradient",
    "make_rng",
    "clip",
    "l2_norm",
    "block_shuffle",
    "block_permutation",
    "enumerate_block_shuffles",
    "stats",
    "per_offset_expectation",
    "exact_shuffle_variance",
    "MAX_ENUMERATION_BLOCKS",
]

MAX_ENUMERATION_BLOCKS = 8
_UINT64_MAX = 2**64 - 1

SeedLike = int | np.random.Generator


class GradientVector:
    """Immutable flat float64 gradient with its original shape.

    ``values`` is always 1-D and read-only; ``shape`` is the tensor shape the
    values came from. Equality is exact, component-wise.
    """

    __slots__ = ("values", "shape")

    def __init__(self, values, shape: Sequence[int] | None = None):
        arr = np.array(values, dtype=np.float64, copy=True)
        if shape is None:
            shape = arr.shape if arr.ndim > 0 else (1,)
        shape = tuple(int(s) for s in shape)
        flat = arr.reshape(-1)
        if any(s < 1 for s in shape):
            raise ValueError(f"shape dimensions must be positive integers, got {shape}")
        if math.prod(shape) != flat.size:
            raise ValueError(
                f"component count {flat.size} does not match shape {shape} "
                f"(product {math.prod(shape)})"
            )
        if not np.isfinite(flat).all():
            bad = int(np.flatnonzero(~np.isfinite(flat))[0])
            raise ValueError(f"gradient component {bad} is not finite ({flat[bad]!r})")
        flat.setflags(write=False)
        object.__setattr__(self, "values", flat)
        object.__setattr__(self, "shape", shape)

    def __setattr__(self, name, value):
        raise AttributeError("GradientVector is immutable")

    @property
    def dim(self) -> int:
        return self.values.size

    def __len__(self) -> int:
        return self.values.size

    def to_array(self) -> np.ndarray:
        """Writable copy of the values in the original shape."""
        return self.values.reshape(self.shape).copy()

    def tolist(self) -> list[float]:
        return self.values.tolist()

    def with_values(self, values) -> GradientVector:
        return GradientVector(values, self.shape)

    def __eq__(self, other):
        if not isinstance(other, GradientVector):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash((self.shape, self.values.tobytes()))

    def __repr__(self):
        return f"GradientVector({self.values.tolist()!r}, shape={self.shape})"


def as_gradient(g) -> GradientVector:
    return g if isinstance(g, GradientVector) else GradientVector(g)


def make_rng(seed: SeedLike) -> np.random.Generator:
    """Seeded PCG64 generator; an existing generator is passed through."""
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise TypeError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    if not 0 <= int(seed) <= _UINT64_MAX:
        raise ValueError(f"seed must lie in [0, 2**64 - 1], got {seed}")
    return np.random.default_rng(int(seed))


def l2_norm(values) -> float:
    """Euclidean norm, exactly invariant under reordering of the entries."""
    v = np.asarray(values, dtype=np.float64).reshape(-1)
    return math.sqrt(math.fsum((v * v).tolist()))


def clip(g, C: float) -> GradientVector:
    """Scale ``g`` by ``min(1, C / ||g||_2)``.

    Inputs at or below the threshold (including the zero vector) are returned
    unchanged.
    """
    g = as_gradient(g)
    C = float(C)
    if not C > 0:
        raise ValueError(f"clip value C must be positive, got {C}")
    norm = l2_norm(g.values)
    if norm <= C:
        return g
    return g.with_values(g.values * (C / norm))


def _check_block_size(d: int, block_size: int) -> int:
    if isinstance(block_size, bool) or int(block_size) != block_size:
        raise ValueError(f"block size must be an integer, got {block_size!r}")
    block_size = int(block_size)
    if not 1 <= block_size <= d:
        raise ValueError(f"block size must satisfy 1 <= block_size <= d={d}, got {block_size}")
    return block_size


def _blocks(values: np.ndarray, block_size: int) -> np.ndarray:
    d = values.size
    m = -(-d // block_size)
    pad = m * block_size - d
    if pad:
        values = np.concatenate([values, np.zeros(pad)])
    return values.reshape(m, block_size)


def block_permutation(num_blocks: int, seed: SeedLike) -> np.ndarray:
    """Uniform permutation of ``range(num_blocks)``.

    numpy's ``Generator.permutation`` is a Fisher-Yates shuffle driven by
    unbiased bounded integers.
    """
    return make_rng(seed).permutation(num_blocks)


def _apply_block_permutation(g: GradientVector, block_size: int, perm) -> GradientVector:
    blocks = _blocks(g.values, block_size)
    out = blocks[np.asarray(perm)].reshape(-1)[: g.dim]
    return g.with_values(out)


def block_shuffle(g, block_size: int, seed: SeedLike) -> GradientVector:
    """Shuffle the blocks of ``g`` with a permutation drawn from ``seed``.

    ``seed`` is either a 64-bit unsigned integer or a ``numpy.random.Generator``
    (which is advanced). With ``block_size == d`` there is one block and the
    output equals the input; ``block_size == 1`` is a full element shuffle.
    """
    g = as_gradient(g)
    block_size = _check_block_size(g.dim, block_size)
    m = -(-g.dim // block_size)
    return _apply_block_permutation(g, block_size, block_permutation(m, seed))


@dataclass(frozen=True)
class ShuffleDistribution:
    """Exact output law of a block shuffle: outcome tuple -> probability."""

    outcomes: dict[tuple[float, ...], float]
    num_blocks: int

    def __post_init__(self):
        total = math.fsum(self.outcomes.values())
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"probabilities sum to {total}, not 1")
        lengths = {len(k) for k in self.outcomes}
        if len(lengths) > 1:
            raise ValueError("outcomes have differing lengths")
        if len(self.outcomes) > math.factorial(self.num_blocks):
            raise ValueError("more outcomes than block permutations")

    def __len__(self):
        return len(self.outcomes)

    def probability(self, outcome: Iterable[float]) -> float:
        return self.outcomes.get(tuple(float(x) for x in outcome), 0.0)

    def _matrix(self) -> tuple[np.ndarray, np.ndarray]:
        xs = np.array(list(self.outcomes.keys()), dtype=np.float64)
        ps = np.array(list(self.outcomes.values()), dtype=np.float64)
        return xs, ps

    def mean(self) -> np.ndarray:
        xs, ps = self._matrix()
        return ps @ xs

    def variance(self) -> np.ndarray:
        """Per-component variance under the exact law."""
        xs, ps = self._matrix()
        mu = ps @ xs
        return ps @ (xs - mu) ** 2


def enumerate_block_shuffles(g, block_size: int) -> ShuffleDistribution:
    """Enumerate all ``m!`` block permutations and merge identical outputs.

    Limited to ``m <= 8`` blocks; beyond that use ``block_shuffle`` sampling.
    """
    g = as_gradient(g)
    block_size = _check_block_size(g.dim, block_size)
    m = -(-g.dim // block_size)
    if m > MAX_ENUMERATION_BLOCKS:
        raise ValueError(
            f"enumeration needs m! permutations and m={m} exceeds "
            f"{MAX_ENUMERATION_BLOCKS}; estimate the law by sampling block_shuffle instead"
        )
    blocks = _blocks(g.values, block_size)
    counts: Counter[tuple[float, ...]] = Counter()
    for perm in itertools.permutations(range(m)):
        out = blocks[list(perm)].reshape(-1)[: g.dim]
        counts[tuple(out.tolist())] += 1
    total = math.factorial(m)
    return ShuffleDistribution({k: c / total for k, c in counts.items()}, m)


@dataclass(frozen=True)
class GradientStats:
    l2_norm: float
    mean: float
    variance: float


def stats(g) -> GradientStats:
    """Norm, mean and population variance (divisor ``d``)."""
    g = as_gradient(g)
    d = g.dim
    if d == 0:
        raise ValueError("stats of an empty gradient are undefined")
    vals = g.values.tolist()
    mean = math.fsum(vals) / d
    var = math.fsum((x - mean) ** 2 for x in vals) / d
    return GradientStats(l2_norm(g.values), mean, var)


def _offset_blocks(g, block_size: int) -> tuple[GradientVector, np.ndarray]:
    g = as_gradient(g)
    block_size = _check_block_size(g.dim, block_size)
    if g.dim % block_size:
        raise ValueError(
            f"block size {block_size} does not divide d={g.dim}; zero padding "
            "breaks the per-offset closed form"
        )
    return g, g.values.reshape(-1, block_size)


def per_offset_expectation(g, block_size: int) -> GradientVector:
    """Exact mean of each shuffled component.

    Component ``i`` averages every input entry sharing its within-block
    offset ``i % block_size``. Requires ``block_size | d``.
    """
    g, blocks = _offset_blocks(g, block_size)
    mu = blocks.mean(axis=0)
    return g.with_values(np.tile(mu, blocks.shape[0]))


def exact_shuffle_variance(g, block_size: int) -> GradientVector:
    """Exact variance of each shuffled component (population form over blocks)."""
    g, blocks = _offset_blocks(g, block_size)
    mu = blocks.mean(axis=0)
    var = ((blocks - mu) ** 2).mean(axis=0)
    return g.with_values(np.tile(var, blocks.shape[0]))
