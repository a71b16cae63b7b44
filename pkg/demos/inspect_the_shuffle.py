"""
Inspecting the block shuffle
============================

Enumerate every outcome of a small block shuffle, compare it with sampled
shuffles and check the closed-form moments.
"""

# %%
# Eight parameters in blocks of two give four blocks and 4! = 24 equally
# likely orderings.
from collections import Counter

import numpy as np

from dpblogs import block_shuffle, enumerate_block_shuffles
from dpblogs.gradients import exact_shuffle_variance, per_offset_expectation, stats

g = np.array([1.0, -2.0, 0.5, 3.0, -1.5, 2.5, 0.0, 4.0])
dist = enumerate_block_shuffles(g, 2)
print("distinct outcomes:", len(dist.outcomes))

# %%
# Sampling agrees with the exact law. Total variation distance after 20 000
# draws is small.
rng = np.random.default_rng(0)
draws = 20_000
counts = Counter(tuple(block_shuffle(g, 2, rng).values.tolist()) for _ in range(draws))
tv = 0.5 * sum(abs(counts.get(k, 0) / draws - p) for k, p in dist.outcomes.items())
print("total variation:", round(tv, 4))

# %%
# The shuffle only moves whole blocks, so the mean of each output component
# is the average of the inputs sharing its offset within a block.
print("exact mean:      ", per_offset_expectation(g, 2).values)
print("enumerated mean: ", np.round(dist.mean(), 12) + 0.0)
print("exact variance:  ", exact_shuffle_variance(g, 2).values)

# %%
# Norm, mean and variance of the whole vector never change.
out = block_shuffle(g, 2, 42)
print("stats before:", stats(g))
print("stats after: ", stats(out))
