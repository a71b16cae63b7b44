"""
Planning a privacy budget
=========================

Choose block sizes for a two-layer model so that a training run meets a
target epsilon, then see how the per-step cost composes.
"""

# %%
# A model is a list of named parameter groups. Each group gets its own block
# size; the accountant searches for the sizes whose composed epsilon lands
# closest to the target.
from dpblogs import AccountantConfig, ModelSpec, optimize_block_sizes
from dpblogs.composition import PrivacyParams, compose_advanced, compose_basic, per_step_budget

model = ModelSpec.from_dims([100, 400])
config = AccountantConfig(target_epsilon=2.0, delta=1e-5, steps=10, clip_value=0.05)
plan = optimize_block_sizes(model, config)
print("block sizes:      ", plan.block_sizes)
print("per-group epsilon:", [round(e, 5) for e in plan.per_group_epsilon])
print("run total:        ", round(plan.epsilon_total, 5), "target", config.target_epsilon)

# %%
# Block sizes grow with group size: the 400-parameter group gets a block
# about four times larger than the 100-parameter group.
print("size ratio:", plan.block_sizes[1] / plan.block_sizes[0])

# %%
# The optimizer minimizes distance to the target, so a plan can land just
# above it. ``exceeds_target`` says which side it is on.
tight = optimize_block_sizes(ModelSpec.from_dims([4]), AccountantConfig(0.75, 1e-5, 1, 1.0))
print("tiny model plan:", tight.block_sizes, round(tight.epsilon_total, 4), "exceeds:", tight.exceeds_target)

# %%
# Basic composition grows linearly in the number of steps; advanced
# composition grows like its square root, which wins once runs get long.
step = PrivacyParams(0.01)
for T in [10, 1_000, 100_000]:
    basic = compose_basic(step, T).epsilon
    advanced = compose_advanced(step, T, 1e-5).epsilon
    print(f"T={T:>7}: basic {basic:10.3f}   advanced {advanced:10.3f}")

# %%
# Going the other way, a total budget of 1 over 100 steps allows this much
# per step.
print("per-step budget:", round(per_step_budget(1.0, 100, 1e-5), 6))
