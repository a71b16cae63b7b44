"""Command-line front end.

Subcommands::

    optimize   choose block sizes for a model and privacy budget
    compose    composition and subsampling calculators (--mode)
    shuffle    clip and block-shuffle gradients from a CSV file
    bounds     utility, information and parameter-choice bounds (--which)
    train      toy SGD run compared against the convergence bound
    oracle     exact output distribution of one block shuffle

Every subcommand prints one JSON document to stdout (optionally also written
to ``--json-out``) that echoes its inputs under ``"inputs"``. Floats are
written with 12 significant digits. Exit status is 0 on success, 1 when an
input fails validation and 2 when a computation leaves its numeric domain.
"""

from __future__ import annotations

import argparse
import math
import sys
import warnings
from pathlib import Path

import numpy as np

from . import bounds as bnd
from . import composition as comp
from .accountant import AccountantConfig, optimize_block_sizes
from .errors import NumericDomainError, TrainingDivergedError
from .gradients import GradientVector, enumerate_block_shuffles
from .io import (
    dumps,
    format_float,
    load_model_spec,
    load_shapes,
    read_gradient_csv,
    write_gradient_csv,
)
from .mechanism import Generator, generate, init_generator, privacy_spent
from .trainer import TrainingConfig, compare_to_bound, make_problem, run

__all__ = ["main", "build_parser"]


class _Parser(argparse.ArgumentParser):
    """Reports usage errors as ``ValueError`` so they map to exit status 1."""

    def error(self, message):
        raise ValueError(f"{self.prog}: {message}")


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _seed(text: str) -> int:
    try:
        seed = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}") from None
    if not 0 <= seed < 2**64:
        raise argparse.ArgumentTypeError(f"seed must lie in [0, 2**64), got {seed}")
    return seed


def _learning_rate(text: str):
    if text == "optimal":
        return text
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"learning rate must be a number or 'optimal', got {text!r}") from None


def _emit(args, payload) -> None:
    text = dumps(payload) + "\n"
    sys.stdout.write(text)
    if getattr(args, "json_out", None):
        Path(args.json_out).write_text(text)


def _flag(name: str) -> str:
    return "--" + name.replace("_", "-")


def _take(args, mode_label: str, required: list[str], optional: tuple[str, ...], pool: tuple[str, ...]) -> dict:
    """Collect the flags a mode uses; reject missing ones and stray ones."""
    for name in required:
        if getattr(args, name) is None:
            raise ValueError(f"{_flag(name)} is required for {mode_label}")
    used = set(required) | set(optional)
    for name in pool:
        if name not in used and getattr(args, name) is not None:
            raise ValueError(f"{_flag(name)} is not used by {mode_label}")
    return {name: getattr(args, name) for name in pool if name in used and getattr(args, name) is not None}


# ---------------------------------------------------------------------------
# optimize


def _cmd_optimize(args) -> int:
    model = load_model_spec(args.model)
    config = AccountantConfig(args.epsilon, args.delta, args.steps, args.clip, args.batch)
    plan = optimize_block_sizes(model, config)
    out = plan.to_dict()
    out["target_epsilon"] = config.target_epsilon
    out["exceeds_target"] = plan.exceeds_target
    out["inputs"] = {
        "model": model.to_dict(),
        "epsilon": args.epsilon,
        "delta": args.delta,
        "steps": args.steps,
        "clip": args.clip,
        "batch": args.batch,
    }
    if plan.exceeds_target:
        print(
            f"warning: plan total {format_float(plan.epsilon_total)} exceeds target "
            f"{format_float(config.target_epsilon)}",
            file=sys.stderr,
        )
    _emit(args, out)
    return 0


# ---------------------------------------------------------------------------
# compose

_COMPOSE_FLAGS = (
    "epsilon",
    "delta",
    "t",
    "delta_prime",
    "q",
    "eps_list",
    "delta_list",
    "epsilon_prime",
    "epsilon_spent",
    "step",
    "delta_star",
    "adaptive_mode",
    "max_eps",
    "max_delta",
    "c_max",
    "beta_max",
    "d",
)

# mode -> (required flags, optional flags)
_COMPOSE_MODES = {
    "basic": (["epsilon", "t"], ("delta",)),
    "hetero": (["eps_list", "delta_list"], ()),
    "advanced": (["epsilon", "t", "delta_prime"], ("delta",)),
    "per-step": (["epsilon", "t", "delta_prime"], ()),
    "subsample": (["epsilon", "q"], ("delta",)),
    "poisson": (["delta", "q"], ("epsilon",)),
    "q-star": (["epsilon", "t"], ()),
    "q-prob": (["epsilon_prime", "epsilon"], ()),
    "paramwise": (["eps_list", "delta_list", "t", "delta"], ()),
    "adaptive": (["epsilon", "epsilon_spent", "step", "t", "delta_star"], ()),
    "adaptive-bound": (["adaptive_mode"], ()),
}

_ADAPTIVE_FLAGS = {
    "adaptive_max": {"max_eps": "max_eps", "max_delta": "max_delta", "t": "T", "delta_star": "delta_star"},
    "adaptive_two_sided": {"c_max": "C_max", "beta_max": "beta_max", "d": "d", "t": "T", "delta": "delta"},
    "sampled_adaptive": {
        "max_eps": "max_eps",
        "max_delta": "max_delta",
        "q": "q",
        "t": "T",
        "delta_star": "delta_star",
    },
}


def _cmd_compose(args) -> int:
    mode = args.mode
    required, optional = _COMPOSE_MODES[mode]
    if mode == "adaptive-bound" and args.adaptive_mode is not None:
        required = ["adaptive_mode", *_ADAPTIVE_FLAGS[args.adaptive_mode]]
    inputs = _take(args, f"--mode {mode}", required, optional, _COMPOSE_FLAGS)
    delta = 0.0 if args.delta is None else args.delta
    out: dict = {}

    if mode == "basic":
        res = comp.compose_basic(comp.PrivacyParams(args.epsilon, delta), args.t)
    elif mode == "hetero":
        res = comp.compose_heterogeneous(args.eps_list, args.delta_list)
    elif mode == "advanced":
        res = comp.compose_advanced(comp.PrivacyParams(args.epsilon, delta), args.t, args.delta_prime)
    elif mode == "per-step":
        res = comp.PrivacyParams(comp.per_step_budget(args.epsilon, args.t, args.delta_prime), 0.0)
    elif mode == "subsample":
        res = comp.subsample_amplify(comp.PrivacyParams(args.epsilon, delta), args.q)
    elif mode == "poisson":
        base = comp.PrivacyParams(0.0 if args.epsilon is None else args.epsilon, args.delta)
        res = comp.PrivacyParams(comp.poisson_amplify(base, args.q), args.delta)
        out["epsilon0"] = comp.poisson_base_epsilon(args.delta, args.q)
    elif mode == "q-star":
        out["q"] = comp.optimal_sampling_ratio(args.epsilon, args.t)
        res = None
    elif mode == "q-prob":
        out["q"] = comp.optimal_sampling_prob(args.epsilon_prime, args.epsilon)
        res = None
    elif mode == "paramwise":
        res = comp.compose_paramwise(args.eps_list, args.delta_list, args.t, args.delta)
    elif mode == "adaptive":
        eps = comp.adaptive_allocate(args.epsilon, args.epsilon_spent, args.step, args.t, args.delta_star)
        res = comp.PrivacyParams(eps, 0.0)
    else:
        names = _ADAPTIVE_FLAGS[args.adaptive_mode]
        res = comp.adaptive_epsilon_bound(
            args.adaptive_mode, **{names[k]: getattr(args, k) for k in names}
        )

    payload = {}
    if res is not None:
        payload["epsilon"] = res.epsilon
        payload["delta"] = res.delta
    payload.update(out)
    payload["mode"] = mode
    payload["inputs"] = inputs
    _emit(args, payload)
    return 0


# ---------------------------------------------------------------------------
# shuffle


def _cmd_shuffle(args) -> int:
    model = load_model_spec(args.model)
    shapes = load_shapes(args.shapes) if args.shapes else None
    grads = read_gradient_csv(args.gradients, shapes)
    k = len(model)
    if not grads or len(grads) % k:
        raise ValueError(
            f"gradient CSV has {len(grads)} rows; expected a positive multiple of the {k} parameter groups"
        )
    config = AccountantConfig(args.epsilon, args.delta, args.steps, args.clip, args.batch)
    if args.block_sizes is not None:
        gen = Generator.from_block_sizes(model, config, args.block_sizes)
    else:
        gen = init_generator(model, config)
    if args.step:
        gen = Generator(gen.model, gen.config, gen.plan, gen.plan.epsilon_total, args.step)

    out = []
    for start in range(0, len(grads), k):
        private, gen = generate(gen, grads[start : start + k], args.seed)
        out.extend(private.grads)
    write_gradient_csv(out, args.out)

    spent = privacy_spent(gen)
    inputs = {
        "gradients": str(args.gradients),
        "model": model.to_dict(),
        "epsilon": args.epsilon,
        "delta": args.delta,
        "steps": args.steps,
        "clip": args.clip,
        "batch": args.batch,
        "seed": args.seed,
        "step": args.step,
    }
    if args.block_sizes is not None:
        inputs["block_sizes"] = args.block_sizes
    if args.shapes:
        inputs["shapes"] = str(args.shapes)
    _emit(
        args,
        {
            "epsilon_spent": spent.epsilon,
            "delta": spent.delta,
            "steps_taken": gen.steps_taken,
            "fraction_elapsed": spent.fraction_elapsed,
            "plan": gen.plan.to_dict(),
            "output": str(args.out),
            "inputs": inputs,
        },
    )
    return 0


# ---------------------------------------------------------------------------
# bounds

_BOUND_FLAGS = (
    "beta",
    "var_g",
    "dims",
    "betas",
    "clip",
    "d",
    "min_gap_sq",
    "mi",
    "delta2g",
    "utility",
    "epsilon",
    "t",
    "delta",
    "eps_t",
    "r0",
    "g",
    "sigma",
    "lipschitz",
    "eta",
    "rel_tol",
)

# which -> (required flags, optional flags)
_BOUND_KINDS = {
    "variance": (["beta", "var_g"], ()),
    "utility": (["dims", "betas", "clip"], ()),
    "mi": (["dims", "betas"], ()),
    "reconstruction": (["d"], ("beta", "var_g", "min_gap_sq", "mi")),
    "opt-epsilon": (["d", "delta2g", "utility"], ()),
    "opt-block": (["d", "epsilon", "t", "delta"], ()),
    "opt-adaptive": (["d", "eps_t", "utility"], ()),
    "opt-lr": (["r0", "g", "t"], ()),
    "convergence": (["r0", "g", "sigma", "lipschitz", "eta", "t", "delta"], ()),
    "block-ratio": (["dims", "betas", "rel_tol"], ()),
    "variance-diagnostic": ([], ()),
    "mi-diagnostic": ([], ()),
    "utility-diagnostic": ([], ()),
}


def _bound_reports(which: str, a, inputs: dict) -> list[bnd.BoundReport]:
    R = bnd.BoundReport
    if which == "variance":
        return [R("variance_bound", bnd.variance_bound(a.beta, a.var_g), inputs)]
    if which == "utility":
        return [R("utility_bound", bnd.utility_bound(a.dims, a.betas, a.clip), inputs)]
    if which == "mi":
        return [R("mi_bound", bnd.mi_bound(a.dims, a.betas), inputs)]
    if which == "reconstruction":
        kw = {k: inputs[k] for k in ("beta", "var_g", "min_gap_sq", "mi") if k in inputs}
        rb = bnd.reconstruction_bounds(a.d, **kw)
        return [
            R(
                "reconstruction_bounds",
                rb.guess_prob,
                inputs,
                details={
                    "log_guess_prob": rb.log_guess_prob,
                    "expected_error_lb_gap": rb.expected_error_lb_gap,
                    "expected_error_lb_rd": rb.expected_error_lb_rd,
                },
            )
        ]
    if which == "opt-epsilon":
        value = bnd.optimal_epsilon_for_utility(a.d, a.delta2g, a.utility)
        note = "negative: the utility target exceeds the worst-case error" if value < 0 else None
        return [R("optimal_epsilon_for_utility", value, inputs, diagnostic=note)]
    if which == "opt-block":
        return [R("optimal_block_size", bnd.optimal_block_size(a.d, a.epsilon, a.t, a.delta), inputs)]
    if which == "opt-adaptive":
        beta, clip_value = bnd.optimal_adaptive_params(a.d, a.eps_t, a.utility)
        return [R("optimal_adaptive_params", beta, inputs, details={"clip": clip_value})]
    if which == "opt-lr":
        return [R("optimal_learning_rate", bnd.optimal_learning_rate(a.r0, a.g, a.t), inputs)]
    if which == "convergence":
        inp = bnd.ConvergenceInputs(a.r0, a.g, a.sigma, a.lipschitz, a.eta, a.t, a.delta)
        return [R("convergence_bound", bnd.convergence_bound(inp), inputs)]
    if which == "block-ratio":
        holds = bnd.check_block_ratio(a.betas, a.dims, a.rel_tol)
        return [R("block_ratio", a.rel_tol, inputs, holds=holds)]
    if which == "variance-diagnostic":
        return bnd.variance_bound_diagnostic()
    if which == "mi-diagnostic":
        return bnd.mi_bound_diagnostic()
    return bnd.utility_bound_diagnostic()


def _cmd_bounds(args) -> int:
    required: list[str] = []
    optional: list[str] = []
    for which in args.which:
        req, opt = _BOUND_KINDS[which]
        required += [r for r in req if r not in required]
        optional += [o for o in opt if o not in optional]
    label = "--which " + ",".join(args.which)
    _take(args, label, required, tuple(optional), _BOUND_FLAGS)
    reports = []
    for which in args.which:
        req, opt = _BOUND_KINDS[which]
        inputs = {k: getattr(args, k) for k in (*req, *opt) if getattr(args, k) is not None}
        reports.extend(_bound_reports(which, args, inputs))
    _emit(args, [r.to_dict() for r in reports])
    return 0


# ---------------------------------------------------------------------------
# train


def _cmd_train(args) -> int:
    problem = make_problem(
        args.kind,
        args.dim,
        args.noise_std,
        args.seed if args.problem_seed is None else args.problem_seed,
        symmetric=args.symmetric,
        center=args.center,
    )
    cfg = TrainingConfig(
        mechanism=args.mechanism,
        steps=args.steps,
        learning_rate=args.lr,
        clip=args.clip,
        block_sizes=None if args.block_sizes is None else tuple(args.block_sizes),
        noise_multiplier=args.noise_multiplier,
        grad_bound=args.grad_bound,
        seed=args.seed,
        groups=args.groups,
        target_epsilon=args.target_epsilon,
        delta=args.delta,
    )
    traj = run(problem, cfg)

    if args.trajectory_out:
        lines = ["step,loss,dist,eps"]
        lines += [
            ",".join([str(r.step), format_float(r.loss), format_float(r.dist), format_float(r.epsilon_spent)])
            for r in traj.records
        ]
        Path(args.trajectory_out).write_text("\n".join(lines) + "\n")

    report = None
    if cfg.steps > 0:
        R0 = traj.records[0].dist
        if args.grad_bound is not None:
            G, G_source = args.grad_bound, "flag"
        else:
            # largest true gradient norm seen plus the widest possible noise vector
            G = max(float(np.linalg.norm(problem.gradient(th))) for th in traj.iterates)
            G += math.sqrt(3.0) * problem.noise_std * math.sqrt(problem.dim)
            G_source = "empirical"
        if cfg.mechanism == "blogs":
            # split G^2 across groups in proportion to their size
            G_list = [G * math.sqrt(d / problem.dim) for d in traj.group_dims]
            sigma = bnd.paramwise_sigma(traj.block_sizes, G_list)
        elif cfg.mechanism == "gaussian":
            sigma = cfg.noise_multiplier * cfg.clip * math.sqrt(problem.dim)
        else:
            sigma = 0.0
        inp = bnd.ConvergenceInputs(
            R0, G, sigma, problem.smoothness, traj.learning_rate, cfg.steps, args.bound_delta
        )
        report = compare_to_bound(traj, inp).to_dict()
        report["inputs"]["G_source"] = G_source

    _emit(
        args,
        {
            "final_loss": traj.final_loss,
            "avg_loss": traj.avg_loss,
            "optimum_loss": traj.optimum_loss,
            "suboptimality": traj.suboptimality,
            "epsilon_spent": traj.records[-1].epsilon_spent,
            "learning_rate": traj.learning_rate,
            "block_sizes": None if traj.block_sizes is None else list(traj.block_sizes),
            "theta_bar": traj.theta_bar.tolist(),
            "warnings": traj.warnings,
            "bound": report,
            "trajectory": args.trajectory_out,
            "inputs": {
                "kind": args.kind,
                "dim": args.dim,
                "noise_std": args.noise_std,
                "symmetric": args.symmetric,
                "center": args.center,
                "mechanism": args.mechanism,
                "steps": args.steps,
                "lr": args.lr,
                "clip": args.clip,
                "block_sizes": args.block_sizes,
                "noise_multiplier": args.noise_multiplier,
                "grad_bound": args.grad_bound,
                "seed": args.seed,
                "problem_seed": args.problem_seed,
                "groups": args.groups,
                "target_epsilon": args.target_epsilon,
                "delta": args.delta,
                "bound_delta": args.bound_delta,
            },
        },
    )
    return 0


# ---------------------------------------------------------------------------
# oracle


def _cmd_oracle(args) -> int:
    g = GradientVector(args.gradient, args.shape)
    dist = enumerate_block_shuffles(g, args.block_size)
    outcomes = [
        {"output": list(y), "probability": p} for y, p in sorted(dist.outcomes.items())
    ]
    _emit(
        args,
        {
            "num_blocks": dist.num_blocks,
            "num_outcomes": len(outcomes),
            "outcomes": outcomes,
            "mean": dist.mean().tolist(),
            "variance": dist.variance().tolist(),
            "inputs": {"gradient": args.gradient, "shape": args.shape, "block_size": args.block_size},
        },
    )
    return 0


# ---------------------------------------------------------------------------
# parser


def _json_out(p):
    p.add_argument("--json-out", metavar="PATH", help="also write the JSON output to PATH")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dpblogs", description="Block-wise gradient shuffling with privacy accounting.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("optimize", help="choose per-group block sizes for a budget")
    p.add_argument("--model", required=True, help="model spec JSON")
    p.add_argument("--epsilon", type=float, required=True, help="target epsilon")
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--clip", type=float, required=True)
    p.add_argument("--batch", type=int, default=1)
    _json_out(p)
    p.set_defaults(func=_cmd_optimize)

    p = sub.add_parser("compose", help="composition and subsampling calculators")
    p.add_argument("--mode", required=True, choices=list(_COMPOSE_MODES))
    p.add_argument("--epsilon", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--t", type=int, help="number of steps T")
    p.add_argument("--delta-prime", type=float)
    p.add_argument("--q", type=float, help="sampling ratio or probability")
    p.add_argument("--eps-list", type=_floats)
    p.add_argument("--delta-list", type=_floats)
    p.add_argument("--epsilon-prime", type=float)
    p.add_argument("--epsilon-spent", type=float)
    p.add_argument("--step", type=int, help="current step index t")
    p.add_argument("--delta-star", type=float)
    p.add_argument("--adaptive-mode", choices=list(comp.ADAPTIVE_MODES))
    p.add_argument("--max-eps", type=float)
    p.add_argument("--max-delta", type=float)
    p.add_argument("--c-max", type=float)
    p.add_argument("--beta-max", type=int)
    p.add_argument("--d", type=int)
    _json_out(p)
    p.set_defaults(func=_cmd_compose)

    p = sub.add_parser("shuffle", help="clip and block-shuffle gradients from CSV")
    p.add_argument("--gradients", required=True, help="gradient CSV, one row per group per step")
    p.add_argument("--model", required=True, help="model spec JSON")
    p.add_argument("--shapes", help="shape JSON for the CSV rows")
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--clip", type=float, required=True)
    p.add_argument("--batch", type=int, default=1)
    p.add_argument("--block-sizes", type=_ints, help="fixed block sizes; skips the optimizer")
    p.add_argument("--seed", type=_seed, required=True)
    p.add_argument("--step", type=int, default=0, help="steps already taken before this file")
    p.add_argument("--out", required=True, help="privatized gradient CSV")
    _json_out(p)
    p.set_defaults(func=_cmd_shuffle)

    p = sub.add_parser("bounds", help="evaluate bounds and diagnostics")
    p.add_argument("--which", action="append", required=True, choices=list(_BOUND_KINDS))
    p.add_argument("--beta", type=int)
    p.add_argument("--var-g", type=float)
    p.add_argument("--dims", type=_ints)
    p.add_argument("--betas", type=_ints)
    p.add_argument("--clip", type=float)
    p.add_argument("--d", type=int)
    p.add_argument("--min-gap-sq", type=float)
    p.add_argument("--mi", type=float)
    p.add_argument("--delta2g", type=float, help="sensitivity Delta")
    p.add_argument("--utility", type=float, help="utility target U")
    p.add_argument("--epsilon", type=float)
    p.add_argument("--t", type=int)
    p.add_argument("--delta", type=float)
    p.add_argument("--eps-t", type=float)
    p.add_argument("--r0", type=float)
    p.add_argument("--g", type=float)
    p.add_argument("--sigma", type=float)
    p.add_argument("--lipschitz", "--L", dest="lipschitz", type=float, help="smoothness constant L")
    p.add_argument("--eta", type=float)
    p.add_argument("--rel-tol", type=float)
    _json_out(p)
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("train", help="toy SGD run with a convergence-bound check")
    p.add_argument("--kind", choices=["quadratic", "logistic"], default="quadratic")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--noise-std", type=float, default=0.0)
    p.add_argument("--symmetric", action="store_true")
    p.add_argument("--center", type=float, default=3.0)
    p.add_argument("--mechanism", choices=["none", "blogs", "gaussian"], default="none")
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--lr", type=_learning_rate, default=0.1)
    p.add_argument("--clip", type=float, default=math.inf)
    p.add_argument("--block-sizes", type=_ints)
    p.add_argument("--noise-multiplier", type=float, default=0.0)
    p.add_argument("--grad-bound", type=float)
    p.add_argument("--seed", type=_seed, required=True)
    p.add_argument("--problem-seed", type=_seed, help="defaults to --seed")
    p.add_argument("--groups", type=int, default=1)
    p.add_argument("--target-epsilon", type=float)
    p.add_argument("--delta", type=float, default=1e-5)
    p.add_argument("--bound-delta", type=float, default=0.05, help="failure probability of the bound")
    p.add_argument("--trajectory-out", metavar="PATH", help="trajectory CSV (step,loss,dist,eps)")
    _json_out(p)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("oracle", help="enumerate every block shuffle of a gradient")
    p.add_argument("--gradient", type=_floats, required=True)
    p.add_argument("--block-size", type=int, required=True)
    p.add_argument("--shape", type=_ints)
    _json_out(p)
    p.set_defaults(func=_cmd_oracle)
    return parser


def main(argv=None) -> int:
    """Run one subcommand and return its exit status."""
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            args = build_parser().parse_args(argv)
            status = args.func(args)
        except (NumericDomainError, TrainingDivergedError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            status = 2
        except (ValueError, OSError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            status = 1
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
