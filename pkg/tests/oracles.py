"""Independent reference evaluations used by the test-suite.

Closed forms are re-evaluated with mpmath at 50 significant digits, written
straight from the formulas without the library's log-space rearrangements.
Search routines are checked against plain linear scans over numpy arrays.
"""

from __future__ import annotations

import itertools
import math

import mpmath as mp
import numpy as np

mp.mp.dps = 50


def rel_err(got, want) -> float:
    got, want = mp.mpf(got), mp.mpf(want)
    if want == 0:
        return float(abs(got))
    return float(abs(got - want) / abs(want))


# ---------------------------------------------------------------------------
# accountant


def eps1(d, C):
    d, C = mp.mpf(d), mp.mpf(C)
    return 2 * mp.log(1 + d * (mp.exp(2 * C / mp.sqrt(d)) - 1))


def eps2(d, beta, C):
    d, beta, C = mp.mpf(d), mp.mpf(beta), mp.mpf(C)
    r = beta / d
    return 2 * mp.log(1 + r * (mp.exp(2 * C * mp.sqrt(r)) - 1))


def eps_group(d, beta, C):
    return min(eps1(d, C), eps2(d, beta, C))


def run_total(eps, T, delta):
    eps, T, delta = mp.mpf(eps), mp.mpf(T), mp.mpf(delta)
    return mp.sqrt(2 * T * mp.log(1 / delta)) * eps + T * eps * (mp.exp(eps) - 1)


def largest_block_scan(d: int, C: float, target: float) -> int:
    """Largest beta in [1, d-1] with eps <= target by scanning every beta; 1 if none."""
    if d == 1:
        return 1
    betas = np.arange(1, d, dtype=np.float64)
    r = betas / d
    e1 = 2 * np.log1p(d * np.expm1(2 * C / np.sqrt(d)))
    e2 = 2 * np.log1p(r * np.expm1(2 * C * np.sqrt(r)))
    ok = np.nonzero(np.minimum(e1, e2) <= target)[0]
    return int(betas[ok[-1]]) if ok.size else 1


# ---------------------------------------------------------------------------
# composition


def advanced(eps, T, delta_prime):
    return run_total(eps, T, delta_prime)


def per_step(eps_total, T, delta_prime):
    e, T, dp = mp.mpf(eps_total), mp.mpf(T), mp.mpf(delta_prime)
    return e / (mp.sqrt(2 * T * mp.log(1 / dp)) + T * (mp.exp(e / T) - 1))


def subsample(eps, q):
    return mp.log(1 + mp.mpf(q) * (mp.exp(mp.mpf(eps)) - 1))


def poisson_eps0(delta, q):
    """Closed form of q (1 - e^{-eps0}) = delta."""
    return -mp.log(1 - mp.mpf(delta) / mp.mpf(q))


def poisson(delta, q):
    q = mp.mpf(q)
    return mp.log((1 - q) + q * mp.exp(poisson_eps0(delta, q)))


def q_star(eps, T):
    eps, T = mp.mpf(eps), mp.mpf(T)
    return min(mp.mpf(1), (mp.exp(eps / T) - 1) / (mp.exp(eps) - 1))


def q_prob(eps_prime, eps):
    return (mp.exp(mp.mpf(eps_prime)) - 1) / (mp.exp(mp.mpf(eps)) - 1)


def paramwise(eps_list, delta_list, T, delta):
    s = mp.fsum(mp.mpf(e) for e in eps_list)
    sd = mp.fsum(mp.mpf(x) for x in delta_list)
    T, delta = mp.mpf(T), mp.mpf(delta)
    eps_total = mp.sqrt(2 * T * mp.log(1 / delta)) * s + T * s * (mp.exp(mp.mpf(max(eps_list))) - 1)
    return eps_total, 1 - (1 - delta) * (1 - sd) ** T


def two_sided(C_max, beta_max, d, T, delta):
    root = mp.sqrt(2 * mp.mpf(T) * mp.log(1 / mp.mpf(delta)))
    e1, e2 = eps1(d, C_max), eps2(d, beta_max, C_max)
    return min(root * e1 + T * e1**2, root * e2 + T * e2**2)


# ---------------------------------------------------------------------------
# bounds


def variance_bound(beta, var_g):
    return (mp.mpf(beta) - 1) / beta * mp.mpf(var_g)


def utility_bound(dims, betas, C):
    return mp.fsum((mp.mpf(d) - b) * (2 * mp.mpf(C)) ** 2 / b for d, b in zip(dims, betas))


def mi_bound(dims, betas):
    return mp.fsum(mp.log(mp.mpf(d) / b) for d, b in zip(dims, betas))


def reconstruction(d, beta, var_g, min_gap_sq, mi):
    """(guess probability, gap error bound, rate-distortion error bound)."""
    p = 1 / mp.factorial(d)
    rd = (mp.mpf(d) - beta) * mp.exp(-2 * mp.mpf(mi) / d) * mp.mpf(var_g)
    return p, (1 - p) * mp.mpf(min_gap_sq), rd


def optimal_epsilon(d, delta2g, U):
    return mp.mpf(d) / 2 * mp.log(2 * mp.mpf(delta2g) ** 2 * d / mp.mpf(U))


def optimal_block(d, eps, T, delta):
    root = mp.sqrt(2 * mp.mpf(T) * mp.log(1 / mp.mpf(delta)))
    return int(min(d, max(1, mp.floor(d * mp.exp(-2 * mp.mpf(eps) / (root * d))))))


def optimal_adaptive(d, eps_t, U):
    beta = int(min(d, max(1, mp.floor(d * mp.exp(-2 * mp.mpf(eps_t) / d)))))
    return beta, mp.sqrt(mp.mpf(U) / (2 * d))


def optimal_lr(R0, G, T):
    return mp.sqrt(mp.mpf(R0) ** 2 / (mp.mpf(G) ** 2 * T))


def convergence(R0, G, sigma, L, eta, T, delta):
    R0, G, sigma, L, eta, T, delta = map(mp.mpf, (R0, G, sigma, L, eta, T, delta))
    return (
        R0**2 / (2 * eta * T)
        + eta * L * (G**2 + sigma**2) / 2
        + (G + sigma) * mp.sqrt(2 * mp.log(2 / delta) / T)
    )


# ---------------------------------------------------------------------------
# shuffle


def shuffle_outcomes(values, beta):
    """Outcome -> probability by brute force over index permutations, no merging tricks."""
    d = len(values)
    m = -(-d // beta)
    padded = list(values) + [0.0] * (m * beta - d)
    counts: dict[tuple, int] = {}
    for perm in itertools.permutations(range(m)):
        out = []
        for j in perm:
            out.extend(padded[j * beta : (j + 1) * beta])
        key = tuple(out[:d])
        counts[key] = counts.get(key, 0) + 1
    total = math.factorial(m)
    return {k: c / total for k, c in counts.items()}


def moments(outcomes):
    """Per-component mean and population variance of an outcome law, with fsum."""
    keys = list(outcomes)
    d = len(keys[0])
    mean = [math.fsum(outcomes[k] * k[i] for k in keys) for i in range(d)]
    var = [math.fsum(outcomes[k] * (k[i] - mean[i]) ** 2 for k in keys) for i in range(d)]
    return mean, var
