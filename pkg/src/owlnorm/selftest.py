"""Randomized invariant battery behind the ``selftest`` CLI command.

Each check draws fresh instances from a seeded generator and verifies one
mathematical property the library is supposed to guarantee. The battery is
sized to run in a few seconds; the test suite shipped with the source runs
the same properties at much larger sample counts.
"""

from typing import NamedTuple

import numpy as np

from .norm import dual_norm, dual_norm_by_vertex_enumeration, norm_value, sort_by_abs_desc, unsort
from .prox import group_and_average, prox, prox_certificate
from .solver import Problem, SolverConfig, duality_gap, objective, solve
from .weights import WeightVector, l1_weights, linf_weights, oscar_weights


class CheckResult(NamedTuple):
    name: str
    ok: bool
    detail: str


def random_weights(rng, n) -> WeightVector:
    """Draw a valid weight vector: OSCAR, l1, l-infinity, or generic sorted."""
    kind = rng.randint(4)
    if kind == 0:
        return oscar_weights(n, rng.uniform(0.0, 2.0), rng.uniform(0.01, 1.0))
    if kind == 1:
        return l1_weights(n, rng.uniform(0.1, 2.0))
    if kind == 2:
        return linf_weights(n, rng.uniform(0.1, 2.0))
    w = np.sort(np.abs(rng.randn(n)))[::-1]
    w[0] += 0.05
    return WeightVector(w)


def _check_sort_roundtrip(rng):
    for _ in range(200):
        x = rng.randn(rng.randint(1, 30))
        s, perm = sort_by_abs_desc(x)
        if not np.array_equal(unsort(s, perm), x):
            return False, "round-trip mismatch"
        if np.any(np.diff(np.abs(s)) > 0):
            return False, "sorted magnitudes not non-increasing"
    return True, ""


def _check_norm_axioms(rng):
    worst = 0.0
    for _ in range(500):
        n = rng.randint(1, 20)
        w = random_weights(rng, n)
        x, z = rng.randn(n), rng.randn(n)
        slack = 1e-12 * (1.0 + norm_value(x, w) + norm_value(z, w))
        worst = max(worst, norm_value(x + z, w) - norm_value(x, w) - norm_value(z, w))
        if norm_value(x + z, w) > norm_value(x, w) + norm_value(z, w) + slack:
            return False, "triangle inequality violated"
        a = rng.randn()
        if abs(norm_value(a * x, w) - abs(a) * norm_value(x, w)) > slack:
            return False, "homogeneity violated"
        omega = norm_value(x, w)
        w1 = w.values[0]
        lo, hi = w1 * np.max(np.abs(x)), w1 * np.sum(np.abs(x))
        if omega < lo - 1e-12 * (1 + lo) or omega > hi + 1e-12 * (1 + hi):
            return False, "sandwich bounds violated"
    return True, f"max triangle slack {worst:.2e}"


def _check_dual_oracle(rng):
    worst = 0.0
    for _ in range(150):
        n = rng.randint(1, 6)
        w = random_weights(rng, n)
        x = rng.randn(n) * rng.uniform(0.1, 5.0)
        fast = dual_norm(x, w)
        slow = dual_norm_by_vertex_enumeration(x, w)
        err = abs(fast - slow) / (1.0 + abs(slow))
        worst = max(worst, err)
        if err > 1e-12:
            return False, f"dual norm mismatch {err:.2e}"
    return True, f"max rel err {worst:.2e}"


def _check_cauchy_schwarz(rng):
    for _ in range(300):
        n = rng.randint(1, 15)
        w = random_weights(rng, n)
        x, u = rng.randn(n), rng.randn(n)
        bound = norm_value(x, w) * dual_norm(u, w)
        if abs(float(np.dot(x, u))) > bound + 1e-12 * (1.0 + bound):
            return False, "pairing bound violated"
    return True, ""


def _check_prox_certificate(rng):
    worst = 0.0
    for _ in range(200):
        n = rng.randint(1, 40)
        w = random_weights(rng, n)
        v = rng.randn(n) * rng.uniform(0.1, 4.0)
        cert = prox_certificate(v, prox(v, w), w)
        worst = max(worst, cert.dual_value - 1.0, cert.alignment_gap)
        if not cert.ok:
            return False, f"certificate failed (dual {cert.dual_value:.12f})"
    return True, f"max residual {worst:.2e}"


def _check_grouping(rng):
    for _ in range(200):
        n = rng.randint(1, 40)
        w = random_weights(rng, n)
        v = np.sort(np.abs(rng.randn(n)))[::-1]
        vbar, wbar, _ = group_and_average(v, w)
        if np.any(np.diff(vbar - wbar) > 0):
            return False, "averaged differences not non-increasing"
        if abs(vbar.sum() - v.sum()) > 1e-12 * (1.0 + abs(v.sum())):
            return False, "value sum not preserved"
        if abs(wbar.sum() - w.values.sum()) > 1e-12 * (1.0 + w.values.sum()):
            return False, "weight sum not preserved"
    return True, ""


def _check_soft_threshold(rng):
    for _ in range(100):
        n = rng.randint(1, 30)
        lam = rng.uniform(0.05, 1.5)
        v = rng.randn(n) * 2.0
        expected = np.sign(v) * np.maximum(np.abs(v) - lam, 0.0)
        if np.max(np.abs(prox(v, l1_weights(n, lam)) - expected)) > 1e-12:
            return False, "constant weights differ from soft thresholding"
    return True, ""


def _check_solver(rng):
    m, n = 30, 15
    A = rng.randn(m, n)
    y = rng.randn(m) * 2.0
    w = oscar_weights(n, 0.5, 0.1)
    result = solve(Problem(A, y, w), SolverConfig(algorithm="fista"))
    if not result.converged:
        return False, "FISTA did not converge"
    if np.any(np.diff(result.objective_trace) > 0):
        return False, "objective trace increased"
    # identity design: the solve must reduce to a single prox
    y2 = rng.randn(n)
    res2 = solve(Problem(np.eye(n), y2, w), SolverConfig())
    if np.max(np.abs(res2.x - prox(y2, w))) > 1e-8:
        return False, "identity-design solve differs from prox"
    # weights scaled to make zero optimal
    scale = dual_norm(A.T @ y, w) * 1.01
    wz = w.scaled(scale)
    res3 = solve(Problem(A, y, wz), SolverConfig())
    if np.any(res3.x != 0.0):
        return False, "zero-screening instance returned non-zero"
    gap = duality_gap(Problem(A, y, w), result.x)
    if gap > 1e-6 * (1.0 + abs(objective(Problem(A, y, w), result.x))):
        return False, "final duality gap too large"
    return True, f"fista iterations {result.iterations}"


_CHECKS = [
    ("sort round-trip", _check_sort_roundtrip),
    ("norm axioms and sandwich", _check_norm_axioms),
    ("dual norm vs vertex enumeration", _check_dual_oracle),
    ("norm/dual pairing bound", _check_cauchy_schwarz),
    ("prox optimality certificate", _check_prox_certificate),
    ("group-and-average invariants", _check_grouping),
    ("constant-weight soft thresholding", _check_soft_threshold),
    ("solver convergence and screening", _check_solver),
]


def run_selftest(seed: int = 0):
    """Run every check with its own seeded generator; returns CheckResults."""
    results = []
    for i, (name, fn) in enumerate(_CHECKS):
        rng = np.random.RandomState(seed + i)
        ok, detail = fn(rng)
        results.append(CheckResult(name=name, ok=ok, detail=detail))
    return results
