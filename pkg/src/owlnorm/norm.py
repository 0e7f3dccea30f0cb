"""Ordered weighted l1 norm, its dual norm, and the magnitude-sort machinery.

The norm of ``x`` is ``sum_i w_i * |x|_(i)`` where ``|x|_(1) >= |x|_(2) >= ...``
are the entries of ``x`` sorted by decreasing magnitude and ``w`` is a valid
weight vector (see :mod:`owlnorm.weights`). With constant weights this is the
scaled l1 norm; with weights ``(t1, 0, ..., 0)`` it is ``t1 * ||x||_inf``.

The dual norm has a closed form: the unit ball is a polytope whose canonical
vertices have k equal-magnitude non-zero entries of size ``1 / (w_1+...+w_k)``,
so the dual norm is the best scaled top-k partial sum of ``|x|``. A brute-force
vertex enumeration is included for small n as an independent cross-check.
"""

import itertools
from dataclasses import dataclass

import numpy as np

from .weights import WeightVector, as_weights

# vertex enumeration is combinatorial; keep it an oracle for tiny n
_MAX_ENUMERATION_DIM = 8


@dataclass(frozen=True)
class SortPermutation:
    """Permutation realizing a sort of a vector by decreasing magnitude.

    ``forward[i]`` is the original index of the entry placed at sorted
    position ``i``; ``inverse`` satisfies ``inverse[forward[i]] = i``. Ties
    in magnitude are broken by ascending original index, so the permutation
    is a deterministic function of the input.
    """

    forward: np.ndarray
    inverse: np.ndarray


def sort_by_abs_desc(x):
    """Sort ``x`` by decreasing magnitude, keeping signs.

    Returns ``(sorted, perm)`` with ``sorted[i] = x[perm.forward[i]]``.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise ValueError("expected a non-empty 1-D vector")
    forward = np.argsort(-np.abs(x), kind="stable")
    inverse = np.empty_like(forward)
    inverse[forward] = np.arange(x.size)
    return x[forward], SortPermutation(forward=forward, inverse=inverse)


def unsort(sorted_x, perm: SortPermutation):
    """Invert :func:`sort_by_abs_desc`: put entries back in original positions.

    The round-trip ``unsort(*sort_by_abs_desc(x))`` reproduces ``x`` bit-exactly.
    """
    sorted_x = np.asarray(sorted_x, dtype=float)
    if sorted_x.size != perm.forward.size:
        raise ValueError("length mismatch between vector and permutation")
    out = np.empty_like(sorted_x)
    out[perm.forward] = sorted_x
    return out


def norm_value(x, weights) -> float:
    """Evaluate the ordered weighted l1 norm of ``x``."""
    w = as_weights(weights)
    x = np.asarray(x, dtype=float)
    if x.shape != w.values.shape:
        raise ValueError("dimension mismatch between x and weights")
    xs = np.sort(np.abs(x))[::-1]
    return float(np.dot(w.values, xs))


def dual_norm(x, weights) -> float:
    """Dual of the ordered weighted l1 norm.

    Equals ``max_k (|x|_(1) + ... + |x|_(k)) / (w_1 + ... + w_k)`` over
    prefixes with positive weight sum. O(n log n): one sort plus two prefix
    sums, evaluated left to right with plain (uncompensated) summation.
    """
    w = as_weights(weights)
    x = np.asarray(x, dtype=float)
    if x.shape != w.values.shape:
        raise ValueError("dimension mismatch between x and weights")
    abs_sorted = np.sort(np.abs(x))[::-1]
    prefix_x = np.cumsum(abs_sorted)
    prefix_w = np.cumsum(w.values)
    # w[0] > 0 makes every prefix positive; the guard documents the boundary
    valid = prefix_w > 0
    if not valid.any():
        return 0.0
    return float(np.max(prefix_x[valid] / prefix_w[valid]))


def dual_norm_by_vertex_enumeration(x, weights) -> float:
    """Dual norm by brute force over all unit-ball vertices (small n only).

    Enumerates, for every k, every placement of the k non-zero entries and
    every sign pattern, and takes the best inner product with ``x``. Serves
    as an independent oracle for :func:`dual_norm`; cost grows like 3^n.
    """
    w = as_weights(weights)
    x = np.asarray(x, dtype=float)
    if x.shape != w.values.shape:
        raise ValueError("dimension mismatch between x and weights")
    n = x.size
    if n > _MAX_ENUMERATION_DIM:
        raise ValueError(f"vertex enumeration supports n <= {_MAX_ENUMERATION_DIM}")
    prefix_w = np.cumsum(w.values)
    best = 0.0
    for k in range(1, n + 1):
        if prefix_w[k - 1] <= 0:
            continue
        tau = 1.0 / prefix_w[k - 1]
        for support in itertools.combinations(range(n), k):
            xs = x[list(support)]
            for signs in itertools.product((-1.0, 1.0), repeat=k):
                best = max(best, tau * float(np.dot(signs, xs)))
    return best


def unit_ball_vertices_2d(weights):
    """Vertex candidates of the 2-D unit ball, ordered by angle.

    For weights ``(w1, w2)`` the candidates are the four axis points at
    ``tau1 = 1/w1`` and the four diagonal points at ``tau2 = 1/(w1+w2)``.
    Returns ``(points, degenerate)`` where ``points`` is an (m, 2) array in
    counter-clockwise order starting at angle 0. When ``w1 == w2`` the
    diagonal points are interior to the edges (l1 ball) and are dropped.
    When ``w2 == 0`` the axis points coincide in norm value with the
    diagonal ones (l-infinity ball); all eight are kept and ``degenerate``
    is True to flag that not all of them are true vertices.
    """
    w = as_weights(weights)
    if len(w) != 2:
        raise ValueError("unit ball vertices are only available for n = 2")
    w1, w2 = w.values
    tau1 = 1.0 / w1
    tau2 = 1.0 / (w1 + w2)
    axis = [(tau1, 0.0), (0.0, tau1), (-tau1, 0.0), (0.0, -tau1)]
    diag = [(tau2, tau2), (-tau2, tau2), (-tau2, -tau2), (tau2, -tau2)]
    degenerate = w2 == 0
    points = axis if w1 == w2 else axis + diag
    angles = [np.arctan2(py, px) % (2.0 * np.pi) for px, py in points]
    order = np.argsort(angles)
    return np.array(points)[order], degenerate
