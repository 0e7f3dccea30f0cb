"""Weight vectors for the ordered weighted l1 (OWL) norm.

A valid weight vector is non-negative, non-increasing, and has a strictly
positive leading entry; that last condition is what makes the weighted
sorted l1 penalty a proper norm. Constructors are provided for the OSCAR
family (linearly decreasing weights) and the l1/l-infinity special cases.
"""

import numpy as np


class WeightVector:
    """Validated weights for the ordered weighted l1 norm.

    Wraps a read-only float array that is non-negative, non-increasing and
    has ``values[0] > 0``. Validation uses exact comparisons on the given
    floating-point values: weights are caller-supplied and silently
    reordering them would mask bugs. Trailing zeros are allowed (they are
    what produces the l-infinity special case).

    Instances are immutable and safe to share across threads.
    """

    __slots__ = ("values",)

    def __init__(self, values):
        arr = np.array(values, dtype=float)
        if arr.ndim != 1:
            raise ValueError("weights must be a 1-D sequence")
        if arr.size == 0:
            raise ValueError("weights are empty")
        if not np.all(np.isfinite(arr)):
            raise ValueError("weights contain non-finite values")
        if np.any(arr < 0):
            raise ValueError("weights contain a negative value")
        if np.any(np.diff(arr) > 0):
            raise ValueError("weights are not sorted in non-increasing order")
        if arr[0] == 0:
            raise ValueError("leading weight must be strictly positive")
        arr.setflags(write=False)
        self.values = arr

    def __len__(self):
        return self.values.size

    def __repr__(self):
        return f"WeightVector({self.values.tolist()!r})"

    def __eq__(self, other):
        if not isinstance(other, WeightVector):
            return NotImplemented
        return self.values.shape == other.values.shape and bool(
            np.all(self.values == other.values)
        )

    def scaled(self, factor: float) -> "WeightVector":
        """Return a new WeightVector with every weight multiplied by ``factor > 0``."""
        if not factor > 0:
            raise ValueError("scale factor must be positive")
        return WeightVector(self.values * factor)


def oscar_weights(n: int, lam1: float, lam2: float) -> WeightVector:
    """OSCAR weights ``lam1 + lam2 * (n - 1 - i)`` for 0-based index i.

    ``lam2 = 0`` gives the constant vector (plain l1 penalty at level
    ``lam1``); ``lam2 > 0`` adds the pairwise-max penalty that induces
    coefficient grouping. Requires ``lam1 + lam2*(n-1) > 0`` so the leading
    weight is positive.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if lam1 < 0 or lam2 < 0:
        raise ValueError("lam1 and lam2 must be non-negative")
    if lam1 + lam2 * (n - 1) <= 0:
        raise ValueError("lam1 + lam2*(n-1) must be positive (all-zero weights)")
    return WeightVector(lam1 + lam2 * (n - 1 - np.arange(n, dtype=float)))


def l1_weights(n: int, lam: float) -> WeightVector:
    """Constant weights: the penalty reduces to ``lam * ||x||_1``."""
    return oscar_weights(n, lam, 0.0)


def linf_weights(n: int, t1: float) -> WeightVector:
    """Weights ``(t1, 0, ..., 0)``: the penalty reduces to ``t1 * ||x||_inf``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if t1 <= 0:
        raise ValueError("t1 must be positive")
    w = np.zeros(n)
    w[0] = t1
    return WeightVector(w)


def as_weights(weights) -> WeightVector:
    """Coerce an array-like to a validated WeightVector (no-op if already one)."""
    if isinstance(weights, WeightVector):
        return weights
    return WeightVector(weights)


def load_weights(path) -> WeightVector:
    """Read a weight file: plain text, one decimal weight per line."""
    values = np.loadtxt(path, ndmin=1)
    return WeightVector(values)
