"""Shared numerical helpers: finite differences, branch-matched square roots."""

import math

import numpy as np

# Marker returned by field.log_derivative when the envelope is below its
# floor while still varying; callers test with is_divergent().
DIVERGENT = math.inf


def is_divergent(value):
    try:
        return math.isinf(value)
    except TypeError:
        return False


def central_difference(fn, t, n, h):
    """n-th derivative of fn at t by nested central differences with step h.

    Uses the symmetric stencil t + (n/2 - j) h, j = 0..n, with binomial
    coefficients; exact for polynomials of degree <= n+1.
    """
    if n < 1:
        raise ValueError("derivative order must be >= 1")
    if h <= 0:
        raise ValueError("step must be positive")
    acc = 0.0
    for j in range(n + 1):
        acc += (-1) ** j * math.comb(n, j) * fn(t + (0.5 * n - j) * h)
    return acc / h**n


def grid_gradient(values, grid):
    """np.gradient with the uniform-spacing formula on uniform grids.

    The coordinate-array formula leaves O(ulp/h) noise even on constant
    data when linspace spacings differ in the last bit; detecting
    uniformity keeps derivative arrays of constant inputs exactly zero.
    """
    steps = np.diff(grid)
    h = steps.mean()
    if np.all(np.abs(steps - h) <= 1e-12 * abs(h)):
        return np.gradient(values, h)
    return np.gradient(values, grid)


def branch_continuous_sqrt(values, first_sign=1.0):
    """Square root of a complex array with signs chosen for continuity.

    The first element takes first_sign times the principal root; each later
    element takes whichever of +/- the principal root lies closer to its
    predecessor.  Relative sign flips depend only on consecutive principal
    roots, so the scan vectorizes as a cumulative product.
    """
    w = np.sqrt(np.asarray(values, dtype=complex))
    if w.size <= 1:
        return first_sign * w
    keep = np.abs(w[1:] - w[:-1]) <= np.abs(w[1:] + w[:-1])
    rel = np.where(keep, 1.0, -1.0)
    signs = first_sign * np.concatenate(([1.0], np.cumprod(rel)))
    return signs * w


def matched_sqrt(value, previous=None, sign=1.0):
    """Scalar principal square root, branch-matched to `previous` when given."""
    w = complex(np.sqrt(complex(value)))
    if previous is None:
        return sign * w
    return w if abs(w - previous) <= abs(-w - previous) else -w


def pearson(x, y):
    """Pearson correlation; nan when either series is constant."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.std() == 0.0 or y.std() == 0.0:
        return math.nan
    return float(np.corrcoef(x, y)[0, 1])
