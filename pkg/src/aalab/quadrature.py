"""Piecewise Gauss-Legendre quadrature with breakpoint-aware subdivision.

Window integrals in this package routinely meet integrands that are smooth
except at a known, finite set of points (spike-support boundaries, zero
crossings of an absolute value, sample nodes of an interpolant).  Splitting
the interval at those points and applying a fixed Gauss-Legendre rule per
smooth piece keeps the composite error near round-off without adaptivity.
"""

import functools

import numpy as np

# Hard cap on subdivision points per integration interval.  Exceeding it
# means the caller handed in a pathological breakpoint set.
MAX_SEGMENTS = 1024


class SubdivisionOverflow(RuntimeError):
    """Raised when an interval collects more breakpoints than MAX_SEGMENTS."""


@functools.lru_cache(maxsize=32)
def gauss_nodes(n):
    """Return cached Gauss-Legendre nodes and weights on [-1, 1]."""
    x, w = np.polynomial.legendre.leggauss(int(n))
    return x, w


def segment_points(lo, hi, breakpoints=()):
    """Sorted segment endpoints: lo, the interior breakpoints, hi.

    Breakpoints outside the open interval are dropped; near-duplicates
    (closer than 1e-14 times the interval length) are merged.
    """
    lo = float(lo)
    hi = float(hi)
    if hi <= lo:
        raise ValueError(f"empty integration interval [{lo}, {hi}]")
    pts = np.asarray(breakpoints, dtype=float)
    pts = pts[(pts > lo) & (pts < hi)]
    pts = np.concatenate([[lo], np.sort(pts), [hi]])
    keep = np.concatenate([[True], np.diff(pts) > 1e-14 * (hi - lo)])
    pts = pts[keep]
    if pts[-1] != hi:
        pts = np.concatenate([pts, [hi]])
    if len(pts) - 1 > MAX_SEGMENTS:
        raise SubdivisionOverflow(
            f"{len(pts) - 1} segments on [{lo}, {hi}] exceed the cap of {MAX_SEGMENTS}"
        )
    return pts


def quadrature_nodes(lo, hi, breakpoints=(), nodes=32):
    """Flattened Gauss-Legendre nodes/weights for the subdivided interval.

    Returns (points, weights) as 1-D arrays; ``sum(w * f(points))``
    approximates the integral of f over [lo, hi].
    """
    pts = segment_points(lo, hi, breakpoints)
    x, w = gauss_nodes(nodes)
    mids = 0.5 * (pts[1:] + pts[:-1])
    halfs = 0.5 * (pts[1:] - pts[:-1])
    points = (mids[:, None] + halfs[:, None] * x[None, :]).ravel()
    weights = (halfs[:, None] * w[None, :]).ravel()
    return points, weights


def integrate(fn, lo, hi, breakpoints=(), nodes=32):
    """Integrate a vectorized function over [lo, hi] with subdivision."""
    points, weights = quadrature_nodes(lo, hi, breakpoints, nodes)
    return float(np.dot(weights, fn(points)))
