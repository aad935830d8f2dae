"""Deterministic scalar-numerics primitives shared across modules.

Bracketed golden-section maximization, monotone bisection, Gauss-Legendre
panels, and Euclidean projection onto the probability simplex.  Callers
own tolerance policy; every routine here is deterministic, allocation
light, and free of hidden state.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

__all__ = [
    "EPSILON",
    "MATHEMATICAL_TOLERANCE",
    "INV_GOLDEN",
    "golden_section_maximize",
    "bisect_monotone",
    "gauss_legendre_nodes",
    "log_sum_exp",
    "project_to_simplex",
]

# Slack for exact-in-principle identities that float arithmetic blurs.
EPSILON: float = 1e-12
# Slack for quantities that pass through an iterative solve.
MATHEMATICAL_TOLERANCE: float = 1e-10

INV_GOLDEN: float = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section_maximize(
    fn: Callable[[float], float],
    lo: float,
    hi: float,
    *,
    x_tol: float = 1e-9,
    max_iter: int = 200,
) -> tuple[float, float]:
    """Maximize ``fn`` on the bracket ``[lo, hi]``.

    Returns ``(argmax, value)``.  ``fn`` need only be unimodal on the
    bracket for the argmax to be tight; the returned value is always an
    attained function value, hence a valid lower estimate of the supremum
    even when unimodality fails.

    Args:
        fn: scalar function to maximize.
        lo: lower end of the bracket.
        hi: upper end of the bracket; must satisfy ``hi >= lo``.
        x_tol: stop once the bracket is narrower than this.
        max_iter: hard iteration cap.
    """
    a, b = float(lo), float(hi)
    if b < a:
        raise ValueError(f"empty bracket [{lo}, {hi}]")
    if b == a:
        return a, fn(a)
    c = b - INV_GOLDEN * (b - a)
    d = a + INV_GOLDEN * (b - a)
    fc, fd = fn(c), fn(d)
    best_x, best_f = (c, fc) if fc >= fd else (d, fd)
    for _ in range(max_iter):
        if b - a <= x_tol:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_GOLDEN * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_GOLDEN * (b - a)
            fd = fn(d)
        x, f = (c, fc) if fc >= fd else (d, fd)
        if f > best_f:
            best_x, best_f = x, f
    return best_x, best_f


def bisect_monotone(
    fn: Callable[[float], float],
    target: float,
    lo: float,
    hi: float,
    *,
    increasing: bool = True,
    x_tol: float = 1e-10,
    max_iter: int = 200,
) -> float:
    """Solve ``fn(x) = target`` for monotone ``fn`` on ``[lo, hi]``.

    The caller must ensure the target is bracketed.  Plain bisection with
    a hard iteration cap; the midpoint of the final interval is returned
    once the interval is narrower than ``x_tol`` or the cap is reached.
    """
    a, b = float(lo), float(hi)
    if b < a:
        raise ValueError(f"empty bracket [{lo}, {hi}]")
    for _ in range(max_iter):
        if b - a <= x_tol:
            break
        mid = 0.5 * (a + b)
        value = fn(mid)
        at_or_past = value >= target if increasing else value <= target
        if at_or_past:
            b = mid
        else:
            a = mid
    return 0.5 * (a + b)


def log_sum_exp(values: np.ndarray, axis: int | None = None):
    """Max-shifted log of summed exponentials along ``axis``.

    Accepts ``-inf`` entries (empty slices yield ``-inf``) but not
    ``+inf`` or ``nan``.  Kept local because the library calls this in
    tight solver loops where dispatch overhead dominates the arithmetic.
    """
    values = np.asarray(values, dtype=np.float64)
    shift = np.max(values, axis=axis, keepdims=True)
    shift = np.where(np.isfinite(shift), shift, 0.0)
    with np.errstate(divide="ignore"):
        summed = np.log(np.sum(np.exp(values - shift), axis=axis, keepdims=True)) + shift
    if axis is None:
        return float(summed.reshape(())[()])
    return np.squeeze(summed, axis=axis)


def gauss_legendre_nodes(lo: float, hi: float, count: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights mapped to ``[lo, hi]``.

    Nodes are strictly interior to the interval; weights sum to
    ``hi - lo``.
    """
    if count < 1:
        raise ValueError("node count must be positive")
    base_nodes, base_weights = np.polynomial.legendre.leggauss(int(count))
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    return mid + half * base_nodes, half * base_weights


def project_to_simplex(vector: np.ndarray) -> np.ndarray:
    """Euclidean projection of a real vector onto the probability simplex."""
    v = np.asarray(vector, dtype=np.float64)
    sorted_desc = np.sort(v)[::-1]
    cumulative = np.cumsum(sorted_desc) - 1.0
    indices = np.arange(1, v.size + 1)
    feasible = sorted_desc - cumulative / indices > 0.0
    rho = int(np.max(indices[feasible]))
    theta = cumulative[rho - 1] / rho
    return np.maximum(v - theta, 0.0)
