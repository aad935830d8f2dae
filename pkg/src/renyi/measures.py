"""Finite measures, orders, and Renyi divergences between them.

The divergence of order ``a`` between finite measures ``w`` and ``q`` on a
common alphabet is ``(1 / (a - 1)) * ln(sum_i w_i**a * q_i**(1 - a))`` for
``a != 1`` and the Kullback-Leibler divergence at ``a = 1``, with the usual
conventions ``0 * ln 0 = 0`` and division-by-zero promoting to infinity.
All computations run in log space with max-shifted exponentials so orders
far from 1 stay finite-precision stable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np
from scipy.special import rel_entr

from renyi._numeric import log_sum_exp as logsumexp
from renyi.exceptions import InputValidationError

__all__ = [
    "Order",
    "OrderLike",
    "as_order",
    "FiniteMeasure",
    "ProbabilityMeasure",
    "renyi_divergence",
    "binary_divergence",
    "tilted_measure",
    "total_variation",
]


@dataclass(frozen=True, slots=True)
class Order:
    """A positive finite Renyi order.

    The order one requires dedicated limit formulas nearly everywhere, so
    the classification is exposed as a property rather than recomputed at
    call sites.
    """

    value: float

    def __post_init__(self) -> None:
        value = float(self.value)
        if not math.isfinite(value) or value <= 0.0:
            raise InputValidationError(f"order must be positive and finite, got {self.value!r}")
        object.__setattr__(self, "value", value)

    @property
    def is_one(self) -> bool:
        # Exact comparison: the limit formula applies only at the point
        # itself, not in a neighborhood of it.
        return self.value == 1.0

    def __float__(self) -> float:
        return self.value


OrderLike = Union[Order, float, int]


def as_order(order: OrderLike) -> Order:
    """Coerce a raw number to :class:`Order`, validating positivity."""
    if isinstance(order, Order):
        return order
    return Order(float(order))


@dataclass(frozen=True, eq=False)
class FiniteMeasure:
    """A finite measure on a finite alphabet, stored as a dense vector.

    The mass vector must be one-dimensional, nonempty, entrywise finite
    and nonnegative, with strictly positive total mass.  The stored array
    is a read-only copy, so instances are safe to share and to use as
    cache keys by identity.
    """

    masses: np.ndarray

    def __post_init__(self) -> None:
        array = np.asarray(self.masses, dtype=np.float64).copy()
        if array.ndim != 1 or array.size == 0:
            raise InputValidationError("measure must be a nonempty 1-D vector")
        if not np.all(np.isfinite(array)):
            raise InputValidationError("measure entries must be finite")
        if np.any(array < 0.0):
            raise InputValidationError("measure entries must be nonnegative")
        if array.sum() <= 0.0:
            raise InputValidationError("measure must have positive total mass")
        array.setflags(write=False)
        object.__setattr__(self, "masses", array)

    @property
    def size(self) -> int:
        return int(self.masses.size)

    @property
    def total_mass(self) -> float:
        return float(self.masses.sum())

    @property
    def support(self) -> np.ndarray:
        return self.masses > 0.0

    def normalized(self) -> "ProbabilityMeasure":
        return ProbabilityMeasure(self.masses)


@dataclass(frozen=True, eq=False)
class ProbabilityMeasure(FiniteMeasure):
    """A finite measure renormalized to unit total mass on construction."""

    def __post_init__(self) -> None:
        super().__post_init__()
        array = self.masses / self.masses.sum()
        array.setflags(write=False)
        object.__setattr__(self, "masses", array)


def _aligned(w: FiniteMeasure, q: FiniteMeasure) -> tuple[np.ndarray, np.ndarray]:
    if w.size != q.size:
        raise InputValidationError(f"alphabet sizes differ: {w.size} vs {q.size}")
    return w.masses, q.masses


def renyi_divergence(order: OrderLike, w: FiniteMeasure, q: FiniteMeasure) -> float:
    """Renyi divergence of the given order between two finite measures.

    Returns ``math.inf`` exactly when the defining sum degenerates: for
    orders at least one, whenever ``w`` puts mass outside the support of
    ``q``; for orders below one, whenever the supports are disjoint.
    """
    alpha = as_order(order)
    wv, qv = _aligned(w, q)
    w_pos = wv > 0.0
    q_pos = qv > 0.0
    a = alpha.value
    if a >= 1.0:
        if np.any(w_pos & ~q_pos):
            return math.inf
    else:
        if not np.any(w_pos & q_pos):
            return math.inf
    if alpha.is_one:
        return float(np.sum(rel_entr(wv, qv)))
    common = w_pos & q_pos
    terms = a * np.log(wv[common]) + (1.0 - a) * np.log(qv[common])
    return float(logsumexp(terms)) / (a - 1.0)


def binary_divergence(order: OrderLike, a: float, b: float) -> float:
    """Renyi divergence between the pairs ``(a, 1 - a)`` and ``(b, 1 - b)``.

    Scalar fast path for the two-atom case; both arguments must lie in
    ``[0, 1]``.
    """
    alpha = as_order(order)
    pa, pb = float(a), float(b)
    if not (0.0 <= pa <= 1.0 and 0.0 <= pb <= 1.0):
        raise InputValidationError(f"binary parameters must lie in [0, 1], got {a!r}, {b!r}")
    order_value = alpha.value
    first_bad = pa > 0.0 and pb == 0.0
    second_bad = pa < 1.0 and pb == 1.0
    if order_value >= 1.0:
        if first_bad or second_bad:
            return math.inf
    else:
        first_common = pa > 0.0 and pb > 0.0
        second_common = pa < 1.0 and pb < 1.0
        if not (first_common or second_common):
            return math.inf
    if alpha.is_one:
        total = 0.0
        if pa > 0.0:
            total += pa * math.log(pa / pb)
        if pa < 1.0:
            total += (1.0 - pa) * math.log((1.0 - pa) / (1.0 - pb))
        return total
    terms = []
    if pa > 0.0 and pb > 0.0:
        terms.append(order_value * math.log(pa) + (1.0 - order_value) * math.log(pb))
    if pa < 1.0 and pb < 1.0:
        terms.append(order_value * math.log(1.0 - pa) + (1.0 - order_value) * math.log(1.0 - pb))
    peak = max(terms)
    accumulated = sum(math.exp(t - peak) for t in terms)
    return (peak + math.log(accumulated)) / (order_value - 1.0)


def tilted_measure(order: OrderLike, w: ProbabilityMeasure, q: ProbabilityMeasure) -> ProbabilityMeasure:
    """The order-tilted probability measure between ``w`` and ``q``.

    Defined for orders strictly between zero and one as the normalization
    of ``w**a * q**(1 - a)`` on the common support.  Tilting is restricted
    to probability measures on both sides; the geometric interpolation is
    only meaningful there.
    """
    alpha = as_order(order)
    a = alpha.value
    if not 0.0 < a < 1.0:
        raise InputValidationError(f"tilted measure requires order in (0, 1), got {a!r}")
    if not isinstance(w, ProbabilityMeasure) or not isinstance(q, ProbabilityMeasure):
        raise InputValidationError("tilted measure requires probability measures")
    wv, qv = _aligned(w, q)
    common = (wv > 0.0) & (qv > 0.0)
    if not np.any(common):
        raise InputValidationError("tilted measure undefined for disjoint supports")
    logits = np.full(wv.shape, -math.inf)
    logits[common] = a * np.log(wv[common]) + (1.0 - a) * np.log(qv[common])
    out = np.zeros(wv.shape)
    out[common] = np.exp(logits[common] - logsumexp(logits[common]))
    return ProbabilityMeasure(out)


def total_variation(w: FiniteMeasure, q: FiniteMeasure) -> float:
    """Total variation distance as the full L1 norm of the difference.

    For probability measures the value lies in ``[0, 2]``.
    """
    wv, qv = _aligned(w, q)
    return float(np.abs(wv - qv).sum())
