"""Sphere-packing, averaged sphere-packing, and min-max relative-entropy
exponents, plus rate/order inversion on capacity curves.

The sphere-packing exponent at rate ``R`` is the supremum over orders of
``((1 - a) / a) * (C_a - R)``; which order interval carries the supremum
depends on where ``R`` sits relative to the zero-order limit, the
order-one capacity, and the large-order limit of the capacity curve.
The min-max exponent minimizes the worst-row relative entropy to the
channel over all auxiliary channels with order-one capacity at most
``R``; both the objective and the feasible set are convex, so an honest
upper/lower certificate comes from a cutting-plane scheme.
"""

from __future__ import annotations

import math
import weakref
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import linprog, minimize

from renyi._numeric import golden_section_maximize
from renyi.capacity import (
    ExponentCurve,
    average_capacity,
    curve_for_channel,
    renyi_capacity,
)
from renyi.channels import DiscreteChannel, renyi_information, uniform_input
from renyi.exceptions import InputValidationError, NumericalStabilityError
from renyi.measures import Order, as_order

__all__ = [
    "SpheResult",
    "HaroutunianSolution",
    "sphere_packing_exponent",
    "average_sp_exponent",
    "averaged_curve",
    "supremum_below_one",
    "haroutunian_exponent",
    "haroutunian_details",
    "order_for_rate",
]

_ORDER_CAP_START: float = 16.0
_ORDER_CAP_LIMIT: float = 2.0**30


@dataclass(frozen=True)
class SpheResult:
    """A classified sphere-packing value at one rate.

    ``regime`` names the interval of orders that carries the supremum;
    ``certified`` is false when the value leans on the heuristic end of
    the zero-order bracket or on an uncapped tail; ``tail_upper`` bounds
    the unsearched large-order tail when one exists.
    """

    rate: float
    value: float
    maximizing_order: Order | None
    regime: str
    certified: bool = True
    tail_upper: float | None = None
    notes: str = ""

    def __post_init__(self) -> None:
        if self.value < 0.0:
            raise NumericalStabilityError(f"negative exponent {self.value}")
        if math.isinf(self.value) and "zero_order" not in self.regime:
            raise NumericalStabilityError(
                f"infinite exponent outside the zero-order regimes ({self.regime})"
            )


def _objective(curve: ExponentCurve, rate: float):
    def evaluate(order: float) -> float:
        return (1.0 - order) / order * (curve.value(order) - rate)

    return evaluate


def _capacity_floor(curve: ExponentCurve, order: float) -> float:
    """A lower bound on the capacity at ``order`` without solving.

    Channel-backed curves evaluate the closed-form information of the
    uniform prior, which suffices to place the capacity against a rate;
    function-backed curves fall back to their (cheap) value callable.
    """
    if curve.channel is None:
        return curve.value(order)
    return renyi_information(order, uniform_input(curve.channel.input_size), curve.channel)


def _search_orders_geometric(
    curve: ExponentCurve, rate: float, lo: float, hi: float, x_tol: float
) -> tuple[float, float]:
    """Supremum of the objective over ``[lo, hi]`` gridded in ``1/order``.

    Above order one the interesting structure compresses toward the
    small-order end, and the solves get harder as the order grows; a grid
    uniform in the inverse order covers both with the same budget.
    """
    g = _objective(curve, rate)
    inverses = np.linspace(1.0 / hi, 1.0 / lo, 50)
    points = 1.0 / inverses
    values = np.array([g(x) for x in points])
    best_index = int(np.argmax(values))
    best_x, best_v = float(points[best_index]), float(values[best_index])
    maxima = []
    for i in range(len(points)):
        left_ok = i == 0 or values[i] >= values[i - 1]
        right_ok = i == len(points) - 1 or values[i] >= values[i + 1]
        if left_ok and right_ok:
            maxima.append(i)
    maxima.sort(key=lambda i: values[i], reverse=True)
    for i in maxima[:4]:
        s_lo = inverses[max(i - 1, 0)]
        s_hi = inverses[min(i + 1, len(points) - 1)]
        # Bracket-relative tolerance: near the maximum the value error is
        # quadratic in the offset, so refining the bracket a millionfold
        # leaves nothing above solver noise.
        tol_s = max(1e-15, (s_hi - s_lo) * 1e-6, x_tol / (hi * hi))
        if s_hi - s_lo <= tol_s:
            continue
        s, v = golden_section_maximize(lambda s: g(1.0 / s), s_lo, s_hi, x_tol=tol_s)
        if v > best_v:
            best_x, best_v = float(1.0 / s), float(v)
    return best_x, best_v


def _search_interval(
    curve: ExponentCurve,
    rate: float,
    lo: float,
    hi: float,
    *,
    include_lo: bool,
    include_hi: bool,
    x_tol: float = 1e-9,
) -> tuple[float, float]:
    """Supremum of the sphere-packing objective on one order interval.

    A fixed grid locates every local maximum of the sampled objective
    (no unimodality assumption); each is refined by golden section.
    Returns ``(argmax, value)`` over the attained evaluations.
    """
    if hi <= lo:
        point = 0.5 * (lo + hi)
        return point, _objective(curve, rate)(point)
    g = _objective(curve, rate)
    width = hi - lo
    xs = list(lo + width * np.linspace(0.0, 1.0, 66)[1:-1])
    if include_lo:
        xs.insert(0, lo)
    if include_hi:
        xs.append(hi)
    vs = [g(x) for x in xs]
    # Open edges are probed only when the objective rises toward them;
    # the approach orders are the slowest to solve, so paying for them
    # on a falling edge buys nothing.
    approach = width * np.geomspace(1e-7, 1.0 / 66.0, 6)
    if not include_lo and vs[0] >= vs[1]:
        extra = sorted(lo + approach)
        xs = extra + xs
        vs = [g(x) for x in extra] + vs
    if not include_hi and vs[-1] >= vs[-2]:
        extra = sorted(hi - approach)
        xs = xs + extra
        vs = vs + [g(x) for x in extra]
    points = np.array(xs)
    values = np.array(vs)
    best_index = int(np.argmax(values))
    best_x, best_v = float(points[best_index]), float(values[best_index])
    maxima = []
    for i in range(len(points)):
        left_ok = i == 0 or values[i] >= values[i - 1]
        right_ok = i == len(points) - 1 or values[i] >= values[i + 1]
        if left_ok and right_ok:
            maxima.append(i)
    # The objective has a handful of genuine critical points; on a
    # noise-flat stretch every grid point ties as a local maximum, so
    # refinement is rationed to the best few distinct brackets.
    maxima.sort(key=lambda i: values[i], reverse=True)
    for i in maxima[:4]:
        bracket_lo = points[max(i - 1, 0)]
        bracket_hi = points[min(i + 1, len(points) - 1)]
        if bracket_hi - bracket_lo <= x_tol:
            continue
        x, v = golden_section_maximize(g, bracket_lo, bracket_hi, x_tol=x_tol)
        if v > best_v:
            best_x, best_v = float(x), float(v)
    return best_x, best_v


def supremum_below_one(
    curve: ExponentCurve, rate: float, tol: float = 1e-9
) -> tuple[float | None, float]:
    """Supremum of the objective over orders in (0, 1), clamped at zero.

    The order-one boundary contributes zero in the limit, so the value is
    never negative; when the clamp engages the supremum sits at that
    boundary and no interior maximizer is reported.
    """
    best_x, best_v = _search_interval(
        curve, rate, 0.0, 1.0, include_lo=False, include_hi=False, x_tol=min(tol, 1e-6)
    )
    if best_v <= 0.0:
        return None, 0.0
    return best_x, best_v


def sphere_packing_exponent(
    rate: float, curve: ExponentCurve, tol: float = 1e-9
) -> SpheResult:
    """Classify and evaluate the sphere-packing exponent at one rate.

    The rate is placed against the zero-order bracket, the order-one
    capacity, and the large-order behavior of the curve; the supremum is
    then searched on the interval the classification selects.  Rates
    that may sit at or below the zero-order limit report an infinite
    value with the finite below-one supremum quoted in the notes.
    """
    if rate <= 0.0:
        raise InputValidationError(f"rate must be positive, got {rate!r}")
    bracket_lo, bracket_hi = curve.c_zero_bracket()
    c_one = curve.c_one()
    if rate < bracket_lo:
        return SpheResult(
            rate=rate,
            value=math.inf,
            maximizing_order=None,
            regime="rate_below_zero_order_bracket",
            certified=False,
            notes=(
                "rate sits below the reported zero-order bracket; the exponent "
                "is infinite whenever the rate is below the true zero-order limit"
            ),
        )
    if rate <= bracket_hi:
        _, finite_sup = supremum_below_one(curve, rate, tol)
        return SpheResult(
            rate=rate,
            value=math.inf,
            maximizing_order=None,
            regime="rate_within_zero_order_bracket",
            certified=False,
            notes=(
                "rate is inside the zero-order bracket; if it equals the limit "
                f"the supremum over (0, 1) evaluates to {finite_sup!r}"
            ),
        )
    if rate < c_one:
        best_x, best_v = supremum_below_one(curve, rate, tol)
        return SpheResult(
            rate=rate,
            value=best_v,
            maximizing_order=None if best_x is None else Order(best_x),
            regime="rate_below_order_one_capacity",
        )
    # From here the rate is at least the order-one capacity; the supremum
    # lives at orders >= 1 where the objective is (1 - 1/a)(rate - C_a).
    # Cap expansion tests a closed-form capacity floor, so no solves are
    # spent placing the rate against the large-order growth.
    limit = curve.c_infinity()
    cap = _ORDER_CAP_START
    while cap <= _ORDER_CAP_LIMIT and _capacity_floor(curve, cap) < rate:
        cap *= 2.0
    crossing_exists = (
        rate <= limit - 1e-12 if limit is not None else cap <= _ORDER_CAP_LIMIT
    )
    if crossing_exists:
        # The capacity curve crosses the rate at a finite order; beyond the
        # crossing the objective is negative, so the searched interval is
        # closed at the crossing.  The crossing bounds the interval, so a
        # coarse bisection floor suffices and keeps the probes away from
        # the noise-dominated orders just above one.
        crossing = _invert_curve(curve, rate, 1.0, cap, tol, x_floor=1e-7)
        if crossing - 1.0 <= 1e-6:
            # The objective on [1, crossing] is O((crossing - 1)^2): the
            # rate essentially equals the order-one capacity and the
            # supremum is zero to well below tolerance.
            return SpheResult(
                rate=rate,
                value=0.0,
                maximizing_order=Order(1.0),
                regime="rate_at_finite_order_capacity",
            )
        best_x, best_v = _search_orders_geometric(
            curve, rate, 1.0, crossing, x_tol=min(tol, 1e-6)
        )
        value = max(best_v, 0.0)
        maximizer: Order | None = Order(best_x) if best_v >= 0.0 else Order(1.0)
        return SpheResult(
            rate=rate,
            value=value,
            maximizing_order=maximizer,
            regime="rate_at_finite_order_capacity",
        )
    # The rate exceeds the large-order limit: search moderate orders, fold
    # in the limit candidate, and certify the unsearched tail against the
    # capacity floor, which converges to the limit as the order grows.
    search_cap = min(cap, 64.0)
    best_x, best_v = _search_orders_geometric(
        curve, rate, 1.0, search_cap, x_tol=min(tol, 1e-6)
    )
    candidates = [(Order(best_x), best_v)]
    if limit is not None:
        candidates.append((None, rate - limit))
    maximizer, value = max(candidates, key=lambda item: item[1])
    value = max(value, 0.0)
    # Certify the tail in geometric segments: on [A, 4A] the objective is
    # at most (1 - 1/(4A)) (rate - C_A), and the floor stands in for C_A.
    # The floors converge to the large-order limit, so the segment bounds
    # drop below the limit candidate after finitely many doublings.
    slack = max(tol, 1e-9)
    segment_lo = search_cap
    tail_upper = 0.0
    certified = True
    for _ in range(64):
        open_bound = rate - _capacity_floor(curve, segment_lo)
        if open_bound <= value + slack:
            tail_upper = max(tail_upper, open_bound)
            break
        segment_hi = segment_lo * 4.0
        segment_bound = (1.0 - 1.0 / segment_hi) * open_bound
        tail_upper = max(tail_upper, segment_bound)
        if segment_bound > value + slack or segment_hi > _ORDER_CAP_LIMIT:
            certified = False
            break
        segment_lo = segment_hi
    return SpheResult(
        rate=rate,
        value=value,
        maximizing_order=maximizer,
        regime="rate_above_all_finite_capacities",
        certified=certified,
        tail_upper=tail_upper,
        notes="" if certified else (
            f"large-order tail bound {tail_upper!r} exceeds the searched value; "
            f"tail floor evaluated up to order {segment_lo!r}"
        ),
    )


def _invert_curve(
    curve: ExponentCurve,
    target: float,
    lo: float,
    hi: float,
    tol: float,
    x_floor: float = 1e-14,
) -> float:
    """Order at which the (nondecreasing) curve reaches ``target``.

    On the interval floor the upper end is returned, so a coarse floor
    yields a conservative (never undershooting) crossing.
    """
    a, b = lo, hi
    for _ in range(200):
        mid = 0.5 * (a + b)
        value = curve.value(mid)
        if abs(value - target) <= tol and b - a <= 1e-6:
            return mid
        if value >= target:
            b = mid
        else:
            a = mid
        if b - a <= x_floor:
            break
    return b


def order_for_rate(curve: ExponentCurve, rate: float, tol: float = 1e-9) -> Order:
    """Invert the capacity curve below order one: the order whose capacity
    equals the rate, found by bisection on the monotone curve."""
    lo, hi = 1e-6, 1.0 - 1e-12
    if not curve.value(lo) <= rate:
        raise InputValidationError(
            f"rate {rate!r} below the curve value {curve.value(lo)!r} at order {lo}"
        )
    if rate >= curve.c_one():
        raise InputValidationError(
            f"rate {rate!r} not below the order-one capacity {curve.c_one()!r}"
        )
    result = _invert_curve(curve, rate, lo, hi, tol)
    if abs(curve.value(result) - rate) > max(tol, 1e-6):
        raise NumericalStabilityError(
            f"order inversion stalled: capacity {curve.value(result)!r} vs rate {rate!r}"
        )
    return Order(result)


_AVERAGED_CURVES: "weakref.WeakKeyDictionary[DiscreteChannel, dict[tuple[float, float], ExponentCurve]]" = (
    weakref.WeakKeyDictionary()
)


def averaged_curve(w: DiscreteChannel, width: float, quad_tol: float = 1e-10) -> ExponentCurve:
    """The window-averaged capacity of ``w`` as a function-backed curve.

    Cached per channel and window so repeated supremum searches reuse
    every quadrature evaluation.
    """
    per_channel = _AVERAGED_CURVES.setdefault(w, {})
    key = (float(width), float(quad_tol))
    curve = per_channel.get(key)
    if curve is None:
        curve = ExponentCurve.from_function(
            lambda order: average_capacity(order, width, w, quad_tol)
        )
        per_channel[key] = curve
    return curve


def average_sp_exponent(
    width: float, rate: float, w: DiscreteChannel, tol: float = 1e-9
) -> float:
    """Supremum over orders in (0, 1) of the averaged-capacity objective.

    Uses the window-averaged capacity in place of the pointwise one; the
    supremum is restricted to (0, 1) by definition, so zero-capacity
    channels give zero at every rate.
    """
    if rate <= 0.0:
        raise InputValidationError(f"rate must be positive, got {rate!r}")
    if not 0.0 < width < 1.0:
        raise InputValidationError(f"averaging width must lie in (0, 1), got {width!r}")
    curve = averaged_curve(w, width, quad_tol=min(tol * 0.1, 1e-10))
    _, value = supremum_below_one(curve, rate, tol)
    return value


@dataclass(frozen=True)
class HaroutunianSolution:
    """Certified output of the min-max relative-entropy solver."""

    value: float
    lower: float
    channel: DiscreteChannel
    iterations: int
    certified: bool
    local_value: float | None = None


def _worst_row_divergence(v_rows: np.ndarray, w_rows: np.ndarray) -> float:
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(v_rows > 0.0, np.log(v_rows / w_rows), 0.0)
    per_row = np.where(v_rows > 0.0, v_rows * ratio, 0.0).sum(axis=1)
    return float(per_row.max())


def _mix_interior(v_rows: np.ndarray, supports: list[np.ndarray], delta: float = 1e-9) -> np.ndarray:
    mixed = v_rows.copy()
    for x, support in enumerate(supports):
        uniform = np.zeros(v_rows.shape[1])
        uniform[support] = 1.0 / support.size
        mixed[x] = (1.0 - delta) * v_rows[x] + delta * uniform
    return mixed


def haroutunian_details(
    rate: float,
    w: DiscreteChannel,
    tol: float = 1e-6,
    *,
    max_size: int = 4,
    max_iterations: int = 2000,
    initial_channels: Sequence[DiscreteChannel] | None = None,
    warm_start: bool = True,
    certify: bool = False,
) -> HaroutunianSolution:
    """Solve the min-max relative-entropy problem with certificates.

    Cutting-plane scheme: linear epigraph cuts for the worst-row
    objective, supporting cuts for the convex capacity constraint
    anchored at the primal information value (never at the dual, which
    could cut off feasible channels), and a restoration mix toward a
    zero-capacity channel to turn near-feasible iterates into honest
    upper bounds.
    """
    if rate <= 0.0:
        raise InputValidationError(f"rate must be positive, got {rate!r}")
    if w.input_size > max_size or w.output_size > max_size:
        raise InputValidationError(
            f"channel {w.input_size}x{w.output_size} exceeds the solver cap {max_size}"
        )
    c_one = renyi_capacity(1.0, w, 1e-11).value
    if rate >= c_one:
        return HaroutunianSolution(
            value=0.0,
            lower=0.0,
            channel=w,
            iterations=0,
            certified=True,
            local_value=None,
        )
    rows = w.rows
    supports = [np.flatnonzero(rows[x] > 0.0) for x in range(w.input_size)]
    offsets = np.cumsum([0] + [s.size for s in supports])
    n_vars = int(offsets[-1]) + 1
    t_index = n_vars - 1

    def pack(v_rows: np.ndarray) -> np.ndarray:
        return np.concatenate([v_rows[x, s] for x, s in enumerate(supports)])

    def unpack(flat: np.ndarray) -> np.ndarray:
        v_rows = np.zeros_like(rows)
        for x, s in enumerate(supports):
            v_rows[x, s] = flat[offsets[x] : offsets[x + 1]]
        return v_rows

    # A zero-capacity channel dominated by every row, used to restore
    # feasibility; only exists when the rows share an output.
    common = np.flatnonzero(np.all(rows > 0.0, axis=0))
    restoration: np.ndarray | None = None
    if common.size > 0:
        base_row = np.zeros(w.output_size)
        base_row[common] = rows[:, common].min(axis=0)
        base_row /= base_row.sum()
        restoration = np.tile(base_row, (w.input_size, 1))

    a_ub_rows: list[np.ndarray] = []
    b_ub: list[float] = []

    def add_objective_cuts(v_rows: np.ndarray) -> None:
        interior = _mix_interior(v_rows, supports)
        for x, s in enumerate(supports):
            gradient = np.log(interior[x, s] / rows[x, s]) + 1.0
            divergence = float(np.sum(interior[x, s] * np.log(interior[x, s] / rows[x, s])))
            row = np.zeros(n_vars)
            row[offsets[x] : offsets[x + 1]] = gradient
            row[t_index] = -1.0
            a_ub_rows.append(row)
            b_ub.append(float(gradient @ interior[x, s]) - divergence)

    def add_capacity_cut(v_rows: np.ndarray) -> float:
        """Add a supporting cut for the capacity constraint; returns the
        dual (upper) capacity value at the interior-mixed point."""
        interior = _mix_interior(v_rows, supports)
        solution = renyi_capacity(1.0, DiscreteChannel(interior), 1e-11)
        prior = solution.optimal_prior.masses
        mixture = prior @ interior
        primal = solution.value - solution.duality_gap
        row = np.zeros(n_vars)
        anchor = 0.0
        for x, s in enumerate(supports):
            if prior[x] <= 0.0:
                continue
            gradient = prior[x] * np.log(interior[x, s] / mixture[s])
            row[offsets[x] : offsets[x + 1]] = gradient
            anchor += float(gradient @ interior[x, s])
        a_ub_rows.append(row)
        b_ub.append(rate - primal + anchor)
        return solution.value

    def feasibility_dual(v_rows: np.ndarray) -> float:
        interior = _mix_interior(v_rows, supports)
        return renyi_capacity(1.0, DiscreteChannel(interior), 1e-11).value

    def restore(v_rows: np.ndarray) -> np.ndarray | None:
        if restoration is None:
            return None
        if feasibility_dual(v_rows) <= rate:
            return v_rows
        lo, hi = 0.0, 1.0
        for _ in range(40):
            mid = 0.5 * (lo + hi)
            mixed = (1.0 - mid) * v_rows + mid * restoration
            if feasibility_dual(mixed) <= rate:
                hi = mid
            else:
                lo = mid
        return (1.0 - hi) * v_rows + hi * restoration

    a_eq = np.zeros((w.input_size, n_vars))
    for x in range(w.input_size):
        a_eq[x, offsets[x] : offsets[x + 1]] = 1.0
    b_eq = np.ones(w.input_size)
    bounds = [(0.0, 1.0)] * (n_vars - 1) + [(0.0, None)]

    upper = math.inf
    best_rows = restoration if restoration is not None else rows
    seeds: list[np.ndarray] = [rows]
    if restoration is not None:
        seeds.append(restoration)
        upper = _worst_row_divergence(restoration, rows)
    for extra in initial_channels or ():
        if extra.rows.shape == rows.shape:
            seeds.append(extra.rows)
    if warm_start:
        seeded = _tradeoff_seed(w, rate)
        if seeded is not None:
            seeds.append(seeded)
    for seed in seeds:
        # Project the seed onto the support pattern before cutting.
        projected = np.zeros_like(rows)
        for x, s in enumerate(supports):
            mass = seed[x, s]
            if mass.sum() <= 0.0:
                mass = rows[x, s]
            projected[x, s] = mass / mass.sum()
        add_objective_cuts(projected)
        dual = add_capacity_cut(projected)
        if dual <= rate:
            candidate = _worst_row_divergence(projected, rows)
            if candidate < upper:
                upper, best_rows = candidate, projected

    objective = np.zeros(n_vars)
    objective[t_index] = 1.0
    lower = 0.0
    iterations = 0
    for iterations in range(1, max_iterations + 1):
        result = linprog(
            c=objective,
            A_ub=np.array(a_ub_rows),
            b_ub=np.array(b_ub),
            A_eq=a_eq,
            b_eq=b_eq,
            bounds=bounds,
            method="highs",
        )
        if not result.success:
            raise NumericalStabilityError(f"relaxation solve failed: {result.message}")
        lower = max(lower, float(result.fun))
        v_rows = unpack(np.maximum(result.x[:-1], 0.0))
        v_rows /= v_rows.sum(axis=1, keepdims=True)
        add_objective_cuts(v_rows)
        dual = add_capacity_cut(v_rows)
        candidate_rows = v_rows if dual <= rate else restore(v_rows)
        if candidate_rows is not None:
            candidate = _worst_row_divergence(candidate_rows, rows)
            if candidate < upper:
                upper, best_rows = candidate, candidate_rows
        if upper - lower <= tol:
            break
    certified = upper - lower <= tol
    local_value: float | None = None
    if certify:
        local_value = _local_restart_value(rate, w, best_rows, supports)
    return HaroutunianSolution(
        value=upper,
        lower=lower,
        channel=DiscreteChannel(best_rows),
        iterations=iterations,
        certified=certified,
        local_value=local_value,
    )


def _tradeoff_seed(w: DiscreteChannel, rate: float) -> np.ndarray | None:
    """Warm-start channel from the order-tilted auxiliary construction.

    Imported lazily: the bounds module depends on this one.
    """
    try:
        from renyi.bounds import tradeoff_channel

        curve = curve_for_channel(w)
        phi = order_for_rate(curve, rate, 1e-8).value
        solution = tradeoff_channel(w, rate, eps=phi / 4.0)
        return solution.auxiliary.realized_rows
    except Exception:
        return None


def _local_restart_value(
    rate: float,
    w: DiscreteChannel,
    best_rows: np.ndarray,
    supports: list[np.ndarray],
) -> float:
    """Independent random-restart local minimization of the same problem.

    Logit parameterization with a quadratic penalty on the capacity
    constraint; final iterates are restored to feasibility before the
    objective is read, so the reported value is a genuine upper bound.
    """
    rows = w.rows
    common = np.flatnonzero(np.all(rows > 0.0, axis=0))
    restoration: np.ndarray | None = None
    if common.size > 0:
        base_row = np.zeros(w.output_size)
        base_row[common] = rows[:, common].min(axis=0)
        base_row /= base_row.sum()
        restoration = np.tile(base_row, (w.input_size, 1))

    sizes = [s.size for s in supports]
    splits = np.cumsum(sizes)[:-1]

    def build(flat_logits: np.ndarray) -> np.ndarray:
        v_rows = np.zeros_like(rows)
        for x, (s, chunk) in enumerate(zip(supports, np.split(flat_logits, splits))):
            shifted = chunk - chunk.max()
            weights = np.exp(shifted)
            v_rows[x, s] = weights / weights.sum()
        return v_rows

    def penalized(flat_logits: np.ndarray) -> float:
        v_rows = build(flat_logits)
        capacity = renyi_capacity(1.0, DiscreteChannel(_mix_interior(v_rows, supports)), 1e-10)
        violation = max(0.0, capacity.value - rate)
        return _worst_row_divergence(v_rows, rows) + 1e4 * violation * violation

    def feasible_value(flat_logits: np.ndarray) -> float:
        v_rows = build(flat_logits)
        capacity = renyi_capacity(1.0, DiscreteChannel(_mix_interior(v_rows, supports)), 1e-10)
        if capacity.value <= rate:
            return _worst_row_divergence(v_rows, rows)
        if restoration is None:
            return math.inf
        lo, hi = 0.0, 1.0
        for _ in range(40):
            mid = 0.5 * (lo + hi)
            mixed = (1.0 - mid) * v_rows + mid * restoration
            mixed_cap = renyi_capacity(
                1.0, DiscreteChannel(_mix_interior(mixed, supports)), 1e-10
            ).value
            if mixed_cap <= rate:
                hi = mid
            else:
                lo = mid
        return _worst_row_divergence((1.0 - hi) * v_rows + hi * restoration, rows)

    rng = np.random.default_rng(20240812)
    floor = 1e-12
    starts = [np.log(np.maximum(pack_rows(best_rows, supports), floor))]
    for _ in range(3):
        starts.append(rng.normal(size=sum(sizes)))
    best = math.inf
    for start in starts:
        result = minimize(
            penalized,
            start,
            method="Nelder-Mead",
            options={"maxiter": 2000, "xatol": 1e-10, "fatol": 1e-12},
        )
        best = min(best, feasible_value(result.x))
    return best


def pack_rows(v_rows: np.ndarray, supports: list[np.ndarray]) -> np.ndarray:
    """Concatenate the support coordinates of each row."""
    return np.concatenate([v_rows[x, s] for x, s in enumerate(supports)])


def haroutunian_exponent(
    rate: float,
    w: DiscreteChannel,
    tol: float = 1e-6,
    *,
    max_size: int = 4,
    max_iterations: int = 2000,
    initial_channels: Sequence[DiscreteChannel] | None = None,
    warm_start: bool = True,
) -> float:
    """Certified upper value of the min-max relative-entropy exponent."""
    solution = haroutunian_details(
        rate,
        w,
        tol,
        max_size=max_size,
        max_iterations=max_iterations,
        initial_channels=initial_channels,
        warm_start=warm_start,
    )
    if not solution.certified:
        raise NumericalStabilityError(
            f"certificate gap {solution.value - solution.lower} above tolerance {tol}"
        )
    return solution.value
