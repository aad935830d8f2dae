"""Renyi capacity, radius, and center with minimax certificates.

The order-``a`` capacity of a finite channel is the supremum of the
order-``a`` information over priors; by the minimax theorem it equals the
smallest order-``a`` radius over output reference measures, attained at a
unique center.  The solver alternates a multiplicative prior ascent with
the matching center update and always returns a certified pair: the value
is the radius at the returned center (a valid upper bound), the duality
gap is measured against the information of the returned prior (a valid
lower bound).  Averaged centers and capacities integrate the pointwise
quantities over a short order window with Gauss-Legendre panels.
"""

from __future__ import annotations

import math
import weakref
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize, nnls
from scipy.special import rel_entr

from renyi._numeric import EPSILON, gauss_legendre_nodes
from renyi._numeric import log_sum_exp as logsumexp
from renyi.channels import DiscreteChannel, InputDistribution
from renyi.channels import renyi_information, renyi_mean
from renyi.exceptions import InputValidationError, NumericalStabilityError
from renyi.measures import (
    Order,
    OrderLike,
    ProbabilityMeasure,
    as_order,
    renyi_divergence,
    total_variation,
)

__all__ = [
    "CapacitySolution",
    "AveragedCenter",
    "ExponentCurve",
    "renyi_capacity",
    "renyi_radius",
    "capacity_curve",
    "curve_for_channel",
    "average_center",
    "average_capacity",
    "ehb_certificate",
    "c_infinity",
    "feedback_product_capacity",
]

DEFAULT_SOLVER_TOL: float = 1e-9
DEFAULT_ALPHA_MAX: float = 8.0
_MAX_SOLVER_EVALUATIONS: int = 5000
_FALLBACK_RESTARTS: int = 5
_FALLBACK_SEED: int = 20240811


@dataclass(frozen=True)
class CapacitySolution:
    """A certified capacity value for one order.

    ``value`` is the radius at ``center`` (dual side, always an upper
    bound on the capacity); ``duality_gap`` subtracts the information of
    ``optimal_prior`` (primal side, always a lower bound), so the true
    capacity lies in ``[value - duality_gap, value]``.
    """

    order: Order
    value: float
    center: ProbabilityMeasure
    optimal_prior: InputDistribution
    duality_gap: float
    iterations: int
    converged: bool = True

    def __post_init__(self) -> None:
        # Weak-duality violations can only come from arithmetic bugs.
        if self.duality_gap < -1e-12:
            raise NumericalStabilityError(
                f"negative duality gap {self.duality_gap} at order {float(self.order)}"
            )


@dataclass(frozen=True)
class AveragedCenter:
    """A quadrature average of centers over a short order window."""

    order: Order
    width: float
    center: ProbabilityMeasure
    node_orders: np.ndarray
    node_weights: np.ndarray

    def __post_init__(self) -> None:
        a = self.order.value
        lo = a - self.width * a
        hi = a + self.width * (1.0 - a)
        if np.any(self.node_orders <= lo) or np.any(self.node_orders >= hi):
            raise InputValidationError("quadrature nodes must lie inside the open window")
        if abs(float(np.sum(self.node_weights)) - 1.0) > 1e-9:
            raise InputValidationError("quadrature weights must sum to one")


def _log_masses(masses: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.log(masses)


def _center_log(a: float, is_one: bool, log_prior: np.ndarray, log_rows: np.ndarray) -> np.ndarray:
    """Log of the order-``a`` mean for the prior, normalized."""
    if is_one:
        return logsumexp(log_prior[:, None] + log_rows, axis=0)
    scaled = log_prior[:, None] + a * log_rows
    raw = logsumexp(scaled, axis=0) / a
    return raw - logsumexp(raw)


def _row_divergences(
    a: float,
    is_one: bool,
    rows: np.ndarray,
    log_rows: np.ndarray,
    log_q: np.ndarray,
) -> np.ndarray:
    """Vector of order-``a`` divergences from each channel row to ``q``."""
    if is_one:
        with np.errstate(divide="ignore", invalid="ignore"):
            return rel_entr(rows, np.exp(log_q)[None, :]).sum(axis=1)
    support_q = np.isfinite(log_q)
    common = (rows > 0.0) & support_q[None, :]
    safe_log_q = np.where(support_q, log_q, 0.0)
    terms = np.where(common, a * log_rows + (1.0 - a) * safe_log_q[None, :], -math.inf)
    with np.errstate(divide="ignore"):
        values = logsumexp(terms, axis=1) / (a - 1.0)
    if a > 1.0:
        dominated_fails = np.any((rows > 0.0) & ~support_q[None, :], axis=1)
        values = np.where(dominated_fails, math.inf, values)
    return values


def _aggregate_primal(a: float, is_one: bool, log_prior: np.ndarray, divergences: np.ndarray) -> float:
    """Prior-tilted aggregation of per-row divergences (the information)."""
    if is_one:
        return float(np.exp(log_prior) @ divergences)
    terms = log_prior + (a - 1.0) * divergences
    terms = np.where(np.isfinite(log_prior), terms, -math.inf)
    if np.any(np.isposinf(terms)):
        return math.inf
    return float(logsumexp(terms)) / (a - 1.0)


@dataclass
class _Certificate:
    gap: float
    log_prior: np.ndarray
    log_center: np.ndarray
    dual: float
    iterations: int


def _ascend(
    a: float,
    is_one: bool,
    rows: np.ndarray,
    log_rows: np.ndarray,
    log_prior: np.ndarray,
    tol: float,
    budget: int,
) -> _Certificate:
    """Multiplicative prior ascent with best-pair tracking.

    Unit steps are the classical exponentiated update and are accepted
    unconditionally; larger trial steps must not decrease the primal, and
    rejection shrinks the step back toward one.  The returned pair is the
    best certificate seen, so overshooting trials never hurt soundness.
    """
    step = 1.0
    log_q = _center_log(a, is_one, log_prior, log_rows)
    divergences = _row_divergences(a, is_one, rows, log_rows, log_q)
    primal = _aggregate_primal(a, is_one, log_prior, divergences)
    dual = float(np.max(divergences))
    best = _Certificate(dual - primal, log_prior, log_q, dual, 1)
    evaluations = 1
    while evaluations < budget and best.gap > tol:
        candidate = log_prior + step * divergences
        candidate = candidate - logsumexp(candidate)
        cand_q = _center_log(a, is_one, candidate, log_rows)
        cand_div = _row_divergences(a, is_one, rows, log_rows, cand_q)
        cand_primal = _aggregate_primal(a, is_one, candidate, cand_div)
        evaluations += 1
        if step <= 1.0 or cand_primal >= primal - 1e-15:
            log_prior, log_q, divergences, primal = candidate, cand_q, cand_div, cand_primal
            dual = float(np.max(divergences))
            step = min(step * 1.02, 4.0)
            gap = dual - primal
            if gap < best.gap:
                best = _Certificate(gap, log_prior, log_q, dual, evaluations)
        else:
            step = max(0.5 * step, 1.0)
    return best


def _dual_descent(
    a: float,
    is_one: bool,
    rows: np.ndarray,
    log_rows: np.ndarray,
    start_q: np.ndarray,
) -> np.ndarray | None:
    """Minimize the radius over centers directly (convex for every order).

    Epigraph formulation solved with SLSQP; coordinates are floored at a
    tiny level so constraint gradients stay finite.  The result is only a
    proposal: callers re-certify it with exact divergence evaluations.
    """
    n_out = rows.shape[1]
    used = rows.sum(axis=0) > 0.0
    floor = 1e-12

    def split(z: np.ndarray) -> tuple[np.ndarray, float]:
        return z[:-1], z[-1]

    def constraints_fn(z: np.ndarray) -> np.ndarray:
        q, t = split(z)
        log_q = np.where(q > 0.0, np.log(np.maximum(q, floor)), -math.inf)
        return t - _row_divergences(a, is_one, rows, log_rows, log_q)

    def constraints_jac(z: np.ndarray) -> np.ndarray:
        q, _ = split(z)
        q_safe = np.maximum(q, floor)
        jac = np.zeros((rows.shape[0], z.size))
        if is_one:
            jac[:, :-1] = rows / q_safe[None, :]
        else:
            log_q = np.log(q_safe)
            d = _row_divergences(a, is_one, rows, log_rows, log_q)
            with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                grad = np.where(
                    rows > 0.0,
                    np.exp(a * log_rows - a * log_q[None, :] + (1.0 - a) * d[:, None]),
                    0.0,
                )
            jac[:, :-1] = grad
        jac[:, -1] = 1.0
        return jac

    q0 = np.maximum(start_q, floor)
    q0 = q0 / q0.sum()
    t0 = float(np.max(_row_divergences(a, is_one, rows, log_rows, np.log(q0))))
    z0 = np.concatenate([q0, [t0 if math.isfinite(t0) else 1.0]])
    bounds = [(floor if flag else 0.0, 1.0) for flag in used] + [(None, None)]
    try:
        result = minimize(
            lambda z: z[-1],
            z0,
            jac=lambda z: np.concatenate([np.zeros(n_out), [1.0]]),
            bounds=bounds,
            constraints=[
                {"type": "ineq", "fun": constraints_fn, "jac": constraints_jac},
                {
                    "type": "eq",
                    "fun": lambda z: np.sum(z[:-1]) - 1.0,
                    "jac": lambda z: np.concatenate([np.ones(n_out), [0.0]]),
                },
            ],
            method="SLSQP",
            options={"maxiter": 400, "ftol": 1e-14},
        )
    except (ValueError, FloatingPointError):
        return None
    q = np.maximum(result.x[:-1], 0.0)
    if q.sum() <= 0.0:
        return None
    return q / q.sum()


def _recover_prior(
    a: float,
    is_one: bool,
    rows: np.ndarray,
    log_rows: np.ndarray,
    q: np.ndarray,
) -> np.ndarray | None:
    """Recover a prior from a near-optimal center via the stationarity map.

    At the saddle the center is the prior mixture of the tilted rows (the
    rows themselves at order one), supported on inputs whose divergence
    attains the radius; nonnegative least squares on the near-active set
    inverts that relation.
    """
    log_q = _log_masses(q)
    divergences = _row_divergences(a, is_one, rows, log_rows, log_q)
    radius = float(np.max(divergences))
    active = divergences >= radius - 1e-6
    if not np.any(active):
        return None
    if is_one:
        columns = rows[active]
    else:
        support_q = np.isfinite(log_q)
        tilted = np.where(
            (rows[active] > 0.0) & support_q[None, :],
            a * log_rows[active] + (1.0 - a) * np.where(support_q, log_q, 0.0)[None, :],
            -math.inf,
        )
        with np.errstate(divide="ignore"):
            tilted = tilted - logsumexp(tilted, axis=1)[:, None]
        columns = np.exp(tilted)
    try:
        weights, _ = nnls(columns.T, q)
    except (ValueError, RuntimeError):
        return None
    if weights.sum() <= 0.0:
        return None
    prior = np.zeros(rows.shape[0])
    prior[active] = weights / weights.sum()
    return prior


def renyi_capacity(
    order: OrderLike,
    w: DiscreteChannel,
    tol: float = DEFAULT_SOLVER_TOL,
    *,
    initial_prior: np.ndarray | None = None,
) -> CapacitySolution:
    """Solve for the order-``a`` capacity of ``w`` with a minimax certificate.

    Fixed-point ascent from the uniform prior, then multi-start ascent
    from Dirichlet draws, then a direct convex descent on the center with
    prior recovery; the best certified pair wins.  Non-convergence within
    the caps is reported through ``converged`` rather than raised: the
    returned value is still a valid upper bound with an honest gap.

    ``initial_prior`` replaces the uniform start when given (a warm start
    from a nearby order); it only steers the search, never the
    certificate, and the uniform start is retried if it fails to close
    the gap.
    """
    alpha = as_order(order)
    if tol <= 0.0:
        raise InputValidationError(f"tolerance must be positive, got {tol!r}")
    a = alpha.value
    is_one = alpha.is_one
    # Within a hair of order one the generic formulas divide float noise
    # by (a - 1) and the certificate can never close; the order-one
    # limit differs from the true value by far less than the tolerance.
    if not is_one and abs(a - 1.0) <= 1e-10:
        a = 1.0
        is_one = True
    rows = w.rows
    log_rows = _log_masses(rows)
    uniform = np.full(w.input_size, -math.log(w.input_size))
    start = uniform
    warm = None
    if initial_prior is not None:
        guess = np.asarray(initial_prior, dtype=np.float64).reshape(-1)
        if guess.size == w.input_size and np.all(guess >= 0.0) and guess.sum() > 0.0:
            # Mix toward uniform so multiplicative updates can revive
            # coordinates the warm start zeroed out.
            warm = 0.98 * guess / guess.sum() + 0.02 / w.input_size
            start = np.log(warm)
    best = _ascend(a, is_one, rows, log_rows, start, tol, _MAX_SOLVER_EVALUATIONS)
    iterations = best.iterations
    if best.gap > tol and warm is not None:
        retry = _ascend(a, is_one, rows, log_rows, uniform, tol, _MAX_SOLVER_EVALUATIONS)
        iterations += retry.iterations
        if retry.gap < best.gap:
            best = retry
    if best.gap > tol:
        rng = np.random.default_rng(_FALLBACK_SEED)
        for _ in range(_FALLBACK_RESTARTS):
            draw = rng.dirichlet(np.ones(w.input_size)) + 1e-9
            start = np.log(draw / draw.sum())
            candidate = _ascend(a, is_one, rows, log_rows, start, tol, _MAX_SOLVER_EVALUATIONS)
            iterations += candidate.iterations
            if candidate.gap < best.gap:
                best = candidate
            if best.gap <= tol:
                break
    if best.gap > tol:
        proposal = _dual_descent(a, is_one, rows, log_rows, np.exp(best.log_center))
        if proposal is not None:
            prior = _recover_prior(a, is_one, rows, log_rows, proposal)
            if prior is not None:
                polish = _ascend(
                    a,
                    is_one,
                    rows,
                    log_rows,
                    _log_masses(prior) - logsumexp(_log_masses(prior)),
                    tol,
                    500,
                )
                iterations += polish.iterations
                if polish.gap < best.gap:
                    best = polish
                log_q = _log_masses(proposal)
                log_prior = np.where(prior > 0.0, _log_masses(prior), -math.inf)
                dual = float(
                    np.max(_row_divergences(a, is_one, rows, log_rows, log_q))
                )
                # The tilted aggregation equals the information only against
                # the prior's own mean, so evaluate the primal there.
                own_center = _center_log(a, is_one, log_prior, log_rows)
                primal = _aggregate_primal(
                    a, is_one, log_prior,
                    _row_divergences(a, is_one, rows, log_rows, own_center),
                )
                if dual - primal < best.gap:
                    best = _Certificate(dual - primal, log_prior, log_q, dual, iterations)
    center = ProbabilityMeasure(np.exp(best.log_center))
    prior_masses = np.exp(best.log_prior)
    prior_masses[~np.isfinite(best.log_prior)] = 0.0
    prior = InputDistribution(prior_masses)
    # Recompute with the returned objects so the stored invariant is exact.
    value = renyi_radius(alpha, w, center)
    gap = value - renyi_information(alpha, prior, w)
    if gap < 0.0:
        # Rounding in the information term is amplified by 1/|1 - a|, so a
        # tiny negative gap near order one is noise, not a broken
        # certificate; anything beyond the noise floor still raises.
        noise_floor = 1e-14 * max(1.0, abs(value)) * (
            1.0 + (1.0 / abs(1.0 - alpha.value) if not alpha.is_one else 0.0)
        )
        if gap >= -noise_floor:
            gap = 0.0
    return CapacitySolution(
        order=alpha,
        value=value,
        center=center,
        optimal_prior=prior,
        duality_gap=gap,
        iterations=iterations,
        converged=gap <= tol,
    )


def renyi_radius(order: OrderLike, w: DiscreteChannel, q: ProbabilityMeasure) -> float:
    """Largest order-``a`` divergence from a channel row to ``q``."""
    alpha = as_order(order)
    if q.size != w.output_size:
        raise InputValidationError(
            f"reference size {q.size} does not match output alphabet {w.output_size}"
        )
    divergences = _row_divergences(
        alpha.value, alpha.is_one, w.rows, _log_masses(w.rows), _log_masses(q.masses)
    )
    return float(np.max(divergences))


def c_infinity(w: DiscreteChannel) -> float:
    """Order-infinity capacity: the log of the column-maxima mass."""
    return float(np.log(w.rows.max(axis=0).sum()))


class ExponentCurve:
    """Capacity as a function of order, memoized with certificates.

    Channel-backed curves solve on demand at the stored tolerance;
    function-backed curves (products, averaged capacities, closed forms)
    evaluate a supplied callable and carry an optional gap callable.  The
    sampled triples support piecewise-linear interpolation and the
    monotonicity diagnostics.
    """

    def __init__(
        self,
        channel: DiscreteChannel | None = None,
        *,
        tol: float = DEFAULT_SOLVER_TOL,
        alpha_max: float = DEFAULT_ALPHA_MAX,
        value_fn: Callable[[float], float] | None = None,
        gap_fn: Callable[[float], float] | None = None,
        limit_value: float | None = None,
    ) -> None:
        if (channel is None) == (value_fn is None):
            raise InputValidationError("provide exactly one of channel or value_fn")
        if tol <= 0.0:
            raise InputValidationError(f"tolerance must be positive, got {tol!r}")
        self.channel = channel
        self.tol = tol
        self.alpha_max = float(alpha_max)
        self._value_fn = value_fn
        self._gap_fn = gap_fn
        self._limit_value = limit_value
        self._solutions: dict[float, CapacitySolution] = {}
        self._samples: dict[float, tuple[float, float]] = {}

    @classmethod
    def from_function(
        cls,
        value_fn: Callable[[float], float],
        *,
        gap_fn: Callable[[float], float] | None = None,
        limit_value: float | None = None,
        alpha_max: float = DEFAULT_ALPHA_MAX,
    ) -> "ExponentCurve":
        return cls(
            value_fn=value_fn, gap_fn=gap_fn, limit_value=limit_value, alpha_max=alpha_max
        )

    @classmethod
    def sum_of(cls, curves: Sequence["ExponentCurve"]) -> "ExponentCurve":
        """The order-wise sum of capacity curves (product-channel additivity)."""
        parts = list(curves)
        if not parts:
            raise InputValidationError("sum of zero curves is undefined")
        limits = [part.c_infinity() for part in parts]
        limit = sum(limits) if all(v is not None for v in limits) else None
        return cls.from_function(
            lambda order: sum(part.value(order) for part in parts),
            gap_fn=lambda order: sum(part.gap(order) for part in parts),
            limit_value=limit,
            alpha_max=min(part.alpha_max for part in parts),
        )

    def solution(self, order: OrderLike) -> CapacitySolution:
        if self.channel is None:
            raise InputValidationError("function-backed curve has no solver certificates")
        key = float(as_order(order).value)
        found = self._solutions.get(key)
        if found is None:
            warm = None
            if self._solutions:
                # Optimal priors drift slowly in the order, so the nearest
                # solved order is a strong start for iterative ascent.
                nearest = min(self._solutions, key=lambda other: abs(other - key))
                warm = self._solutions[nearest].optimal_prior.masses
            found = renyi_capacity(key, self.channel, self.tol, initial_prior=warm)
            self._solutions[key] = found
            self._samples[key] = (found.value, found.duality_gap)
        return found

    def value(self, order: OrderLike) -> float:
        key = float(as_order(order).value)
        sample = self._samples.get(key)
        if sample is not None:
            return sample[0]
        if self._value_fn is not None:
            value = float(self._value_fn(key))
            gap = float(self._gap_fn(key)) if self._gap_fn is not None else 0.0
            self._samples[key] = (value, gap)
            return value
        return self.solution(key).value

    def gap(self, order: OrderLike) -> float:
        key = float(as_order(order).value)
        sample = self._samples.get(key)
        if sample is None:
            self.value(key)
            sample = self._samples[key]
        return sample[1]

    def ensure(self, orders: Sequence[float]) -> None:
        for order in orders:
            self.value(order)

    @property
    def sampled(self) -> list[tuple[float, float, float]]:
        return [
            (order, value, gap)
            for order, (value, gap) in sorted(self._samples.items())
        ]

    def interpolate(self, order: float) -> float:
        """Piecewise-linear interpolation over the sampled orders.

        Outside the sampled range the nearest endpoint value is used;
        the curve is monotone so this is the flat extension.
        """
        triples = self.sampled
        if not triples:
            raise InputValidationError("no sampled orders to interpolate")
        orders = np.array([t[0] for t in triples])
        values = np.array([t[1] for t in triples])
        return float(np.interp(order, orders, values))

    def c_one(self) -> float:
        return self.value(1.0)

    def c_infinity(self) -> float | None:
        """Order-infinity limit; exact for channel-backed curves."""
        if self.channel is not None:
            return c_infinity(self.channel)
        return self._limit_value

    def c_zero_bracket(self) -> tuple[float, float]:
        """A reported bracket for the order-zero-plus capacity limit.

        The upper end is the capacity at a small order (valid by
        monotonicity); the lower end is a Richardson extrapolation toward
        zero, padded and clipped, and is heuristic by construction.
        """
        near = self.value(1e-3)
        nearer = self.value(2e-3)
        pad = (nearer - near) + 1e-9
        low = max(0.0, 2.0 * near - nearer - pad)
        return (min(low, near), near)

    def violations(self, *, slack_scale: float = 2.0) -> list[str]:
        """Diagnostics for the shape constraints the capacity must obey."""
        problems: list[str] = []
        triples = self.sampled
        for (a_lo, v_lo, g_lo), (a_hi, v_hi, g_hi) in zip(triples, triples[1:]):
            allowance = slack_scale * (g_lo + g_hi) + 1e-12
            if v_lo > v_hi + allowance:
                problems.append(
                    f"capacity decreases from order {a_lo} ({v_lo}) to {a_hi} ({v_hi})"
                )
        interior = [(a, v, g) for a, v, g in triples if 0.0 < a < 1.0]
        for (a_lo, v_lo, g_lo), (a_hi, v_hi, g_hi) in zip(interior, interior[1:]):
            f_lo = (1.0 - a_lo) / a_lo * v_lo
            f_hi = (1.0 - a_hi) / a_hi * v_hi
            allowance = slack_scale * (
                (1.0 - a_lo) / a_lo * g_lo + (1.0 - a_hi) / a_hi * g_hi
            ) + 1e-12
            if f_hi > f_lo + allowance:
                problems.append(
                    f"(1-a)/a * capacity increases from order {a_lo} to {a_hi}"
                )
        sample_half = self._samples.get(0.5)
        if sample_half is not None:
            v_half, g_half = sample_half
            for a, v, g in interior:
                lower = min(a, 1.0 - a) / (1.0 - a) * v_half
                upper = max(a, 1.0 - a) / (1.0 - a) * v_half
                allowance = slack_scale * (g + g_half) * max(
                    1.0, max(a, 1.0 - a) / (1.0 - a)
                ) + 1e-9
                if v < lower - allowance or v > upper + allowance:
                    problems.append(
                        f"order-half sandwich fails at order {a}: {v} not in "
                        f"[{lower}, {upper}]"
                    )
        return problems


def capacity_curve(
    w: DiscreteChannel,
    orders: Sequence[float] | None = None,
    tol: float = DEFAULT_SOLVER_TOL,
    *,
    alpha_max: float = DEFAULT_ALPHA_MAX,
) -> ExponentCurve:
    """Sample the capacity over an order grid and return the curve.

    The default grid covers (0, 1) with 64 interior nodes plus a
    geometric extension to ``alpha_max``.
    """
    curve = ExponentCurve(w, tol=tol, alpha_max=alpha_max)
    if orders is None:
        inner = np.linspace(0.0, 1.0, 66)[1:-1]
        outer = np.geomspace(1.0, alpha_max, 17)
        orders = np.concatenate([inner, outer])
    grid = [float(v) for v in orders]
    for value in grid:
        if not 0.0 < value <= alpha_max:
            raise InputValidationError(
                f"grid order {value} outside (0, {alpha_max}]"
            )
    curve.ensure(grid)
    return curve


_CURVE_CACHE: "weakref.WeakKeyDictionary[DiscreteChannel, ExponentCurve]" = (
    weakref.WeakKeyDictionary()
)


def curve_for_channel(w: DiscreteChannel, tol: float = DEFAULT_SOLVER_TOL) -> ExponentCurve:
    """A shared, lazily sampled capacity curve for the channel.

    Cached per channel instance; a cached curve is reused whenever its
    tolerance is at least as tight as the requested one.
    """
    cached = _CURVE_CACHE.get(w)
    if cached is not None and cached.tol <= tol:
        return cached
    curve = ExponentCurve(w, tol=min(tol, DEFAULT_SOLVER_TOL))
    _CURVE_CACHE[w] = curve
    return curve


def _window(order: Order, width: float) -> tuple[float, float]:
    a = order.value
    if not 0.0 < a < 1.0:
        raise InputValidationError(f"averaging requires order in (0, 1), got {a!r}")
    if not 0.0 < width < 1.0:
        raise InputValidationError(f"averaging width must lie in (0, 1), got {width!r}")
    return a - width * a, a + width * (1.0 - a)


def average_center(
    order: OrderLike,
    width: float,
    w: DiscreteChannel,
    nodes: int = 16,
    tol: float = 1e-9,
    *,
    max_nodes: int = 1024,
) -> AveragedCenter:
    """Quadrature average of the centers over the order window.

    The window is ``(a - width*a, a + width*(1 - a))`` (length exactly
    ``width``); node counts double until the averaged center moves by
    less than ``tol`` in total variation.
    """
    alpha = as_order(order)
    lo, hi = _window(alpha, width)
    curve = curve_for_channel(w)
    count = max(int(nodes), 2)
    previous: ProbabilityMeasure | None = None
    while count <= max_nodes:
        node_orders, node_weights = gauss_legendre_nodes(lo, hi, count)
        stacked = np.stack(
            [curve.solution(beta).center.masses for beta in node_orders]
        )
        # Node solves carry their own certificate noise, so demanding
        # stabilization below that level would never terminate.
        noise = max(curve.gap(beta) for beta in node_orders)
        mixed = node_weights @ stacked / node_weights.sum()
        center = ProbabilityMeasure(mixed)
        if previous is not None and total_variation(center, previous) < tol + 4.0 * noise:
            return AveragedCenter(
                order=alpha,
                width=float(width),
                center=center,
                node_orders=node_orders,
                node_weights=node_weights / node_weights.sum(),
            )
        previous = center
        count *= 2
    raise NumericalStabilityError(
        f"averaged center did not stabilize within {max_nodes} nodes"
    )


def average_capacity(
    order: OrderLike,
    width: float,
    w: DiscreteChannel,
    tol: float = 1e-9,
    *,
    nodes: int = 16,
    max_nodes: int = 4096,
) -> float:
    """Window average of the capacity with the order-ratio weight.

    The integrand is ``max(1, a(1-b) / ((1-a)b)) * C_b``; the weight has
    a kink at ``b = a``, so the two half-windows are integrated as
    separate panels before dividing by the window length.
    """
    alpha = as_order(order)
    a = alpha.value
    lo, hi = _window(alpha, width)
    curve = curve_for_channel(w)

    worst_gap = 0.0

    def integrand(beta: float) -> float:
        nonlocal worst_gap
        weight = max(1.0, (a * (1.0 - beta)) / ((1.0 - a) * beta))
        value = curve.value(beta)
        worst_gap = max(worst_gap, curve.gap(beta))
        return weight * value

    count = max(int(nodes), 2)
    previous: float | None = None
    while count <= max_nodes:
        total = 0.0
        for panel_lo, panel_hi in ((lo, a), (a, hi)):
            node_orders, node_weights = gauss_legendre_nodes(panel_lo, panel_hi, count)
            total += float(
                node_weights @ np.array([integrand(beta) for beta in node_orders])
            )
        value = total / (hi - lo)
        # Certificate noise in the node values caps what the quadrature
        # can resolve; stabilization below that level is unattainable.
        if previous is not None and abs(value - previous) < tol + 4.0 * worst_gap:
            return value
        previous = value
        count *= 2
    raise NumericalStabilityError(
        f"averaged capacity did not stabilize within {max_nodes} nodes"
    )


def ehb_certificate(
    order: OrderLike,
    w: DiscreteChannel,
    q: ProbabilityMeasure,
    tol: float = DEFAULT_SOLVER_TOL,
) -> tuple[float, float, float, float]:
    """Evaluate the radius split around an arbitrary reference measure.

    Returns ``(capacity, center_divergence, radius, slack)`` with
    ``slack = radius - capacity - center_divergence``; the slack is
    nonnegative up to solver tolerance.
    """
    alpha = as_order(order)
    solution = renyi_capacity(alpha, w, tol)
    radius = renyi_radius(alpha, w, q)
    center_divergence = renyi_divergence(alpha, solution.center, q)
    slack = radius - solution.value - center_divergence
    return solution.value, center_divergence, radius, slack


def feedback_product_capacity(
    order: OrderLike,
    parts: Sequence[DiscreteChannel],
    tol: float = DEFAULT_SOLVER_TOL,
) -> tuple[float, ProbabilityMeasure]:
    """Capacity and center of a product channel, with or without feedback.

    Capacities add over the components and the centers multiply (same
    little-endian index order as the product constructor); feedback does
    not change either.
    """
    if len(parts) == 0:
        raise InputValidationError("product of zero channels is undefined")
    total = 0.0
    center_masses: np.ndarray | None = None
    for part in parts:
        solution = renyi_capacity(order, part, tol)
        total += solution.value
        if center_masses is None:
            center_masses = solution.center.masses
        else:
            center_masses = np.kron(solution.center.masses, center_masses)
    assert center_masses is not None
    return total, ProbabilityMeasure(center_masses)
