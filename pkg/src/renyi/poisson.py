"""Closed-form capacities and sphere-packing bounds for Poisson channels.

A continuous-time Poisson channel over a horizon ``T`` with dark
current ``A`` and peak ``B`` admits exact order-``a`` capacities through
the two-point function ``poisson_F`` and its optimal cost level
``poisson_optimal_cost``; the five input-constraint variants and the
time-varying peak profile all reduce to these.  The same closed forms
feed the sphere-packing outer bound, in the fixed-schedule form and in
the parametric subblock form, and a slot-discretization oracle checks
the continuum formulas against finite channel matrices from below.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Any

import numpy as np
from scipy import stats

from renyi._numeric import gauss_legendre_nodes
from renyi.bounds import BoundReport, CodeParams, _clip_probability
from renyi.capacity import ExponentCurve, renyi_capacity
from renyi.channels import DiscreteChannel
from renyi.exceptions import InputValidationError, NumericalStabilityError
from renyi.exponents import sphere_packing_exponent, supremum_below_one
from renyi.measures import OrderLike, as_order

__all__ = [
    "PoissonChannelSpec",
    "poisson_F",
    "poisson_optimal_cost",
    "poisson_capacity",
    "poisson_curve",
    "poisson_spb",
    "slot_channel",
    "discretized_capacity_trend",
]

_VARIANTS = ("mean", "atmost", "atleast", "free", "profile")


@dataclass(frozen=True)
class PoissonChannelSpec:
    """A Poisson channel instance with one input-cost constraint.

    ``variant`` selects how the cost level ``x`` constrains the input:
    exact mean power, mean power at most ``x``, at least ``x``, no cost
    constraint, or a piecewise-constant peak profile ``((t_end, level),
    ...)`` covering ``(0, T]`` in place of the constant peak.
    """

    duration: float
    floor: float
    peak: float
    variant: str = "free"
    cost: float | None = None
    profile: tuple[tuple[float, float], ...] | None = None

    def __post_init__(self) -> None:
        if not (math.isfinite(self.duration) and self.duration > 0.0):
            raise InputValidationError(f"duration must be positive, got {self.duration}")
        if not 0.0 <= self.floor < self.peak or not math.isfinite(self.peak):
            raise InputValidationError(
                f"need 0 <= floor < peak, got floor={self.floor}, peak={self.peak}"
            )
        if self.variant not in _VARIANTS:
            raise InputValidationError(f"unknown variant {self.variant!r}")
        if self.variant in ("mean", "atmost", "atleast"):
            if self.cost is None or not self.floor <= self.cost <= self.peak:
                raise InputValidationError(
                    f"variant {self.variant!r} needs a cost level in "
                    f"[{self.floor}, {self.peak}], got {self.cost}"
                )
        if self.variant == "profile":
            if not self.profile:
                raise InputValidationError("profile variant needs a nonempty profile")
            previous = 0.0
            for t_end, level in self.profile:
                if t_end <= previous:
                    raise InputValidationError("profile segment ends must increase")
                if not self.floor <= level <= self.peak:
                    raise InputValidationError(
                        f"profile level {level} outside [{self.floor}, {self.peak}]"
                    )
                previous = t_end
            if abs(previous - self.duration) > 1e-12 * max(1.0, self.duration):
                raise InputValidationError(
                    f"profile must cover (0, {self.duration}], ends at {previous}"
                )

    @classmethod
    def from_json(cls, text: str) -> "PoissonChannelSpec":
        raw = json.loads(text)
        profile = raw.get("profile")
        return cls(
            duration=float(raw["T"]),
            floor=float(raw["A"]),
            peak=float(raw["B"]),
            variant=raw.get("variant", "free"),
            cost=None if raw.get("x") is None else float(raw["x"]),
            profile=None if profile is None else tuple((float(t), float(g)) for t, g in profile),
        )

    def to_json(self) -> str:
        payload: dict[str, Any] = {
            "T": self.duration,
            "A": self.floor,
            "B": self.peak,
            "variant": self.variant,
        }
        if self.cost is not None:
            payload["x"] = self.cost
        if self.profile is not None:
            payload["profile"] = [[t, g] for t, g in self.profile]
        return json.dumps(payload)


def poisson_F(order: OrderLike, a: float, b: float, x: float) -> float:
    """Two-point capacity density at cost level ``x`` between rates
    ``a < b``.

    Vanishes at ``x = a`` and ``x = b`` and is positive in between; the
    conventions ``0^a = 0`` and ``0 ln(0/x) = 0`` make the ``a = 0``
    boundary exact.
    """
    if not 0.0 <= a < b:
        raise InputValidationError(f"need 0 <= a < b, got a={a}, b={b}")
    if not a <= x <= b:
        raise InputValidationError(f"cost level {x} outside [{a}, {b}]")
    alpha = as_order(order)
    al = alpha.value
    weight = (x - a) / (b - a)
    if alpha.is_one:
        first = weight * b * math.log(b / x) if weight > 0.0 else 0.0
        second = (1.0 - weight) * a * math.log(a / x) if a > 0.0 else 0.0
        return first + second
    bracket = weight * b**al + (1.0 - weight) * a**al
    return al / (al - 1.0) * (bracket ** (1.0 / al) - x)


def poisson_optimal_cost(order: OrderLike, a: float, b: float) -> float:
    """Cost level maximizing ``poisson_F`` at this order; always in
    ``(a, b)``."""
    if not 0.0 <= a < b:
        raise InputValidationError(f"need 0 <= a < b, got a={a}, b={b}")
    alpha = as_order(order)
    al = alpha.value
    if alpha.is_one:
        if a == 0.0:
            return b / math.e
        return math.exp(-1.0) * b ** (b / (b - a)) * a ** (-a / (b - a))
    scale = al ** (al / (1.0 - al))
    if a == 0.0:
        return scale * b
    denominator = b**al - a**al
    return (
        scale * ((b - a) / denominator) ** (1.0 / (1.0 - al))
        + (a * b**al - b * a**al) / denominator
    )


def poisson_capacity(order: OrderLike, spec: PoissonChannelSpec) -> float:
    """Order-``a`` capacity of the Poisson channel under the spec's
    input constraint, in nats over the full horizon."""
    alpha = as_order(order)
    if spec.variant == "profile":
        assert spec.profile is not None
        total = 0.0
        previous = 0.0
        for t_end, level in spec.profile:
            length = t_end - previous
            previous = t_end
            if level > spec.floor:
                peak_cost = poisson_optimal_cost(alpha, spec.floor, level)
                total += poisson_F(alpha, spec.floor, level, peak_cost) * length
        return total
    unconstrained = poisson_optimal_cost(alpha, spec.floor, spec.peak)
    if spec.variant == "free":
        level = unconstrained
    elif spec.variant == "mean":
        level = float(spec.cost)  # type: ignore[arg-type]
    elif spec.variant == "atmost":
        level = min(float(spec.cost), unconstrained)  # type: ignore[arg-type]
    else:
        level = max(float(spec.cost), unconstrained)  # type: ignore[arg-type]
    return poisson_F(alpha, spec.floor, spec.peak, level) * spec.duration


def poisson_curve(spec: PoissonChannelSpec) -> ExponentCurve:
    """Capacity curve backed by the closed form (zero solver gap)."""
    return ExponentCurve.from_function(lambda order: poisson_capacity(order, spec))


def _averaged_poisson_capacity(
    spec: PoissonChannelSpec,
    order: float,
    width: float,
    *,
    tol: float = 1e-10,
    nodes: int = 16,
    max_nodes: int = 4096,
) -> float:
    """Window average of the scaled capacity around ``order``.

    The integrand has a kink where the scaling factor meets one, so the
    two sides of the window are integrated on separate panels.
    """
    lo = order - width * order
    hi = order + width * (1.0 - order)

    def integrand(beta: float) -> float:
        scale = max(1.0, order * (1.0 - beta) / ((1.0 - order) * beta))
        return scale * poisson_capacity(beta, spec)

    def quadrature(count: int) -> float:
        total = 0.0
        for panel_lo, panel_hi in ((lo, order), (order, hi)):
            xs, ws = gauss_legendre_nodes(panel_lo, panel_hi, count)
            total += float(ws @ np.array([integrand(float(x)) for x in xs]))
        return total / (hi - lo)

    value = quadrature(nodes)
    count = nodes
    while count < max_nodes:
        count *= 2
        refined = quadrature(count)
        if abs(refined - value) <= tol * max(1.0, abs(refined)):
            return refined
        value = refined
    raise NumericalStabilityError(
        f"window average did not stabilize within {max_nodes} quadrature nodes"
    )


def poisson_spb(
    params: CodeParams,
    spec: PoissonChannelSpec,
    phi: OrderLike,
    *,
    n: int | None = None,
    eps: float | None = None,
    kappa: float | None = None,
) -> BoundReport:
    """Sphere-packing outer bound for the Poisson channel.

    With no subblock parameters this is the fixed-schedule form whose
    constants depend only on ``(peak - floor) * duration``; supplying
    ``n``, ``eps`` and ``kappa`` selects the parametric subblock form
    built on window-averaged capacities.
    """
    if spec.variant == "profile":
        raise InputValidationError("sphere-packing form needs a constant peak, not a profile")
    phi_v = as_order(phi).value
    if not 0.0 < phi_v < 1.0:
        raise InputValidationError(f"order must lie in (0, 1), got {phi_v}")
    product = (spec.peak - spec.floor) * spec.duration
    rate = params.rate()
    curve = poisson_curve(spec)
    if n is None and eps is None and kappa is None:
        return _poisson_spb_schedule(params, spec, phi_v, product, rate, curve)
    if n is None:
        n = 1
    if eps is None or kappa is None:
        raise InputValidationError("parametric form needs both eps and kappa")
    if n < 1:
        raise InputValidationError(f"subblock count must be positive, got {n}")
    if not 0.0 < eps < n / (n + 1.0):
        raise InputValidationError(f"eps must lie in (0, {n / (n + 1.0)}), got {eps}")
    if kappa < 3.0:
        raise InputValidationError(f"kappa must be at least 3, got {kappa}")
    gamma = 3.0 * (3.0 * n) ** (1.0 / kappa) * max(product / n, kappa)
    averaged = ExponentCurve.from_function(
        lambda order: _averaged_poisson_capacity(spec, order, eps)
    )
    avg_phi = averaged.value(phi_v)
    threshold = math.log(16.0) + 0.5 * math.log(n) + avg_phi + gamma / (1.0 - phi_v)
    hypothesis = rate > threshold
    _, sp_eps = supremum_below_one(averaged, rate)
    log_prefactor = (
        math.log(eps) - 2.0 * gamma - (math.log(16.0) + 2.0 + 1.5 * math.log(n))
    ) / phi_v
    log_value = log_prefactor - sp_eps
    constants: dict[str, Any] = {
        "form": "parametric",
        "n": n,
        "phi": phi_v,
        "eps": eps,
        "kappa": kappa,
        "gamma": gamma,
        "intensity_product": product,
        "avg_capacity": avg_phi,
        "rate": rate,
        "rate_threshold": threshold,
        "avg_sp_exponent": sp_eps,
        "log_prefactor": log_prefactor,
        "log_value": log_value,
    }
    alt_rate = rate - 2.0 * gamma - (math.log(16.0) + 2.0 + 1.5 * math.log(n) - math.log(eps))
    constants["alt_rate"] = alt_rate
    if alt_rate > 0.0:
        _, alt_sp = supremum_below_one(averaged, alt_rate)
        alt_log_prefactor = math.log(eps) - 2.0 * gamma - (math.log(16.0) + 1.5 * math.log(n))
        constants["alt_log_prefactor"] = alt_log_prefactor
        constants["alt_avg_sp_exponent"] = alt_sp
        constants["alt_log_value"] = alt_log_prefactor - alt_sp
    return BoundReport(
        lemma="poisson-sphere-packing",
        value=_clip_probability(log_value),
        hypothesis_satisfied=hypothesis,
        constants=constants,
        direction="outer",
    )


def _poisson_spb_schedule(
    params: CodeParams,
    spec: PoissonChannelSpec,
    phi_v: float,
    product: float,
    rate: float,
    curve: ExponentCurve,
) -> BoundReport:
    size_ok = product >= 21.0
    order_ok = phi_v >= 1.0 / product if product > 0.0 else False
    log_product = math.log(product)
    c_phi = curve.value(phi_v)
    c_one = curve.c_one()
    rate_floor = c_phi + 1.75 / (phi_v * (1.0 - phi_v)) + 12.2 * log_product / (1.0 - phi_v)
    rate_ok = c_one >= rate >= rate_floor
    sp = sphere_packing_exponent(rate, curve)
    exponent = sp.value if math.isfinite(sp.value) else math.inf
    log_prefactor = -(math.log(16.0) + 2.0 + 1.05 / phi_v + 26.0 * log_product) / phi_v
    log_value = log_prefactor - exponent if math.isfinite(exponent) else -math.inf
    constants: dict[str, Any] = {
        "form": "schedule",
        "phi": phi_v,
        "intensity_product": product,
        "kappa": math.log(math.floor(product)) if product >= 1.0 else math.nan,
        "gamma_ceiling": 11.7 * log_product,
        "rate": rate,
        "rate_floor": rate_floor,
        "order_one_capacity": c_one,
        "capacity_at_phi": c_phi,
        "sp_exponent": exponent,
        "log_prefactor": log_prefactor,
        "log_value": log_value,
        "size_satisfied": size_ok,
        "order_satisfied": order_ok,
    }
    value = 0.0 if log_value == -math.inf else _clip_probability(log_value)
    return BoundReport(
        lemma="poisson-sphere-packing",
        value=value,
        hypothesis_satisfied=size_ok and order_ok and rate_ok,
        constants=constants,
        direction="outer",
    )


def slot_channel(spec: PoissonChannelSpec, slots: int, *, tail: float = 1e-18) -> DiscreteChannel:
    """Two-input finite channel for one slot of length ``duration/slots``.

    Inputs hold the floor or the peak rate constant over the slot; the
    output is the photon count, truncated where the heavier tail drops
    below ``tail`` with the remainder folded into the last bin (a
    coarsening, so slot capacities stay below the continuum capacity).
    """
    if slots < 1:
        raise InputValidationError(f"slot count must be positive, got {slots}")
    delta = spec.duration / slots
    means = (spec.floor * delta, spec.peak * delta)
    heavy = max(means, default=0.0)
    # Walk the truncation point out until the folded mass drops below the
    # tail target; quantile inversion is unreliable this far out.
    top = int(math.ceil(heavy)) + 1
    while stats.poisson.sf(top - 1, heavy) > tail:
        top += max(1, top // 4)
    counts = np.arange(top)
    rows = np.zeros((2, top + 1))
    for i, mean in enumerate(means):
        rows[i, :top] = stats.poisson.pmf(counts, mean)
        rows[i, top] = max(0.0, 1.0 - rows[i, :top].sum())
    return DiscreteChannel(rows)


def discretized_capacity_trend(
    order: OrderLike,
    spec: PoissonChannelSpec,
    slot_counts: tuple[int, ...] = (2, 4, 8, 16),
) -> list[float]:
    """Capacities of slotted two-level approximations, in slot order.

    Each entry is ``slots * C_a(slot channel)``, which by additivity is
    the capacity of the full slotted block; refining the slots can only
    raise it, and every entry stays below the continuum free-variant
    capacity.
    """
    values = []
    for slots in slot_counts:
        if slots < 1:
            raise InputValidationError(f"slot count must be positive, got {slots}")
        solution = renyi_capacity(order, slot_channel(spec, slots), 1e-10)
        values.append(slots * solution.value)
    return values
