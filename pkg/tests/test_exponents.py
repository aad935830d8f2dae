"""Sphere-packing exponent family: regimes, convexity, averaging, Haroutunian."""

from __future__ import annotations

import math

import numpy as np
import pytest

from conftest import random_channel
from renyi import (
    DiscreteChannel,
    average_sp_exponent,
    binary_symmetric,
    curve_for_channel,
    haroutunian_details,
    haroutunian_exponent,
    order_for_rate,
    renyi_capacity,
    sphere_packing_exponent,
)
from renyi.exponents import averaged_curve, supremum_below_one


def test_bsc_frozen_point(bsc) -> None:
    result = sphere_packing_exponent(0.2, curve_for_channel(bsc))
    assert result.certified
    assert result.regime == "rate_below_order_one_capacity"
    assert result.value == pytest.approx(0.04029236546921477, abs=1e-9)
    assert result.maximizing_order.value == pytest.approx(0.645789293982, abs=1e-6)


def test_zero_at_order_one_capacity(bsc) -> None:
    curve = curve_for_channel(bsc)
    result = sphere_packing_exponent(curve.c_one(), curve)
    assert result.value == pytest.approx(0.0, abs=1e-10)
    assert result.regime == "rate_at_finite_order_capacity"


def test_rate_regimes(bsc) -> None:
    # A rate below the smallest certified capacity cannot be separated
    # from the zero-order limit, so the report is infinite but honest
    # about the uncertainty; a rate above the sampled bracket is finite.
    curve = curve_for_channel(bsc)
    deep = sphere_packing_exponent(1e-6, curve)
    assert math.isinf(deep.value) and not deep.certified
    assert deep.regime == "rate_within_zero_order_bracket"
    shallow = sphere_packing_exponent(0.02, curve)
    assert math.isfinite(shallow.value) and shallow.value > 0.0
    assert shallow.certified
    # A noiseless channel keeps positive capacity down to order zero;
    # rates below it are uncodable at any exponent.
    clean = curve_for_channel(DiscreteChannel(np.eye(2)))
    frozen = sphere_packing_exponent(0.3, clean)
    assert math.isinf(frozen.value)
    assert not frozen.certified
    assert frozen.regime in (
        "rate_below_zero_order_bracket",
        "rate_within_zero_order_bracket",
    )
    # Between the order-one and sup-order capacities the curve crossing
    # caps the searched orders; above the sup-order value nothing does.
    middle = sphere_packing_exponent(curve.c_one() + 0.1, curve)
    assert middle.regime == "rate_at_finite_order_capacity"
    assert middle.value > 0.0
    assert middle.maximizing_order.value >= 1.0
    above = sphere_packing_exponent(math.log(1.8) + 0.05, curve)
    assert above.regime == "rate_above_all_finite_capacities"
    assert above.value > 0.0


def test_zero_capacity_channel_linear_exponent() -> None:
    useless = DiscreteChannel(np.array([[0.5, 0.5], [0.5, 0.5]]))
    curve = curve_for_channel(useless)
    for rate in (0.1, 0.5, 1.3):
        result = sphere_packing_exponent(rate, curve)
        assert result.value == pytest.approx(rate, abs=1e-8)


def test_nonincreasing_in_rate_below_capacity(bsc) -> None:
    # Below the order-one capacity the exponent falls with the rate; it
    # turns around above it, where the strong-converse branch grows.
    curve = curve_for_channel(bsc)
    rates = np.linspace(0.05, curve.c_one(), 12)
    values = [sphere_packing_exponent(float(r), curve).value for r in rates]
    for low, high in zip(values, values[1:]):
        assert high <= low + 1e-10
    past = sphere_packing_exponent(curve.c_one() + 0.05, curve).value
    assert past > 0.0


def test_midpoint_convexity_in_rate(rng) -> None:
    # The exponent is a supremum of affine functions of the rate, hence
    # convex; twenty random midpoint triples across a few channels.
    for _ in range(5):
        w = random_channel(rng, 3, 3)
        curve = curve_for_channel(w)
        lo_edge = curve.value(0.05)
        hi_edge = curve.value(8.0)
        for _ in range(4):
            r1, r2 = sorted(rng.uniform(lo_edge + 1e-3, hi_edge + 0.3, size=2))
            mid = 0.5 * (r1 + r2)
            e1 = sphere_packing_exponent(r1, curve).value
            e2 = sphere_packing_exponent(r2, curve).value
            em = sphere_packing_exponent(mid, curve).value
            if math.isinf(e1) or math.isinf(e2):
                continue
            assert em <= 0.5 * (e1 + e2) + 1e-6


def test_order_for_rate_inverts_curve(bsc) -> None:
    curve = curve_for_channel(bsc)
    for rate in (0.1, 0.25, 0.35):
        order = order_for_rate(curve, rate)
        assert curve.value(order.value) == pytest.approx(rate, abs=1e-7)


def test_supremum_below_one_matches_grid(bsc) -> None:
    curve = curve_for_channel(bsc)
    order, value = supremum_below_one(curve, 0.2)
    grid = np.linspace(0.02, 0.98, 97)
    brute = max(
        (1.0 - a) / a * (curve.value(a) - 0.2) for a in grid
    )
    assert value >= brute - 1e-9
    assert 0.0 < order < 1.0


def test_average_sp_frozen_and_dominates(bsc) -> None:
    value = average_sp_exponent(0.1, 0.2, bsc)
    assert value == pytest.approx(0.05160726150107148, abs=1e-9)
    base = sphere_packing_exponent(0.2, curve_for_channel(bsc)).value
    # The averaged capacity dominates the capacity, so the averaged
    # exponent dominates the plain one below order one.
    assert value >= base - 1e-10


def test_averaged_curve_dominates_plain(bsc) -> None:
    plain = curve_for_channel(bsc)
    averaged = averaged_curve(bsc, 0.2)
    for order in (0.3, 0.5, 0.7):
        assert averaged.value(order) >= plain.value(order) - 1e-9


def test_haroutunian_gap_on_degraded_channel() -> None:
    w = DiscreteChannel(np.array([[0.5, 0.5], [0.0, 1.0]]))
    rate = renyi_capacity(0.5, w).value
    details = haroutunian_details(rate, w, 1e-7, certify=True)
    assert details.value == pytest.approx(0.0313671762179, abs=1e-6)
    assert details.lower <= details.value + 1e-12
    sp = sphere_packing_exponent(rate, curve_for_channel(w)).value
    assert details.value - sp >= 1e-3


def test_haroutunian_dominates_sphere_packing(rng) -> None:
    for _ in range(2):
        w = random_channel(rng, 2, 2)
        curve = curve_for_channel(w)
        rate = 0.7 * curve.c_one()
        if rate <= curve.value(0.05):
            continue
        e_h = haroutunian_exponent(rate, w, 1e-6)
        e_sp = sphere_packing_exponent(rate, curve).value
        assert e_h >= e_sp - 1e-6
