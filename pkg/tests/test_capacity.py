"""Capacity solver certificates, curves, averaging, and feedback products."""

from __future__ import annotations

import math

import numpy as np
import pytest

from conftest import random_channel
from renyi import (
    DiscreteChannel,
    ProbabilityMeasure,
    average_capacity,
    average_center,
    binary_symmetric,
    c_infinity,
    capacity_curve,
    curve_for_channel,
    ehb_certificate,
    feedback_product_capacity,
    product_channel,
    renyi_capacity,
    renyi_divergence,
    renyi_radius,
    total_variation,
    uniform_input,
)
from renyi.capacity import ExponentCurve

ORDERS = (0.3, 0.5, 0.9, 1.0, 1.5, 3.0)


def bsc_capacity(order: float, p: float) -> float:
    """Closed form via the symmetric center: uniform prior is optimal."""
    if order == 1.0:
        return math.log(2.0) + p * math.log(p) + (1.0 - p) * math.log(1.0 - p)
    return math.log(2.0) + math.log(p**order + (1.0 - p) ** order) / (order - 1.0)


@pytest.mark.parametrize("order", ORDERS)
def test_bsc_closed_form(order, bsc) -> None:
    solution = renyi_capacity(order, bsc)
    assert solution.converged
    assert solution.duality_gap <= 1e-8
    assert solution.value == pytest.approx(bsc_capacity(order, 0.1), abs=1e-9)
    assert solution.center.masses == pytest.approx([0.5, 0.5], abs=1e-6)


def test_half_order_bsc_frozen(bsc) -> None:
    assert renyi_capacity(0.5, bsc).value == pytest.approx(
        0.2231435513142095, abs=1e-12
    )


def test_zero_capacity_channel() -> None:
    useless = DiscreteChannel(np.array([[0.5, 0.5], [0.5, 0.5]]))
    for order in ORDERS:
        assert renyi_capacity(order, useless).value == pytest.approx(0.0, abs=1e-12)


def test_radius_dominates_capacity(rng, bsc) -> None:
    # The radius at any candidate center upper-bounds the capacity; the
    # solver's center should close the gap to certificate precision.
    for order in (0.5, 1.0, 2.0):
        solution = renyi_capacity(order, bsc)
        assert renyi_radius(order, bsc, solution.center) <= solution.value + 1e-8
        loose = renyi_radius(order, bsc, ProbabilityMeasure(rng.dirichlet([1.0, 1.0])))
        assert loose >= solution.value - 1e-10


def test_certificates_on_random_channels(rng) -> None:
    for _ in range(10):
        w = random_channel(rng, int(rng.integers(2, 5)), int(rng.integers(2, 5)))
        for order in ORDERS:
            solution = renyi_capacity(order, w)
            assert solution.duality_gap <= 1e-8
            assert solution.value >= -1e-12


def test_capacity_nondecreasing_in_order(rng) -> None:
    w = random_channel(rng, 3, 3)
    values = [renyi_capacity(order, w).value for order in ORDERS]
    for low, high in zip(values, values[1:]):
        assert high >= low - 1e-9
    # The rescaled map ((1-a)/a) C_a is nonincreasing below one.
    below = [0.2, 0.4, 0.6, 0.8]
    scaled = [
        (1.0 - a) / a * renyi_capacity(a, w).value for a in below
    ]
    for first, second in zip(scaled, scaled[1:]):
        assert second <= first + 1e-9


def test_c_infinity(bsc) -> None:
    assert c_infinity(bsc) == pytest.approx(math.log(1.8), abs=1e-12)
    curve = curve_for_channel(bsc)
    assert curve.c_infinity() == pytest.approx(math.log(1.8), abs=1e-12)
    # Large orders approach but never exceed the sup-order value.
    assert curve.value(64.0) <= math.log(1.8) + 1e-12
    assert curve.value(64.0) >= math.log(1.8) - 0.01


def test_curve_sampling_and_interpolation(bsc) -> None:
    curve = capacity_curve(bsc, [0.25, 0.5, 1.0, 2.0])
    sampled = {order: value for order, value, _ in curve.sampled}
    assert sampled[0.5] == pytest.approx(bsc_capacity(0.5, 0.1), abs=1e-9)
    assert sampled[2.0] == pytest.approx(bsc_capacity(2.0, 0.1), abs=1e-9)
    assert curve.c_one() == pytest.approx(bsc_capacity(1.0, 0.1), abs=1e-9)


def test_additivity_over_products(rng) -> None:
    for _ in range(5):
        w = random_channel(rng, 2, 3)
        v = random_channel(rng, 3, 2)
        both = product_channel([w, v])
        for order in (0.5, 1.0, 2.0):
            lhs = renyi_capacity(order, both).value
            rhs = renyi_capacity(order, w).value + renyi_capacity(order, v).value
            assert lhs == pytest.approx(rhs, abs=2e-7)


def test_ehb_certificate(bsc) -> None:
    # radius(q) - capacity - D(center||q) >= 0 with equality at the center.
    q = ProbabilityMeasure(np.array([0.3, 0.7]))
    for order in (0.5, 1.0, 2.0):
        capacity, penalty, radius, slack = ehb_certificate(order, bsc, q)
        assert slack >= -1e-8
        assert radius == pytest.approx(capacity + penalty + slack, abs=1e-10)
        solution = renyi_capacity(order, bsc)
        _, at_center, _, center_slack = ehb_certificate(
            order, bsc, solution.center
        )
        assert at_center <= 1e-6
        assert center_slack >= -1e-8


def test_average_center_window(bsc) -> None:
    averaged = average_center(0.5, 0.2, bsc)
    # Symmetric channel: every member center is uniform, so the mixture is.
    assert averaged.center.masses == pytest.approx([0.5, 0.5], abs=1e-9)
    lo = averaged.node_orders.min()
    hi = averaged.node_orders.max()
    assert lo >= 0.5 - 0.2 * 0.5 - 1e-9
    assert hi <= 0.5 + 0.2 * 0.5 + 1e-9


def test_average_center_continuity(rng) -> None:
    # Total variation between nearby windows is at most (2/eps)|da|.
    w = random_channel(rng, 3, 3)
    eps = 0.3
    first = average_center(0.5, eps, w)
    second = average_center(0.52, eps, w)
    bound = 2.0 / eps * 0.02
    assert total_variation(first.center, second.center) <= bound + 1e-6


def test_average_capacity_sandwich(rng) -> None:
    # C_a <= C^eps_a <= C_a + (eps/(1-eps)) C_a / (a(1-a)).
    w = random_channel(rng, 3, 4)
    for order, eps in ((0.3, 0.2), (0.5, 0.25), (0.7, 0.1)):
        base = renyi_capacity(order, w).value
        averaged = average_capacity(order, eps, w)
        assert averaged >= base - 1e-8
        ceiling = base + eps / (1.0 - eps) * base / (order * (1.0 - order))
        assert averaged <= ceiling + 1e-8


def test_feedback_product_capacity(rng, bsc) -> None:
    other = random_channel(rng, 2, 3)
    for order in (0.5, 1.0, 2.0):
        value, center = feedback_product_capacity(order, [bsc, other])
        split = renyi_capacity(order, bsc).value + renyi_capacity(order, other).value
        assert value == pytest.approx(split, abs=2e-7)
        assert center.size == bsc.output_size * other.output_size


def test_curve_sum_matches_componentwise(bsc) -> None:
    single = curve_for_channel(bsc)
    double = ExponentCurve.sum_of([single, single])
    for order in (0.4, 1.0, 2.0):
        assert double.value(order) == pytest.approx(
            2.0 * single.value(order), abs=1e-9
        )
