"""Divergence orders, supports, tilting, and total variation."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_probability
from renyi import (
    FiniteMeasure,
    InputValidationError,
    Order,
    ProbabilityMeasure,
    as_order,
    binary_divergence,
    renyi_divergence,
    tilted_measure,
    total_variation,
)

ORDERS = (0.25, 0.5, 0.75, 1.0, 1.5, 2.5, 4.0)

simplex3 = st.lists(
    st.floats(min_value=0.01, max_value=1.0), min_size=3, max_size=3
).map(lambda xs: ProbabilityMeasure(np.array(xs)))
orders = st.sampled_from(ORDERS)


def test_order_validation() -> None:
    assert as_order(2).value == 2.0
    assert as_order(Order(0.5)).value == 0.5
    assert Order(1.0).is_one and not Order(1.0 + 1e-12).is_one
    for bad in (0.0, -1.0, math.inf, math.nan):
        with pytest.raises(InputValidationError):
            Order(bad)


def test_measure_validation() -> None:
    with pytest.raises(InputValidationError):
        FiniteMeasure(np.array([0.5, -0.1]))
    with pytest.raises(InputValidationError):
        FiniteMeasure(np.array([0.0, 0.0]))
    with pytest.raises(InputValidationError):
        FiniteMeasure(np.array([[0.5], [0.5]]))
    # Probability measures renormalize rather than reject.
    p = ProbabilityMeasure(np.array([2.0, 6.0]))
    assert p.masses == pytest.approx([0.25, 0.75])
    with pytest.raises(ValueError):
        p.masses[0] = 1.0


def test_kl_matches_direct_sum() -> None:
    w = ProbabilityMeasure(np.array([0.7, 0.2, 0.1]))
    q = ProbabilityMeasure(np.array([0.2, 0.5, 0.3]))
    direct = sum(a * math.log(a / b) for a, b in zip(w.masses, q.masses))
    assert renyi_divergence(1.0, w, q) == pytest.approx(direct, abs=1e-14)


def test_half_order_closed_form() -> None:
    # D_{1/2}(w||q) = -2 ln sum sqrt(w q); deterministic on the point mass.
    w = ProbabilityMeasure(np.array([1.0, 0.0]))
    q = ProbabilityMeasure(np.array([0.5, 0.5]))
    assert renyi_divergence(0.5, w, q) == pytest.approx(math.log(2.0), abs=1e-14)


def test_support_conventions() -> None:
    w = ProbabilityMeasure(np.array([0.5, 0.5, 0.0]))
    q = ProbabilityMeasure(np.array([0.0, 0.5, 0.5]))
    disjoint = ProbabilityMeasure(np.array([0.0, 0.0, 1.0]))
    for order in (1.0, 1.5, 3.0):
        assert math.isinf(renyi_divergence(order, w, q))
    # Below one, partial overlap stays finite; disjoint supports do not.
    assert math.isfinite(renyi_divergence(0.5, w, q))
    assert math.isinf(renyi_divergence(0.5, w, disjoint))


@given(simplex3, simplex3, orders, st.floats(min_value=0.1, max_value=10.0))
def test_second_argument_scaling(w, q, order, gamma) -> None:
    scaled = FiniteMeasure(gamma * q.masses)
    base = renyi_divergence(order, w, q)
    assert renyi_divergence(order, w, scaled) == pytest.approx(
        base - math.log(gamma), abs=1e-10
    )


@given(simplex3, simplex3)
def test_order_monotone_and_nonnegative(w, q) -> None:
    values = [renyi_divergence(order, w, q) for order in ORDERS]
    assert values[0] >= -1e-12
    for low, high in zip(values, values[1:]):
        assert high >= low - 1e-12


@given(simplex3, simplex3, st.sampled_from((0.25, 0.5, 0.75)))
def test_tilted_identity(w, q, order) -> None:
    # (1-a) D_a(w||q) = a D_1(t||w) + (1-a) D_1(t||q) for the tilted t.
    tilt = tilted_measure(order, w, q)
    lhs = (1.0 - order) * renyi_divergence(order, w, q)
    rhs = order * renyi_divergence(1.0, tilt, w) + (1.0 - order) * renyi_divergence(
        1.0, tilt, q
    )
    assert lhs == pytest.approx(rhs, abs=1e-9)


@given(simplex3, simplex3, orders)
def test_pinsker_floor(w, q, order) -> None:
    tv = total_variation(w, q)
    assert 0.0 <= tv <= 2.0
    floor = 0.5 * min(1.0, order) * tv * tv
    assert renyi_divergence(order, w, q) >= floor - 1e-12


@given(simplex3, simplex3)
def test_half_order_variation_ceiling(w, q) -> None:
    tv = total_variation(w, q)
    ceiling = 2.0 * math.log(2.0 / (2.0 - tv)) if tv < 2.0 else math.inf
    assert renyi_divergence(0.5, w, q) <= ceiling + 1e-12


def test_binary_divergence_values() -> None:
    assert binary_divergence(0.5, 0.3, 0.3) == pytest.approx(0.0, abs=1e-14)
    # d_a(0||c) = -ln(1 - c) at every order.
    for order in ORDERS:
        assert binary_divergence(order, 0.0, 0.4) == pytest.approx(
            -math.log(0.6), abs=1e-12
        )
    # The binary form agrees with the vector form.
    w = ProbabilityMeasure(np.array([0.2, 0.8]))
    q = ProbabilityMeasure(np.array([0.6, 0.4]))
    assert binary_divergence(2.0, 0.2, 0.6) == pytest.approx(
        renyi_divergence(2.0, w, q), abs=1e-13
    )


def test_divergence_convex_in_second_argument(rng) -> None:
    for _ in range(50):
        w = random_probability(rng, 4)
        q0 = random_probability(rng, 4)
        q1 = random_probability(rng, 4)
        beta = float(rng.uniform(0.05, 0.95))
        mix = ProbabilityMeasure(beta * q1.masses + (1.0 - beta) * q0.masses)
        for order in ORDERS:
            blend = beta * renyi_divergence(order, w, q1) + (
                1.0 - beta
            ) * renyi_divergence(order, w, q0)
            assert renyi_divergence(order, w, mix) <= blend + 1e-11


def test_tilted_measure_domain() -> None:
    w = ProbabilityMeasure(np.array([0.3, 0.7]))
    q = ProbabilityMeasure(np.array([0.6, 0.4]))
    for bad in (0.0, 1.0, 1.5):
        with pytest.raises(InputValidationError):
            tilted_measure(bad, w, q)
    # Near order one the tilt approaches the first argument.
    close = tilted_measure(1.0 - 1e-9, w, q)
    assert close.masses == pytest.approx(w.masses, abs=1e-7)
