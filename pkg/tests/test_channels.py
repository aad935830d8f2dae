"""Channel construction, information measures, means, and products."""

from __future__ import annotations

import math

import numpy as np
import pytest

from conftest import random_channel, random_probability
from renyi import (
    DiscreteChannel,
    EnumerationLimitError,
    InputDistribution,
    InputValidationError,
    ProbabilityMeasure,
    binary_erasure,
    binary_symmetric,
    channel_from_json,
    channel_to_json,
    named_channel,
    product_channel,
    renyi_divergence,
    renyi_information,
    renyi_mean,
    sibson_decomposition,
    uniform_input,
)

ORDERS = (0.3, 0.5, 0.75, 1.0, 2.0, 4.0)


def test_channel_validation() -> None:
    # Rows renormalize; negative entries and wrong shapes reject.
    lopsided = DiscreteChannel(np.array([[1.0, 3.0], [0.5, 0.5]]))
    assert lopsided.rows[0] == pytest.approx([0.25, 0.75])
    with pytest.raises(InputValidationError):
        DiscreteChannel(np.array([[0.5, -0.5], [0.5, 0.5]]))
    with pytest.raises(InputValidationError):
        DiscreteChannel(np.array([0.5, 0.5]))
    with pytest.raises(InputValidationError):
        DiscreteChannel(np.array([[0.0, 0.0], [0.5, 0.5]]))
    w = binary_symmetric(0.1)
    assert w.input_size == 2 and w.output_size == 2
    with pytest.raises(ValueError):
        w.rows[0, 0] = 1.0


def test_named_channels() -> None:
    assert np.allclose(named_channel("bsc:0.1").rows, binary_symmetric(0.1).rows)
    assert np.allclose(named_channel("bec:0.25").rows, binary_erasure(0.25).rows)
    degraded = named_channel("haroutunian")
    assert degraded.rows == pytest.approx(np.array([[0.5, 0.5], [0.0, 1.0]]))
    with pytest.raises(InputValidationError):
        named_channel("nonesuch")


def test_json_round_trip(rng) -> None:
    w = random_channel(rng, 3, 4)
    again = channel_from_json(channel_to_json(w))
    assert np.allclose(again.rows, w.rows)
    with pytest.raises(InputValidationError):
        channel_from_json({"inputs": 2, "outputs": 99, "rows": w.rows.tolist()})


def test_information_against_divergence_form(rng) -> None:
    # I_a(P; W) = min_q sum_x p_x D_a(W(x)||q) has the closed-form value
    # (a/(a-1)) ln sum_y (sum_x p_x w^a)^{1/a}; the mean attains it.
    for _ in range(20):
        w = random_channel(rng, 3, 4)
        p = random_probability(rng, 3)
        for order in ORDERS:
            info = renyi_information(order, p, w)
            mean = renyi_mean(order, p, w)
            if order == 1.0:
                attained = sum(
                    pk * renyi_divergence(1.0, ProbabilityMeasure(row), mean)
                    for pk, row in zip(p.masses, w.rows)
                )
            else:
                ratio = order / (order - 1.0)
                inner = (p.masses[:, None] * w.rows**order).sum(axis=0)
                attained = ratio * math.log((inner ** (1.0 / order)).sum())
            assert info == pytest.approx(attained, abs=1e-9)
            assert info >= -1e-12


def test_sibson_decomposition(rng) -> None:
    # sum_x p_x D_a(W(x)||q) style objective splits as I_a + D_a(mean||q).
    w = random_channel(rng, 3, 3)
    p = random_probability(rng, 3)
    q = random_probability(rng, 3)
    for order in ORDERS:
        total, (info, penalty) = sibson_decomposition(order, p, w, q)
        assert total == pytest.approx(info + penalty, abs=1e-10)
        assert info == pytest.approx(renyi_information(order, p, w), abs=1e-10)
        mean = renyi_mean(order, p, w)
        assert penalty == pytest.approx(renyi_divergence(order, mean, q), abs=1e-10)
        assert penalty >= -1e-12


def test_information_additive_over_products(rng) -> None:
    w = random_channel(rng, 2, 3)
    v = random_channel(rng, 3, 2)
    pw = random_probability(rng, 2)
    pv = random_probability(rng, 3)
    both = product_channel([w, v])
    # Component zero varies fastest in the product indexing.
    joint = InputDistribution(np.outer(pv.masses, pw.masses).ravel())
    for order in ORDERS:
        lhs = renyi_information(order, joint, both)
        rhs = renyi_information(order, pw, w) + renyi_information(order, pv, v)
        assert lhs == pytest.approx(rhs, abs=1e-9)


def test_product_channel_shape_and_limit() -> None:
    w = binary_symmetric(0.1)
    cube = product_channel([w, w, w])
    assert cube.input_size == 8 and cube.output_size == 8
    assert cube.rows[0] == pytest.approx(
        np.kron(np.kron(w.rows[0], w.rows[0]), w.rows[0])
    )
    with pytest.raises(EnumerationLimitError):
        product_channel([w] * 12, max_entries=1000)


def test_uniform_input() -> None:
    p = uniform_input(4)
    assert p.masses == pytest.approx([0.25] * 4)


def test_gallager_function_bridge(rng) -> None:
    # rho-scaled information at order 1/(1+rho) equals the random-coding
    # integrand -ln sum_y (sum_x p w^{1/(1+rho)})^{1+rho}.
    w = random_channel(rng, 3, 4)
    p = random_probability(rng, 3)
    for rho in (-0.5, 0.25, 1.0, 3.0):
        order = 1.0 / (1.0 + rho)
        inner = (p.masses[:, None] * w.rows**order).sum(axis=0)
        direct = -math.log(((inner ** (1.0 + rho))).sum())
        assert rho * renyi_information(order, p, w) == pytest.approx(
            direct, abs=1e-12
        )
