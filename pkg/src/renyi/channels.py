"""Finite channels, input distributions, and Renyi information quantities.

A channel is a stochastic matrix whose rows are conditional output
distributions.  The order-``a`` information of a prior through a channel
and the matching output barycenter (the Renyi mean) are computed in log
space; products of channels use a mixed-radix little-endian index so
component zero varies fastest in both alphabets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np
from scipy.special import rel_entr

from renyi._numeric import log_sum_exp as logsumexp
from renyi.exceptions import EnumerationLimitError, InputValidationError
from renyi.measures import (
    OrderLike,
    ProbabilityMeasure,
    as_order,
    renyi_divergence,
)

__all__ = [
    "DiscreteChannel",
    "InputDistribution",
    "JointSpec",
    "binary_symmetric",
    "binary_erasure",
    "named_channel",
    "uniform_input",
    "channel_to_json",
    "channel_from_json",
    "renyi_information",
    "renyi_mean",
    "sibson_decomposition",
    "product_channel",
]

# Product channels larger than this (input count times output count) are
# refused by default; the oracle's exhaustive loops scale with this area.
DEFAULT_PRODUCT_ENTRY_CAP: int = 10**6


@dataclass(frozen=True, eq=False)
class DiscreteChannel:
    """A channel on finite alphabets, stored as a row-stochastic matrix.

    Rows are normalized on construction and the matrix is frozen
    read-only, so instances can be shared freely and cached by identity.
    """

    rows: np.ndarray

    def __post_init__(self) -> None:
        matrix = np.asarray(self.rows, dtype=np.float64).copy()
        if matrix.ndim != 2 or matrix.shape[0] == 0 or matrix.shape[1] == 0:
            raise InputValidationError("channel must be a nonempty 2-D matrix")
        if not np.all(np.isfinite(matrix)):
            raise InputValidationError("channel entries must be finite")
        if np.any(matrix < 0.0):
            raise InputValidationError("channel entries must be nonnegative")
        sums = matrix.sum(axis=1)
        if np.any(sums <= 0.0):
            raise InputValidationError("every channel row needs positive mass")
        matrix /= sums[:, None]
        matrix.setflags(write=False)
        object.__setattr__(self, "rows", matrix)

    @property
    def input_size(self) -> int:
        return int(self.rows.shape[0])

    @property
    def output_size(self) -> int:
        return int(self.rows.shape[1])

    def row(self, x: int) -> ProbabilityMeasure:
        return ProbabilityMeasure(self.rows[x])


class InputDistribution(ProbabilityMeasure):
    """A probability measure used as a prior on a channel's input alphabet."""


@dataclass(frozen=True, eq=False)
class JointSpec:
    """A channel paired with a prior on its input alphabet.

    The joint measure itself is never materialized; divergences against
    product references are evaluated by direct summation instead.
    """

    channel: DiscreteChannel
    prior: InputDistribution

    def __post_init__(self) -> None:
        if self.prior.size != self.channel.input_size:
            raise InputValidationError(
                f"prior size {self.prior.size} does not match input alphabet "
                f"{self.channel.input_size}"
            )


def binary_symmetric(p: float) -> DiscreteChannel:
    """The binary symmetric channel with crossover probability ``p``."""
    flip = float(p)
    if not 0.0 <= flip <= 1.0:
        raise InputValidationError(f"crossover probability must lie in [0, 1], got {p!r}")
    return DiscreteChannel(np.array([[1.0 - flip, flip], [flip, 1.0 - flip]]))


def binary_erasure(p: float) -> DiscreteChannel:
    """The binary erasure channel with erasure probability ``p``.

    Outputs are ordered (0, erasure, 1).
    """
    erase = float(p)
    if not 0.0 <= erase <= 1.0:
        raise InputValidationError(f"erasure probability must lie in [0, 1], got {p!r}")
    return DiscreteChannel(
        np.array([[1.0 - erase, erase, 0.0], [0.0, erase, 1.0 - erase]])
    )


def named_channel(name: str) -> DiscreteChannel:
    """Resolve a channel literal: ``bsc:p``, ``bec:p``, or ``haroutunian``."""
    text = name.strip().lower()
    if text == "haroutunian":
        return DiscreteChannel(np.array([[0.5, 0.5], [0.0, 1.0]]))
    if ":" in text:
        kind, _, raw = text.partition(":")
        try:
            parameter = float(raw)
        except ValueError as exc:
            raise InputValidationError(f"bad channel parameter in {name!r}") from exc
        if kind == "bsc":
            return binary_symmetric(parameter)
        if kind == "bec":
            return binary_erasure(parameter)
    raise InputValidationError(f"unknown channel name {name!r}")


def uniform_input(size: int) -> InputDistribution:
    """The uniform prior on an input alphabet of the given size."""
    if size < 1:
        raise InputValidationError("input alphabet must be nonempty")
    return InputDistribution(np.full(size, 1.0 / size))


def channel_to_json(w: DiscreteChannel) -> dict[str, Any]:
    """Serialize a channel to the interchange dictionary."""
    return {
        "inputs": w.input_size,
        "outputs": w.output_size,
        "rows": [[float(v) for v in row] for row in w.rows],
    }


def channel_from_json(obj: dict[str, Any]) -> DiscreteChannel:
    """Parse the interchange dictionary back to a channel."""
    try:
        inputs = int(obj["inputs"])
        outputs = int(obj["outputs"])
        rows = obj["rows"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputValidationError(f"malformed channel object: {exc}") from exc
    channel = DiscreteChannel(np.asarray(rows, dtype=np.float64))
    if channel.input_size != inputs or channel.output_size != outputs:
        raise InputValidationError(
            f"declared shape ({inputs}, {outputs}) does not match rows "
            f"({channel.input_size}, {channel.output_size})"
        )
    return channel


def _check_prior(p: ProbabilityMeasure, w: DiscreteChannel) -> None:
    if p.size != w.input_size:
        raise InputValidationError(
            f"prior size {p.size} does not match input alphabet {w.input_size}"
        )


def _log_rows(rows: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.log(rows)


def renyi_information(order: OrderLike, p: ProbabilityMeasure, w: DiscreteChannel) -> float:
    """Renyi information of the prior ``p`` through the channel ``w``.

    For order ``a != 1`` this is
    ``(a / (a - 1)) * ln sum_y (sum_x p(x) w(y|x)**a)**(1/a)``;
    at ``a = 1`` it is the mutual information.  Inputs with zero prior
    mass are dropped before evaluation.
    """
    alpha = as_order(order)
    _check_prior(p, w)
    keep = p.support
    prior = p.masses[keep]
    rows = w.rows[keep]
    if alpha.is_one:
        mixture = prior @ rows
        return float(prior @ rel_entr(rows, mixture[None, :]).sum(axis=1))
    a = alpha.value
    scaled = np.log(prior)[:, None] + a * _log_rows(rows)
    per_output = logsumexp(scaled, axis=0)
    return a / (a - 1.0) * float(logsumexp(per_output / a))


def renyi_mean(order: OrderLike, p: ProbabilityMeasure, w: DiscreteChannel) -> ProbabilityMeasure:
    """The order-``a`` output barycenter of the prior ``p`` through ``w``.

    The normalized vector ``(sum_x p(x) w(y|x)**a)**(1/a)``; at ``a = 1``
    this is the output mixture of the channel rows.
    """
    alpha = as_order(order)
    _check_prior(p, w)
    keep = p.support
    prior = p.masses[keep]
    rows = w.rows[keep]
    if alpha.is_one:
        return ProbabilityMeasure(prior @ rows)
    a = alpha.value
    scaled = np.log(prior)[:, None] + a * _log_rows(rows)
    log_raw = logsumexp(scaled, axis=0) / a
    out = np.zeros(w.output_size)
    finite = np.isfinite(log_raw)
    out[finite] = np.exp(log_raw[finite] - logsumexp(log_raw[finite]))
    return ProbabilityMeasure(out)


def sibson_decomposition(
    order: OrderLike,
    p: ProbabilityMeasure,
    w: DiscreteChannel,
    q: ProbabilityMeasure,
) -> tuple[float, tuple[float, float]]:
    """Split the joint-vs-product divergence at the output barycenter.

    Returns ``(lhs, (information, recentering))`` where ``lhs`` is the
    divergence between the joint measure of ``(p, w)`` and the product of
    ``p`` with ``q``, and the identity ``lhs = information + recentering``
    holds with the recentering term measured from the order-``a`` mean to
    ``q``.  The left side is evaluated in its factored form: a prior-tilted
    aggregation of the per-input divergences against ``q``.
    """
    alpha = as_order(order)
    _check_prior(p, w)
    if q.size != w.output_size:
        raise InputValidationError(
            f"reference size {q.size} does not match output alphabet {w.output_size}"
        )
    keep = p.support
    prior = p.masses[keep]
    per_input = np.array(
        [renyi_divergence(alpha, ProbabilityMeasure(row), q) for row in w.rows[keep]]
    )
    if not np.all(np.isfinite(per_input)):
        raise InputValidationError(
            "reference measure must give finite divergence from every used row"
        )
    if alpha.is_one:
        lhs = float(prior @ per_input)
    else:
        a = alpha.value
        lhs = float(logsumexp(np.log(prior) + (a - 1.0) * per_input)) / (a - 1.0)
    information = renyi_information(alpha, p, w)
    recentering = renyi_divergence(alpha, renyi_mean(alpha, p, w), q)
    if math.isinf(recentering):
        raise InputValidationError("reference measure must dominate the output barycenter")
    return lhs, (information, recentering)


def product_channel(
    parts: Sequence[DiscreteChannel],
    *,
    max_entries: int = DEFAULT_PRODUCT_ENTRY_CAP,
) -> DiscreteChannel:
    """The memoryless product of the given channels.

    Input and output alphabets are mixed-radix little-endian over the
    components: component zero varies fastest, so the product row index is
    ``sum_t x_t * prod_{s<t} input_size_s`` and likewise for outputs.
    """
    if len(parts) == 0:
        raise InputValidationError("product of zero channels is undefined")
    total_inputs = 1
    total_outputs = 1
    for part in parts:
        total_inputs *= part.input_size
        total_outputs *= part.output_size
    if total_inputs * total_outputs > max_entries:
        raise EnumerationLimitError(
            f"product needs {total_inputs * total_outputs} entries, cap is {max_entries}"
        )
    # np.kron puts its first factor in the most significant digit, so
    # folding later parts in from the left keeps component zero fastest.
    accumulated = parts[0].rows
    for part in parts[1:]:
        accumulated = np.kron(part.rows, accumulated)
    return DiscreteChannel(accumulated)
