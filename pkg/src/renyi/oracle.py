"""Brute-force oracles that check the analytic machinery from below.

Everything here is deliberately slow and direct: exact list-decoding
error probabilities by output enumeration, random-coding searches that
witness achievability bounds, exhaustive searches over tiny code
spaces, feedback strategies evaluated path by path, and verification
suites that replay every inequality the fast modules rely on against
freshly sampled instances.  The suites return counters instead of
raising so a single run can report every failure at once.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from renyi.bounds import (
    CodeParams,
    arimoto_outer,
    gallager_inner,
    moment_bound_rhs,
    small_deviation_floor,
    taylor_gap_bound,
)
from renyi.capacity import ehb_certificate, renyi_capacity
from renyi.channels import (
    DiscreteChannel,
    InputDistribution,
    binary_symmetric,
    product_channel,
    uniform_input,
)
from renyi.exceptions import EnumerationLimitError, InputValidationError
from renyi.measures import (
    ProbabilityMeasure,
    renyi_divergence,
    tilted_measure,
    total_variation,
)

__all__ = [
    "CodeBook",
    "FeedbackStrategy",
    "RandomCodingResult",
    "SuiteResult",
    "exact_error_probability",
    "random_code_search",
    "exhaustive_minimum_error",
    "random_feedback_strategy",
    "feedback_output_distribution",
    "feedback_capacity_gap",
    "verify_pinsker",
    "verify_dpi",
    "verify_ehb",
    "verify_taylor",
    "verify_moment",
    "verify_berry",
    "verify_sandwich",
    "verify_feedback",
    "SUITES",
    "run_suite",
    "run_all_suites",
]

DEFAULT_TERM_CAP = 10**7


@dataclass(frozen=True, eq=False)
class CodeBook:
    """A deterministic block code: one row of input letters per message."""

    codewords: np.ndarray
    list_size: int = 1

    def __post_init__(self) -> None:
        array = np.asarray(self.codewords)
        if array.ndim != 2 or not np.issubdtype(array.dtype, np.integer):
            raise InputValidationError("codewords must be a 2-D integer array")
        object.__setattr__(self, "codewords", array)
        if self.list_size < 1 or self.messages <= self.list_size:
            raise InputValidationError(
                f"need 1 <= list size < messages, got L={self.list_size}, M={self.messages}"
            )

    @property
    def messages(self) -> int:
        return self.codewords.shape[0]

    @property
    def blocklength(self) -> int:
        return self.codewords.shape[1]


@dataclass(frozen=True, eq=False)
class FeedbackStrategy:
    """Deterministic feedback encoder over a finite horizon.

    ``maps[t]`` has one row per message and one column per output
    prefix; prefix indexes accumulate as ``index = index * |Y_t| + y_t``
    as outputs arrive, matching the enumeration order used throughout
    this module.
    """

    maps: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        if len(self.maps) == 0:
            raise InputValidationError("need at least one time step")
        for step in self.maps:
            if step.ndim != 2 or not np.issubdtype(step.dtype, np.integer):
                raise InputValidationError("each time step must be a 2-D integer array")
            if step.shape[0] != self.maps[0].shape[0]:
                raise InputValidationError("message count must match across time steps")

    @property
    def horizon(self) -> int:
        return len(self.maps)

    @property
    def messages(self) -> int:
        return self.maps[0].shape[0]


def _as_parts(parts: DiscreteChannel | Sequence[DiscreteChannel], n: int) -> list[DiscreteChannel]:
    if isinstance(parts, DiscreteChannel):
        return [parts] * n
    listed = list(parts)
    if len(listed) != n:
        raise InputValidationError(f"expected {n} component channels, got {len(listed)}")
    return listed


def _codeword_likelihoods(
    codewords: np.ndarray, parts: Sequence[DiscreteChannel]
) -> np.ndarray:
    """Likelihood of every output block under every message, (M, Y^n)."""
    likelihood = np.ones((codewords.shape[0], 1))
    for t, part in enumerate(parts):
        step = part.rows[codewords[:, t]]
        likelihood = (likelihood[:, :, None] * step[:, None, :]).reshape(
            codewords.shape[0], -1
        )
    return likelihood


def exact_error_probability(
    codebook: CodeBook,
    parts: DiscreteChannel | Sequence[DiscreteChannel],
    *,
    max_terms: int = DEFAULT_TERM_CAP,
) -> float:
    """Exact list-decoding error of the optimal decoder, uniform prior.

    The optimal list decoder keeps the ``L`` most likely messages, so
    the success probability is the column sum of the ``L`` largest
    likelihoods; ties cannot change that sum, making the value
    decoder-tie independent.
    """
    listed = _as_parts(parts, codebook.blocklength)
    terms = codebook.messages
    for part in listed:
        terms *= part.output_size
        if terms > max_terms:
            raise EnumerationLimitError(
                f"enumeration needs more than {max_terms} terms"
            )
    for t, part in enumerate(listed):
        column = codebook.codewords[:, t]
        if np.any(column < 0) or np.any(column >= part.input_size):
            raise InputValidationError(f"codeword letter out of range at time {t}")
    likelihood = _codeword_likelihoods(codebook.codewords, listed)
    top = np.partition(likelihood, -codebook.list_size, axis=0)[-codebook.list_size :, :]
    success = top.sum() / codebook.messages
    return float(min(1.0, max(0.0, 1.0 - success)))


@dataclass(frozen=True, eq=False)
class RandomCodingResult:
    """Summary of a random-coding search over independent codebooks."""

    trials: int
    best_error: float
    mean_error: float
    best_codebook: CodeBook


def random_code_search(
    parts: DiscreteChannel | Sequence[DiscreteChannel],
    messages: int,
    list_size: int,
    trials: int,
    seed: int,
    *,
    priors: Sequence[InputDistribution] | None = None,
    blocklength: int | None = None,
    max_terms: int = DEFAULT_TERM_CAP,
) -> RandomCodingResult:
    """Sample i.i.d. codebooks and track the best and mean exact error.

    Trial ``i`` draws from a generator spawned as ``(seed, i)``, and the
    mean is reduced in trial order, so results are reproducible and
    independent of chunking.
    """
    if trials < 1:
        raise InputValidationError(f"need at least one trial, got {trials}")
    n = blocklength if blocklength is not None else (
        1 if isinstance(parts, DiscreteChannel) else len(parts)
    )
    listed = _as_parts(parts, n)
    if priors is None:
        letter_priors = [uniform_input(part.input_size) for part in listed]
    else:
        letter_priors = list(priors)
        if len(letter_priors) != n:
            raise InputValidationError(f"expected {n} priors, got {len(letter_priors)}")
    best_error = math.inf
    best_codebook: CodeBook | None = None
    total = 0.0
    for trial in range(trials):
        rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(trial,)))
        codewords = np.empty((messages, n), dtype=np.int64)
        for t, prior in enumerate(letter_priors):
            codewords[:, t] = rng.choice(
                prior.size, size=messages, p=prior.masses
            )
        codebook = CodeBook(codewords=codewords, list_size=list_size)
        error = exact_error_probability(codebook, listed, max_terms=max_terms)
        total += error
        if error < best_error:
            best_error = error
            best_codebook = codebook
    assert best_codebook is not None
    return RandomCodingResult(
        trials=trials,
        best_error=best_error,
        mean_error=total / trials,
        best_codebook=best_codebook,
    )


def exhaustive_minimum_error(
    parts: DiscreteChannel | Sequence[DiscreteChannel],
    *,
    blocklength: int = 1,
    list_size: int = 1,
) -> tuple[float, CodeBook]:
    """Exact minimum two-message error over every codebook.

    Restricted to two messages, binary inputs, and blocklength at most
    three so the full enumeration stays at 64 codebooks or fewer.
    """
    listed = _as_parts(parts, blocklength)
    if blocklength > 3:
        raise EnumerationLimitError("exhaustive search supports blocklength at most 3")
    for part in listed:
        if part.input_size != 2:
            raise InputValidationError("exhaustive search needs binary-input channels")
    if list_size != 1:
        raise InputValidationError("exhaustive search supports list size 1 only")
    words = 2**blocklength
    best: tuple[float, CodeBook] | None = None
    for first in range(words):
        for second in range(words):
            codewords = np.array(
                [
                    [(first >> t) & 1 for t in range(blocklength)],
                    [(second >> t) & 1 for t in range(blocklength)],
                ],
                dtype=np.int64,
            )
            codebook = CodeBook(codewords=codewords, list_size=1)
            error = exact_error_probability(codebook, listed)
            if best is None or error < best[0]:
                best = (error, codebook)
    assert best is not None
    return best


def random_feedback_strategy(
    parts: Sequence[DiscreteChannel], messages: int, rng: np.random.Generator
) -> FeedbackStrategy:
    """Uniformly random deterministic feedback maps for each time step."""
    maps = []
    prefixes = 1
    for part in parts:
        maps.append(
            rng.integers(0, part.input_size, size=(messages, prefixes), dtype=np.int64)
        )
        prefixes *= part.output_size
    return FeedbackStrategy(maps=tuple(maps))


def feedback_output_distribution(
    strategy: FeedbackStrategy,
    parts: Sequence[DiscreteChannel],
    message: int,
    *,
    max_terms: int = DEFAULT_TERM_CAP,
) -> np.ndarray:
    """Distribution of the output block given one message, as a flat
    array in prefix-accumulation order."""
    if strategy.horizon != len(parts):
        raise InputValidationError(
            f"strategy horizon {strategy.horizon} does not match {len(parts)} channels"
        )
    if not 0 <= message < strategy.messages:
        raise InputValidationError(f"message {message} out of range")
    current = np.ones(1)
    for t, part in enumerate(parts):
        if current.size * part.output_size > max_terms:
            raise EnumerationLimitError(f"enumeration needs more than {max_terms} terms")
        inputs = strategy.maps[t][message]
        if inputs.shape[0] != current.size:
            raise InputValidationError(
                f"time {t} map has {inputs.shape[0]} prefix columns, expected {current.size}"
            )
        if np.any(inputs < 0) or np.any(inputs >= part.input_size):
            raise InputValidationError(f"strategy letter out of range at time {t}")
        step = part.rows[inputs]
        current = (current[:, None] * step).reshape(-1)
    return current


def feedback_capacity_gap(
    strategy: FeedbackStrategy,
    parts: Sequence[DiscreteChannel],
    order: float,
    centers: Sequence[ProbabilityMeasure] | None = None,
) -> float:
    """Worst excess of any message's output divergence over the
    capacity sum.

    Feedback cannot push the output block further from the product of
    per-letter centers than the summed capacities allow, so the result
    should never be meaningfully positive.
    """
    if centers is None:
        solutions = [renyi_capacity(order, part, 1e-10) for part in parts]
        centers = [solution.center for solution in solutions]
        capacity_sum = sum(solution.value for solution in solutions)
    else:
        centers = list(centers)
        capacity_sum = sum(
            renyi_capacity(order, part, 1e-10).value for part in parts
        )
    reference = np.ones(1)
    for center in centers:
        reference = (reference[:, None] * center.masses).reshape(-1)
    reference_measure = ProbabilityMeasure(reference)
    worst = -math.inf
    for message in range(strategy.messages):
        output = feedback_output_distribution(strategy, parts, message)
        divergence = renyi_divergence(
            order, ProbabilityMeasure(output), reference_measure
        )
        worst = max(worst, divergence - capacity_sum)
    return worst


@dataclass(frozen=True)
class SuiteResult:
    """Outcome of one verification suite."""

    name: str
    instances: int
    failures: int
    worst_slack: float
    elapsed: float
    notes: str = ""

    @property
    def passed(self) -> bool:
        return self.failures == 0


def _random_pair(
    rng: np.random.Generator, size: int, *, dominated: bool
) -> tuple[ProbabilityMeasure, ProbabilityMeasure]:
    """A random measure pair; ``dominated`` keeps ``w`` inside ``q``'s
    support so every finite-order divergence stays finite."""
    q = ProbabilityMeasure(rng.dirichlet(np.ones(size) * rng.uniform(0.4, 3.0)))
    w_masses = rng.dirichlet(np.ones(size) * rng.uniform(0.4, 3.0))
    if not dominated and size >= 3 and rng.random() < 0.3:
        w_masses[rng.integers(0, size)] = 0.0
    return ProbabilityMeasure(w_masses), q


def _random_channel(rng: np.random.Generator, inputs: int, outputs: int) -> DiscreteChannel:
    return DiscreteChannel(rng.dirichlet(np.ones(outputs), size=inputs))


_DIVERGENCE_ORDERS = (0.25, 0.5, 0.75, 1.0, 1.5, 2.5)


def verify_pinsker(seed: int = 20240813, instances: int = 400) -> SuiteResult:
    """Pointwise divergence inequalities on random measure pairs.

    Pinsker-type lower bound, the order-half upper bound in total
    variation, order monotonicity, and convexity in the second argument.
    """
    rng = np.random.default_rng(seed)
    start = time.perf_counter()
    failures = 0
    worst = math.inf
    for _ in range(instances):
        size = int(rng.integers(2, 7))
        w, q = _random_pair(rng, size, dominated=False)
        tv = total_variation(w, q)
        previous = None
        for order in _DIVERGENCE_ORDERS:
            divergence = renyi_divergence(order, w, q)
            slack = divergence - min(1.0, order) / 2.0 * tv * tv
            worst = min(worst, slack)
            if slack < -1e-12:
                failures += 1
            if previous is not None and math.isfinite(divergence):
                if divergence < previous - 1e-12:
                    failures += 1
                worst = min(worst, divergence - previous)
            if math.isfinite(divergence):
                previous = divergence
        half = renyi_divergence(0.5, w, q)
        ceiling = 2.0 * math.log(2.0 / (2.0 - tv)) if tv < 2.0 else math.inf
        if half > ceiling + 1e-12:
            failures += 1
        worst = min(worst, ceiling - half)
        _, other = _random_pair(rng, size, dominated=False)
        weight = float(rng.uniform(0.05, 0.95))
        mixture = ProbabilityMeasure(weight * q.masses + (1.0 - weight) * other.masses)
        for order in _DIVERGENCE_ORDERS:
            blend = (
                weight * renyi_divergence(order, w, q)
                + (1.0 - weight) * renyi_divergence(order, w, other)
            )
            if math.isinf(blend):
                continue
            mixed = renyi_divergence(order, w, mixture)
            if mixed > blend + 1e-12:
                failures += 1
            worst = min(worst, blend - mixed)
    return SuiteResult(
        name="pinsker",
        instances=instances,
        failures=failures,
        worst_slack=worst,
        elapsed=time.perf_counter() - start,
    )


def verify_dpi(seed: int = 20240821, instances: int = 400) -> SuiteResult:
    """Data-processing inequality under random output binning."""
    rng = np.random.default_rng(seed)
    start = time.perf_counter()
    failures = 0
    worst = math.inf
    for _ in range(instances):
        size = int(rng.integers(2, 7))
        w, q = _random_pair(rng, size, dominated=False)
        groups = int(rng.integers(1, size + 1))
        labels = rng.integers(0, groups, size=size)
        binned_w = np.zeros(groups)
        binned_q = np.zeros(groups)
        np.add.at(binned_w, labels, w.masses)
        np.add.at(binned_q, labels, q.masses)
        keep = (binned_w > 0) | (binned_q > 0)
        for order in _DIVERGENCE_ORDERS:
            fine = renyi_divergence(order, w, q)
            coarse = renyi_divergence(
                order,
                ProbabilityMeasure(binned_w[keep]),
                ProbabilityMeasure(binned_q[keep]),
            )
            if coarse > fine + 1e-12:
                failures += 1
            if math.isfinite(fine) and math.isfinite(coarse):
                worst = min(worst, fine - coarse)
    return SuiteResult(
        name="dpi",
        instances=instances,
        failures=failures,
        worst_slack=worst,
        elapsed=time.perf_counter() - start,
    )


def verify_ehb(seed: int = 20240814, instances: int = 40) -> SuiteResult:
    """Every input's divergence to the optimal center stays below the
    capacity, and the excess-radius decomposition has nonnegative slack
    for arbitrary reference measures."""
    rng = np.random.default_rng(seed)
    start = time.perf_counter()
    failures = 0
    worst = math.inf
    orders = (0.3, 0.5, 0.9, 1.0, 1.5, 3.0)
    for _ in range(instances):
        inputs = int(rng.integers(2, 6))
        outputs = int(rng.integers(2, 6))
        channel = _random_channel(rng, inputs, outputs)
        reference = ProbabilityMeasure(rng.dirichlet(np.ones(outputs)))
        order = float(orders[rng.integers(0, len(orders))])
        capacity, center_divergence, radius, slack = ehb_certificate(
            order, channel, reference, 1e-9
        )
        worst = min(worst, slack)
        if slack < -1e-9:
            failures += 1
        solution = renyi_capacity(order, channel, 1e-9)
        for x in range(inputs):
            margin = capacity + 1e-8 - renyi_divergence(
                order, channel.row(x), solution.center
            )
            worst = min(worst, margin)
            if margin < 0.0:
                failures += 1
    return SuiteResult(
        name="ehb",
        instances=instances,
        failures=failures,
        worst_slack=worst,
        elapsed=time.perf_counter() - start,
    )


def verify_taylor(seed: int = 20240815, instances: int = 1000) -> SuiteResult:
    """Divergence gap between order one and orders above it against the
    Taylor remainder bound."""
    rng = np.random.default_rng(seed)
    start = time.perf_counter()
    failures = 0
    worst = math.inf
    lambdas = (1.3, 1.8, 2.5)
    for _ in range(instances):
        size = int(rng.integers(2, 6))
        w, q = _random_pair(rng, size, dominated=True)
        lam = float(lambdas[rng.integers(0, len(lambdas))])
        beta = float(rng.uniform(1.0 + 1e-6, lam - 1e-6))
        gamma = renyi_divergence(lam, w, q)
        gap = renyi_divergence(beta, w, q) - renyi_divergence(1.0, w, q)
        bound = taylor_gap_bound(beta, lam, gamma)
        slack = bound - gap
        worst = min(worst, slack)
        if gap < -1e-12 or slack < -1e-9:
            failures += 1
    return SuiteResult(
        name="taylor",
        instances=instances,
        failures=failures,
        worst_slack=worst,
        elapsed=time.perf_counter() - start,
    )


def verify_moment(seed: int = 20240816, instances: int = 1000) -> SuiteResult:
    """Centered log-ratio moments under the tilted measure against the
    closed-form moment bound."""
    rng = np.random.default_rng(seed)
    start = time.perf_counter()
    failures = 0
    worst = math.inf
    alphas = (0.2, 0.5, 0.8)
    ks = (0.5, 1.0, 2.0, 3.0, 4.0)
    for _ in range(instances):
        size = int(rng.integers(2, 6))
        w, q = _random_pair(rng, size, dominated=True)
        alpha = float(alphas[rng.integers(0, len(alphas))])
        k = float(ks[rng.integers(0, len(ks))])
        tilt = tilted_measure(alpha, w, q)
        ratio = np.log(w.masses / q.masses)
        centered = ratio - float(tilt.masses @ ratio)
        lhs = float(tilt.masses @ np.abs(centered) ** k) ** (1.0 / k)
        rhs = moment_bound_rhs(alpha, k, renyi_divergence(alpha, w, q))
        slack = rhs - lhs
        worst = min(worst, slack)
        if slack < -1e-9:
            failures += 1
    return SuiteResult(
        name="moment",
        instances=instances,
        failures=failures,
        worst_slack=worst,
        elapsed=time.perf_counter() - start,
    )


def _exact_sum_distribution(
    supports: Sequence[np.ndarray], masses: Sequence[np.ndarray]
) -> tuple[np.ndarray, np.ndarray]:
    """Exact distribution of a sum of independent discrete variables."""
    values = np.zeros(1)
    probabilities = np.ones(1)
    for support, mass in zip(supports, masses):
        values = (values[:, None] + support[None, :]).reshape(-1)
        probabilities = (probabilities[:, None] * mass[None, :]).reshape(-1)
    return values, probabilities


def verify_berry(seed: int = 20240817, instances: int = 300) -> SuiteResult:
    """Small-deviation floor for sums of independent centered variables.

    Includes the degenerate all-zero instance, where the event holds
    with probability one, and checks the floor ``1 / (2 sqrt(n))`` via
    exact convolution.
    """
    rng = np.random.default_rng(seed)
    start = time.perf_counter()
    failures = 0
    worst = math.inf
    checked = 0

    def check(supports: list[np.ndarray], masses: list[np.ndarray], k: float) -> None:
        nonlocal failures, worst, checked
        checked += 1
        n = len(supports)
        c_k = sum(
            float(mass @ np.abs(support) ** k) for support, mass in zip(supports, masses)
        ) ** (1.0 / k)
        values, probabilities = _exact_sum_distribution(supports, masses)
        probability = float(probabilities[np.abs(values) <= 3.0 * c_k + 1e-15].sum())
        slack = probability - small_deviation_floor(n)
        worst = min(worst, slack)
        if slack < -1e-12:
            failures += 1

    check([np.zeros(1)] * 4, [np.ones(1)] * 4, 3.0)
    flips = [np.array([-1.0, 1.0])] * 6
    fair = [np.array([0.5, 0.5])] * 6
    check(flips, fair, 3.0)
    for _ in range(instances):
        n = int(rng.integers(1, 7))
        k = float((3.0, 4.0)[rng.integers(0, 2)])
        supports = []
        masses = []
        for _ in range(n):
            points = int(rng.integers(2, 4))
            raw = rng.normal(size=points)
            mass = rng.dirichlet(np.ones(points))
            raw = raw - float(mass @ raw)
            supports.append(raw)
            masses.append(mass)
        check(supports, masses, k)
    return SuiteResult(
        name="berry",
        instances=checked,
        failures=failures,
        worst_slack=worst,
        elapsed=time.perf_counter() - start,
    )


def verify_sandwich(
    seed: int = 20240818, instances: int = 40, trials: int = 10000
) -> SuiteResult:
    """Outer bounds stay below exact code errors; the inner bound is met.

    Random binary-input products up to blocklength three with random
    codebooks check the information-constraint floor from above; a
    random-coding search against the list-decoding existence bound
    checks the inner side.
    """
    rng = np.random.default_rng(seed)
    start = time.perf_counter()
    failures = 0
    worst = math.inf
    orders = (0.5, 1.0, 2.0)
    for _ in range(instances):
        n = int(rng.integers(1, 4))
        parts = [_random_channel(rng, 2, int(rng.integers(2, 4))) for _ in range(n)]
        product = product_channel(parts)
        messages = int(rng.integers(3, 7))
        list_size = int(rng.integers(1, 3))
        if list_size >= messages:
            list_size = 1
        params = CodeParams(messages=messages, list_size=list_size, blocklength=1)
        report = arimoto_outer(params, product, None, orders)
        codewords = rng.integers(0, 2, size=(messages, n), dtype=np.int64)
        codebook = CodeBook(codewords=codewords, list_size=list_size)
        exact = exact_error_probability(codebook, parts)
        slack = exact - report.value
        worst = min(worst, slack)
        if report.value > exact + 1e-12:
            failures += 1
    part = binary_symmetric(0.2)
    parts = [part, part]
    product = product_channel(parts)
    params = CodeParams(messages=11, list_size=2, blocklength=1)
    prior = uniform_input(product.input_size)
    report = gallager_inner(params, 0.5, prior, product)
    search = random_code_search(
        parts, params.messages, params.list_size, trials, seed
    )
    worst = min(worst, report.value - search.best_error)
    if search.best_error > report.value + 1e-12:
        failures += 1
    notes = (
        f"inner bound {report.value:.6g}, best of {trials} random codebooks "
        f"{search.best_error:.6g}, mean {search.mean_error:.6g}"
    )
    return SuiteResult(
        name="sandwich",
        instances=instances + 1,
        failures=failures,
        worst_slack=worst,
        elapsed=time.perf_counter() - start,
        notes=notes,
    )


def verify_feedback(seed: int = 20240820, instances: int = 100) -> SuiteResult:
    """Feedback strategies never push the output block beyond the
    summed per-letter capacities, at any order, against the product of
    per-letter centers."""
    rng = np.random.default_rng(seed)
    start = time.perf_counter()
    failures = 0
    worst = math.inf
    orders = (0.5, 1.0, 2.0)
    for _ in range(instances):
        n = int(rng.integers(2, 4))
        parts = [_random_channel(rng, 2, int(rng.integers(2, 4))) for _ in range(n)]
        messages = int(rng.integers(2, 5))
        strategy = random_feedback_strategy(parts, messages, rng)
        order = float(orders[rng.integers(0, len(orders))])
        gap = feedback_capacity_gap(strategy, parts, order)
        worst = min(worst, -gap)
        if gap > 1e-8:
            failures += 1
    return SuiteResult(
        name="feedback",
        instances=instances,
        failures=failures,
        worst_slack=worst,
        elapsed=time.perf_counter() - start,
    )


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "pinsker": verify_pinsker,
    "dpi": verify_dpi,
    "ehb": verify_ehb,
    "taylor": verify_taylor,
    "moment": verify_moment,
    "berry": verify_berry,
    "sandwich": verify_sandwich,
    "feedback": verify_feedback,
}


def run_suite(name: str, **kwargs) -> SuiteResult:
    if name not in SUITES:
        raise InputValidationError(f"unknown suite {name!r}")
    return SUITES[name](**kwargs)


def run_all_suites(seed: int | None = None) -> list[SuiteResult]:
    """Run every suite, offsetting the base seed per suite when given."""
    results = []
    for offset, (name, suite) in enumerate(SUITES.items()):
        if seed is None:
            results.append(suite())
        else:
            results.append(suite(seed=seed + offset))
    return results
