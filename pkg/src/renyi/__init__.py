"""Order-parametrized information measures, capacities, exponents, and
finite-blocklength bounds for finite channels, plus Poisson closed
forms and brute-force verification oracles."""

from renyi.bounds import (
    AuxiliaryChannel,
    BoundReport,
    CodeParams,
    TradeoffSolution,
    arimoto_outer,
    assumption_check,
    gallager_inner,
    moment_bound_rhs,
    small_deviation_floor,
    spb_feedback,
    spb_feedback_gamma,
    spb_product,
    spb_special_cases,
    subblock_plan,
    taylor_gap_bound,
    tradeoff_channel,
)
from renyi.capacity import (
    AveragedCenter,
    CapacitySolution,
    ExponentCurve,
    average_capacity,
    average_center,
    c_infinity,
    capacity_curve,
    curve_for_channel,
    ehb_certificate,
    feedback_product_capacity,
    renyi_capacity,
    renyi_radius,
)
from renyi.channels import (
    DiscreteChannel,
    InputDistribution,
    JointSpec,
    binary_erasure,
    binary_symmetric,
    channel_from_json,
    channel_to_json,
    named_channel,
    product_channel,
    renyi_information,
    renyi_mean,
    sibson_decomposition,
    uniform_input,
)
from renyi.exceptions import (
    EnumerationLimitError,
    InputValidationError,
    NumericalStabilityError,
    RenyiError,
)
from renyi.exponents import (
    HaroutunianSolution,
    SpheResult,
    average_sp_exponent,
    haroutunian_details,
    haroutunian_exponent,
    order_for_rate,
    sphere_packing_exponent,
)
from renyi.measures import (
    FiniteMeasure,
    Order,
    ProbabilityMeasure,
    as_order,
    binary_divergence,
    renyi_divergence,
    tilted_measure,
    total_variation,
)
from renyi.oracle import (
    SUITES,
    CodeBook,
    FeedbackStrategy,
    RandomCodingResult,
    SuiteResult,
    exact_error_probability,
    exhaustive_minimum_error,
    feedback_capacity_gap,
    random_code_search,
    run_all_suites,
    run_suite,
)
from renyi.poisson import (
    PoissonChannelSpec,
    discretized_capacity_trend,
    poisson_F,
    poisson_capacity,
    poisson_curve,
    poisson_optimal_cost,
    poisson_spb,
    slot_channel,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "Order",
    "as_order",
    "FiniteMeasure",
    "ProbabilityMeasure",
    "renyi_divergence",
    "binary_divergence",
    "tilted_measure",
    "total_variation",
    "DiscreteChannel",
    "InputDistribution",
    "JointSpec",
    "renyi_information",
    "renyi_mean",
    "sibson_decomposition",
    "product_channel",
    "binary_symmetric",
    "binary_erasure",
    "named_channel",
    "uniform_input",
    "channel_to_json",
    "channel_from_json",
    "CapacitySolution",
    "AveragedCenter",
    "ExponentCurve",
    "renyi_capacity",
    "renyi_radius",
    "c_infinity",
    "capacity_curve",
    "curve_for_channel",
    "average_center",
    "average_capacity",
    "ehb_certificate",
    "feedback_product_capacity",
    "SpheResult",
    "HaroutunianSolution",
    "sphere_packing_exponent",
    "average_sp_exponent",
    "haroutunian_exponent",
    "haroutunian_details",
    "order_for_rate",
    "CodeParams",
    "BoundReport",
    "AuxiliaryChannel",
    "TradeoffSolution",
    "gallager_inner",
    "arimoto_outer",
    "spb_product",
    "spb_special_cases",
    "spb_feedback",
    "spb_feedback_gamma",
    "subblock_plan",
    "assumption_check",
    "taylor_gap_bound",
    "moment_bound_rhs",
    "small_deviation_floor",
    "tradeoff_channel",
    "PoissonChannelSpec",
    "poisson_F",
    "poisson_optimal_cost",
    "poisson_capacity",
    "poisson_curve",
    "poisson_spb",
    "slot_channel",
    "discretized_capacity_trend",
    "CodeBook",
    "FeedbackStrategy",
    "RandomCodingResult",
    "SuiteResult",
    "exact_error_probability",
    "random_code_search",
    "exhaustive_minimum_error",
    "feedback_capacity_gap",
    "SUITES",
    "run_all_suites",
    "run_suite",
    "RenyiError",
    "InputValidationError",
    "EnumerationLimitError",
    "NumericalStabilityError",
]
