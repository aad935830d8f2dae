"""Command-line interface: capacities, exponents, bounds, verification.

Subcommands mirror the library surface: ``capacity`` for one order or a
CSV curve, ``exponent`` for the sphere-packing family, ``bound`` for
the finite-blocklength bounds, ``poisson`` for the closed forms,
``verify`` for the brute-force oracle suites, and ``report`` for
re-emitting saved result lists as plot-ready tables.  Channels resolve
from a JSON file path, an inline JSON object, or a literal name like
``bsc:0.1``.

Settings resolve as flags > config file > built-in defaults; the config
file is a plain JSON object keyed by option name.  Every report begins
with an echo of the effective configuration so a run can be reproduced
from its own output.  The worker count comes from ``--workers`` or the
``RENYI_WORKERS`` environment variable and never changes any result.

Exit codes: 0 success, 1 verification failure, 2 invalid input,
3 ``--require-binding`` with an unsatisfied hypothesis, 4 I/O trouble.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from renyi.bounds import (
    CodeParams,
    arimoto_outer,
    gallager_inner,
    spb_feedback,
    spb_product,
    spb_special_cases,
    tradeoff_channel,
)
from renyi.capacity import (
    average_capacity,
    capacity_curve,
    curve_for_channel,
    renyi_capacity,
)
from renyi.channels import (
    DiscreteChannel,
    InputDistribution,
    channel_from_json,
    named_channel,
    uniform_input,
)
from renyi.exceptions import InputValidationError, RenyiError
from renyi.exponents import (
    average_sp_exponent,
    averaged_curve,
    haroutunian_details,
    sphere_packing_exponent,
    supremum_below_one,
)
from renyi.oracle import SUITES, run_suite
from renyi.poisson import PoissonChannelSpec, poisson_capacity, poisson_spb

__all__ = ["RunConfig", "report_table", "main"]


@dataclass(frozen=True)
class RunConfig:
    """Effective settings of one CLI run, echoed into every report."""

    command: str
    inputs: dict[str, str] = field(default_factory=dict)
    parameters: dict[str, Any] = field(default_factory=dict)
    output: str = "text"

    def echo(self) -> dict[str, Any]:
        flat: dict[str, Any] = {"command": self.command}
        flat.update(self.inputs)
        flat.update(self.parameters)
        flat["output"] = self.output
        return flat

    def line(self) -> str:
        return json.dumps(_jsonable(self.echo()), sort_keys=True)


def _resolve_channel(spec: str) -> DiscreteChannel:
    if spec.lstrip().startswith("{"):
        return channel_from_json(json.loads(spec))
    if os.path.exists(spec):
        with open(spec, "r", encoding="utf-8") as handle:
            return channel_from_json(json.load(handle))
    if spec.endswith(".json") or os.sep in spec:
        raise FileNotFoundError(f"channel file not found: {spec}")
    return named_channel(spec)


def _resolve_poisson_spec(text: str) -> PoissonChannelSpec:
    if text.lstrip().startswith("{"):
        return PoissonChannelSpec.from_json(text)
    with open(text, "r", encoding="utf-8") as handle:
        return PoissonChannelSpec.from_json(handle.read())


def _jsonable(value: Any) -> Any:
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, dict):
        return {key: _jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(item) for item in value]
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    return value


def _emit(payload: dict[str, Any], args: argparse.Namespace) -> None:
    config: RunConfig = args.run_config
    if getattr(args, "json", False):
        merged = {"config": config.echo(), **payload}
        print(json.dumps(_jsonable(merged), indent=2, sort_keys=True))
        return
    print(f"config = {config.line()}")
    for key, value in payload.items():
        if isinstance(value, float):
            print(f"{key} = {value:.12g}")
        elif isinstance(value, np.ndarray):
            rendered = ", ".join(f"{item:.12g}" for item in value)
            print(f"{key} = [{rendered}]")
        else:
            print(f"{key} = {value}")


def _echo_csv_header(args: argparse.Namespace) -> None:
    config: RunConfig = args.run_config
    print(f"# config: {config.line()}")


def _parse_floats(text: str) -> list[float]:
    try:
        return [float(piece) for piece in text.split(",") if piece.strip() != ""]
    except ValueError as error:
        raise InputValidationError(f"expected comma-separated numbers, got {text!r}") from error


def _cmd_capacity(args: argparse.Namespace) -> int:
    channel = _resolve_channel(args.channel)
    if args.curve:
        orders = _parse_floats(args.orders) if args.orders else None
        curve = capacity_curve(channel, orders, args.tol)
        _echo_csv_header(args)
        print("order,value,gap")
        for order, value, gap in curve.sampled:
            print(f"{order:.12g},{value:.12g},{gap:.12g}")
        return 0
    if args.order is None:
        raise InputValidationError("need --order (or --curve)")
    if args.width is not None:
        value = average_capacity(args.order, args.width, channel, args.tol)
        _emit({"order": args.order, "width": args.width, "value": value}, args)
        return 0
    solution = renyi_capacity(args.order, channel, args.tol)
    _emit(
        {
            "order": args.order,
            "value": solution.value,
            "duality_gap": solution.duality_gap,
            "converged": solution.converged,
            "center": solution.center.masses,
            "prior": solution.optimal_prior.masses,
        },
        args,
    )
    return 0


def _cmd_exponent(args: argparse.Namespace) -> int:
    channel = _resolve_channel(args.channel)
    rates = _parse_floats(args.rates) if args.rates else None
    if rates is None:
        if args.rate is None:
            raise InputValidationError("need --rate or --rates")
        rates = [args.rate]
        csv = False
    else:
        csv = True
    rows: list[tuple[float, float, float | None, dict[str, Any]]] = []
    for rate in rates:
        if args.kind == "sp":
            result = sphere_packing_exponent(rate, curve_for_channel(channel))
            order = None if result.maximizing_order is None else result.maximizing_order.value
            rows.append(
                (
                    rate,
                    result.value,
                    order,
                    {"regime": result.regime, "certified": result.certified},
                )
            )
        elif args.kind == "avsp":
            if args.width is None:
                raise InputValidationError("avsp needs --width")
            value = average_sp_exponent(args.width, rate, channel)
            order, _ = supremum_below_one(averaged_curve(channel, args.width), rate)
            rows.append((rate, value, order, {"width": args.width}))
        else:
            details = haroutunian_details(rate, channel, args.tol)
            rows.append(
                (
                    rate,
                    details.value,
                    None,
                    {
                        "lower": details.lower,
                        "iterations": details.iterations,
                        "certified": details.certified,
                    },
                )
            )
    if csv:
        _echo_csv_header(args)
        print("rate,exponent,maximizing_order")
        for rate, value, order, _ in rows:
            order_text = "" if order is None else f"{order:.12g}"
            print(f"{rate:.12g},{value:.12g},{order_text}")
        return 0
    rate, value, order, extra = rows[0]
    payload: dict[str, Any] = {"kind": args.kind, "rate": rate, "exponent": value}
    if order is not None:
        payload["maximizing_order"] = order
    payload.update(extra)
    _emit(payload, args)
    return 0


def _report_payload(report) -> dict[str, Any]:
    return {
        "lemma": report.lemma,
        "direction": report.direction,
        "value": report.value,
        "hypothesis_satisfied": report.hypothesis_satisfied,
        **{f"constants.{key}": value for key, value in sorted(report.constants.items())},
    }


def _finish_report(report, args: argparse.Namespace) -> int:
    _emit(_report_payload(report), args)
    if getattr(args, "require_binding", False) and not report.hypothesis_satisfied:
        print("hypothesis not satisfied", file=sys.stderr)
        return 3
    return 0


def _prior_from_arg(text: str | None, size: int) -> InputDistribution | None:
    if text is None:
        return None
    masses = np.array(_parse_floats(text))
    if masses.size != size:
        raise InputValidationError(f"prior has {masses.size} entries, channel has {size} inputs")
    return InputDistribution(masses)


def _cmd_bound(args: argparse.Namespace) -> int:
    channel = _resolve_channel(args.channel)
    if args.kind == "tradeoff":
        if args.rate is None or args.eps is None:
            raise InputValidationError("tradeoff needs --rate and --eps")
        solution = tradeoff_channel(channel, args.rate, args.eps)
        _emit(
            {
                "phi": solution.phi,
                "eta": solution.eta,
                "target": solution.target,
                "rate_term": solution.rate_term,
                "exponent_term": solution.exponent_term,
                "rate_certificate": solution.rate_certificate,
                "exponent_certificate": solution.exponent_certificate,
                "min_b1_slack": float(np.min(solution.b1_slacks)),
                "min_b2_slack": float(np.min(solution.b2_slacks)),
                "min_capacity_slack": min(
                    slack for (_, _, _, slack) in solution.capacity_certificates
                ),
                "orders": solution.auxiliary.orders,
                "cases": list(solution.cases),
            },
            args,
        )
        return 0
    if args.messages is None or args.list_size is None:
        raise InputValidationError("need --M and --L")
    if args.kind == "gallager":
        params = CodeParams(messages=args.messages, list_size=args.list_size)
        prior = _prior_from_arg(args.prior, channel.input_size)
        if prior is None:
            prior = uniform_input(channel.input_size)
        order = args.order if args.order is not None else 1.0 / (1.0 + args.list_size)
        report = gallager_inner(params, order, prior, channel)
        return _finish_report(report, args)
    if args.kind == "arimoto":
        params = CodeParams(messages=args.messages, list_size=args.list_size)
        orders = _parse_floats(args.orders) if args.orders else [0.5, 1.0, 2.0, 4.0]
        prior = _prior_from_arg(args.prior, channel.input_size)
        report = arimoto_outer(params, channel, prior, orders)
        return _finish_report(report, args)
    n = args.n
    params = CodeParams(messages=args.messages, list_size=args.list_size, blocklength=n)
    parts = [channel] * n
    if args.kind == "spb-product":
        phi = args.phi if args.phi is not None else 0.5
        eps = args.eps if args.eps is not None else 0.5 * n / (n + 1.0)
        kappa = args.kappa if args.kappa is not None else 3.0
        report = spb_product(params, parts, phi, eps, kappa)
        return _finish_report(report, args)
    if args.kind == "spb-special":
        phi = args.phi if args.phi is not None else 0.5
        kappa = args.kappa if args.kappa is not None else 3.0
        report = spb_special_cases(params, parts, phi, kappa, variant=args.variant)
        return _finish_report(report, args)
    if args.kind == "spb-feedback":
        if args.kappa is None:
            raise InputValidationError("spb-feedback needs --kappa")
        eps = args.eps if args.eps is not None else 0.3 * 0.05
        report = spb_feedback(
            params, channel, int(args.kappa), eps, (args.alpha0, args.alpha1)
        )
        return _finish_report(report, args)
    raise InputValidationError(f"unknown bound {args.kind!r}")


def _cmd_poisson(args: argparse.Namespace) -> int:
    spec = _resolve_poisson_spec(args.spec)
    if args.kind == "capacity":
        if args.order is None:
            raise InputValidationError("need --order")
        value = poisson_capacity(args.order, spec)
        _emit({"order": args.order, "variant": spec.variant, "value": value}, args)
        return 0
    if args.messages is None or args.list_size is None:
        raise InputValidationError("need --M and --L")
    if args.order is None:
        raise InputValidationError("need --order")
    params = CodeParams(
        messages=args.messages,
        list_size=args.list_size,
        blocklength=args.n if args.n is not None else 1,
    )
    report = poisson_spb(
        params,
        spec,
        args.order,
        n=args.n,
        eps=args.eps,
        kappa=args.kappa,
    )
    return _finish_report(report, args)


def _cmd_verify(args: argparse.Namespace) -> int:
    chosen = args.suite
    if isinstance(chosen, str):
        chosen = [chosen]
    names = list(chosen) if chosen else list(SUITES)
    for name in names:
        if name not in SUITES:
            raise InputValidationError(
                f"unknown suite {name!r}; choose from {', '.join(SUITES)}"
            )
    kwargs: dict[str, Any] = {}
    if args.seed is not None:
        kwargs["seed"] = args.seed
    if args.instances is not None:
        kwargs["instances"] = args.instances
    print(f"# config: {args.run_config.line()}")
    # The pool only schedules; every suite seeds its own generator, so
    # the table is identical at any worker count.
    with ThreadPoolExecutor(max_workers=max(1, args.workers)) as pool:
        results = list(pool.map(lambda name: run_suite(name, **kwargs), names))
    any_failed = False
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        slack = (
            f"{result.worst_slack:.3g}" if math.isfinite(result.worst_slack) else "inf"
        )
        line = (
            f"[{status}] {result.name}: {result.instances} instances, "
            f"{result.failures} failures, worst slack {slack}, "
            f"{result.elapsed:.2f}s"
        )
        if result.notes:
            line += f" ({result.notes})"
        print(line)
        any_failed = any_failed or not result.passed
    return 1 if any_failed else 0


def _format_cell(value: Any) -> str:
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, float):
        return f"{value:.12g}"
    if isinstance(value, (dict, list)):
        return json.dumps(_jsonable(value), sort_keys=True)
    return "" if value is None else str(value)


def report_table(results: Sequence[dict[str, Any]], fmt: str = "csv") -> str:
    """Render a homogeneous list of result records as CSV, JSON, or text.

    Column order follows the first record; every record must carry the
    same keys.  Floats print at 12 significant digits in CSV and text;
    the JSON form round-trips exactly.
    """
    records = list(results)
    if fmt == "json":
        return json.dumps(records, indent=2)
    if not records:
        return "\n"
    columns = list(records[0].keys())
    expected = set(columns)
    for index, record in enumerate(records):
        if set(record.keys()) != expected:
            raise InputValidationError(
                f"record {index} has keys {sorted(record)} but the first "
                f"record has {sorted(expected)}"
            )
    if fmt == "csv":
        lines = [",".join(columns)]
        for record in records:
            lines.append(",".join(_format_cell(record[key]) for key in columns))
        return "\n".join(lines) + "\n"
    if fmt == "text":
        blocks = []
        for record in records:
            blocks.append(
                "\n".join(f"{key} = {_format_cell(record[key])}" for key in columns)
            )
        return "\n\n".join(blocks) + "\n"
    raise InputValidationError(f"unknown format {fmt!r}")


def _cmd_report(args: argparse.Namespace) -> int:
    with open(args.input, "r", encoding="utf-8") as handle:
        records = json.load(handle)
    if not isinstance(records, list) or any(
        not isinstance(record, dict) for record in records
    ):
        raise InputValidationError("report input must be a JSON list of objects")
    if args.format == "json":
        # JSON output must parse back to the input records exactly, so
        # the echo goes to stderr instead of polluting the document.
        print(f"# config: {args.run_config.line()}", file=sys.stderr)
    else:
        _echo_csv_header(args)
    sys.stdout.write(report_table(records, args.format))
    return 0


_COMMAND_DEFAULTS: dict[str, dict[str, Any]] = {
    "capacity": {"tol": 1e-9},
    "exponent": {"tol": 1e-6},
    "bound": {"n": 1, "alpha0": 0.3, "alpha1": 0.6, "variant": "constant-center"},
    "poisson": {},
    "verify": {},
    "report": {"format": "csv"},
}

_INPUT_KEYS = ("channel", "spec", "input", "config")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="renyi",
        description="Order-parametrized information measures, exponents, and bounds.",
    )
    parser.add_argument("--config", help="JSON file of option defaults (flags win)")
    parser.add_argument(
        "--workers",
        type=int,
        help="worker pool size (default: RENYI_WORKERS or 1); never affects results",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    capacity = commands.add_parser("capacity", help="capacity at one order, or a CSV curve")
    capacity.add_argument("--channel", help="channel JSON path, inline JSON, or name")
    capacity.add_argument("--order", type=float)
    capacity.add_argument("--width", type=float, help="window width for averaged capacity")
    capacity.add_argument("--tol", type=float)
    capacity.add_argument("--curve", action="store_true", help="emit CSV of (order,value,gap)")
    capacity.add_argument("--orders", help="comma-separated orders for --curve")
    capacity.add_argument("--json", action="store_true")
    capacity.set_defaults(handler=_cmd_capacity)

    exponent = commands.add_parser("exponent", help="sphere-packing exponent family")
    exponent.add_argument("kind", choices=["sp", "avsp", "haroutunian"])
    exponent.add_argument("--channel")
    exponent.add_argument("--rate", type=float)
    exponent.add_argument("--rates", help="comma-separated rates, emits CSV")
    exponent.add_argument("--width", type=float)
    exponent.add_argument("--tol", type=float)
    exponent.add_argument("--json", action="store_true")
    exponent.set_defaults(handler=_cmd_exponent)

    bound = commands.add_parser("bound", help="finite-blocklength bounds")
    bound.add_argument(
        "kind",
        choices=[
            "gallager",
            "arimoto",
            "spb-product",
            "spb-special",
            "spb-feedback",
            "tradeoff",
        ],
    )
    bound.add_argument("--channel")
    bound.add_argument("--M", dest="messages", type=int)
    bound.add_argument("--L", dest="list_size", type=int)
    bound.add_argument("--n", type=int, help="channel uses (product length)")
    bound.add_argument("--order", type=float)
    bound.add_argument("--orders", help="comma-separated orders (arimoto)")
    bound.add_argument("--prior", help="comma-separated input distribution")
    bound.add_argument("--phi", type=float)
    bound.add_argument("--eps", type=float)
    bound.add_argument("--kappa", type=float)
    bound.add_argument("--alpha0", type=float)
    bound.add_argument("--alpha1", type=float)
    bound.add_argument("--rate", type=float)
    bound.add_argument("--variant")
    bound.add_argument("--require-binding", action="store_true")
    bound.add_argument("--json", action="store_true")
    bound.set_defaults(handler=_cmd_bound)

    poisson = commands.add_parser("poisson", help="Poisson channel closed forms")
    poisson.add_argument("kind", choices=["capacity", "spb"])
    poisson.add_argument("--spec", help="Poisson spec JSON path or inline JSON")
    poisson.add_argument("--order", type=float)
    poisson.add_argument("--M", dest="messages", type=int)
    poisson.add_argument("--L", dest="list_size", type=int)
    poisson.add_argument("--n", type=int)
    poisson.add_argument("--eps", type=float)
    poisson.add_argument("--kappa", type=float)
    poisson.add_argument("--require-binding", action="store_true")
    poisson.add_argument("--json", action="store_true")
    poisson.set_defaults(handler=_cmd_poisson)

    verify = commands.add_parser("verify", help="run brute-force verification suites")
    verify.add_argument("--seed", type=int)
    verify.add_argument(
        "--suite",
        action="append",
        help=f"suite name, repeatable; default all ({', '.join(SUITES)})",
    )
    verify.add_argument("--instances", type=int, help="instance count per suite")
    verify.set_defaults(handler=_cmd_verify)

    report = commands.add_parser("report", help="re-emit a saved JSON result list")
    report.add_argument("--input", help="JSON file holding a list of records")
    report.add_argument("--format", choices=["csv", "json", "text"])
    report.set_defaults(handler=_cmd_report)

    return parser


def _apply_config(args: argparse.Namespace) -> None:
    """Fill unset options from the config file, then built-in defaults."""
    overrides: dict[str, Any] = {}
    if args.config is not None:
        with open(args.config, "r", encoding="utf-8") as handle:
            overrides = json.load(handle)
        if not isinstance(overrides, dict):
            raise InputValidationError("config file must hold a JSON object")
    for key, value in overrides.items():
        current = getattr(args, key, None)
        if current is None or current is False:
            setattr(args, key, value)
    for key, value in _COMMAND_DEFAULTS.get(args.command, {}).items():
        if getattr(args, key, None) is None:
            setattr(args, key, value)
    if args.workers is None:
        env = os.environ.get("RENYI_WORKERS", "")
        args.workers = int(env) if env.strip() else 1


def _run_config(args: argparse.Namespace) -> RunConfig:
    inputs: dict[str, str] = {}
    parameters: dict[str, Any] = {}
    skip = {"handler", "command", "json", "workers"}
    for key, value in vars(args).items():
        if key in skip or key == "run_config" or value is None or value is False:
            continue
        if key in _INPUT_KEYS:
            inputs[key] = str(value)
        else:
            parameters[key] = value
    parameters["workers"] = args.workers
    output = "json" if getattr(args, "json", False) else "text"
    return RunConfig(
        command=args.command, inputs=inputs, parameters=parameters, output=output
    )


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config(args)
        args.run_config = _run_config(args)
        return args.handler(args)
    except InputValidationError as error:
        print(f"error: {error}", file=sys.stderr)
        return 2
    except RenyiError as error:
        print(f"error: {error}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError) as error:
        print(f"error: {error}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
