"""Command-line front end: figure data, spectra, sweeps, trap planning.

Every scenario renders to plain data (CSV, JSON, or text for the trap
planner) with fixed 9-significant-digit float formatting, so identical
invocations produce byte-identical files.  Infinities are serialized as
the string ``inf``.

Scenarios
---------
fig1-surface       concurrence over a (thermal ratio, scaled time) grid
fig2-trajectories  numeric vs closed-form concurrence for four states
fig2-inset         the same trajectories with Lamb-shift and exchange on
spectrum           classified eigenvalue table of the generator
sweep              peak concurrence and survival time over (delta, R, Lambda)
iontrap            feasibility report for a linear-chain realization

Exit codes: 0 success, 2 usage error (unknown scenario/key, bad value),
3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Mapping

import numpy as np

from .bath import BathThermal, RateSet
from .dynamics import (
    analytic_concurrence,
    default_time_grid,
    propagate_spectral,
    survival_time,
)
from .iontrap import (
    TrapConfig,
    plan,
    report_to_json,
    report_to_text,
    temperature_requirement,
)
from .liouvillian import (
    ModelParams,
    build_generator,
    classify_spectrum,
    spectrum_to_json,
)
from .states import (
    bell_singlet,
    bell_triplet,
    maximally_mixed,
    state_for_correlation,
    z_up_down,
)

__all__ = ["main", "run"]


class UsageError(Exception):
    """Bad invocation: unknown key, malformed value, invalid grid."""


def _format(value: float) -> str:
    return format(float(value), ".9g")


def _parse_bool(raw: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {raw!r}")


def _parse_float_list(raw: str) -> tuple:
    items = [piece for piece in raw.split(",") if piece.strip()]
    if not items:
        raise ValueError("expected a comma-separated list of numbers")
    return tuple(float(piece) for piece in items)


# per-scenario parameter schema: key -> (parser, default)
_SCHEMAS: dict = {
    "fig1-surface": {
        "delta": (float, 0.05),
        "lambda_corr": (float, -1.0),
        "delta_field": (float, 10.0),
        "r_min": (float, 0.1),
        "r_max": (float, 0.99),
        "r_points": (int, 45),
        "lt_max": (float, 3.0),
        "lt_points": (int, 61),
    },
    "fig2-trajectories": {
        "delta": (float, 0.05),
        "r": (float, 0.9),
        "delta_field": (float, 10.0),
        "points": (int, 400),
        "horizon_factor": (float, 3.0),
    },
    "fig2-inset": {
        "delta": (float, 0.05),
        "r": (float, 0.9),
        "delta_field": (float, 10.0),
        "points": (int, 400),
        "horizon_factor": (float, 3.0),
    },
    "spectrum": {
        "delta": (float, 0.05),
        "r": (float, 0.9),
        "delta_field": (float, 10.0),
        "lamb_a": (float, 0.0),
        "lamb_b": (float, 0.0),
        "exchange_xi": (float, 0.0),
        "include_lamb": (_parse_bool, False),
        "include_exchange": (_parse_bool, False),
    },
    "sweep": {
        "delta_values": (_parse_float_list, (0.01, 0.05, 0.2)),
        "r_values": (_parse_float_list, (0.5, 0.7, 0.9)),
        "lambda_values": (_parse_float_list, (-3.0, -1.0, 0.0, 1.0)),
    },
    "iontrap": {
        "trap_frequency": (float, None),
        "ion_count": (int, None),
        "rabi_ratio": (float, None),
        "ohmic_coupling": (float, None),
        "addressed_spacing": (int, None),
        "bath_dimension": (int, None),
        "target_ratio": (float, None),
        "exact_delta": (_parse_bool, False),
        "exchange_xi": (float, 0.0),
        "lamb_shift": (_parse_bool, True),
    },
}

#: TrapConfig fields (None defaults above mean "leave to TrapConfig").
_TRAP_KEYS = (
    "trap_frequency",
    "ion_count",
    "rabi_ratio",
    "ohmic_coupling",
    "addressed_spacing",
    "bath_dimension",
    "target_ratio",
)


def _merge_parameters(scenario: str, pairs: Mapping) -> dict:
    schema = _SCHEMAS[scenario]
    values = {key: default for key, (_, default) in schema.items()}
    for key, raw in pairs.items():
        if key not in schema:
            raise UsageError(
                f"unknown parameter {key!r} for scenario {scenario}; "
                "valid keys: " + ", ".join(sorted(schema))
            )
        parser, _ = schema[key]
        try:
            values[key] = parser(raw) if isinstance(raw, str) else raw
        except ValueError as exc:
            raise UsageError(f"bad value for {key!r}: {exc}") from exc
    return values


def _read_config_file(path: str) -> dict:
    pairs = {}
    try:
        with open(path, "r", encoding="utf-8") as stream:
            for line_no, line in enumerate(stream, start=1):
                stripped = line.strip()
                if not stripped or stripped.startswith("#"):
                    continue
                if "=" not in stripped:
                    raise UsageError(
                        f"{path}:{line_no}: expected key=value, got {stripped!r}"
                    )
                key, _, value = stripped.partition("=")
                pairs[key.strip()] = value.strip()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    return pairs


def _model_pieces(delta: float, ratio: float, delta_field: float):
    """Rates (gamma0 = 1 units) and field parameters for a scenario."""
    if not 0.0 < ratio <= 1.0:
        raise UsageError(f"thermal ratio must lie in (0, 1], got {ratio}")
    if not 0.0 <= delta <= 2.0:
        raise UsageError(f"correlation deficit must lie in [0, 2], got {delta}")
    thermal = BathThermal.from_ratio(ratio)
    rates = RateSet.from_parameters(1.0, thermal, delta)
    params = ModelParams(delta_field=delta_field)
    return rates, params


# ---------------------------------------------------------------------------
# Scenarios
# ---------------------------------------------------------------------------


def _run_fig1(values: dict, fmt: str) -> str:
    if fmt != "csv":
        raise UsageError("fig1-surface only renders CSV")
    if values["r_points"] < 1 or values["lt_points"] < 2:
        raise UsageError("r_points must be >= 1 and lt_points >= 2")
    if not 0.0 < values["r_min"] <= values["r_max"] < 1.0:
        raise UsageError("need 0 < r_min <= r_max < 1")
    lam = values["lambda_corr"]
    initial = z_up_down() if lam == -1.0 else state_for_correlation(lam)
    lt_grid = np.linspace(0.0, values["lt_max"], values["lt_points"])
    lines = ["R,lambda1_t,concurrence_numeric"]
    for ratio in np.linspace(values["r_min"], values["r_max"], values["r_points"]):
        rates, params = _model_pieces(values["delta"], float(ratio), values["delta_field"])
        report = classify_spectrum(build_generator(params, rates))
        slow = -report.slow_eigenvalue
        times = lt_grid / slow
        trajectory = propagate_spectral(report, initial, times)
        for lt, conc in zip(lt_grid, trajectory.concurrence):
            lines.append(f"{_format(ratio)},{_format(lt)},{_format(conc)}")
    return "\n".join(lines) + "\n"


_FIG2_STATES = (
    ("singlet", bell_singlet),
    ("z_up_down", z_up_down),
    ("mixed", maximally_mixed),
    ("triplet", bell_triplet),
)


def _run_fig2(values: dict, fmt: str, dressed: bool) -> str:
    if fmt != "csv":
        raise UsageError("fig2 scenarios only render CSV")
    rates, params = _model_pieces(values["delta"], values["r"], values["delta_field"])
    bare = classify_spectrum(build_generator(params, rates))
    slow = -bare.slow_eigenvalue
    if dressed:
        strength = 1.0 / (2.0 * slow)
        params = ModelParams(
            delta_field=values["delta_field"], lamb_b=strength, exchange_xi=strength
        )
        report = classify_spectrum(
            build_generator(params, rates, include_lamb=True, include_exchange=True)
        )
    else:
        report = bare
    slow_used = -report.slow_eigenvalue

    ratio = values["r"]
    horizon_tc = survival_time(ratio, -3.0, slow_used)
    horizon = (
        values["horizon_factor"] * horizon_tc
        if np.isfinite(horizon_tc) and horizon_tc > 0
        else 10.0 / slow_used
    )
    times = default_time_grid(1.0, horizon, values["points"])

    columns = [("t_gamma0", times), ("t_lambda1", times * slow_used)]
    for name, factory in _FIG2_STATES:
        state = factory()
        lam = float(
            state.component(1, 1) + state.component(2, 2) + state.component(3, 3)
        )
        trajectory = propagate_spectral(report, state, times)
        envelope = analytic_concurrence(ratio, lam, slow_used, times)
        columns.append((f"c_num_{name}", trajectory.concurrence))
        columns.append((f"c_ana_{name}", envelope))

    lines = [",".join(name for name, _ in columns)]
    for k in range(times.size):
        lines.append(",".join(_format(col[k]) for _, col in columns))
    return "\n".join(lines) + "\n"


def _run_spectrum(values: dict, fmt: str) -> str:
    rates, _ = _model_pieces(values["delta"], values["r"], values["delta_field"])
    params = ModelParams(
        delta_field=values["delta_field"],
        lamb_a=values["lamb_a"],
        lamb_b=values["lamb_b"],
        exchange_xi=values["exchange_xi"],
    )
    generator = build_generator(
        params,
        rates,
        include_lamb=values["include_lamb"],
        include_exchange=values["include_exchange"],
    )
    report = classify_spectrum(generator)
    if fmt == "json":
        return spectrum_to_json(report) + "\n"
    lines = ["index,label,re,im"]
    for k in range(16):
        value = report.eigenvalues[k]
        lines.append(
            f"{k},{report.labels[k]},{_format(value.real)},{_format(value.imag)}"
        )
    return "\n".join(lines) + "\n"


def _sweep_cell(cell: tuple) -> str:
    delta, ratio, lam = cell
    occupation = (1.0 / ratio - 1.0) / 2.0
    slow = (1.0 + 3.0 * occupation) * delta
    peak = analytic_concurrence(ratio, lam, slow if slow > 0 else 1.0, 0.0)
    t_c = survival_time(ratio, lam, slow)
    return (
        f"{_format(delta)},{_format(ratio)},{_format(lam)},"
        f"{_format(peak)},{_format(t_c)}"
    )


def _run_sweep(values: dict, fmt: str, threads: int) -> str:
    if fmt != "csv":
        raise UsageError("sweep only renders CSV")
    deltas, ratios, lams = (
        values["delta_values"],
        values["r_values"],
        values["lambda_values"],
    )
    if not all(0.0 <= d <= 2.0 for d in deltas):
        raise UsageError("delta_values must lie in [0, 2]")
    if not all(0.0 < r <= 1.0 for r in ratios):
        raise UsageError("r_values must lie in (0, 1]")
    if not all(-3.0 <= l <= 1.0 for l in lams):
        raise UsageError("lambda_values must lie in [-3, 1]")
    cells = [(d, r, l) for d in deltas for r in ratios for l in lams]
    header = "delta,R,lambda,peak_concurrence,t_c_gamma0"
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(_sweep_cell, cells))
    else:
        rows = [_sweep_cell(cell) for cell in cells]
    return "\n".join([header] + rows) + "\n"


def _run_iontrap(values: dict, fmt: str) -> str:
    overrides = {
        key: values[key] for key in _TRAP_KEYS if values.get(key) is not None
    }
    try:
        config = TrapConfig.from_mapping(overrides)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    result = plan(
        config,
        exact_delta=values["exact_delta"],
        exchange_xi=values["exchange_xi"],
        lamb_shift=values["lamb_shift"],
    )
    kelvin = temperature_requirement(config)
    if fmt == "json":
        return report_to_json(result.report, kelvin) + "\n"
    return report_to_text(result.report, kelvin)


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinbath",
        description="Correlated-bath two-qubit dynamics: figure data, "
        "spectra, sweeps and ion-trap planning.",
    )
    parser.add_argument(
        "--scenario",
        required=True,
        choices=sorted(_SCHEMAS),
        help="what to compute",
    )
    parser.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override a scenario parameter (repeatable)",
    )
    parser.add_argument(
        "--config",
        metavar="PATH",
        help="flat key=value file applied before --set overrides",
    )
    parser.add_argument("--out", default="-", metavar="PATH", help="output file; - for stdout")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--threads", type=int, default=1, help="worker threads for sweeps")
    return parser


def _gather_pairs(args) -> dict:
    pairs: dict = {}
    if args.config:
        pairs.update(_read_config_file(args.config))
    for item in args.overrides:
        if "=" not in item:
            raise UsageError(f"--set expects KEY=VALUE, got {item!r}")
        key, _, value = item.partition("=")
        pairs[key.strip()] = value.strip()
    return pairs


def _dispatch(args) -> str:
    values = _merge_parameters(args.scenario, _gather_pairs(args))
    if args.threads < 1:
        raise UsageError("--threads must be >= 1")
    if args.scenario == "fig1-surface":
        return _run_fig1(values, args.format)
    if args.scenario == "fig2-trajectories":
        return _run_fig2(values, args.format, dressed=False)
    if args.scenario == "fig2-inset":
        return _run_fig2(values, args.format, dressed=True)
    if args.scenario == "spectrum":
        return _run_spectrum(values, args.format)
    if args.scenario == "sweep":
        return _run_sweep(values, args.format, args.threads)
    return _run_iontrap(values, args.format)


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        payload = _dispatch(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RuntimeError as exc:
        # covers the numerical-failure family (spectrum degeneracy,
        # integration breakdown, non-convergent extrapolation)
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    try:
        if args.out == "-":
            sys.stdout.write(payload)
        else:
            with open(args.out, "w", encoding="utf-8") as stream:
                stream.write(payload)
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return 2
    return 0


def run() -> None:
    sys.exit(main())
