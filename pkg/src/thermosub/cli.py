"""Command-line front end: figure datasets, custom sweeps, CSV output.

Seven predefined datasets (``fig1`` .. ``fig7``) cover the standard parameter
choices (``eta = 0.95`` throughout; ``epsilon = 0.99`` for fig1 and
figs 5-7, ``0.97`` for figs 2-4; costs ``1 / 0.5 / 10`` for fig7); ``sweep``
computes any quantity on a custom grid. Output is RFC-4180-style CSV with a
header row; floats are written with ``repr`` (shortest round-trip decimal),
so identical invocations produce byte-identical files.

Exit codes: 0 ok, 1 bad input, 2 computation failure.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import fisher, oracle, protocol, states
from .errors import InvalidParameterError, NonconvergenceError
from .fisher import FisherResult
from .protocol import BranchMeasurement, CostModel, HETERODYNE, HOMODYNE, onoff

DEFAULT_GRID = (1e-2, 1e2, 200)
DEFAULT_COSTS = CostModel(1.0, 0.5, 10.0)
DEFAULT_TRIALS = 100_000
DEFAULT_SEED = 20260810


@dataclass(frozen=True)
class SweepSpec:
    """Everything one sweep needs: grid, quantity, parameters, output."""

    quantity: str
    grid: tuple[float, float, int] = DEFAULT_GRID
    eta: float = 0.95
    epsilon: float = 0.99
    costs: CostModel = DEFAULT_COSTS
    accepted_meas: str = "het"
    out: str = "sweep.csv"
    figure_id: str | None = None
    diagnostics: bool = False
    oracle_check: bool = False
    compact: bool = False
    trials: int = DEFAULT_TRIALS
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        lo, hi, points = self.grid
        if not (lo > 0 and lo < hi and points >= 2):
            raise InvalidParameterError(
                f"grid needs 0 < min < max and points >= 2, got {self.grid}"
            )
        if self.quantity not in QUANTITIES:
            raise InvalidParameterError(f"unknown quantity {self.quantity!r}")
        if self.accepted_meas not in ("het", "hom"):
            raise InvalidParameterError(
                f"accepted measurement must be 'het' or 'hom', got {self.accepted_meas!r}"
            )

    def lambdas(self) -> np.ndarray:
        lo, hi, points = self.grid
        return np.geomspace(lo, hi, points)

    def protocol_params(self, lam: float) -> states.ProtocolParams:
        return states.ProtocolParams(lam, self.eta, self.epsilon)


# a cell is (value, (method, work, est_error)); the method tag lands in the
# diagnostics sibling file
Cell = tuple[float, tuple[str, int, float]]


def _closed(value: float) -> Cell:
    return value, ("closed_form", 0, 0.0)


def _res(result: FisherResult) -> Cell:
    return result.value, (result.method, result.terms_or_nodes, result.est_error)


def _composite(value: float, *parts: FisherResult) -> Cell:
    work = sum(p.terms_or_nodes for p in parts)
    est = sum(p.est_error for p in parts)
    return value, ("composite", work, est)


# ---------------------------------------------------------------------------
# row builders, one per quantity
# ---------------------------------------------------------------------------

def _row_qfi(lam: float, spec: SweepSpec) -> list[Cell]:
    acc = states.realistic_accepted(lam, spec.eta, spec.epsilon)
    return [
        _res(fisher.qfi_closed(states.thermal(lam))),
        _res(fisher.qfi_closed(states.subtracted(lam))),
        _res(fisher.fi_discrete(acc)),
    ]


def _fi_family_row(lam: float, spec: SweepSpec, meas: str) -> list[Cell]:
    models = [
        states.thermal(lam),
        states.subtracted(lam),
        states.added(lam),
        states.realistic_accepted(lam, spec.eta, spec.epsilon),
    ]
    cells = [_res(fisher.fi_continuous(m, meas)) for m in models]
    cells.append(_res(fisher.qfi_closed(states.thermal(lam))))
    return cells


def _row_fi_homodyne(lam: float, spec: SweepSpec) -> list[Cell]:
    return _fi_family_row(lam, spec, "homodyne")


def _row_fi_heterodyne(lam: float, spec: SweepSpec) -> list[Cell]:
    return _fi_family_row(lam, spec, "heterodyne")


def _row_fi_onoff(lam: float, spec: SweepSpec) -> list[Cell]:
    meas = onoff(spec.epsilon)
    models = [
        states.thermal(lam),
        states.subtracted(lam),
        states.added(lam),
        states.realistic_accepted(lam, spec.eta, spec.epsilon),
    ]
    cells = [_res(protocol.branch_fi(m, meas)) for m in models]
    ti = protocol.total_information(spec.protocol_params(lam))
    cells.append(_composite(ti.total, *ti.diagnostics.values()))
    cells.append(_res(fisher.qfi_closed(states.thermal(lam))))
    return cells


def _row_total_information(lam: float, spec: SweepSpec) -> list[Cell]:
    p = spec.protocol_params(lam)
    ti = protocol.total_information(p)
    lower, upper = protocol.convexity_bounds(p)
    acc, rej = ti.diagnostics["accepted"], ti.diagnostics["rejected"]
    return [
        _closed(ti.click_fi),
        _res(FisherResult(ti.accepted_term, acc.method, acc.terms_or_nodes, acc.est_error)),
        _res(FisherResult(ti.rejected_term, rej.method, rej.terms_or_nodes, rej.est_error)),
        _composite(ti.total, acc, rej),
        _closed(lower),
        _closed(upper),
    ]


def _row_ftot_heterodyne(lam: float, spec: SweepSpec) -> list[Cell]:
    p = spec.protocol_params(lam)
    ti = protocol.total_information(p, BranchMeasurement(HETERODYNE, HETERODYNE))
    ref = fisher.fi_continuous(states.thermal(lam), "heterodyne")
    return [_composite(ti.total, *ti.diagnostics.values()), _res(ref)]


def _row_ftot_onoff(lam: float, spec: SweepSpec) -> list[Cell]:
    p = spec.protocol_params(lam)
    meas = onoff(spec.epsilon)
    ti = protocol.total_information(p, BranchMeasurement(meas, meas))
    ref_onoff = protocol.branch_fi(states.thermal(lam), meas)
    ref_het = fisher.fi_continuous(states.thermal(lam), "heterodyne")
    return [_composite(ti.total, *ti.diagnostics.values()), _res(ref_onoff), _res(ref_het)]


def _row_rates(lam: float, spec: SweepSpec) -> list[Cell]:
    p = spec.protocol_params(lam)
    accepted = HETERODYNE if spec.accepted_meas == "het" else HOMODYNE
    m = BranchMeasurement(accepted, onoff(spec.epsilon))
    r_ps = protocol.rate_postselected(p, spec.costs, m)
    qfi = fisher.qfi_closed(states.thermal(lam)).value
    r_0 = protocol.rate_direct(lam, spec.costs, qfi)
    cells = [_composite(r_ps), _closed(r_0)]
    if spec.compact:
        cells.append(_composite(protocol.rate_postselected(p, spec.costs, m, compact=True)))
    return cells


QUANTITIES = {
    "qfi": (["qfi_thermal", "qfi_ideal_sub", "qfi_realistic"], _row_qfi),
    "fi-homodyne": (
        ["fi_hom_thermal", "fi_hom_subtracted", "fi_hom_added", "fi_hom_realistic",
         "qfi_thermal"],
        _row_fi_homodyne,
    ),
    "fi-heterodyne": (
        ["fi_het_thermal", "fi_het_subtracted", "fi_het_added", "fi_het_realistic",
         "qfi_thermal"],
        _row_fi_heterodyne,
    ),
    "fi-onoff": (
        ["fi_onoff_thermal", "fi_onoff_subtracted", "fi_onoff_added",
         "fi_onoff_realistic", "ftot_photon_number", "qfi_thermal"],
        _row_fi_onoff,
    ),
    "total-information": (
        ["click_fi", "accepted_term", "rejected_term", "total",
         "lower_bound", "upper_bound"],
        _row_total_information,
    ),
    "ftot-heterodyne": (["ftot_heterodyne", "fi_het_thermal"], _row_ftot_heterodyne),
    "ftot-onoff": (
        ["ftot_onoff", "fi_onoff_thermal", "fi_het_thermal"],
        _row_ftot_onoff,
    ),
    "rates": (["rate_ps", "rate_0"], _row_rates),
}

# figure id -> (quantity, parameter overrides)
FIGURES = {
    "fig1": ("qfi", {"epsilon": 0.99}),
    "fig2": ("fi-homodyne", {"epsilon": 0.97}),
    "fig3": ("fi-heterodyne", {"epsilon": 0.97}),
    "fig4": ("fi-onoff", {"epsilon": 0.97}),
    "fig5": ("ftot-heterodyne", {"epsilon": 0.99}),
    "fig6": ("ftot-onoff", {"epsilon": 0.99}),
    "fig7": ("rates", {"epsilon": 0.99, "costs": DEFAULT_COSTS}),
}


def _oracle_columns(spec: SweepSpec) -> tuple[list[str], "callable"]:
    """Empirical cross-check columns appended when ``oracle_check`` is set."""
    q = spec.quantity

    if q in ("qfi", "fi-homodyne", "fi-heterodyne", "fi-onoff"):
        meas = {
            "qfi": protocol.PHOTON_NUMBER,
            "fi-homodyne": HOMODYNE,
            "fi-heterodyne": HETERODYNE,
            "fi-onoff": onoff(spec.epsilon),
        }[q]
        names = ["empirical_fi_thermal", "empirical_fi_thermal_se"]

        def build(lam: float, row_seed: int) -> list[float]:
            est = oracle.empirical_fi(states.thermal(lam), meas, 0.01 * lam,
                                      spec.trials, row_seed)
            return [est.value, est.std_error]

        return names, build

    names = ["empirical_p1", "empirical_p1_se"]

    def build(lam: float, row_seed: int) -> list[float]:
        cfg = oracle.SimConfig(spec.protocol_params(lam), spec.trials, row_seed)
        report = oracle.simulate_protocol(cfg)
        return [report.empirical_p1, report.p1_std_error()]

    return names, build


def header_for(spec: SweepSpec) -> list[str]:
    columns = list(QUANTITIES[spec.quantity][0])
    if spec.quantity == "rates" and spec.compact:
        columns.append("rate_ps_compact")
    if spec.oracle_check:
        columns += _oracle_columns(spec)[0]
    return ["lambda"] + columns


def _diag_path(out: str) -> Path:
    path = Path(out)
    if path.suffix == ".csv":
        return path.with_suffix(".diag.csv")
    return Path(str(path) + ".diag.csv")


def _write_csv(path: Path, header: list[str], rows: list[list[float]]):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(float(v)) for v in row])


def run_sweep(spec: SweepSpec) -> Path:
    """Compute the sweep and write its CSV (plus the optional diagnostics
    sibling); returns the output path."""
    columns, row_fn = QUANTITIES[spec.quantity]
    header = header_for(spec)
    oracle_build = _oracle_columns(spec)[1] if spec.oracle_check else None

    rows: list[list[float]] = []
    diag_rows: list[list] = []
    for i, lam in enumerate(spec.lambdas()):
        lam = float(lam)
        cells = row_fn(lam, spec)
        values = [lam] + [value for value, _ in cells]
        if oracle_build is not None:
            values += oracle_build(lam, spec.seed + i)
        if any(not np.isfinite(v) for v in values):
            raise NonconvergenceError(f"non-finite cell in row lambda={lam!r}")
        rows.append(values)
        if spec.diagnostics:
            for name, (_, (method, work, est_error)) in zip(header[1:], cells):
                diag_rows.append([repr(lam), name, method, work, repr(est_error)])

    out = Path(spec.out)
    _write_csv(out, header, rows)
    if spec.diagnostics:
        diag = _diag_path(spec.out)
        diag.parent.mkdir(parents=True, exist_ok=True)
        with open(diag, "w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle)
            writer.writerow(["lambda", "column", "method", "terms_or_nodes", "est_error"])
            writer.writerows(diag_rows)
    return out


def figure_spec(figure_id: str, **overrides) -> SweepSpec:
    """Sweep specification of a predefined figure, with optional overrides."""
    if figure_id not in FIGURES:
        raise InvalidParameterError(
            f"unknown figure {figure_id!r}; expected one of {sorted(FIGURES)}"
        )
    quantity, defaults = FIGURES[figure_id]
    settings = {"quantity": quantity, "figure_id": figure_id,
                "out": f"{figure_id}.csv", **defaults}
    settings.update({k: v for k, v in overrides.items() if v is not None})
    return SweepSpec(**settings)


def run_figure(figure_id: str, **overrides) -> Path:
    return run_sweep(figure_spec(figure_id, **overrides))


# ---------------------------------------------------------------------------
# argument and config parsing
# ---------------------------------------------------------------------------

def parse_grid(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise InvalidParameterError(f"grid must be 'min:max:points', got {text!r}")
    try:
        lo, hi, points = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise InvalidParameterError(f"bad grid {text!r}: {exc}") from exc
    return lo, hi, points


_CONFIG_PARSERS = {
    "eta": float,
    "epsilon": float,
    "cp": float,
    "cs": float,
    "cm": float,
    "grid": str,
    "out": str,
    "seed": int,
    "trials": int,
    "accepted_meas": str,
    "quantity": str,
    "diagnostics": lambda s: s.strip().lower() in ("1", "true", "yes", "on"),
    "oracle_check": lambda s: s.strip().lower() in ("1", "true", "yes", "on"),
    "compact": lambda s: s.strip().lower() in ("1", "true", "yes", "on"),
}


def load_config(path: str) -> dict:
    """Plain-text ``key=value`` configuration (UTF-8, ``#`` comments)."""
    values = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InvalidParameterError(f"cannot read config file {path!r}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidParameterError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if key not in _CONFIG_PARSERS:
            raise InvalidParameterError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            values[key] = _CONFIG_PARSERS[key](value.strip())
        except ValueError as exc:
            raise InvalidParameterError(f"{path}:{lineno}: bad value for {key}: {exc}") from exc
    return values


def _add_common_options(parser: argparse.ArgumentParser):
    parser.add_argument("--config", help="key=value config file; flags override it")
    parser.add_argument("--grid", help="log-spaced lambda grid as min:max:points")
    parser.add_argument("--eta", type=float, help="beam-splitter transmittance in (0, 1]")
    parser.add_argument("--epsilon", type=float, help="on-off detector efficiency in (0, 1]")
    parser.add_argument("--cp", type=float, help="preparation cost")
    parser.add_argument("--cs", type=float, help="selection cost")
    parser.add_argument("--cm", type=float, help="final-measurement cost")
    parser.add_argument("--out", help="output CSV path")
    parser.add_argument("--seed", type=int, help="base seed for oracle cross-checks")
    parser.add_argument("--trials", type=int, help="trials per oracle cross-check cell")
    parser.add_argument("--accepted-meas", choices=("het", "hom"), dest="accepted_meas",
                        help="measurement on the accepted branch for rate sweeps")
    parser.add_argument("--diagnostics", action="store_true", default=None,
                        help="write a sibling .diag.csv with per-cell method tags")
    parser.add_argument("--oracle-check", action="store_true", default=None,
                        dest="oracle_check",
                        help="append seeded Monte Carlo columns with standard errors")
    parser.add_argument("--compact", action="store_true", default=None,
                        help="also emit the compact post-selection rate column")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="thermosub",
        description="Fisher-information datasets for photon-subtracted thermal light",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    fig = sub.add_parser("figure", help="reproduce one of the predefined datasets")
    fig.add_argument("figure_id", choices=sorted(FIGURES))
    _add_common_options(fig)
    swp = sub.add_parser("sweep", help="compute a quantity on a custom grid")
    swp.add_argument("--quantity", required=True, choices=sorted(QUANTITIES))
    _add_common_options(swp)
    return parser


def _spec_from_args(args: argparse.Namespace) -> SweepSpec:
    settings: dict = {}
    if args.config:
        settings.update(load_config(args.config))
    for key in ("grid", "eta", "epsilon", "out", "seed", "trials", "accepted_meas",
                "diagnostics", "oracle_check", "compact", "quantity"):
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value
    if isinstance(settings.get("grid"), str):
        settings["grid"] = parse_grid(settings["grid"])
    cost_overrides = {}
    for key, attr in (("cp", "c_prep"), ("cs", "c_select"), ("cm", "c_measure")):
        value = settings.pop(key, None)
        if getattr(args, key, None) is not None:
            value = getattr(args, key)
        if value is not None:
            cost_overrides[attr] = value
    if cost_overrides:
        settings["costs"] = replace(DEFAULT_COSTS, **cost_overrides)

    if args.command == "figure":
        settings.pop("quantity", None)  # fixed by the figure id
        return figure_spec(args.figure_id, **settings)
    return SweepSpec(**settings)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; report them as bad input
        return 0 if exc.code in (0, None) else 1
    try:
        spec = _spec_from_args(args)
        out = run_sweep(spec)
    except InvalidParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NonconvergenceError as exc:
        print(f"computation failed: {exc}", file=sys.stderr)
        return 2
    print(out)
    return 0


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
