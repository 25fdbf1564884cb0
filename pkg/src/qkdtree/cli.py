"""Command-line front end: ``evaluate``, ``sweep``, ``simulate`` and ``compare``.

Exit codes: 0 on success, 1 for usage or configuration errors, 2 for
numerical failures such as an undefined QBER.
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .config import ConfigParseError, config_to_dict, load_config
from .metrics import KeyMetrics, UndefinedQBERError, key_metrics
from .montecarlo import SimulationResult, estimate_standard_errors, simulate
from .photons import lumped_three_branch, poisson_pn
from .system import (ConfigurationError, SystemConfig, channel_survival_probability,
                     mean_photon_number)
from .transmission import correct_basis_probability
from .tree import build_tree, classified_leaf_count, format_tree_dump

SWEEP_VARIABLES = ("channel_length_km", "mu", "eta_both", "dark_carriers_both", "e_det")
CSV_COLUMNS = ("p_sigma", "qber", "epsilon", "sifted_rate_bps", "private_rate_bps")
SE_MULTIPLE = 3.0


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    start: float
    stop: float
    steps: int
    log: bool = False

    def __post_init__(self):
        if self.variable not in SWEEP_VARIABLES:
            raise ConfigurationError(f"sweep variable must be one of {SWEEP_VARIABLES}")
        if not self.start < self.stop:
            raise ConfigurationError("sweep start must be below stop")
        if self.steps < 2:
            raise ConfigurationError("sweep needs at least 2 steps")
        if self.log and self.start <= 0:
            raise ConfigurationError("logarithmic sweep needs start > 0")

    def values(self) -> np.ndarray:
        space = np.geomspace if self.log else np.linspace
        return space(self.start, self.stop, self.steps)


@dataclass
class RunReport:
    config: SystemConfig
    metrics: Optional[KeyMetrics] = None
    simulation: Optional[SimulationResult] = None
    extra: dict = field(default_factory=dict)
    version: str = __version__
    timestamp: str = field(
        default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds"))

    def to_dict(self) -> dict:
        out = {"tool_version": self.version, "timestamp": self.timestamp,
               "config": config_to_dict(self.config)}
        if self.metrics is not None:
            out["metrics"] = self.metrics.to_dict()
        if self.simulation is not None:
            out["simulation"] = self.simulation.to_dict()
        out.update(self.extra)
        return out


def with_variable(config: SystemConfig, variable: str, value: float) -> SystemConfig:
    """Copy of ``config`` with one sweepable quantity replaced."""
    replace = dataclasses.replace
    value = float(value)
    if variable == "channel_length_km":
        return replace(config, path=replace(config.path, channel_length_km=value))
    if variable == "mu":
        return replace(config, mu_override=value)
    if variable == "eta_both":
        return replace(config, detector1=replace(config.detector1, efficiency=value),
                       detector2=replace(config.detector2, efficiency=value))
    if variable == "dark_carriers_both":
        return replace(config, detector1=replace(config.detector1, dark_carriers=value),
                       detector2=replace(config.detector2, dark_carriers=value))
    if variable == "e_det":
        return replace(config, protocol=replace(config.protocol, optical_error_prob=value))
    raise ConfigurationError(f"unknown sweep variable {variable!r}")


def run_evaluate(config: SystemConfig) -> RunReport:
    tree = build_tree(config)
    mu = mean_photon_number(config)
    p0, p1, p2plus = lumped_three_branch(mu)
    extra = {
        "derived": {
            "mu": mu,
            "p_qc": channel_survival_probability(config),
            "p_cb": correct_basis_probability(config.protocol),
            "photon_branches": {"p0": p0, "p1": p1, "p2plus": p2plus,
                                "p_two_photon": poisson_pn(mu, 2)},
        },
        "tree": {"mode": tree.mode, "digest": tree.config_digest, "leaves": len(tree.leaves),
                 "classified_leaves": classified_leaf_count(tree),
                 "tail_discard": tree.tail_discard},
    }
    return RunReport(config, metrics=key_metrics(config, tree), extra=extra)


def _fmt(x: float) -> str:
    return format(float(x), ".10g")


def run_sweep(config: SystemConfig, spec: SweepSpec) -> str:
    """CSV table, one row per sweep point in ascending order.

    Points that cannot be evaluated keep their row with empty metrics and
    the reason in the ``status`` column.
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow((spec.variable,) + CSV_COLUMNS + ("status",))
    for value in spec.values():
        try:
            metrics = key_metrics(with_variable(config, spec.variable, value)).to_dict()
        except UndefinedQBERError:
            writer.writerow([_fmt(value)] + [""] * len(CSV_COLUMNS) + ["no sifted key"])
            continue
        except (ConfigurationError, ValueError) as exc:
            writer.writerow([_fmt(value)] + [""] * len(CSV_COLUMNS) + [f"error: {exc}"])
            continue
        writer.writerow([_fmt(value)] + [_fmt(metrics[c]) for c in CSV_COLUMNS] + ["ok"])
    return buf.getvalue()


def _within(analytic: float, simulated: float, se: float) -> bool:
    return abs(analytic - simulated) <= SE_MULTIPLE * se


def run_compare(config: SystemConfig, pulses: int, seed: int, workers: int = 1,
                analytic_config: Optional[SystemConfig] = None) -> RunReport:
    """Run both engines and judge agreement at three standard errors.

    ``analytic_config`` lets the analytic side see a different configuration,
    which is how the check is shown to catch a mismatched model.
    """
    result = simulate(config, pulses, seed, workers=workers)
    se_p, se_q = estimate_standard_errors(result)
    try:
        metrics = key_metrics(analytic_config or config)
        p_sigma, qber = metrics.p_sigma, metrics.p_err
    except UndefinedQBERError:
        metrics, p_sigma, qber = None, 0.0, None

    vacuous = p_sigma == 0 and result.sifted_bits == 0
    p_ok = vacuous or _within(p_sigma, result.p_sigma_hat, se_p)
    if vacuous:
        q_ok = True
    elif qber is None or result.qber_hat is None:
        q_ok = False
    else:
        q_ok = _within(qber, result.qber_hat, se_q)
    comparison = {
        "criterion": f"|analytic - simulated| <= {SE_MULTIPLE:g} standard errors",
        "analytic": {"p_sigma": p_sigma, "qber": qber},
        "simulated": {"p_sigma": result.p_sigma_hat, "qber": result.qber_hat},
        "standard_error": {"p_sigma": se_p, "qber": se_q},
        "p_sigma_pass": p_ok,
        "qber_pass": q_ok,
        "vacuous": vacuous,
        "pass": p_ok and q_ok,
    }
    return RunReport(config, metrics=metrics, simulation=result, extra={"comparison": comparison})


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qkdtree", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--config", required=True, help="JSON configuration file")
        p.add_argument("--mode", choices=("lumped", "exact"), help="photon-statistics mode")
        p.add_argument("--output", help="write here instead of stdout")

    def seeded(p):
        p.add_argument("--pulses", type=int, required=True)
        p.add_argument("--seed", type=int, required=True)
        p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("evaluate", help="analytic key metrics")
    common(p)
    p.add_argument("--dump-tree", action="store_true",
                   help="also print every leaf of the event tree to stdout")

    p = sub.add_parser("sweep", help="CSV of metrics across one parameter")
    common(p)
    p.add_argument("--var", required=True, choices=SWEEP_VARIABLES)
    p.add_argument("--start", type=float, required=True)
    p.add_argument("--stop", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--log", action="store_true", help="logarithmic spacing")

    p = sub.add_parser("simulate", help="Monte Carlo pulse simulation")
    common(p)
    seeded(p)

    p = sub.add_parser("compare", help="analytic model against Monte Carlo")
    common(p)
    seeded(p)
    return parser


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        with open(output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
        if args.mode:
            config = dataclasses.replace(config, mode=args.mode)
        if args.command == "evaluate":
            report = run_evaluate(config)
            _emit(_json(report.to_dict()), args.output)
            if args.dump_tree:
                sys.stdout.write(format_tree_dump(build_tree(config)))
        elif args.command == "sweep":
            spec = SweepSpec(args.var, args.start, args.stop, args.steps, args.log)
            _emit(run_sweep(config, spec), args.output)
        elif args.command == "simulate":
            if args.pulses <= 0:
                raise ConfigurationError("--pulses must be > 0")
            result = simulate(config, args.pulses, args.seed, workers=args.workers)
            _emit(_json(result.to_dict()), args.output)
        else:
            if args.pulses <= 0:
                raise ConfigurationError("--pulses must be > 0")
            report = run_compare(config, args.pulses, args.seed, workers=args.workers)
            _emit(_json(report.to_dict()), args.output)
    except UndefinedQBERError as exc:
        print(f"qkdtree: {exc}", file=sys.stderr)
        return 2
    except (ConfigParseError, ConfigurationError, OSError) as exc:
        print(f"qkdtree: {exc}", file=sys.stderr)
        return 1
    except (ArithmeticError, ValueError) as exc:
        print(f"qkdtree: numerical error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
