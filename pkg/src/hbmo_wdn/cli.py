"""Command-line front end: ``evaluate``, ``solve``, ``sweep`` and ``brute-force``.

Exit status is 0 on success, 1 for usage or configuration errors and 2 for
invalid input data.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Sequence

from . import report
from .brute_force import DEFAULT_CAP, InstanceTooLarge, brute_force
from .hbmo import HbmoParams, RunResult, run_problem
from .hydraulics import DesignStandards, check_feasibility
from .network import NetworkError, bundled_path, load_catalog, load_network
from .objective import DEFAULT_PIPE_PENALTY_FACTOR, PenaltyFactors, Problem

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2

DEFAULT_SWEEP_FACTORS = (2000.0, 3000.0, 3900.0, 4000.0, 5000.0, 6000.0)


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse would exit with 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class RunConfig:
    network_path: Path
    catalog_path: Path
    standards: DesignStandards
    factors: PenaltyFactors
    params: HbmoParams
    output_format: str
    seeds: tuple[int, ...]
    history_path: Path | None = None


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--network", type=Path, default=None, help="network JSON (default: bundled Gurudeniya trunk)")
    p.add_argument("--catalog", type=Path, default=None, help="catalog JSON (default: bundled Gurudeniya catalog)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--npf", type=float, default=5000.0, help="nodal penalty factor")
    p.add_argument("--ppf", type=float, default=DEFAULT_PIPE_PENALTY_FACTOR, help="pipe penalty factor")
    p.add_argument("--min-head", type=float, default=10.0, help="minimum residual head (m)")
    p.add_argument("--max-gradient", type=float, default=0.005, help="maximum friction gradient (m/m)")
    p.add_argument("--flights", type=int, default=1000, help="maximum mating flights")
    p.add_argument("--drones", type=int, default=499)
    p.add_argument("--queens", type=int, default=1)
    p.add_argument("--spermatheca", type=int, default=100)
    p.add_argument("--broods", type=int, default=None, help="maximum broods per flight (default: spermatheca size)")
    p.add_argument("--alpha", type=float, default=0.95, help="speed reduction factor")
    p.add_argument("--initial-speed", type=float, default=2.0)
    p.add_argument("--min-speed", type=float, default=1.0e-2)
    p.add_argument("--threshold", type=float, default=0.01, help="mating acceptance threshold")
    p.add_argument("--acceptance", choices=("threshold", "stochastic"), default="threshold")
    p.add_argument("--fitness-scale", type=float, default=1.0)
    p.add_argument("--stall", type=int, default=200, help="flights without improvement before stopping")
    p.add_argument("--format", choices=("table", "csv"), default="table")
    p.add_argument("--history", type=Path, default=None, help="write per-flight history CSV here")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hbmo-wdn", description="Least-cost pipe sizing for serial gravity trunks.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("evaluate", help="cost, hydraulics and penalties of a fixed design")
    _add_common(p)
    p.add_argument("diameters", nargs="+", type=float, help="one diameter per pipe, in mm")

    p = sub.add_parser("solve", help="run the honey-bee mating optimizer")
    _add_common(p)
    p.add_argument("--seeds", type=int, nargs="+", default=None, help="run an ensemble over these seeds")

    p = sub.add_parser("sweep", help="best-of-ensemble result per nodal penalty factor")
    _add_common(p)
    p.add_argument("--factors", type=float, nargs="*", default=list(DEFAULT_SWEEP_FACTORS))
    p.add_argument("--seeds", type=int, nargs="+", default=None)

    p = sub.add_parser("brute-force", help="exhaustive optimum for small instances")
    _add_common(p)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="refuse instances with more designs than this")
    return parser


def make_config(args: argparse.Namespace) -> RunConfig:
    seeds = getattr(args, "seeds", None) or [args.seed]
    try:
        standards = DesignStandards(args.min_head, args.max_gradient)
        factors = PenaltyFactors(args.npf, args.ppf)
        params = HbmoParams(
            num_queens=args.queens,
            num_drones=args.drones,
            max_mating_flights=args.flights,
            spermatheca_capacity=args.spermatheca,
            initial_speed=args.initial_speed,
            speed_reduction_factor=args.alpha,
            min_speed=args.min_speed,
            acceptance_threshold=args.threshold,
            max_broods_per_flight=args.broods,
            stall_window=args.stall,
            rng_seed=seeds[0],
            acceptance_rule=args.acceptance,
            fitness_scale=args.fitness_scale,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return RunConfig(
        network_path=args.network or bundled_path("gurudeniya.network.json"),
        catalog_path=args.catalog or bundled_path("gurudeniya.catalog.json"),
        standards=standards,
        factors=factors,
        params=params,
        output_format=args.format,
        seeds=tuple(seeds),
        history_path=args.history,
    )


def load_problem(config: RunConfig, factors: PenaltyFactors | None = None) -> Problem:
    for path in (config.network_path, config.catalog_path):
        if not Path(path).is_file():
            raise UsageError(f"file not found: {path}")
    try:
        network = load_network(config.network_path)
        catalog = load_catalog(config.catalog_path)
    except NetworkError as exc:
        raise DataError(str(exc)) from exc
    return Problem(network, catalog, config.standards, factors or config.factors)


def _genome_from_mm(problem: Problem, diameters: Sequence[float]) -> tuple[int, ...]:
    if len(diameters) != problem.num_genes:
        raise DataError(f"got {len(diameters)} diameters but the network has {problem.num_genes} pipes")
    try:
        return tuple(problem.catalog.index_of(d) for d in diameters)
    except KeyError as exc:
        raise DataError(exc.args[0]) from exc


def cmd_evaluate(config: RunConfig, diameters: Sequence[float]) -> str:
    problem = load_problem(config)
    genome = _genome_from_mm(problem, diameters)
    state = problem.simulate(genome)
    feas = check_feasibility(state, problem.standards)
    ev = problem.evaluate(genome)
    if config.output_format == "csv":
        return report.evaluation_csv(problem.network, problem.catalog, genome, state, feas)
    return report.evaluation_table(problem.network, problem.catalog, genome, state, feas, ev)


def _params_for(config: RunConfig, seed: int) -> HbmoParams:
    return replace(config.params, rng_seed=seed)


def run_ensemble(config: RunConfig, factors: PenaltyFactors | None = None) -> list[tuple[int, RunResult]]:
    problem = load_problem(config, factors)
    return [(seed, run_problem(problem, _params_for(config, seed))) for seed in config.seeds]


def best_of(runs: Sequence[tuple[int, RunResult]]) -> tuple[int, RunResult]:
    # first seed wins ties, so output does not depend on anything but the seed list
    return min(runs, key=lambda sr: sr[1].best.objective)


def cmd_solve(config: RunConfig) -> str:
    runs = run_ensemble(config)
    seed, best = best_of(runs)
    if config.history_path is not None:
        report.write_history(config.history_path, best.best_history)
    if config.output_format == "csv":
        return report.solve_csv(runs)
    if len(runs) == 1:
        return report.solve_text(seed, best)
    out = report.solve_csv(runs) + "\nbest:\n"
    return out + report.solve_text(seed, best)


def cmd_sweep(config: RunConfig, factors: Sequence[float]) -> str:
    if not factors:
        raise UsageError("sweep needs at least one nodal penalty factor")
    if any(f <= 0 for f in factors):
        raise UsageError("nodal penalty factors must be positive")
    rows = []
    problem = None
    for k, npf in enumerate(factors, start=1):
        pf = PenaltyFactors(npf, config.factors.pipe_penalty_factor)
        runs = run_ensemble(config, pf)
        _, best = best_of(runs)
        problem = best.problem
        ev = best.best.evaluation
        rows.append(report.SweepRow(str(k), npf, ev.total_penalty, ev.cost))
    for label, diameters in problem.network.reference_designs:
        genome = _genome_from_mm(problem, diameters)
        rows.append(report.SweepRow(f"{label} solution", None, None, problem.evaluate(genome).cost))
    if config.output_format == "csv":
        return report.sweep_csv(rows)
    return report.sweep_table(rows)


def cmd_brute_force(config: RunConfig, cap: int) -> str:
    problem = load_problem(config)
    try:
        result = brute_force(problem, cap)
    except InstanceTooLarge as exc:
        raise UsageError(str(exc)) from exc
    diameters = " ".join(report.fmt_mm(d) for d in problem.diameters_mm(result.genome))
    ev = result.evaluation
    if config.output_format == "csv":
        return report._csv_text(
            ("designs", "diameters_mm", "cost", "total_penalty", "penalized_objective", "feasible"),
            [(result.designs, diameters, ev.cost, ev.total_penalty, ev.penalized_objective, ev.feasible)],
        )
    return f"designs enumerated: {result.designs}\ndiameters (mm): {diameters}\n" + report.summary_block(ev)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = make_config(args)
        if args.command == "evaluate":
            out = cmd_evaluate(config, args.diameters)
        elif args.command == "solve":
            out = cmd_solve(config)
        elif args.command == "sweep":
            out = cmd_sweep(config, args.factors)
        else:
            out = cmd_brute_force(config, args.cap)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    sys.stdout.write(out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
