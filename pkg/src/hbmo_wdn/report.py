"""Plain-text tables and CSV output for evaluations, runs and sweeps."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .hbmo import FlightRecord, RunResult
from .hydraulics import FeasibilityReport, HydraulicState
from .network import Network, PipeCatalog
from .objective import Evaluation

HISTORY_FIELDS = (
    "flight_index",
    "best_cost",
    "best_total_penalty",
    "best_penalized_objective",
    "acceptance_rate",
)
SWEEP_FIELDS = ("trial", "nodal_penalty_factor", "total_penalty", "total_cost")
SOLVE_FIELDS = (
    "seed",
    "diameters_mm",
    "cost",
    "nodal_penalty",
    "pipe_penalty",
    "total_penalty",
    "penalized_objective",
    "feasible",
    "flights",
    "termination",
)
EVALUATE_FIELDS = (
    "pipe",
    "node",
    "diameter_mm",
    "length_m",
    "pipe_cost",
    "flow_m3_per_s",
    "friction_gradient",
    "head_loss_m",
    "head_m",
    "residual_head_m",
    "head_deficit_m",
    "gradient_excess",
)


def fmt_number(x: float) -> str:
    """Integers print without a decimal part, everything else with ``repr`` precision."""
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, int) or (isinstance(x, float) and x.is_integer() and abs(x) < 1e15):
        return str(int(x))
    return repr(float(x))


def fmt_mm(d: float) -> str:
    return f"{d:.2f}"


def _csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt_number(v) if isinstance(v, (int, float)) else v for v in row])
    return buf.getvalue()


def _table(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    widths = [len(h) for h in header]
    for row in rows:
        widths = [max(w, len(c)) for w, c in zip(widths, row)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths))]
    lines.append("  ".join("-" * w for w in widths))
    for row in rows:
        lines.append("  ".join(c.rjust(w) for c, w in zip(row, widths)))
    return "\n".join(lines) + "\n"


# -- evaluate ------------------------------------------------------------------


def _pipe_rows(
    network: Network,
    catalog: PipeCatalog,
    genome: Sequence[int],
    state: HydraulicState,
    report: FeasibilityReport,
) -> list[tuple]:
    rows = []
    for i, k in enumerate(genome):
        pipe, node, entry = network.pipes[i], network.nodes[i], catalog.entries[k]
        rows.append(
            (
                pipe.id,
                node.id,
                entry.diameter_mm,
                pipe.length,
                entry.unit_cost * pipe.length,
                state.flows[i],
                state.friction_gradients[i],
                state.head_losses[i],
                state.heads[i],
                state.residual_heads[i],
                report.head_deficits[i],
                report.gradient_excesses[i],
            )
        )
    return rows


def evaluation_csv(network, catalog, genome, state, report) -> str:
    return _csv_text(EVALUATE_FIELDS, _pipe_rows(network, catalog, genome, state, report))


def evaluation_table(
    network: Network,
    catalog: PipeCatalog,
    genome: Sequence[int],
    state: HydraulicState,
    report: FeasibilityReport,
    evaluation: Evaluation,
) -> str:
    rows = [
        (
            p,
            n,
            fmt_mm(d),
            fmt_number(length),
            fmt_number(cost),
            f"{q:.6f}",
            f"{g:.6f}",
            f"{hl:.3f}",
            f"{h:.3f}",
            f"{r:.3f}",
            f"{dfc:.3f}",
            f"{ex:.6f}",
        )
        for p, n, d, length, cost, q, g, hl, h, r, dfc, ex in _pipe_rows(network, catalog, genome, state, report)
    ]
    out = _table(
        ("pipe", "node", "D (mm)", "L (m)", "cost", "Q (m3/s)", "hf (m/m)", "F (m)", "H (m)", "HR (m)", "deficit", "excess"),
        rows,
    )
    out += "\n" + summary_block(evaluation)
    return out


def summary_block(evaluation: Evaluation) -> str:
    return (
        f"cost: {fmt_number(evaluation.cost)}\n"
        f"nodal penalty: {evaluation.nodal_penalty:.2f}\n"
        f"pipe penalty: {evaluation.pipe_penalty:.2f}\n"
        f"total penalty: {evaluation.total_penalty:.2f}\n"
        f"penalized objective: {evaluation.penalized_objective:.2f}\n"
        f"feasible: {'yes' if evaluation.feasible else 'no'}\n"
    )


# -- solve -----------------------------------------------------------------------


def _solve_row(seed: int, result: RunResult) -> tuple:
    ev = result.best.evaluation
    return (
        seed,
        " ".join(fmt_mm(d) for d in result.diameters_mm),
        ev.cost,
        ev.nodal_penalty,
        ev.pipe_penalty,
        ev.total_penalty,
        ev.penalized_objective,
        ev.feasible,
        result.flights,
        result.termination,
    )


def solve_csv(runs: Sequence[tuple[int, RunResult]]) -> str:
    return _csv_text(SOLVE_FIELDS, [_solve_row(seed, r) for seed, r in runs])


def solve_text(seed: int, result: RunResult) -> str:
    network = result.problem.network
    rows = [(p.id, fmt_mm(d)) for p, d in zip(network.pipes, result.diameters_mm)]
    out = f"seed: {seed}\n"
    out += _table(("pipe", "D (mm)"), rows)
    out += "\n" + summary_block(result.best.evaluation)
    out += f"flights: {result.flights}\ntermination: {result.termination}\n"
    return out


# -- history ---------------------------------------------------------------------


def history_csv(history: Iterable[FlightRecord]) -> str:
    return _csv_text(
        HISTORY_FIELDS,
        [
            (
                r.flight_index,
                r.best_cost,
                r.best_total_penalty,
                r.best_penalized_objective,
                r.acceptance_rate,
            )
            for r in history
        ],
    )


def write_history(path: str | Path, history: Iterable[FlightRecord]) -> None:
    Path(path).write_text(history_csv(history), encoding="utf-8", newline="")


def _parse_number(text: str) -> float:
    try:
        return int(text)
    except ValueError:
        return float(text)


def read_history(path: str | Path) -> list[FlightRecord]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != HISTORY_FIELDS:
            raise ValueError(f"unexpected history header {reader.fieldnames}")
        return [
            FlightRecord(
                flight_index=int(row["flight_index"]),
                best_cost=_parse_number(row["best_cost"]),
                best_total_penalty=_parse_number(row["best_total_penalty"]),
                best_penalized_objective=_parse_number(row["best_penalized_objective"]),
                acceptance_rate=_parse_number(row["acceptance_rate"]),
            )
            for row in reader
        ]


# -- sweep -----------------------------------------------------------------------


@dataclass(frozen=True)
class SweepRow:
    trial: str
    nodal_penalty_factor: float | None
    total_penalty: float | None
    total_cost: float


def sweep_csv(rows: Sequence[SweepRow]) -> str:
    return _csv_text(
        SWEEP_FIELDS,
        [
            (
                r.trial,
                "" if r.nodal_penalty_factor is None else r.nodal_penalty_factor,
                "" if r.total_penalty is None else r.total_penalty,
                r.total_cost,
            )
            for r in rows
        ],
    )


def sweep_table(rows: Sequence[SweepRow]) -> str:
    body = [
        (
            r.trial,
            "" if r.nodal_penalty_factor is None else fmt_number(r.nodal_penalty_factor),
            "" if r.total_penalty is None else f"{r.total_penalty:.0f}",
            fmt_number(r.total_cost),
        )
        for r in rows
    ]
    return _table(("Trial Number", "Nodal Penalty Factor", "Total Penalty", "Total Cost / (Units)"), body)


def read_sweep_csv(text: str) -> list[SweepRow]:
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != SWEEP_FIELDS:
        raise ValueError(f"unexpected sweep header {reader.fieldnames}")
    return [
        SweepRow(
            trial=row["trial"],
            nodal_penalty_factor=_parse_number(row["nodal_penalty_factor"]) if row["nodal_penalty_factor"] else None,
            total_penalty=_parse_number(row["total_penalty"]) if row["total_penalty"] else None,
            total_cost=_parse_number(row["total_cost"]),
        )
        for row in reader
    ]
