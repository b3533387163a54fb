"""Pipeline capital cost, constraint penalties and fitness."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .hydraulics import (
    DesignStandards,
    FeasibilityReport,
    HydraulicState,
    check_assignment,
    check_feasibility,
    compute_flows,
    simulate,
)
from .network import Network, PipeCatalog

__all__ = [
    "DEFAULT_PIPE_PENALTY_FACTOR",
    "PenaltyFactors",
    "Evaluation",
    "Problem",
    "pipeline_cost",
    "nodal_penalty",
    "pipe_penalty",
    "evaluate",
]

# Large enough that every gradient excess reachable on the bundled trunk costs
# more than upsizing the offending pipe.
DEFAULT_PIPE_PENALTY_FACTOR = 1.0e7


@dataclass(frozen=True, slots=True)
class PenaltyFactors:
    nodal_penalty_factor: float = 5000.0  # cost units per m of head deficit
    pipe_penalty_factor: float = DEFAULT_PIPE_PENALTY_FACTOR  # cost units per m/m of excess

    def __post_init__(self) -> None:
        if self.nodal_penalty_factor < 0 or self.pipe_penalty_factor < 0:
            raise ValueError("penalty factors must be non-negative")


@dataclass(frozen=True, slots=True)
class Evaluation:
    cost: float
    nodal_penalty: float
    pipe_penalty: float
    total_penalty: float
    penalized_objective: float
    fitness: float
    feasible: bool


def pipeline_cost(assignment: Sequence[int], network: Network, catalog: PipeCatalog) -> float:
    """Sum of unit cost times length over all pipes.

    Integer unit costs and lengths give an exact integer total.
    """
    check_assignment(assignment, network, catalog)
    terms = [catalog.entries[k].unit_cost * pipe.length for k, pipe in zip(assignment, network.pipes)]
    if all(isinstance(t, int) for t in terms):
        return sum(terms)
    return math.fsum(terms)


def nodal_penalty(deficits: Iterable[float], npf: float) -> float:
    return npf * math.fsum(deficits)


def pipe_penalty(excesses: Iterable[float], ppf: float) -> float:
    return ppf * math.fsum(excesses)


def _combine(cost: float, report: FeasibilityReport, factors: PenaltyFactors) -> Evaluation:
    np_ = nodal_penalty(report.head_deficits, factors.nodal_penalty_factor)
    pp = pipe_penalty(report.gradient_excesses, factors.pipe_penalty_factor)
    total = np_ + pp
    objective = cost + total
    return Evaluation(
        cost=cost,
        nodal_penalty=np_,
        pipe_penalty=pp,
        total_penalty=total,
        penalized_objective=objective,
        fitness=1.0 / objective,
        feasible=report.feasible,
    )


def evaluate(
    assignment: Sequence[int],
    network: Network,
    catalog: PipeCatalog,
    standards: DesignStandards,
    factors: PenaltyFactors,
) -> Evaluation:
    """Simulate ``assignment`` and fold cost and penalties into one :class:`Evaluation`."""
    state = simulate(network, assignment, catalog)
    return _combine(pipeline_cost(assignment, network, catalog), check_feasibility(state, standards), factors)


@dataclass
class Problem:
    """A network, catalog, standards and penalty factors bound together.

    Evaluations are memoized by genome; every call for the same genome returns
    the same :class:`Evaluation` object.
    """

    network: Network
    catalog: PipeCatalog
    standards: DesignStandards = field(default_factory=DesignStandards)
    factors: PenaltyFactors = field(default_factory=PenaltyFactors)
    _flows: tuple[float, ...] = field(init=False, repr=False)
    _cache: dict[tuple[int, ...], Evaluation] = field(init=False, repr=False, default_factory=dict)

    def __post_init__(self) -> None:
        self._flows = compute_flows(self.network)

    @property
    def num_genes(self) -> int:
        return self.network.num_pipes

    @property
    def num_alleles(self) -> int:
        return len(self.catalog)

    def simulate(self, genome: Sequence[int]) -> HydraulicState:
        return simulate(self.network, genome, self.catalog, flows=self._flows)

    def evaluate(self, genome: Sequence[int], cache: bool = True) -> Evaluation:
        key = tuple(genome)
        hit = self._cache.get(key)
        if hit is None:
            report = check_feasibility(self.simulate(key), self.standards)
            hit = _combine(pipeline_cost(key, self.network, self.catalog), report, self.factors)
            if cache:
                self._cache[key] = hit
        return hit

    def diameters_mm(self, genome: Sequence[int]) -> tuple[float, ...]:
        return tuple(self.catalog.entries[k].diameter_mm for k in genome)
