"""Honey-bee mating optimization over discrete diameter assignments.

One outer iteration ("mating flight") is: the queen picks drones at random
while her speed decays geometrically, storing the genomes of drones that pass
the mating rule; each stored genome is then crossed with the queen to make a
brood, and the best brood replaces the worst queen when it is fitter.  The
drone pool is topped back up with fresh random bees between flights.

There is no worker/nurse local-search step.

Randomness is drawn from PCG64 streams derived from ``rng_seed``: stream 0
initializes the colony and stream ``k`` drives flight ``k``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .hydraulics import DesignStandards
from .network import Network, PipeCatalog
from .objective import Evaluation, PenaltyFactors, Problem

__all__ = [
    "Genome",
    "HbmoParams",
    "Bee",
    "FlightRecord",
    "ColonyState",
    "RunResult",
    "flight_rng",
    "init_colony",
    "mating_probability",
    "mating_flight",
    "crossover",
    "breed_and_replace",
    "replenish_drones",
    "run",
    "run_problem",
]

Genome = tuple[int, ...]

ACCEPT_THRESHOLD = "threshold"
ACCEPT_STOCHASTIC = "stochastic"

STOP_MAX_FLIGHTS = "max_flights"
STOP_STALL = "stall"


@dataclass(frozen=True)
class HbmoParams:
    """Colony sizes, flight dynamics and termination settings.

    ``acceptance_rule`` is ``"threshold"`` (mate when the mating probability
    is at least ``acceptance_threshold``) or ``"stochastic"`` (mate when a
    uniform draw falls below it).  ``fitness_scale`` multiplies both fitness
    values before their difference enters the mating probability.
    """

    num_queens: int = 1
    num_drones: int = 499
    max_mating_flights: int = 1000
    spermatheca_capacity: int = 100
    initial_speed: float = 2.0
    speed_reduction_factor: float = 0.95
    min_speed: float = 1.0e-2
    acceptance_threshold: float = 0.01
    max_broods_per_flight: int | None = None
    stall_window: int = 200
    rng_seed: int = 0
    acceptance_rule: str = ACCEPT_THRESHOLD
    fitness_scale: float = 1.0

    def __post_init__(self) -> None:
        for name in ("num_queens", "num_drones", "max_mating_flights", "spermatheca_capacity", "stall_window"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")
        if self.max_broods_per_flight is not None and self.max_broods_per_flight < 1:
            raise ValueError("max_broods_per_flight must be at least 1")
        if not 0 < self.speed_reduction_factor < 1:
            raise ValueError("speed_reduction_factor must lie in (0, 1)")
        if not self.initial_speed > 0:
            raise ValueError("initial_speed must be positive")
        if self.min_speed < 0:
            raise ValueError("min_speed must be non-negative")
        if not 0 <= self.acceptance_threshold <= 1:
            raise ValueError("acceptance_threshold must lie in [0, 1]")
        if self.acceptance_rule not in (ACCEPT_THRESHOLD, ACCEPT_STOCHASTIC):
            raise ValueError(f"unknown acceptance_rule {self.acceptance_rule!r}")
        if not self.fitness_scale > 0:
            raise ValueError("fitness_scale must be positive")

    @property
    def broods_per_flight(self) -> int:
        if self.max_broods_per_flight is None:
            return self.spermatheca_capacity
        return self.max_broods_per_flight


@dataclass(frozen=True, slots=True)
class Bee:
    genome: Genome
    evaluation: Evaluation

    @property
    def fitness(self) -> float:
        return self.evaluation.fitness

    @property
    def objective(self) -> float:
        return self.evaluation.penalized_objective


@dataclass(frozen=True, slots=True)
class FlightRecord:
    flight_index: int
    best_cost: float
    best_total_penalty: float
    best_penalized_objective: float
    acceptance_rate: float


@dataclass
class ColonyState:
    queens: list[Bee]  # best first
    drones: list[Bee]
    spermathecae: list[list[Genome]]  # one store per queen
    current_speed: float
    flight_index: int = 0
    best_history: list[FlightRecord] = field(default_factory=list)
    selections: int = 0  # drone selections in the latest flight
    matings: int = 0
    speed_trace: list[float] = field(default_factory=list)

    @property
    def queen(self) -> Bee:
        return self.queens[0]

    @property
    def spermatheca(self) -> list[Genome]:
        return self.spermathecae[0]

    @property
    def acceptance_rate(self) -> float:
        return self.matings / self.selections if self.selections else 0.0


@dataclass(frozen=True)
class RunResult:
    best: Bee
    best_history: tuple[FlightRecord, ...]
    flights: int
    termination: str
    problem: Problem = field(repr=False, compare=False)

    @property
    def diameters_mm(self) -> tuple[float, ...]:
        return self.problem.diameters_mm(self.best.genome)


def flight_rng(seed: int, stream: int) -> np.random.Generator:
    """Independent generator for ``stream`` (0 = initialization, k = flight k)."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(stream,))))


def _random_bees(problem: Problem, count: int, rng: np.random.Generator) -> list[Bee]:
    if count <= 0:
        return []
    genes = rng.integers(0, problem.num_alleles, size=(count, problem.num_genes))
    bees = []
    for row in genes.tolist():
        genome = tuple(row)
        bees.append(Bee(genome, problem.evaluate(genome)))
    return bees


def _rank(bees: list[Bee]) -> list[Bee]:
    # stable: ties keep generation order
    return sorted(bees, key=lambda b: b.objective)


def init_colony(params: HbmoParams, problem: Problem, rng: np.random.Generator) -> ColonyState:
    """Random ancestors, ranked by penalized objective; the fittest become queens."""
    if problem.num_alleles < 1:
        raise ValueError("empty catalog")
    bees = _rank(_random_bees(problem, params.num_queens + params.num_drones, rng))
    return ColonyState(
        queens=bees[: params.num_queens],
        drones=bees[params.num_queens :],
        spermathecae=[[] for _ in range(params.num_queens)],
        current_speed=params.initial_speed,
    )


def mating_probability(queen_fitness: float, drone_fitness: float, speed: float) -> float:
    if not speed > 0:
        raise ValueError(f"speed must be positive, got {speed}")
    return math.exp(-abs(queen_fitness - drone_fitness) / speed)


def mating_flight(colony: ColonyState, params: HbmoParams, rng: np.random.Generator) -> ColonyState:
    """Fill each queen's spermatheca from the drone pool, in place.

    A flight ends when the spermatheca is full, the speed drops below
    ``min_speed`` or no drones remain.  Mated drones leave the pool.
    """
    alpha = params.speed_reduction_factor
    scale = params.fitness_scale
    stochastic = params.acceptance_rule == ACCEPT_STOCHASTIC
    drones = colony.drones
    colony.selections = 0
    colony.matings = 0
    colony.speed_trace = []
    for qi, queen in enumerate(colony.queens):
        store = colony.spermathecae[qi]
        speed = params.initial_speed
        trace = [speed]
        queen_fitness = scale * queen.fitness
        while len(store) < params.spermatheca_capacity and speed >= params.min_speed and drones:
            k = int(rng.integers(len(drones)))
            drone = drones[k]
            p = mating_probability(queen_fitness, scale * drone.fitness, speed)
            if stochastic:
                accept = rng.random() < p
            else:
                accept = p >= params.acceptance_threshold
            colony.selections += 1
            if accept:
                store.append(drone.genome)
                drones[k] = drones[-1]
                drones.pop()
                colony.matings += 1
            speed *= alpha
            trace.append(speed)
        colony.current_speed = speed
        colony.speed_trace = trace
    return colony


def crossover(queen_genome: Sequence[int], drone_genome: Sequence[int], cut: int) -> Genome:
    """Single-point crossover: drone genes before ``cut``, queen genes from ``cut`` on."""
    n = len(queen_genome)
    if len(drone_genome) != n:
        raise ValueError("parents differ in length")
    if not 1 <= cut <= n - 1:
        raise ValueError(f"cut {cut} out of range 1..{n - 1}")
    return tuple(drone_genome[:cut]) + tuple(queen_genome[cut:])


def breed_and_replace(
    colony: ColonyState, params: HbmoParams, problem: Problem, rng: np.random.Generator
) -> bool:
    """Brood from every queen's stored sperm, then promote broods fitter than the worst queen.

    Sperm is drawn in random order, each used at most once; the spermatheca
    is empty afterwards.  Returns True when the best queen improved.
    """
    n = problem.num_genes
    limit = params.broods_per_flight
    before = colony.queen.objective
    broods: list[Bee] = []
    for qi, queen in enumerate(colony.queens):
        store = colony.spermathecae[qi]
        if store:
            order = rng.permutation(len(store))[:limit].tolist()
            if n > 1:
                cuts = rng.integers(1, n, size=len(order)).tolist()
            for j, s in enumerate(order):
                # a one-gene genome has no interior cut; the brood is the drone's gene
                genome = crossover(queen.genome, store[s], cuts[j]) if n > 1 else store[s]
                broods.append(Bee(genome, problem.evaluate(genome)))
        colony.spermathecae[qi] = []

    broods = _rank(broods)
    queens = colony.queens
    while broods and broods[0].objective < queens[-1].objective:
        queens[-1] = broods.pop(0)
        queens.sort(key=lambda b: b.objective)
    return colony.queen.objective < before


def replenish_drones(colony: ColonyState, params: HbmoParams, problem: Problem, rng: np.random.Generator) -> None:
    colony.drones.extend(_random_bees(problem, params.num_drones - len(colony.drones), rng))


def _collapsed(colony: ColonyState) -> bool:
    # no genome differs from the queen, so no brood can ever differ either
    g = colony.queen.genome
    return all(b.genome == g for b in colony.queens) and all(b.genome == g for b in colony.drones)


def run_problem(problem: Problem, params: HbmoParams) -> RunResult:
    colony = init_colony(params, problem, flight_rng(params.rng_seed, 0))
    stall = 0
    termination = STOP_MAX_FLIGHTS
    while colony.flight_index < params.max_mating_flights:
        colony.flight_index += 1
        rng = flight_rng(params.rng_seed, colony.flight_index)
        mating_flight(colony, params, rng)
        improved = breed_and_replace(colony, params, problem, rng)
        replenish_drones(colony, params, problem, rng)
        q = colony.queen
        colony.best_history.append(
            FlightRecord(
                flight_index=colony.flight_index,
                best_cost=q.evaluation.cost,
                best_total_penalty=q.evaluation.total_penalty,
                best_penalized_objective=q.objective,
                acceptance_rate=colony.acceptance_rate,
            )
        )
        stall = 0 if improved else stall + 1
        if stall >= params.stall_window or _collapsed(colony):
            termination = STOP_STALL
            break
    return RunResult(
        best=colony.queen,
        best_history=tuple(colony.best_history),
        flights=colony.flight_index,
        termination=termination,
        problem=problem,
    )


def run(
    network: Network,
    catalog: PipeCatalog,
    standards: DesignStandards,
    factors: PenaltyFactors,
    params: HbmoParams,
) -> RunResult:
    return run_problem(Problem(network, catalog, standards, factors), params)
