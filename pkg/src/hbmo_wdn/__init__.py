"""Least-cost pipe sizing for serial gravity-fed water trunks with honey-bee mating optimization."""

from .hbmo import Bee, ColonyState, HbmoParams, RunResult, run, run_problem
from .hydraulics import (
    DesignStandards,
    HydraulicState,
    check_feasibility,
    compute_flows,
    friction_gradient,
    simulate,
)
from .network import (
    Network,
    NetworkError,
    PipeCatalog,
    bundled_path,
    load_catalog,
    load_network,
    parse_catalog,
    parse_network,
    validate,
)
from .objective import Evaluation, PenaltyFactors, Problem, evaluate, pipeline_cost

__all__ = [
    "Bee",
    "ColonyState",
    "DesignStandards",
    "Evaluation",
    "HbmoParams",
    "HydraulicState",
    "Network",
    "NetworkError",
    "PenaltyFactors",
    "PipeCatalog",
    "Problem",
    "RunResult",
    "bundled_path",
    "check_feasibility",
    "compute_flows",
    "evaluate",
    "friction_gradient",
    "load_catalog",
    "load_network",
    "parse_catalog",
    "parse_network",
    "pipeline_cost",
    "run",
    "run_problem",
    "simulate",
    "validate",
]

__version__ = "0.1.0"
