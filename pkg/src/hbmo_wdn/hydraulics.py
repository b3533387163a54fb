"""Hydraulic evaluation of a serial trunk for a fixed diameter assignment.

Units: friction is evaluated in SI (flow in m3/s, diameter in m).  Demands are
stored in m3/day and catalog diameters in mm; both are converted here.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .network import Network, PipeCatalog

__all__ = [
    "SECONDS_PER_DAY",
    "HW_SI_CONSTANT",
    "DiameterAssignment",
    "HydraulicState",
    "DesignStandards",
    "FeasibilityReport",
    "check_assignment",
    "compute_flows",
    "friction_gradient",
    "simulate",
    "check_feasibility",
]

SECONDS_PER_DAY = 86400.0
HW_SI_CONSTANT = 10.666
HW_FLOW_EXPONENT = 1.85
HW_DIAMETER_EXPONENT = 4.87

# One catalog index per pipe, in series order.
DiameterAssignment = tuple[int, ...]


@dataclass(frozen=True, slots=True)
class HydraulicState:
    flows: tuple[float, ...]  # m3/s per pipe
    friction_gradients: tuple[float, ...]  # m/m per pipe
    head_losses: tuple[float, ...]  # m per pipe
    heads: tuple[float, ...]  # m per node
    residual_heads: tuple[float, ...]  # m per node


@dataclass(frozen=True, slots=True)
class DesignStandards:
    min_residual_head: float = 10.0  # m
    max_friction_gradient: float = 0.005  # m/m

    def __post_init__(self) -> None:
        if self.min_residual_head < 0 or self.max_friction_gradient < 0:
            raise ValueError("design standards must be non-negative")


@dataclass(frozen=True, slots=True)
class FeasibilityReport:
    head_deficits: tuple[float, ...]  # m per node
    gradient_excesses: tuple[float, ...]  # m/m per pipe

    @property
    def feasible(self) -> bool:
        return not any(self.head_deficits) and not any(self.gradient_excesses)


def check_assignment(assignment: Sequence[int], network: Network, catalog: PipeCatalog) -> None:
    """Raise ``ValueError`` unless ``assignment`` has one valid catalog index per pipe."""
    if len(assignment) != network.num_pipes:
        raise ValueError(
            f"assignment has {len(assignment)} diameters but the network has {network.num_pipes} pipes"
        )
    n = len(catalog)
    for i, k in enumerate(assignment):
        if not 0 <= k < n:
            raise ValueError(f"pipe {network.pipes[i].id!r}: catalog index {k} out of range 0..{n - 1}")


def compute_flows(network: Network) -> tuple[float, ...]:
    """Per-pipe flow in m3/s: each pipe carries its own node's demand plus everything downstream."""
    flows = [0.0] * network.num_pipes
    carried = 0.0
    for i in range(network.num_pipes - 1, -1, -1):
        carried += network.nodes[i].demand
        flows[i] = carried / SECONDS_PER_DAY
    return tuple(flows)


def friction_gradient(flow: float, diameter: float, c_hw: float, c_ft: float = 1.0) -> float:
    """Hazen-Williams friction loss per meter of pipe (SI).

    Parameters
    ----------
    flow : float
        Volumetric flow in m3/s, non-negative.
    diameter : float
        Internal diameter in m.
    c_hw : float
        Hazen-Williams roughness coefficient.
    c_ft : float
        Fitting loss multiplier.

    Returns
    -------
    float
        Head loss gradient in m/m.
    """
    if not diameter > 0:
        raise ValueError(f"diameter must be positive, got {diameter}")
    if not c_hw > 0:
        raise ValueError(f"Hazen-Williams coefficient must be positive, got {c_hw}")
    if flow < 0:
        raise ValueError(f"flow must be non-negative, got {flow}")
    return (
        c_ft * HW_SI_CONSTANT * flow**HW_FLOW_EXPONENT
        / (c_hw**HW_FLOW_EXPONENT * diameter**HW_DIAMETER_EXPONENT)
    )


def simulate(
    network: Network,
    assignment: Sequence[int],
    catalog: PipeCatalog,
    flows: Sequence[float] | None = None,
) -> HydraulicState:
    """Flows, friction and heads for ``assignment``.

    ``flows`` may be supplied to skip recomputing them; they do not depend on
    the diameters.
    """
    check_assignment(assignment, network, catalog)
    if flows is None:
        flows = compute_flows(network)
    c_hw = network.hazen_williams_coefficient
    c_ft = network.fitting_loss_coefficient
    entries = catalog.entries

    gradients = []
    losses = []
    heads = []
    residuals = []
    head = network.reservoir_head
    for i, k in enumerate(assignment):
        g = friction_gradient(flows[i], entries[k].diameter_mm / 1000.0, c_hw, c_ft)
        loss = network.pipes[i].length * g
        head = head - loss
        gradients.append(g)
        losses.append(loss)
        heads.append(head)
        residuals.append(head - network.nodes[i].elevation)
    return HydraulicState(
        flows=tuple(flows),
        friction_gradients=tuple(gradients),
        head_losses=tuple(losses),
        heads=tuple(heads),
        residual_heads=tuple(residuals),
    )


def check_feasibility(state: HydraulicState, standards: DesignStandards) -> FeasibilityReport:
    hmin = standards.min_residual_head
    gmax = standards.max_friction_gradient
    return FeasibilityReport(
        head_deficits=tuple(max(hmin - r, 0.0) for r in state.residual_heads),
        gradient_excesses=tuple(max(g - gmax, 0.0) for g in state.friction_gradients),
    )
