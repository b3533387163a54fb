"""Serial water distribution networks and discrete pipe catalogs.

A network is a single reservoir feeding a trunk of pipes in series: pipe ``i``
runs from node ``i - 1`` (the reservoir for ``i == 0``) to node ``i``.  Ordering
in the input document defines the topology; ids are opaque labels.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Sequence

__all__ = [
    "Node",
    "Pipe",
    "Network",
    "CatalogEntry",
    "PipeCatalog",
    "NetworkError",
    "parse_network",
    "parse_catalog",
    "validate",
    "network_to_dict",
    "catalog_to_list",
    "load_network",
    "load_catalog",
    "bundled_path",
]

DEFAULT_HAZEN_WILLIAMS_C = 130.0
DEFAULT_FITTING_LOSS_C = 1.0


class NetworkError(ValueError):
    """Raised when a network or catalog document is malformed or invalid."""


@dataclass(frozen=True, slots=True)
class Node:
    id: str
    demand: float  # m3/day
    elevation: float  # m above MSL


@dataclass(frozen=True, slots=True)
class Pipe:
    id: str
    length: float  # m
    terminus: str  # id of the node this pipe feeds


@dataclass(frozen=True, slots=True)
class Network:
    """A single-source serial trunk.

    Construction does not validate; use :func:`validate` (or the parsers,
    which raise on any violation).
    """

    reservoir_head: float
    pipes: tuple[Pipe, ...]
    nodes: tuple[Node, ...]
    hazen_williams_coefficient: float = DEFAULT_HAZEN_WILLIAMS_C
    fitting_loss_coefficient: float = DEFAULT_FITTING_LOSS_C
    name: str = ""
    # labelled designs (diameters in mm) carried along for comparison, e.g. an as-built trunk
    reference_designs: tuple[tuple[str, tuple[float, ...]], ...] = ()

    @property
    def num_pipes(self) -> int:
        return len(self.pipes)

    @property
    def lengths(self) -> tuple[float, ...]:
        return tuple(p.length for p in self.pipes)

    @property
    def demands(self) -> tuple[float, ...]:
        return tuple(n.demand for n in self.nodes)

    @property
    def elevations(self) -> tuple[float, ...]:
        return tuple(n.elevation for n in self.nodes)


@dataclass(frozen=True, slots=True)
class CatalogEntry:
    diameter_mm: float
    unit_cost: float  # cost units per meter


@dataclass(frozen=True)
class PipeCatalog:
    """Commercially available diameters, ascending, with unit costs."""

    entries: tuple[CatalogEntry, ...]
    _index: dict[float, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        problems = _catalog_problems(self.entries)
        if problems:
            raise NetworkError("; ".join(problems))
        object.__setattr__(
            self, "_index", {e.diameter_mm: i for i, e in enumerate(self.entries)}
        )

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, index: int) -> CatalogEntry:
        return self.entries[index]

    @property
    def diameters_mm(self) -> tuple[float, ...]:
        return tuple(e.diameter_mm for e in self.entries)

    @property
    def unit_costs(self) -> tuple[float, ...]:
        return tuple(e.unit_cost for e in self.entries)

    def index_of(self, diameter_mm: float, tol: float = 1e-6) -> int:
        """Catalog index of ``diameter_mm`` matched within ``tol`` millimeters."""
        exact = self._index.get(diameter_mm)
        if exact is not None:
            return exact
        for i, entry in enumerate(self.entries):
            if abs(entry.diameter_mm - diameter_mm) <= tol:
                return i
        sizes = ", ".join(f"{d:g}" for d in self.diameters_mm)
        raise KeyError(f"diameter {diameter_mm:g} mm is not in the catalog (valid sizes: {sizes})")


def _catalog_problems(entries: Sequence[CatalogEntry]) -> list[str]:
    problems = []
    if not entries:
        problems.append("empty catalog")
    seen: set[float] = set()
    for k, e in enumerate(entries):
        if not (math.isfinite(e.diameter_mm) and e.diameter_mm > 0):
            problems.append(f"entry {k}: diameter must be positive, got {e.diameter_mm}")
        if not (math.isfinite(e.unit_cost) and e.unit_cost > 0):
            problems.append(f"entry {k}: non-positive cost {e.unit_cost}")
        if e.diameter_mm in seen:
            problems.append(f"entry {k}: duplicate diameter {e.diameter_mm}")
        seen.add(e.diameter_mm)
    for k in range(1, len(entries)):
        prev, cur = entries[k - 1], entries[k]
        if cur.diameter_mm < prev.diameter_mm:
            problems.append(
                f"entry {k}: diameters not ascending ({prev.diameter_mm} then {cur.diameter_mm})"
            )
        elif cur.diameter_mm > prev.diameter_mm and cur.unit_cost <= prev.unit_cost:
            problems.append(
                f"entry {k}: unit cost must increase with diameter "
                f"({prev.unit_cost} at {prev.diameter_mm} mm, {cur.unit_cost} at {cur.diameter_mm} mm)"
            )
    return problems


def validate(network: Network) -> list[str]:
    """Return one message per violated invariant; empty when the network is valid."""
    report: list[str] = []
    if not network.pipes:
        report.append("empty network")
    if len(network.pipes) != len(network.nodes):
        report.append(
            f"serial topology violated: {len(network.pipes)} pipes but {len(network.nodes)} nodes"
        )
    if not (math.isfinite(network.reservoir_head) and network.reservoir_head > 0):
        report.append(f"reservoir head must be finite and positive, got {network.reservoir_head}")
    if not (math.isfinite(network.hazen_williams_coefficient) and network.hazen_williams_coefficient > 0):
        report.append(
            f"Hazen-Williams coefficient must be positive, got {network.hazen_williams_coefficient}"
        )
    if not (math.isfinite(network.fitting_loss_coefficient) and network.fitting_loss_coefficient >= 0):
        report.append(
            f"fitting loss coefficient must be non-negative, got {network.fitting_loss_coefficient}"
        )

    node_ids = [n.id for n in network.nodes]
    for dup in sorted({i for i in node_ids if node_ids.count(i) > 1}):
        report.append(f"duplicate node id {dup!r}")
    pipe_ids = [p.id for p in network.pipes]
    for dup in sorted({i for i in pipe_ids if pipe_ids.count(i) > 1}):
        report.append(f"duplicate pipe id {dup!r}")

    for node in network.nodes:
        if not math.isfinite(node.demand) or node.demand < 0:
            report.append(f"negative demand at node {node.id!r}: {node.demand}")
        if not math.isfinite(node.elevation):
            report.append(f"non-finite elevation at node {node.id!r}")

    known = set(node_ids)
    for label, diameters in network.reference_designs:
        if len(diameters) != len(network.pipes):
            report.append(
                f"reference design {label!r} has {len(diameters)} diameters for {len(network.pipes)} pipes"
            )

    for i, pipe in enumerate(network.pipes):
        if not (math.isfinite(pipe.length) and pipe.length > 0):
            report.append(f"pipe {pipe.id!r}: length must be positive, got {pipe.length}")
        if pipe.terminus not in known:
            report.append(f"pipe {pipe.id!r}: terminus {pipe.terminus!r} is not a node")
        elif i < len(network.nodes) and network.nodes[i].id != pipe.terminus:
            report.append(
                f"serial topology violated: pipe {pipe.id!r} at position {i + 1} "
                f"feeds {pipe.terminus!r}, expected {network.nodes[i].id!r}"
            )
    return report


def _require(obj: dict, key: str, where: str) -> Any:
    if key not in obj:
        raise NetworkError(f"missing field {key!r} in {where}")
    return obj[key]


def _number(value: Any, key: str, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise NetworkError(f"field {key!r} in {where} must be a number, got {value!r}")
    return value


def _load_json(source: str | bytes | dict | list) -> Any:
    if isinstance(source, (dict, list)):
        return source
    try:
        return json.loads(source)
    except json.JSONDecodeError as exc:
        raise NetworkError(f"malformed document: {exc}") from exc


def _parse_references(raw: Any) -> tuple[tuple[str, tuple[float, ...]], ...]:
    if not isinstance(raw, dict):
        raise NetworkError("malformed document: 'reference_designs' must map labels to diameter lists")
    refs = []
    for label, diameters in raw.items():
        if not isinstance(diameters, list):
            raise NetworkError(f"reference design {label!r} must be a list of diameters in mm")
        refs.append((str(label), tuple(_number(d, "diameter", f"reference design {label!r}") for d in diameters)))
    return tuple(refs)


def parse_network(source: str | bytes | dict) -> Network:
    """Build and validate a :class:`Network` from a JSON document (text or decoded)."""
    doc = _load_json(source)
    if not isinstance(doc, dict):
        raise NetworkError("malformed document: network must be a JSON object")

    raw_pipes = _require(doc, "pipes", "network")
    raw_nodes = _require(doc, "nodes", "network")
    if not isinstance(raw_pipes, list) or not isinstance(raw_nodes, list):
        raise NetworkError("malformed document: 'pipes' and 'nodes' must be arrays")
    if not raw_pipes:
        raise NetworkError("empty network")

    nodes = []
    for k, item in enumerate(raw_nodes):
        if not isinstance(item, dict):
            raise NetworkError(f"malformed document: node entry {k} is not an object")
        where = f"node {item.get('id', k)!r}"
        nodes.append(
            Node(
                id=str(_require(item, "id", where)),
                demand=_number(_require(item, "demand_m3_per_day", where), "demand_m3_per_day", where),
                elevation=_number(_require(item, "elevation_m", where), "elevation_m", where),
            )
        )

    pipes = []
    for k, item in enumerate(raw_pipes):
        if not isinstance(item, dict):
            raise NetworkError(f"malformed document: pipe entry {k} is not an object")
        where = f"pipe {item.get('id', k)!r}"
        # topology comes from position; an explicit terminus is checked against it
        terminus = item.get("terminus", nodes[k].id if k < len(nodes) else "")
        pipes.append(
            Pipe(
                id=str(_require(item, "id", where)),
                length=_number(_require(item, "length_m", where), "length_m", where),
                terminus=str(terminus),
            )
        )

    network = Network(
        reservoir_head=_number(_require(doc, "reservoir_head_m", "network"), "reservoir_head_m", "network"),
        pipes=tuple(pipes),
        nodes=tuple(nodes),
        hazen_williams_coefficient=_number(
            doc.get("hazen_williams_c", DEFAULT_HAZEN_WILLIAMS_C), "hazen_williams_c", "network"
        ),
        fitting_loss_coefficient=_number(
            doc.get("fitting_loss_c", DEFAULT_FITTING_LOSS_C), "fitting_loss_c", "network"
        ),
        name=str(doc.get("name", "")),
        reference_designs=_parse_references(doc.get("reference_designs", {})),
    )
    problems = validate(network)
    if problems:
        raise NetworkError("; ".join(problems))
    return network


def parse_catalog(source: str | bytes | list) -> PipeCatalog:
    """Build and validate a :class:`PipeCatalog` from a JSON array."""
    doc = _load_json(source)
    if not isinstance(doc, list):
        raise NetworkError("malformed document: catalog must be a JSON array")
    entries = []
    for k, item in enumerate(doc):
        if not isinstance(item, dict):
            raise NetworkError(f"malformed document: catalog entry {k} is not an object")
        where = f"catalog entry {k}"
        entries.append(
            CatalogEntry(
                diameter_mm=_number(_require(item, "diameter_mm", where), "diameter_mm", where),
                unit_cost=_number(_require(item, "unit_cost", where), "unit_cost", where),
            )
        )
    return PipeCatalog(tuple(entries))


def network_to_dict(network: Network) -> dict:
    doc: dict[str, Any] = {}
    if network.name:
        doc["name"] = network.name
    doc.update(
        reservoir_head_m=network.reservoir_head,
        hazen_williams_c=network.hazen_williams_coefficient,
        fitting_loss_c=network.fitting_loss_coefficient,
        pipes=[{"id": p.id, "length_m": p.length, "terminus": p.terminus} for p in network.pipes],
        nodes=[
            {"id": n.id, "demand_m3_per_day": n.demand, "elevation_m": n.elevation}
            for n in network.nodes
        ],
    )
    if network.reference_designs:
        doc["reference_designs"] = {label: list(d) for label, d in network.reference_designs}
    return doc


def catalog_to_list(catalog: PipeCatalog) -> list[dict]:
    return [{"diameter_mm": e.diameter_mm, "unit_cost": e.unit_cost} for e in catalog.entries]


def bundled_path(filename: str) -> Path:
    """Filesystem path of a fixture shipped in the package ``data`` directory."""
    return Path(str(resources.files("hbmo_wdn") / "data" / filename))


def load_network(path: str | Path) -> Network:
    return parse_network(Path(path).read_text(encoding="utf-8"))


def load_catalog(path: str | Path) -> PipeCatalog:
    return parse_catalog(Path(path).read_text(encoding="utf-8"))
