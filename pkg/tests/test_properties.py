import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from hbmo_wdn.hbmo import HbmoParams, crossover, flight_rng, init_colony, mating_flight, run_problem
from hbmo_wdn.hydraulics import DesignStandards, check_feasibility, compute_flows, friction_gradient, simulate
from hbmo_wdn.network import CatalogEntry, Network, Node, Pipe, PipeCatalog
from hbmo_wdn.objective import PenaltyFactors, Problem, nodal_penalty, pipe_penalty, pipeline_cost

finite = dict(allow_nan=False, allow_infinity=False)


@st.composite
def networks(draw, max_pipes=8):
    n = draw(st.integers(1, max_pipes))
    nodes = tuple(
        Node(f"N{i}", draw(st.floats(0, 5000, **finite)), draw(st.floats(0, 200, **finite))) for i in range(n)
    )
    pipes = tuple(Pipe(f"P{i}", draw(st.floats(1, 3000, **finite)), f"N{i}") for i in range(n))
    head = draw(st.floats(50, 400, **finite))
    return Network(head, pipes, nodes, draw(st.floats(80, 150, **finite)), draw(st.floats(0.5, 2, **finite)))


@st.composite
def catalogs(draw, max_size=6):
    size = draw(st.integers(1, max_size))
    diameters = sorted(draw(st.sets(st.integers(10, 600), min_size=size, max_size=size)))
    costs = sorted(draw(st.sets(st.integers(1, 500), min_size=size, max_size=size)))
    return PipeCatalog(tuple(CatalogEntry(float(d), c) for d, c in zip(diameters, costs)))


@st.composite
def instances(draw):
    net = draw(networks())
    cat = draw(catalogs())
    genome = tuple(draw(st.lists(st.integers(0, len(cat) - 1), min_size=net.num_pipes, max_size=net.num_pipes)))
    return net, cat, genome


@settings(max_examples=300, deadline=None)
@given(st.data())
def test_crossover_gene_provenance(data):
    n = data.draw(st.integers(2, 20))
    queen = tuple(data.draw(st.lists(st.integers(0, 9), min_size=n, max_size=n)))
    drone = tuple(data.draw(st.lists(st.integers(0, 9), min_size=n, max_size=n)))
    cut = data.draw(st.integers(1, n - 1))
    brood = crossover(queen, drone, cut)
    assert len(brood) == n
    assert brood[:cut] == drone[:cut]
    assert brood[cut:] == queen[cut:]
    assert set(brood) <= set(queen) | set(drone)


@settings(max_examples=200, deadline=None)
@given(
    s0=st.floats(0.1, 10, **finite),
    alpha=st.floats(0.5, 0.99, **finite),
    capacity=st.integers(1, 40),
    drones=st.integers(1, 60),
    threshold=st.floats(0, 1, **finite),
    seed=st.integers(0, 2**32 - 1),
)
def test_flight_speed_and_capacity(s0, alpha, capacity, drones, threshold, seed):
    params = HbmoParams(
        num_drones=drones,
        spermatheca_capacity=capacity,
        initial_speed=s0,
        speed_reduction_factor=alpha,
        acceptance_threshold=threshold,
        min_speed=0.05,
    )
    problem = _toy_problem()
    colony = init_colony(params, problem, flight_rng(seed, 0))
    pool = [d.genome for d in colony.drones]
    mating_flight(colony, params, np.random.default_rng(seed))
    assert len(colony.spermatheca) <= capacity
    assert len(colony.speed_trace) == colony.selections + 1
    for t, s in enumerate(colony.speed_trace):
        assert math.isclose(s, s0 * alpha**t, rel_tol=1e-12)
    assert len(colony.drones) + len(colony.spermatheca) == len(pool)


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), npf=st.floats(0, 1e4, **finite))
def test_best_history_monotone_and_genomes_closed(seed, npf):
    problem = Problem(_TOY.network, _TOY.catalog, DesignStandards(), PenaltyFactors(npf, 1e7))
    params = HbmoParams(num_drones=20, spermatheca_capacity=8, max_mating_flights=15, stall_window=15, rng_seed=seed)
    result = run_problem(problem, params)
    hist = [r.best_penalized_objective for r in result.best_history]
    assert all(a >= b for a, b in zip(hist, hist[1:]))
    assert result.best.objective == min(hist)
    assert all(0 <= g < len(problem.catalog) for g in result.best.genome)
    for genome in problem._cache:
        assert all(0 <= g < len(problem.catalog) for g in genome)


@settings(max_examples=200, deadline=None)
@given(net=networks())
def test_flow_conservation(net):
    q = compute_flows(net)
    for i in range(net.num_pipes - 1):
        diff = q[i] - q[i + 1]
        assert math.isclose(diff, net.nodes[i].demand / 86400, rel_tol=1e-9, abs_tol=1e-12)
    assert q[-1] == net.nodes[-1].demand / 86400


@settings(max_examples=200, deadline=None)
@given(inst=instances())
def test_head_telescoping_and_residuals(inst):
    net, cat, genome = inst
    state = simulate(net, genome, cat)
    head = net.reservoir_head
    for f in state.head_losses:
        head -= f
    assert state.heads[-1] == head
    for h, r, node in zip(state.heads, state.residual_heads, net.nodes):
        assert r == h - node.elevation
    assert all(a >= b for a, b in zip(state.heads, state.heads[1:]))
    assert all(a >= b for a, b in zip(state.flows, state.flows[1:]))


@settings(max_examples=200, deadline=None)
@given(
    deficits=st.lists(st.floats(0, 100, allow_subnormal=False, **finite), max_size=12),
    excesses=st.lists(st.floats(0, 0.1, allow_subnormal=False, **finite), max_size=12),
    npf=st.floats(0, 1e5, allow_subnormal=False, **finite),
    ppf=st.floats(0, 1e8, allow_subnormal=False, **finite),
    k=st.floats(0, 10, allow_subnormal=False, **finite),
)
def test_penalty_linearity(deficits, excesses, npf, ppf, k):
    # subnormal products lose the last bits, hence the absolute floor
    assert math.isclose(nodal_penalty(deficits, k * npf), k * nodal_penalty(deficits, npf), rel_tol=1e-12, abs_tol=1e-200)
    assert math.isclose(pipe_penalty(excesses, k * ppf), k * pipe_penalty(excesses, ppf), rel_tol=1e-12, abs_tol=1e-200)


@settings(max_examples=150, deadline=None)
@given(inst=instances(), data=st.data())
def test_upsizing_monotone(inst, data):
    net, cat, genome = inst
    if len(cat) < 2:
        return
    i = data.draw(st.integers(0, net.num_pipes - 1))
    if genome[i] == len(cat) - 1:
        return
    k = data.draw(st.integers(genome[i] + 1, len(cat) - 1))
    bigger = genome[:i] + (k,) + genome[i + 1 :]
    std = DesignStandards()
    a = check_feasibility(simulate(net, genome, cat), std)
    b = check_feasibility(simulate(net, bigger, cat), std)
    assert all(y <= x for x, y in zip(a.head_deficits, b.head_deficits))
    assert all(y <= x for x, y in zip(a.gradient_excesses, b.gradient_excesses))
    assert pipeline_cost(bigger, net, cat) > pipeline_cost(genome, net, cat)


@settings(max_examples=150, deadline=None)
@given(inst=instances(), data=st.data())
def test_flows_ignore_diameters_and_fitness_order(inst, data):
    net, cat, genome = inst
    other = tuple(data.draw(st.lists(st.integers(0, len(cat) - 1), min_size=net.num_pipes, max_size=net.num_pipes)))
    assert simulate(net, genome, cat).flows == simulate(net, other, cat).flows
    problem = Problem(net, cat)
    a, b = problem.evaluate(genome), problem.evaluate(other)
    assert (a.penalized_objective < b.penalized_objective) == (a.fitness > b.fitness)
    for ev, g in ((a, genome), (b, other)):
        rep = check_feasibility(problem.simulate(g), problem.standards)
        assert ev.feasible == rep.feasible == (ev.total_penalty == 0)


@settings(max_examples=200, deadline=None)
@given(q=st.floats(1e-6, 0.1, **finite), d=st.floats(0.02, 0.3, **finite), f=st.floats(1.0001, 3, **finite))
def test_gradient_monotone(q, d, f):
    assert friction_gradient(q * f, d, 130) > friction_gradient(q, d, 130)
    assert friction_gradient(q, d * f, 130) < friction_gradient(q, d, 130)


class _TOY:
    network = Network(
        100.0,
        (Pipe("T1", 500.0, "A"), Pipe("T2", 400.0, "B"), Pipe("T3", 300.0, "C")),
        (Node("A", 400.0, 80.0), Node("B", 250.0, 86.0), Node("C", 150.0, 84.0)),
    )
    catalog = PipeCatalog((CatalogEntry(76.2, 8), CatalogEntry(101.6, 11), CatalogEntry(152.4, 16)))


def _toy_problem():
    return Problem(_TOY.network, _TOY.catalog)
