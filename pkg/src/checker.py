#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# This code is distributed under the terms and conditions
# from the Apache License, Version 2.0
#
# http://opensource.org/licenses/apache2.0.php

"""
Exhaustive stable-computation checking and randomized simulation.

On a finite configuration graph, the configurations visited infinitely often
by a fair execution form exactly a bottom strongly connected component, so a
protocol stably computes a predicate on an input iff every configuration of
every bottom SCC reachable from the input has the predicate's value as its
(defined) output.
"""

import itertools
import logging
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from .core import (
    Configuration, InputMultiset, Protocol, configurations, evaluate_predicate, initial_configuration,
    input_multisets, is_silent, output_of_configuration, successor_counts,
)
from .errors import BudgetExceeded, InvalidGraph, InvalidInput, InvalidPopulation
from .store import verdict_key

logger = logging.getLogger(__name__)

DEFAULT_NODE_BUDGET = 2_000_000
DEFAULT_MAX_STEPS = 1_000_000
DEFAULT_SEED = 1

_BATCH = 4096


class ReachabilityGraph:
    """Configurations reachable from `initial`, their strong components and the bottom ones."""

    def __init__(self, protocol: Protocol, initial: Configuration, nodes: List[Tuple[int, ...]], graph: nx.DiGraph):
        self.protocol = protocol
        self.initial = initial
        self.nodes = [Configuration(counts) for counts in nodes]
        self.graph = graph
        condensed = nx.condensation(graph)
        self.scc_of: Dict[int, int] = condensed.graph['mapping']
        self.components: Dict[int, FrozenSet[int]] = {
            scc: frozenset(data['members']) for scc, data in condensed.nodes(data=True)}
        self.bottom_sccs: FrozenSet[int] = frozenset(
            scc for scc in condensed.nodes if condensed.out_degree(scc) == 0)

    def __len__(self):
        return len(self.nodes)

    def bottom_components(self) -> List[Tuple[Configuration, ...]]:
        """Bottom SCCs as configuration tuples, in a fixed order."""
        components = [tuple(sorted((self.nodes[i] for i in self.components[scc]), key=lambda c: c.counts))
                      for scc in self.bottom_sccs]
        return sorted(components, key=lambda component: [c.counts for c in component])

    def bottom_configurations(self) -> FrozenSet[Configuration]:
        return frozenset(self.nodes[i] for scc in self.bottom_sccs for i in self.components[scc])

    def component_of(self, c: Configuration) -> Tuple[Configuration, ...]:
        index = self.nodes.index(c)
        return tuple(sorted((self.nodes[i] for i in self.components[self.scc_of[index]]), key=lambda x: x.counts))


def explore(p: Protocol, c0: Configuration, node_budget: int = DEFAULT_NODE_BUDGET) -> ReachabilityGraph:
    """Breadth-first closure of `successors` from `c0`, with strong components marked."""
    if node_budget < 1:
        raise InvalidInput('node budget must be positive, got %d' % node_budget)
    if len(c0.counts) != len(p.states):
        raise InvalidInput('configuration has %d counts, protocol has %d states' % (len(c0.counts), len(p.states)))

    index = {c0.counts: 0}
    nodes = [c0.counts]
    graph = nx.DiGraph()
    graph.add_node(0)
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for nxt in successor_counts(p, nodes[i]):
            j = index.get(nxt)
            if j is None:
                if len(nodes) >= node_budget:
                    raise BudgetExceeded('exploration from %s exceeded %d configurations'
                                         % (c0.format(p), node_budget), explored=len(nodes))
                j = index[nxt] = len(nodes)
                nodes.append(nxt)
                queue.append(j)
            graph.add_edge(i, j)
    result = ReachabilityGraph(p, c0, nodes, graph)
    logger.debug('explored %s from %s: %d configurations, %d bottom SCCs',
                 p, c0.format(p), len(nodes), len(result.bottom_sccs))
    return result


# Verdicts ####################################################################

@dataclass(frozen=True)
class Computes:
    checked: int = 0
    verdict = 'Computes'
    ok = True


@dataclass(frozen=True)
class Fails:
    """
    `input` is the input multiset (or, for properties, the initial configuration),
    `configuration` a bottom-SCC configuration whose output is wrong, `component` its whole SCC.
    Property verdicts name the violated property in `property`; `observed` is then its truth value.
    """
    input: object
    configuration: Configuration
    observed: Optional[int]
    expected: int
    component: Tuple[Configuration, ...] = field(default=())
    property: Optional[str] = None
    verdict = 'Fails'
    ok = False


def describe_verdict(p: Protocol, v) -> str:
    if v.ok:
        return 'Computes (%d inputs checked)' % v.checked
    start = v.input.format() if isinstance(v.input, InputMultiset) else v.input.format(p)
    component = ' <-> '.join(c.format(p) for c in v.component)
    if v.property is not None:
        return 'Fails on %s: bottom SCC %s contains %s where %s: %s' % (
            start, component, v.configuration.format(p), v.property, 'true' if v.observed else 'false')
    observed = 'undefined' if v.observed is None else v.observed
    return 'Fails on %s: bottom SCC %s contains %s with output %s, expected %s' % (
        start, component, v.configuration.format(p), observed, v.expected)


def verdict_to_json(p: Protocol, v) -> dict:
    if v.ok:
        return {'verdict': v.verdict, 'checked': v.checked}
    start = v.input.as_dict() if isinstance(v.input, InputMultiset) else v.input.as_dict(p)
    cex = {
        'input': start,
        'configuration': v.configuration.as_dict(p),
        'component': [c.as_dict(p) for c in v.component],
        'observed': v.observed,
        'expected': v.expected,
    }
    if v.property is not None:
        cex['property'] = v.property
    return {'verdict': v.verdict, 'counterexample': cex}


def verdict_from_json(p: Protocol, obj: dict):
    if obj['verdict'] == 'Computes':
        return Computes(obj.get('checked', 0))
    cex = obj['counterexample']
    prop = cex.get('property')
    if prop is None:
        start = InputMultiset.from_mapping(p.symbol_names, cex['input'])
    else:
        start = Configuration.from_mapping(p, cex['input'])
    return Fails(start, Configuration.from_mapping(p, cex['configuration']), cex['observed'], cex['expected'],
                 tuple(Configuration.from_mapping(p, c) for c in cex['component']), prop)


def _first_failure(graph: ReachabilityGraph, start, accept: Callable[[Configuration], Tuple[bool, object]], expected):
    for component in graph.bottom_components():
        for c in component:
            good, observed = accept(c)
            if not good:
                return Fails(start, c, observed, expected, component)
    return None


def _check_input(p: Protocol, pred, x: InputMultiset, node_budget: int, weak: bool = False):
    expected = evaluate_predicate(pred, x)
    try:
        graph = explore(p, initial_configuration(p, x), node_budget)
    except BudgetExceeded as err:
        err.input = x
        raise
    if weak:
        return _first_failure(graph, x, lambda c: _weak_accept(p, c, expected), expected)

    def accept(c):
        observed = output_of_configuration(p, c)
        return observed == expected, observed

    return _first_failure(graph, x, accept, expected)


def _weak_accept(p, c, expected):
    ones = sum(k for q, k in enumerate(c.counts) if p.output_map[q])
    if expected:
        return ones == 1, ones
    return ones == 0, ones


def _check_all(p, pred, n, node_budget, weak, workers):
    if n < 2:
        raise InvalidPopulation('a population needs at least 2 agents, got %d' % n)
    inputs = list(input_multisets(p.symbol_names, n))
    if workers > 1 and len(inputs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = pool.map(_check_input, *zip(*((p, pred, x, node_budget, weak) for x in inputs)))
            for result in results:
                if result is not None:
                    return result
    else:
        for x in inputs:
            result = _check_input(p, pred, x, node_budget, weak)
            if result is not None:
                return result
    return Computes(len(inputs))


def check_stable(p: Protocol, pred, n: int, node_budget: int = DEFAULT_NODE_BUDGET, store=None, workers: int = 1):
    """
    Does `p` stably compute `pred` on every input of size `n`?

    Returns Computes or Fails with the first counterexample in input order. When a
    VerdictStore is given, cached verdicts are reused and fresh ones recorded.
    """
    key = None
    if store is not None:
        key = verdict_key(p, pred, n)
        if key in store:
            logger.debug('cached verdict for %s at n=%d', p, n)
            return verdict_from_json(p, store[key])

    verdict = _check_all(p, pred, n, node_budget, False, workers)
    logger.info('%s vs %s at n=%d: %s', p, pred.describe(), n, verdict.verdict)
    if store is not None:
        store[key] = verdict_to_json(p, verdict)
    return verdict


def check_weak_stable(p: Protocol, pred, n: int, node_budget: int = DEFAULT_NODE_BUDGET, workers: int = 1):
    """
    Weaker acceptance: in every bottom SCC all agents output 0 when `pred` is false,
    and exactly one agent outputs 1 when it is true.
    """
    verdict = _check_all(p, pred, n, node_budget, True, workers)
    logger.info('%s vs %s (weak) at n=%d: %s', p, pred.describe(), n, verdict.verdict)
    return verdict


class ExactlyOneIn:
    """Configuration property: exactly one agent is in one of `states`."""

    def __init__(self, p: Protocol, states: Iterable):
        self.names = tuple(p.states[p.index(q)].name for q in states)
        self.indices = frozenset(p.index(q) for q in states)

    def count(self, c: Configuration) -> int:
        return sum(c.counts[q] for q in self.indices)

    def __call__(self, c: Configuration) -> bool:
        return self.count(c) == 1

    def __str__(self):
        return 'exactly one agent in {%s}' % ', '.join(self.names)


def exactly_one_in(p: Protocol, states: Iterable) -> ExactlyOneIn:
    return ExactlyOneIn(p, states)


def check_eventual_property(p: Protocol, initial_set: Iterable[Configuration], prop: Callable[[Configuration], bool],
                            node_budget: int = DEFAULT_NODE_BUDGET):
    """Computes iff from every start, every configuration of every reachable bottom SCC satisfies `prop`."""
    checked = 0
    for c0 in initial_set:
        graph = explore(p, c0, node_budget)
        failure = _first_failure(graph, c0, lambda c: (bool(prop(c)), False), True)
        if failure is not None:
            logger.info('%s: %s fails from %s', p, prop, c0.format(p))
            return replace(failure, property=str(prop))
        checked += 1
    return Computes(checked)


def leader_initial_set(p: Protocol, n: int, leader_states: Iterable) -> List[Configuration]:
    """Every configuration of size `n` with at least one agent in `leader_states`."""
    leaders = [p.index(q) for q in leader_states]
    return [Configuration(counts) for counts in configurations(len(p.states), n)
            if any(counts[q] for q in leaders)]


def leader_monotone(p: Protocol, leader_states: Iterable) -> bool:
    """No effective rule increases the number of agents in `leader_states`."""
    leaders = {p.index(q) for q in leader_states}
    return all((r1 in leaders) + (r2 in leaders) <= (q1 in leaders) + (q2 in leaders)
               for q1, q2, r1, r2 in p.relation)


# Simulation ##################################################################

@dataclass(frozen=True)
class SimulationTrace:
    steps: int
    initial: Configuration
    final: Configuration
    silent: bool
    entered_bottom: Optional[bool] = None
    entered_at: Optional[int] = None


def simulate(p: Protocol, c0: Configuration, max_steps: int = DEFAULT_MAX_STEPS, seed: int = DEFAULT_SEED,
             certified: Optional[ReachabilityGraph] = None) -> SimulationTrace:
    """
    Run uniformly random ordered-pair interactions from `c0`.

    Stops early once no applicable rule can change the configuration. With a
    `certified` reachability graph from `c0`, records whether (and when) a bottom SCC was entered.
    """
    n = c0.size
    counts = list(c0.counts)
    agents = [q for q, k in enumerate(counts) for _ in range(k)]
    rng = np.random.default_rng(seed)
    bottom = None
    if certified is not None:
        bottom = {c.counts for c in certified.bottom_configurations()}

    entered_at = 0 if bottom is not None and tuple(counts) in bottom else None
    silent = n < 2 or is_silent(p, tuple(counts))
    steps = 0
    while steps < max_steps and not silent:
        batch = min(_BATCH, max_steps - steps)
        first = rng.integers(0, n, size=batch)
        offset = rng.integers(0, n - 1, size=batch)
        choice = rng.random(size=batch)
        for i, r, u in zip(first.tolist(), offset.tolist(), choice.tolist()):
            steps += 1
            j = (i + 1 + r) % n
            q1, q2 = agents[i], agents[j]
            out = p.moves[(q1, q2)]
            r1, r2 = out[int(u * len(out))] if len(out) > 1 else out[0]
            if (r1, r2) == (q1, q2):
                continue
            agents[i], agents[j] = r1, r2
            counts[q1] -= 1
            counts[q2] -= 1
            counts[r1] += 1
            counts[r2] += 1
            state = tuple(counts)
            if entered_at is None and bottom is not None and state in bottom:
                entered_at = steps
            if is_silent(p, state):
                silent = True
                break
    final = Configuration(tuple(counts))
    entered = None if bottom is None else entered_at is not None
    logger.debug('simulated %s for %d steps from %s to %s', p, steps, c0.format(p), final.format(p))
    return SimulationTrace(steps, c0, final, silent, entered, entered_at)


@dataclass(frozen=True)
class InteractionGraph:
    """Undirected interaction graph on vertices 0..N-1 with one state index per vertex."""
    num_vertices: int
    edges: Tuple[Tuple[int, int], ...]
    states: Tuple[int, ...]

    def __post_init__(self):
        if len(self.states) != self.num_vertices:
            raise InvalidGraph('%d vertex states for %d vertices' % (len(self.states), self.num_vertices))
        for u, v in self.edges:
            if u == v:
                raise InvalidGraph('self-loop on vertex %d' % u)
            if not (0 <= u < self.num_vertices and 0 <= v < self.num_vertices):
                raise InvalidGraph('edge (%d, %d) outside 0..%d' % (u, v, self.num_vertices - 1))

    @classmethod
    def from_networkx(cls, graph: nx.Graph, states: Sequence[int]) -> 'InteractionGraph':
        graph = nx.convert_node_labels_to_integers(graph, ordering='sorted')
        return cls(graph.number_of_nodes(), tuple(sorted(tuple(sorted(e)) for e in graph.edges())), tuple(states))

    def with_states(self, states: Sequence[int]) -> 'InteractionGraph':
        return InteractionGraph(self.num_vertices, self.edges, tuple(states))

    def isolated(self) -> Tuple[int, ...]:
        touched = {v for e in self.edges for v in e}
        return tuple(v for v in range(self.num_vertices) if v not in touched)


def ring(size: int, states: Sequence[int]) -> InteractionGraph:
    return InteractionGraph.from_networkx(nx.cycle_graph(size), states)


def complete(size: int, states: Sequence[int]) -> InteractionGraph:
    return InteractionGraph.from_networkx(nx.complete_graph(size), states)


def random_states(p: Protocol, size: int, seed: int) -> Tuple[int, ...]:
    """A uniformly random state for each of `size` vertices."""
    rng = np.random.default_rng(seed)
    return tuple(rng.integers(0, len(p.states), size=size).tolist())


@dataclass(frozen=True)
class AbsorptionReport:
    absorbed: bool
    steps: int
    final: Tuple[int, ...]

    def format(self, p: Protocol) -> str:
        vector = ' '.join(p.states[q].name for q in self.final)
        if self.absorbed:
            return 'absorbed after %d steps: %s' % (self.steps, vector)
        return 'timeout after %d steps: %s' % (self.steps, vector)


def _edge_silent(p, a, b, symmetric):
    if p.moves[(a, b)] != ((a, b),):
        return False
    return symmetric or p.moves[(b, a)] == ((b, a),)


def _graph_silent(p, g, states, symmetric):
    return all(_edge_silent(p, states[u], states[v], symmetric) for u, v in g.edges)


def simulate_on_graph(p: Protocol, g: InteractionGraph, max_steps: int = DEFAULT_MAX_STEPS,
                      seed: int = DEFAULT_SEED, target: Optional[Sequence[int]] = None) -> AbsorptionReport:
    """
    Draw an edge uniformly at random and let its endpoints interact, until `target` is reached.

    Without a target, stops when no edge can change anything. An asymmetric
    protocol gets its two roles assigned by a fair coin on every draw.
    """
    if not g.edges:
        raise InvalidGraph('graph has no edges')
    symmetric = p.symmetric
    if not symmetric:
        logger.warning('%s is not symmetric, roles on each edge are assigned by a fair coin', p)
    if target is not None:
        target = tuple(p.index(q) for q in target)
        if len(target) != g.num_vertices:
            raise InvalidInput('target has %d entries for %d vertices' % (len(target), g.num_vertices))

    states = list(g.states)
    edges = g.edges
    mismatched = sum(1 for v, q in enumerate(states) if target is not None and q != target[v])
    rng = np.random.default_rng(seed)

    def done():
        if target is not None:
            return mismatched == 0
        return _graph_silent(p, g, states, symmetric)

    steps = 0
    absorbed = False
    while steps < max_steps and not absorbed:
        if done():
            absorbed = True
            break
        batch = min(_BATCH, max_steps - steps)
        picks = rng.integers(0, len(edges), size=batch)
        coins = rng.integers(0, 2, size=batch)
        choice = rng.random(size=batch)
        for e, coin, u in zip(picks.tolist(), coins.tolist(), choice.tolist()):
            steps += 1
            a, b = edges[e]
            if coin and not symmetric:
                a, b = b, a
            q1, q2 = states[a], states[b]
            out = p.moves[(q1, q2)]
            r1, r2 = out[int(u * len(out))] if len(out) > 1 else out[0]
            if (r1, r2) == (q1, q2):
                continue
            if target is not None:
                mismatched += (r1 != target[a]) - (q1 != target[a]) + (r2 != target[b]) - (q2 != target[b])
            states[a], states[b] = r1, r2
            if done():
                absorbed = True
                break
    report = AbsorptionReport(absorbed, steps, tuple(states))
    logger.debug('graph simulation of %s: %s', p, report.format(p))
    return report


def graph_absorbing_states(p: Protocol, g: InteractionGraph, budget: int = 1_000_000) -> List[Tuple[int, ...]]:
    """Every vertex-state vector on which no edge can change anything (exhaustive, small graphs only)."""
    total = len(p.states) ** g.num_vertices
    if total > budget:
        raise BudgetExceeded('%d vertex-state vectors exceed the budget of %d' % (total, budget), explored=0)
    symmetric = p.symmetric
    return [states for states in itertools.product(range(len(p.states)), repeat=g.num_vertices)
            if _graph_silent(p, g, states, symmetric)]
