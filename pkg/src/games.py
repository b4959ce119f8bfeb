#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# This code is distributed under the terms and conditions
# from the Apache License, Version 2.0
#
# http://opensource.org/licenses/apache2.0.php

"""
Symmetric games and the protocols they induce under win-stay, lose-shift.

An agent in state q meeting an agent in state c keeps q when M[q, c] >= 0 and
otherwise moves to a best response to c among the states other than q. Both
agents of a pair update independently, so the protocol derived from a matrix
is symmetric, and it is nondeterministic exactly when a best response is tied.

`recognize` answers the converse question: is there a matrix deriving a given
protocol? The conditions split per matrix column into difference constraints,
which are solved as shortest paths; a negative cycle is a certificate that no
matrix exists.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import FrozenSet, Optional, Sequence, Tuple

import networkx as nx

from .core import Protocol, StateId
from .errors import InvalidInput, PavlovError

logger = logging.getLogger(__name__)

_ANCHOR = 'zero'
_SOURCE = 'source'


@dataclass(frozen=True)
class GameMatrix:
    """
    Payoff matrix of a symmetric game, row = player state, column = opponent state.

    Entries are exact rationals already normalized to threshold 0.
    """
    states: Tuple[str, ...]
    entries: Tuple[Tuple[Fraction, ...], ...]

    def __post_init__(self):
        states = tuple(str(s) for s in self.states)
        entries = tuple(tuple(Fraction(v) for v in row) for row in self.entries)
        if len(set(states)) != len(states):
            raise InvalidInput('duplicate state names in matrix: %s' % ' '.join(states))
        if len(entries) != len(states) or any(len(row) != len(states) for row in entries):
            raise InvalidInput('matrix must be square over %d states' % len(states))
        object.__setattr__(self, 'states', states)
        object.__setattr__(self, 'entries', entries)

    @classmethod
    def from_rows(cls, states: Sequence[str], rows, delta=0) -> 'GameMatrix':
        """Build from raw payoffs and a threshold; the threshold is subtracted from every entry."""
        return cls(tuple(states), tuple(tuple(v for v in row) for row in rows)).shifted(delta)

    @property
    def dimension(self) -> int:
        return len(self.states)

    def index(self, state) -> int:
        if isinstance(state, StateId):
            state = state.index
        if isinstance(state, int):
            if not 0 <= state < self.dimension:
                raise InvalidInput('state index %d out of range' % state)
            return state
        try:
            return self.states.index(state)
        except ValueError:
            raise InvalidInput('unknown state %r' % (state,)) from None

    def value(self, row, column) -> Fraction:
        return self.entries[self.index(row)][self.index(column)]

    def column(self, column) -> Tuple[Fraction, ...]:
        c = self.index(column)
        return tuple(row[c] for row in self.entries)

    def shifted(self, delta) -> 'GameMatrix':
        delta = Fraction(delta)
        if not delta:
            return self
        return GameMatrix(self.states, tuple(tuple(v - delta for v in row) for row in self.entries))

    def scaled(self, factor) -> 'GameMatrix':
        factor = Fraction(factor)
        if factor <= 0:
            raise InvalidInput('scaling factor must be positive, got %s' % factor)
        return GameMatrix(self.states, tuple(tuple(v * factor for v in row) for row in self.entries))


def prisoners_dilemma(reward, sucker, temptation, punishment, delta, states=('C', 'D')) -> GameMatrix:
    """
    Prisoner's dilemma payoffs with a lose-shift threshold.

    With `reward` and `temptation` at or above `delta` and the other two below,
    an agent keeps its move after R or T points and switches after P or S.
    """
    if not temptation > reward > punishment > sucker:
        raise InvalidInput('a prisoner\'s dilemma needs T > R > P > S')
    return GameMatrix.from_rows(states, [[reward, sucker], [temptation, punishment]], delta)


def best_response(m: GameMatrix, opponent, excluded=None) -> FrozenSet[StateId]:
    """All states maximizing the payoff against `opponent`, among states other than `excluded`."""
    c = m.index(opponent)
    skip = None if excluded is None else m.index(excluded)
    return frozenset(StateId(z, m.states[z]) for z in _argmax(m.column(c), skip))


def _argmax(values, skip):
    candidates = [z for z in range(len(values)) if z != skip]
    if not candidates:
        return ()
    best = max(values[z] for z in candidates)
    return tuple(z for z in candidates if values[z] == best)


def column_response(values: Sequence) -> Tuple[FrozenSet[int], ...]:
    """
    Successor sets S(q, c) for every q, given the column of payoffs against c.

    A state with a non-negative payoff stays; otherwise it moves to every tied
    best response among the other states. With no other state to move to it stays.
    """
    response = []
    for q, value in enumerate(values):
        if value >= 0:
            response.append(frozenset((q,)))
        else:
            response.append(frozenset(_argmax(values, q)) or frozenset((q,)))
    return tuple(response)


@dataclass(frozen=True)
class Dressing:
    """Input alphabet, input map and output map to put around a derived rule set."""
    alphabet: Tuple[str, ...]
    input_map: Tuple[int, ...]
    output_map: Tuple[int, ...]

    @classmethod
    def trivial(cls, states: Sequence[str]) -> 'Dressing':
        """One input symbol per state, mapped to it; every output 0."""
        return cls(tuple(states), tuple(range(len(states))), (0,) * len(states))

    @classmethod
    def of(cls, p: Protocol) -> 'Dressing':
        return cls(p.symbol_names, p.input_map, p.output_map)


def derive(m: GameMatrix, dressing: Optional[Dressing] = None, name: Optional[str] = None) -> Protocol:
    """The protocol associated to the game `m` under win-stay, lose-shift."""
    if dressing is None:
        dressing = Dressing.trivial(m.states)
    if len(dressing.output_map) != m.dimension:
        raise InvalidInput('dressing has %d outputs for %d states' % (len(dressing.output_map), m.dimension))

    size = m.dimension
    responses = [column_response(m.column(c)) for c in range(size)]
    rules = []
    for q1 in range(size):
        for q2 in range(size):
            for r1 in responses[q2][q1]:
                for r2 in responses[q1][q2]:
                    if (r1, r2) != (q1, q2):
                        rules.append((q1, q2, r1, r2))
    p = Protocol(m.states, dressing.alphabet, dressing.input_map, dressing.output_map, rules, name=name)
    logger.debug('derived %r from a %dx%d matrix', p, size, size)
    return p


# Recognition ##################################################################

@dataclass(frozen=True)
class Constraint:
    """
    One linear condition on the entries of a single matrix column.

    kinds: 'nonneg' M[row,c] >= 0; 'negative' M[row,c] <= -1;
    'dominates' M[row,c] - M[other,c] >= 1; 'equal' M[row,c] = M[other,c].
    """
    kind: str
    column: int
    row: int
    other: Optional[int] = None
    provenance: str = ''

    def edges(self):
        """Edges (u, v, w) meaning pot[v] <= pot[u] + w, where pot = -M and the anchor node is 0."""
        if self.kind == 'nonneg':
            return [(_ANCHOR, self.row, 0)]
        if self.kind == 'negative':
            return [(self.row, _ANCHOR, -1)]
        if self.kind == 'dominates':
            return [(self.other, self.row, -1)]
        if self.kind == 'equal':
            return [(self.other, self.row, 0), (self.row, self.other, 0)]
        raise PavlovError('unknown constraint kind %r' % (self.kind,))

    @property
    def slack(self) -> int:
        """How much the constraint forces its left side above its right side."""
        return 1 if self.kind in ('negative', 'dominates') else 0

    def describe(self, states: Sequence[str]) -> str:
        c = states[self.column]
        entry = 'M[%s,%s]' % (states[self.row], c)
        if self.kind == 'nonneg':
            text = '%s >= 0' % entry
        elif self.kind == 'negative':
            text = '%s <= -1' % entry
        elif self.kind == 'dominates':
            text = '%s - M[%s,%s] >= 1' % (entry, states[self.other], c)
        else:
            text = '%s = M[%s,%s]' % (entry, states[self.other], c)
        if self.provenance:
            text += '  (from %s)' % self.provenance
        return text


@dataclass(frozen=True)
class ConstraintSystem:
    states: Tuple[str, ...]
    constraints: Tuple[Constraint, ...]

    def column(self, c: int) -> Tuple[Constraint, ...]:
        return tuple(con for con in self.constraints if con.column == c)


@dataclass(frozen=True)
class Pavlovian:
    witness: GameMatrix
    kind = 'Pavlovian'
    pavlovian = True

    def describe(self) -> str:
        return 'Pavlovian'


@dataclass(frozen=True)
class NotSymmetric:
    rule: Tuple[str, str, str, str]
    missing_mirror: Tuple[str, str, str, str]
    kind = 'NotSymmetric'
    pavlovian = False

    def describe(self) -> str:
        return 'NotSymmetric: %s %s -> %s %s is effective but %s %s -> %s %s is not' % (
            self.rule + self.missing_mirror)


@dataclass(frozen=True)
class NotProduct:
    """Successors of `pair` are not all combinations of each agent's own moves."""
    pair: Tuple[str, str]
    kind = 'NotProduct'
    pavlovian = False

    def describe(self) -> str:
        return 'NotProduct: successors of %s %s do not factor into independent moves' % self.pair


@dataclass(frozen=True)
class Infeasible:
    """Column `column` admits no values; `certificate` is a cycle of constraints whose chained sum is contradictory."""
    states: Tuple[str, ...]
    column: str
    certificate: Tuple[Constraint, ...]
    kind = 'Infeasible'
    pavlovian = False

    @property
    def slack(self) -> int:
        return sum(con.slack for con in self.certificate)

    def describe(self) -> str:
        lines = ['Infeasible: column %s, cycle of %d constraints with total slack %d'
                 % (self.column, len(self.certificate), self.slack)]
        lines.extend('  ' + con.describe(self.states) for con in self.certificate)
        return '\n'.join(lines)


def successor_sets(p: Protocol, q: int, c: int) -> FrozenSet[int]:
    """S(q, c): every state an agent in q can move to when meeting c."""
    return frozenset(r1 for r1, _ in p.effective[(q, c)])


def build_constraints(p: Protocol) -> ConstraintSystem:
    """Conditions on a matrix for it to derive `p`, assuming `p` is symmetric and factors per agent."""
    size = len(p.states)
    constraints = []
    for c in range(size):
        for q in range(size):
            moves = p.moves[(q, c)]
            targets = sorted(successor_sets(p, q, c))

            def origin(target):
                return p.format_rule(next((q, c, r1, r2) for r1, r2 in moves if r1 == target))

            if q in targets:
                constraints.append(Constraint('nonneg', c, q, provenance=origin(q)))
                if len(targets) > 1:
                    # staying and switching can not both follow from one payoff
                    switch = next(t for t in targets if t != q)
                    constraints.append(Constraint('negative', c, q, provenance=origin(switch)))
                continue
            constraints.append(Constraint('negative', c, q, provenance=origin(targets[0])))
            for i, s in enumerate(targets):
                for t in targets[i + 1:]:
                    constraints.append(Constraint('equal', c, s, t, provenance=origin(s)))
                for z in range(size):
                    if z != q and z not in targets:
                        constraints.append(Constraint('dominates', c, s, z, provenance=origin(s)))
    return ConstraintSystem(p.state_names, tuple(constraints))


def _solve_column(constraints, size):
    """Integer column values, or a negative cycle of constraints."""
    graph = nx.DiGraph()
    graph.add_node(_ANCHOR)
    graph.add_nodes_from(range(size))
    for con in constraints:
        for u, v, w in con.edges():
            if graph.has_edge(u, v) and graph[u][v]['weight'] <= w:
                continue
            graph.add_edge(u, v, weight=w, constraint=con)
    for node in list(graph.nodes):
        graph.add_edge(_SOURCE, node, weight=0)

    try:
        cycle = nx.find_negative_cycle(graph, _SOURCE)
    except nx.NetworkXError:
        distance = nx.single_source_bellman_ford_path_length(graph, _SOURCE)
        return {q: distance[_ANCHOR] - distance[q] for q in range(size)}, None
    return None, tuple(graph[u][v]['constraint'] for u, v in zip(cycle, cycle[1:]))


def recognize(p: Protocol):
    """
    Decide whether `p` is derived from some game.

    Returns Pavlovian(witness), NotSymmetric, NotProduct or Infeasible(certificate).
    """
    violation = p.symmetry_violation()
    if violation is not None:
        rule, mirror = violation
        names = p.state_names
        verdict = NotSymmetric(tuple(names[q] for q in rule), tuple(names[q] for q in mirror))
        logger.info('%s: %s', p, verdict.describe())
        return verdict

    for (q1, q2), out in sorted(p.effective.items()):
        product = {(r1, r2) for r1 in successor_sets(p, q1, q2) for r2 in successor_sets(p, q2, q1)}
        if product != set(out):
            verdict = NotProduct((p.states[q1].name, p.states[q2].name))
            logger.info('%s: %s', p, verdict.describe())
            return verdict

    size = len(p.states)
    system = build_constraints(p)
    columns = []
    for c in range(size):
        values, cycle = _solve_column(system.column(c), size)
        if cycle is not None:
            verdict = Infeasible(p.state_names, p.states[c].name, cycle)
            logger.info('%s: infeasible column %s', p, p.states[c].name)
            return verdict
        columns.append(values)

    witness = GameMatrix(p.state_names, tuple(tuple(columns[c][q] for c in range(size)) for q in range(size)))
    if derive(witness, Dressing.of(p)).relation != p.relation:
        raise PavlovError('witness for %s does not reproduce its rules' % p)
    logger.info('%s: Pavlovian', p)
    return Pavlovian(witness)


def two_state_matrix(p: Protocol) -> GameMatrix:
    """The +1/-1 matrix of a symmetric deterministic 2-state protocol: +1 where the player keeps its state."""
    if len(p.states) != 2:
        raise InvalidInput('%s has %d states, expected 2' % (p, len(p.states)))
    if not p.deterministic:
        raise InvalidInput('%s is not deterministic' % p)
    if not p.symmetric:
        raise InvalidInput('%s is not symmetric' % p)
    rows = [[1 if successor_sets(p, q1, q2) == {q1} else -1 for q2 in range(2)] for q1 in range(2)]
    return GameMatrix(p.state_names, rows)
