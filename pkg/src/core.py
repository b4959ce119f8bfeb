#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# This code is distributed under the terms and conditions
# from the Apache License, Version 2.0
#
# http://opensource.org/licenses/apache2.0.php

"""
Population protocols, their configurations and predicates over inputs.

A protocol is the quintuple (states, input alphabet, input map, output map,
interaction rules). Rules are ordered quadruples ``(q1, q2, q1', q2')``; any
pair of states with no listed rule keeps both agents unchanged::

>>> p = Protocol.build(['0', '1'], {'0': '0', '1': '1'}, {'0': 0, '1': 1},
...                    [('0', '1', '1', '1'), ('1', '0', '1', '1')], name='or')
>>> c = initial_configuration(p, InputMultiset.from_mapping(p.symbol_names, {'0': 2, '1': 1}))
>>> sorted(s.format(p) for s in successors(p, c))
['{0:1, 1:2}', '{0:2, 1:1}']

Configurations are count vectors: agents are anonymous, so two configurations
with equal counts are the same configuration.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Iterator, Mapping, Optional, Sequence, Tuple

from .errors import InvalidInput, InvalidPopulation

logger = logging.getLogger(__name__)

#: Output of a configuration whose agents disagree.
UNDEFINED = None

Pair = Tuple[int, int]
Rule = Tuple[int, int, int, int]

_FORBIDDEN_IN_NAMES = (':', '=', ',', '->', '#', '(', ')')


@dataclass(frozen=True, order=True)
class StateId:
    index: int
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True, order=True)
class SymbolId:
    index: int
    name: str

    def __str__(self):
        return self.name


def _check_names(names, what):
    names = tuple(str(name) for name in names)
    if not names:
        raise InvalidInput('at least one %s is required' % what)
    for name in names:
        if not name or name.split() != [name] or any(bad in name for bad in _FORBIDDEN_IN_NAMES):
            raise InvalidInput('invalid %s name %r' % (what, name))
    if len(set(names)) != len(names):
        raise InvalidInput('duplicate %s names in %s' % (what, ' '.join(names)))
    return names


class Protocol:
    """
    A population protocol over dense state indices.

    `input_map[s]` is the state index of input symbol `s`, `output_map[q]` the
    output bit of state `q`; `rules` are index quadruples as listed by the
    author. The effective relation adds the identity rule for every pair with
    no listed rule; equality and hashing use the effective relation, so listing
    identity rules explicitly or not makes no difference.
    """

    def __init__(self, states: Sequence[str], alphabet: Sequence[str], input_map: Sequence[int],
                 output_map: Sequence[int], rules: Iterable[Rule], name: Optional[str] = None):
        state_names = _check_names(states, 'state')
        symbol_names = _check_names(alphabet, 'input symbol')
        size = len(state_names)

        input_map = tuple(int(q) for q in input_map)
        if len(input_map) != len(symbol_names):
            raise InvalidInput('input map must be total: %d symbols, %d images' % (len(symbol_names), len(input_map)))
        output_map = tuple(int(b) for b in output_map)
        if len(output_map) != size:
            raise InvalidInput('output map must be total: %d states, %d outputs' % (size, len(output_map)))
        if any(b not in (0, 1) for b in output_map):
            raise InvalidInput('outputs must be bits, got %s' % (output_map,))
        if any(not 0 <= q < size for q in input_map):
            raise InvalidInput('input map refers to unknown states: %s' % (input_map,))

        listed = frozenset(tuple(int(q) for q in rule) for rule in rules)
        for rule in listed:
            if len(rule) != 4 or any(not 0 <= q < size for q in rule):
                raise InvalidInput('rule %s refers to unknown states' % (rule,))

        self.name = name
        self.states = tuple(StateId(i, n) for i, n in enumerate(state_names))
        self.alphabet = tuple(SymbolId(i, n) for i, n in enumerate(symbol_names))
        self.input_map = input_map
        self.output_map = output_map
        self.rules = listed
        self._state_index = {n: i for i, n in enumerate(state_names)}
        self._symbol_index = {n: i for i, n in enumerate(symbol_names)}

        effective: Dict[Pair, set] = {}
        for q1, q2, r1, r2 in listed:
            effective.setdefault((q1, q2), set()).add((r1, r2))
        self.effective: Dict[Pair, FrozenSet[Pair]] = {
            (q1, q2): frozenset(effective.get((q1, q2), {(q1, q2)}))
            for q1 in range(size) for q2 in range(size)
        }
        # sorted tuples keep schedulers reproducible for a given seed
        self.moves: Dict[Pair, Tuple[Pair, ...]] = {pair: tuple(sorted(out)) for pair, out in self.effective.items()}
        self.relation: FrozenSet[Rule] = frozenset(
            (q1, q2, r1, r2) for (q1, q2), out in self.effective.items() for r1, r2 in out)

    @classmethod
    def build(cls, states: Sequence[str], inputs: Mapping[str, str], outputs: Mapping[str, int],
              rules: Iterable[Tuple[str, str, str, str]], name: Optional[str] = None) -> 'Protocol':
        """Construct from names. `inputs` maps symbol -> state, its order fixes the alphabet order."""
        states = _check_names(states, 'state')
        index = {n: i for i, n in enumerate(states)}

        def lookup(state):
            try:
                return index[state]
            except KeyError:
                raise InvalidInput('unknown state %r' % (state,)) from None

        missing = [q for q in states if q not in outputs]
        if missing:
            raise InvalidInput('output map must be total, missing: %s' % ' '.join(missing))
        unknown = [q for q in outputs if q not in index]
        if unknown:
            raise InvalidInput('outputs given for unknown states: %s' % ' '.join(unknown))
        return cls(
            states,
            list(inputs),
            [lookup(q) for q in inputs.values()],
            [outputs[q] for q in states],
            [tuple(lookup(q) for q in rule) for rule in rules],
            name=name,
        )

    def with_dressing(self, alphabet: Sequence[str], input_map: Sequence[int], output_map: Sequence[int],
                      name: Optional[str] = None) -> 'Protocol':
        """Same rules, different input alphabet, input map and output map."""
        return Protocol(self.state_names, alphabet, input_map, output_map, self.rules, name=name or self.name)

    @property
    def state_names(self) -> Tuple[str, ...]:
        return tuple(s.name for s in self.states)

    @property
    def symbol_names(self) -> Tuple[str, ...]:
        return tuple(s.name for s in self.alphabet)

    def index(self, state) -> int:
        """Index of a state given by name or index."""
        if isinstance(state, StateId):
            state = state.index
        if isinstance(state, int):
            if not 0 <= state < len(self.states):
                raise InvalidInput('state index %d out of range' % state)
            return state
        try:
            return self._state_index[state]
        except KeyError:
            raise InvalidInput('unknown state %r' % (state,)) from None

    def symbol_index(self, symbol) -> int:
        try:
            return self._symbol_index[symbol]
        except KeyError:
            raise InvalidInput('unknown input symbol %r' % (symbol,)) from None

    @property
    def deterministic(self) -> bool:
        return all(len(out) == 1 for out in self.effective.values())

    @property
    def symmetric(self) -> bool:
        return self.symmetry_violation() is None

    def symmetry_violation(self) -> Optional[Tuple[Rule, Rule]]:
        """First effective rule whose mirror is missing, with that mirror; None when symmetric."""
        for q1, q2, r1, r2 in sorted(self.relation):
            if (r2, r1) not in self.effective[(q2, q1)]:
                return (q1, q2, r1, r2), (q2, q1, r2, r1)
        return None

    def listed_rules(self) -> Tuple[Tuple[str, str, str, str], ...]:
        names = self.state_names
        return tuple(tuple(names[q] for q in rule) for rule in sorted(self.rules))

    def format_rule(self, rule: Rule) -> str:
        q1, q2, r1, r2 = (self.states[q].name for q in rule)
        return '%s %s -> %s %s' % (q1, q2, r1, r2)

    def _key(self):
        return self.state_names, self.symbol_names, self.input_map, self.output_map, self.relation

    def __eq__(self, other):
        if not isinstance(other, Protocol):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __str__(self):
        return 'Protocol %s' % (self.name or '<unnamed>')

    def __repr__(self):
        return '<Protocol %s |Q|=%d |Sigma|=%d rules=%d>' % (
            self.name or '<unnamed>', len(self.states), len(self.alphabet), len(self.rules))


@dataclass(frozen=True)
class InputMultiset:
    """Counts of each input symbol; `alphabet` names the symbols in index order."""
    alphabet: Tuple[str, ...]
    counts: Tuple[int, ...]

    def __post_init__(self):
        if len(self.alphabet) != len(self.counts):
            raise InvalidInput('input counts do not match the alphabet')
        if any(k < 0 for k in self.counts):
            raise InvalidInput('input counts must be non-negative')

    @classmethod
    def from_mapping(cls, alphabet: Sequence[str], counts: Mapping[str, int]) -> 'InputMultiset':
        alphabet = tuple(alphabet)
        unknown = set(counts) - set(alphabet)
        if unknown:
            raise InvalidInput('unknown input symbols: %s' % ' '.join(sorted(unknown)))
        return cls(alphabet, tuple(int(counts.get(s, 0)) for s in alphabet))

    @property
    def size(self) -> int:
        return sum(self.counts)

    def count(self, symbol: str) -> int:
        try:
            return self.counts[self.alphabet.index(symbol)]
        except ValueError:
            raise InvalidInput('predicate refers to unknown input symbol %r' % (symbol,)) from None

    def format(self) -> str:
        return '{%s}' % ', '.join('%s:%d' % (s, k) for s, k in zip(self.alphabet, self.counts) if k)

    def as_dict(self) -> Dict[str, int]:
        return {s: k for s, k in zip(self.alphabet, self.counts) if k}


@dataclass(frozen=True)
class Configuration:
    """A multiset of states as a count vector indexed by state index."""
    counts: Tuple[int, ...]

    @property
    def size(self) -> int:
        return sum(self.counts)

    @classmethod
    def from_mapping(cls, p: Protocol, counts: Mapping[str, int]) -> 'Configuration':
        vector = [0] * len(p.states)
        for state, k in counts.items():
            if k < 0:
                raise InvalidInput('negative count for state %r' % (state,))
            vector[p.index(state)] += int(k)
        return cls(tuple(vector))

    def format(self, p: Protocol) -> str:
        return '{%s}' % ', '.join('%s:%d' % (s.name, k) for s, k in zip(p.states, self.counts) if k)

    def as_dict(self, p: Protocol) -> Dict[str, int]:
        return {s.name: k for s, k in zip(p.states, self.counts) if k}

    def support(self) -> Tuple[int, ...]:
        return tuple(q for q, k in enumerate(self.counts) if k)


def _present(counts, q1, q2):
    if q1 == q2:
        return counts[q1] >= 2
    return counts[q1] >= 1 and counts[q2] >= 1


def _check_configuration(p, c):
    if len(c.counts) != len(p.states):
        raise InvalidInput('configuration has %d counts, protocol has %d states' % (len(c.counts), len(p.states)))


def output_of_configuration(p: Protocol, c: Configuration) -> Optional[int]:
    """0 or 1 when every present agent agrees, otherwise UNDEFINED."""
    _check_configuration(p, c)
    bits = {p.output_map[q] for q in c.support()}
    if len(bits) == 1:
        return bits.pop()
    return UNDEFINED


def initial_configuration(p: Protocol, x: InputMultiset) -> Configuration:
    if x.alphabet != p.symbol_names:
        raise InvalidInput('input is over %s, protocol alphabet is %s' % (x.alphabet, p.symbol_names))
    if x.size < 2:
        raise InvalidPopulation('a population needs at least 2 agents, got %d' % x.size)
    counts = [0] * len(p.states)
    for symbol, k in enumerate(x.counts):
        counts[p.input_map[symbol]] += k
    return Configuration(tuple(counts))


def successors(p: Protocol, c: Configuration) -> FrozenSet[Configuration]:
    """Configurations reachable from `c` by one interaction of an ordered pair of agents."""
    _check_configuration(p, c)
    return frozenset(Configuration(counts) for counts in successor_counts(p, c.counts))


def successor_counts(p: Protocol, counts: Tuple[int, ...]) -> Iterator[Tuple[int, ...]]:
    """Count-vector form of `successors`, may yield duplicates."""
    for (q1, q2), out in p.moves.items():
        if not _present(counts, q1, q2):
            continue
        for r1, r2 in out:
            if (r1, r2) in ((q1, q2), (q2, q1)):
                yield counts
                continue
            nxt = list(counts)
            nxt[q1] -= 1
            nxt[q2] -= 1
            nxt[r1] += 1
            nxt[r2] += 1
            yield tuple(nxt)


def is_silent(p: Protocol, counts: Tuple[int, ...]) -> bool:
    """True when no applicable effective rule changes the configuration."""
    for (q1, q2), out in p.moves.items():
        if _present(counts, q1, q2):
            for r1, r2 in out:
                if sorted((r1, r2)) != sorted((q1, q2)):
                    return False
    return True


def configurations(num_states: int, n: int) -> Iterator[Tuple[int, ...]]:
    """All count vectors of size `n` over `num_states` states, in a fixed order."""
    for combo in itertools.combinations_with_replacement(range(num_states), n):
        counts = [0] * num_states
        for q in combo:
            counts[q] += 1
        yield tuple(counts)


def input_multisets(alphabet: Sequence[str], n: int) -> Iterator[InputMultiset]:
    alphabet = tuple(alphabet)
    for counts in configurations(len(alphabet), n):
        yield InputMultiset(alphabet, counts)


# Predicates ##################################################################

def _linear(coefficients, x):
    return sum(coef * x.count(symbol) for symbol, coef in coefficients)


def _describe_linear(coefficients):
    parts = []
    for symbol, coef in coefficients:
        if coef == 0:
            continue
        term = 'count(%s)' % symbol if abs(coef) == 1 else '%d*count(%s)' % (abs(coef), symbol)
        if not parts:
            parts.append(term if coef > 0 else '-' + term)
        else:
            parts.append(('+ ' if coef > 0 else '- ') + term)
    return ' '.join(parts) or '0'


@dataclass(frozen=True)
class ThresholdAtom:
    """sum(coef * x.symbol) <relation> constant, relation one of '>=', '=', '<='."""
    coefficients: Tuple[Tuple[str, int], ...]
    constant: int
    relation: str = '>='

    def __post_init__(self):
        if self.relation not in ('>=', '=', '<='):
            raise InvalidInput('unknown relation %r' % (self.relation,))

    def evaluate(self, x: InputMultiset) -> bool:
        total = _linear(self.coefficients, x)
        if self.relation == '>=':
            return total >= self.constant
        if self.relation == '<=':
            return total <= self.constant
        return total == self.constant

    def symbols(self):
        return {symbol for symbol, _ in self.coefficients}

    def describe(self) -> str:
        relation = '==' if self.relation == '=' else self.relation
        return '%s %s %d' % (_describe_linear(self.coefficients), relation, self.constant)


@dataclass(frozen=True)
class ModAtom:
    """sum(coef * x.symbol) is congruent to `remainder` modulo `modulus`."""
    coefficients: Tuple[Tuple[str, int], ...]
    remainder: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 2:
            raise InvalidInput('modulus must be at least 2, got %d' % self.modulus)

    def evaluate(self, x: InputMultiset) -> bool:
        return _linear(self.coefficients, x) % self.modulus == self.remainder % self.modulus

    def symbols(self):
        return {symbol for symbol, _ in self.coefficients}

    def describe(self) -> str:
        return '%s mod %d == %d' % (_describe_linear(self.coefficients), self.modulus, self.remainder)


@dataclass(frozen=True)
class Not:
    child: object

    def evaluate(self, x: InputMultiset) -> bool:
        return not self.child.evaluate(x)

    def symbols(self):
        return self.child.symbols()

    def describe(self) -> str:
        return 'not (%s)' % self.child.describe()


@dataclass(frozen=True)
class And:
    children: Tuple[object, ...]

    def evaluate(self, x: InputMultiset) -> bool:
        return all(child.evaluate(x) for child in self.children)

    def symbols(self):
        return set().union(*(child.symbols() for child in self.children))

    def describe(self) -> str:
        return ' and '.join('(%s)' % child.describe() for child in self.children)


@dataclass(frozen=True)
class Or:
    children: Tuple[object, ...]

    def evaluate(self, x: InputMultiset) -> bool:
        return any(child.evaluate(x) for child in self.children)

    def symbols(self):
        return set().union(*(child.symbols() for child in self.children))

    def describe(self) -> str:
        return ' or '.join('(%s)' % child.describe() for child in self.children)


def threshold(symbol: str, constant: int) -> ThresholdAtom:
    """[x.symbol >= constant]"""
    return ThresholdAtom(((symbol, 1),), constant, '>=')


def evaluate_predicate(pred, x: InputMultiset) -> int:
    return int(bool(pred.evaluate(x)))
