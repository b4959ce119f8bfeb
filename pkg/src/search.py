#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# This code is distributed under the terms and conditions
# from the Apache License, Version 2.0
#
# http://opensource.org/licenses/apache2.0.php

"""
Exhaustive search over small Pavlovian protocols.

A derived protocol is fixed by one column response per opponent state, and a
column's response depends only on the signs and the order of its entries.
Every such pattern over 3 rationals already occurs in the integer grid -3..3,
so enumerating grid columns, deduplicating their responses and combining one
response per column yields every Pavlovian protocol on that many states.

`falsify` then tries every such protocol with every injective input map and
every output map against a target predicate, for all populations up to a bound.
This is evidence at desk scale, not a proof for unbounded populations or
larger state sets.
"""

import itertools
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import FrozenSet, Iterator, List, Tuple

from .checker import DEFAULT_NODE_BUDGET, check_stable, explore
from .core import Configuration, Protocol, evaluate_predicate, input_multisets, threshold
from .errors import BudgetExceeded, InvalidInput
from .games import column_response

logger = logging.getLogger(__name__)

GRID = tuple(range(-3, 4))
MAX_STATES = 3
ALPHABET = ('sigma', 'zero')


@dataclass(frozen=True)
class ColumnResponse:
    """Successor set S(q, c) of every state q against the column state c."""
    column: int
    response: Tuple[FrozenSet[int], ...]


def _response_key(response):
    return tuple(tuple(sorted(s)) for s in response)


def column_responses(num_states: int, column: int = 0) -> List[ColumnResponse]:
    """Distinct responses realized by integer columns over GRID, in a fixed order."""
    found = {column_response(values) for values in itertools.product(GRID, repeat=num_states)}
    return [ColumnResponse(column, r) for r in sorted(found, key=_response_key)]


def _state_names(num_states):
    return tuple('q%d' % i for i in range(num_states))


def enumerate_pavlovian(num_states: int) -> Iterator[Protocol]:
    """Every protocol derivable from a `num_states`-square matrix, each exactly once."""
    if num_states > MAX_STATES:
        raise BudgetExceeded('enumeration is limited to %d states, got %d' % (MAX_STATES, num_states))
    if num_states < 1:
        raise InvalidInput('need at least one state')
    names = _state_names(num_states)
    family = [c.response for c in column_responses(num_states)]
    logger.info('%d distinct column responses over %d states', len(family), num_states)
    for index, columns in enumerate(itertools.product(family, repeat=num_states)):
        rules = [(q1, q2, r1, r2)
                 for q1 in range(num_states) for q2 in range(num_states)
                 for r1 in columns[q2][q1] for r2 in columns[q1][q2]
                 if (r1, r2) != (q1, q2)]
        yield Protocol(names, names, range(num_states), (0,) * num_states, rules, name='pavlovian-%d' % index)


@dataclass(frozen=True)
class FalsificationReport:
    target: str
    num_states: int
    n_max: int
    protocols: int
    candidates: int
    survivors: Tuple[Protocol, ...]

    def lines(self) -> List[str]:
        out = ['# scope: all %d-state Pavlovian protocols (columns over the grid %d..%d), '
               'injective input maps of {%s}, every output map, populations 2..%d; target %s; '
               'non-injective input maps are skipped'
               % (self.num_states, GRID[0], GRID[-1], ', '.join(ALPHABET), self.n_max, self.target)]
        for p in self.survivors:
            iota = ','.join('%s->%s' % (s.name, p.states[q].name) for s, q in zip(p.alphabet, p.input_map))
            rules = '; '.join('%s %s -> %s %s' % rule for rule in p.listed_rules())
            out.append('survivor %s omega=%s iota=%s rules: %s'
                       % (p.name, ''.join(str(b) for b in p.output_map), iota, rules))
        out.append('candidates=%d survivors=%d' % (self.candidates, len(self.survivors)))
        return out


def _screening_order(n_max):
    """Inputs of size 3 first: they reject most candidates for threshold-like targets."""
    first = [size for size in (3,) if size <= n_max]
    rest = [size for size in range(2, n_max + 1) if size not in first]
    for size in first + rest:
        yield from input_multisets(ALPHABET, size)


def _bottom_support(p, counts, cache, node_budget):
    support = cache.get(counts)
    if support is None:
        graph = explore(p, Configuration(counts), node_budget)
        support = frozenset(q for c in graph.bottom_configurations() for q in c.support())
        cache[counts] = support
    return support


def _falsify_part(target, num_states, n_max, part, parts, node_budget):
    inputs = [(x, evaluate_predicate(target, x)) for x in _screening_order(n_max)]
    outputs = list(itertools.product((0, 1), repeat=num_states))
    protocols = candidates = 0
    survivors = []
    for index, p in enumerate(enumerate_pavlovian(num_states)):
        if index % parts != part:
            continue
        protocols += 1
        cache = {}
        for sigma_state, zero_state in itertools.permutations(range(num_states), 2):
            for omega in outputs:
                candidates += 1
                for x, expected in inputs:
                    counts = [0] * num_states
                    counts[sigma_state] += x.counts[0]
                    counts[zero_state] += x.counts[1]
                    support = _bottom_support(p, tuple(counts), cache, node_budget)
                    if any(omega[q] != expected for q in support):
                        break
                else:
                    survivors.append((index, p.with_dressing(ALPHABET, (sigma_state, zero_state), omega)))
    return protocols, candidates, survivors


def falsify(target, n_max: int, num_states: int = MAX_STATES, workers: int = 1,
            node_budget: int = DEFAULT_NODE_BUDGET) -> FalsificationReport:
    """
    Look for a `num_states`-state Pavlovian protocol computing `target` over {sigma, zero}.

    Candidates passing the fast bottom-support screen are re-checked with
    check_stable for every size before being reported as survivors.
    """
    if n_max < 3:
        raise InvalidInput('n_max must be at least 3, got %d' % n_max)
    unknown = target.symbols() - set(ALPHABET)
    if unknown:
        raise InvalidInput('target refers to symbols outside {%s}: %s' % (', '.join(ALPHABET), ' '.join(unknown)))

    args = [(target, num_states, n_max, part, workers, node_budget) for part in range(workers)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_falsify_part, *zip(*args)))
    else:
        results = [_falsify_part(*args[0])]

    protocols = sum(r[0] for r in results)
    candidates = sum(r[1] for r in results)
    screened = sorted((s for r in results for s in r[2]), key=lambda s: s[0])
    survivors = []
    for _, p in screened:
        if all(check_stable(p, target, n, node_budget).ok for n in range(2, n_max + 1)):
            survivors.append(p)
        else:
            logger.warning('%s passed screening but not check_stable', p)
    report = FalsificationReport(target.describe(), num_states, n_max, protocols, candidates, tuple(survivors))
    logger.info('falsify %s: %d protocols, %d candidates, %d survivors',
                report.target, protocols, candidates, len(survivors))
    return report


def falsify_threshold3(n_max: int, workers: int = 1) -> FalsificationReport:
    """No 3-state Pavlovian protocol should compute [x.sigma >= 3]."""
    return falsify(threshold('sigma', 3), n_max, MAX_STATES, workers=workers)


def worker_count() -> int:
    """Workers allowed by the PP_THREADS environment variable (1 when unset or invalid)."""
    try:
        return max(1, int(os.environ.get('PP_THREADS', '1')))
    except ValueError:
        logger.warning('ignoring invalid PP_THREADS=%r', os.environ.get('PP_THREADS'))
        return 1
