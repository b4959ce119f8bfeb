#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# This code is distributed under the terms and conditions
# from the Apache License, Version 2.0
#
# http://opensource.org/licenses/apache2.0.php

"""Built-in protocols and payoff matrices, by name."""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

from .core import Protocol
from .errors import NotFound
from .formats import parse_predicate
from .games import GameMatrix, prisoners_dilemma

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class NamedArtifact:
    """
    A catalog entry. `predicate` is what the protocol is meant to compute (None
    for leader artifacts, which carry `leader_states` instead, and for dynamics
    artifacts whose only absorbing configuration is all agents in `absorbing_state`);
    `weak` marks the weaker acceptance where a true answer is one agent outputting 1.
    """
    name: str
    protocol: Protocol
    provenance: str
    matrix: Optional[GameMatrix] = None
    predicate: Optional[object] = None
    leader_states: Tuple[str, ...] = ()
    absorbing_state: Optional[str] = None
    weak: bool = False
    n_range: Tuple[int, int] = (2, 6)
    note: str = ''


def _two_state(name, rules, outputs=None):
    return Protocol.build(['0', '1'], {'0': '0', '1': '1'}, outputs or {'0': 0, '1': 1},
                          [tuple(r) for r in rules], name=name)


def _or():
    return NamedArtifact(
        'or', _two_state('or', ['0111', '1011']), 'basic protocols: logical OR',
        matrix=GameMatrix(('0', '1'), ((1, -1), (1, 1))),
        predicate=parse_predicate('count(1) >= 1'),
        n_range=(2, 8),
        note='outputs 1 iff some agent holds 1, i.e. [x.1 >= 1]',
    )


def _and():
    return NamedArtifact(
        'and', _two_state('and', ['0100', '1000']), 'basic protocols: logical AND',
        matrix=GameMatrix(('0', '1'), ((1, 1), (-1, 1))),
        predicate=parse_predicate('count(0) = 0'),
        n_range=(2, 8),
    )


def _xor_weak():
    return NamedArtifact(
        'xor-weak', _two_state('xor-weak', ['1100']), 'basic protocols: XOR in a weak form',
        matrix=GameMatrix(('0', '1'), ((1, 1), (1, -1))),
        predicate=parse_predicate('count(1) mod 2 == 1'),
        weak=True,
        n_range=(2, 8),
        note='fails classical stable computation of parity; passes the weak acceptance '
             '(all 0 when even, exactly one 1 when odd)',
    )


def _threshold2():
    protocol = Protocol.build(
        ['0', 'sigma', '2'], {'0': '0', 'sigma': 'sigma'}, {'0': 0, 'sigma': 0, '2': 1},
        [('0', '0', '0', '0'), ('0', 'sigma', '0', 'sigma'), ('sigma', '0', 'sigma', '0'),
         ('0', '2', '2', '2'), ('2', '0', '2', '2'), ('sigma', 'sigma', '2', '2'),
         ('sigma', '2', '2', '2'), ('2', 'sigma', '2', '2'), ('2', '2', '2', '2')],
        name='threshold2')
    return NamedArtifact(
        'threshold2', protocol, 'threshold predicate [x.sigma >= 2]',
        matrix=GameMatrix(('0', 'sigma', '2'), ((0, 0, -1), (0, -1, -1), (1, 1, 1))),
        predicate=parse_predicate('count(sigma) >= 2'),
        n_range=(2, 8),
    )


def _leader_pavlovian():
    protocol = Protocol.build(
        ['L1', 'L2', 'N'], {'L': 'L1', 'N': 'N'}, {'L1': 1, 'L2': 1, 'N': 0},
        [('L1', 'L2', 'L1', 'N'), ('L1', 'N', 'N', 'L2'), ('L2', 'N', 'N', 'L1'), ('N', 'N', 'N', 'N'),
         ('L2', 'L1', 'N', 'L1'), ('N', 'L1', 'L2', 'N'), ('N', 'L2', 'L1', 'N'),
         ('L1', 'L1', 'L2', 'L2'), ('L2', 'L2', 'L1', 'L1')],
        name='leader-pavlovian')
    return NamedArtifact(
        'leader-pavlovian', protocol, 'leader election, Pavlovian solution',
        matrix=GameMatrix(('L1', 'L2', 'N'), ((-3, 0, -3), (-1, -3, -3), (-2, -3, 0))),
        leader_states=('L1', 'L2'),
        n_range=(3, 5),
        note='needs a population of at least 3',
    )


def _leader_classic():
    protocol = Protocol.build(
        ['L', 'N'], {'L': 'L', 'N': 'N'}, {'L': 1, 'N': 0},
        [('L', 'L', 'L', 'N'), ('L', 'N', 'L', 'N'), ('N', 'L', 'N', 'L'), ('N', 'N', 'N', 'N')],
        name='leader-classic')
    return NamedArtifact(
        'leader-classic', protocol, 'leader election, classical non-symmetric solution',
        leader_states=('L',),
        n_range=(2, 5),
        note='not symmetric, hence not Pavlovian',
    )


def _majority():
    protocol = Protocol.build(
        ['N', 'Y', 'sigma', 'tau'], {'sigma': 'sigma', 'tau': 'tau'}, {'N': 0, 'Y': 1, 'sigma': 1, 'tau': 0},
        [('N', 'Y', 'Y', 'Y'), ('Y', 'N', 'Y', 'Y'), ('N', 'sigma', 'Y', 'sigma'), ('sigma', 'N', 'sigma', 'Y'),
         ('Y', 'tau', 'N', 'tau'), ('tau', 'Y', 'tau', 'N'), ('sigma', 'tau', 'N', 'Y'), ('tau', 'sigma', 'Y', 'N')],
        name='majority')
    return NamedArtifact(
        'majority', protocol, 'majority [x.sigma >= x.tau], ties answer yes',
        matrix=GameMatrix(('N', 'Y', 'sigma', 'tau'),
                          ((1, -1, -1, 1), (0, 1, 1, -1), (0, 0, 0, -1), (0, 0, -1, 0))),
        predicate=parse_predicate('count(sigma) >= count(tau)'),
        n_range=(2, 8),
    )


def _pavlov_pd():
    protocol = Protocol.build(
        ['C', 'D'], {'C': 'C', 'D': 'D'}, {'C': 1, 'D': 0},
        [('C', 'C', 'C', 'C'), ('C', 'D', 'D', 'D'), ('D', 'C', 'D', 'D'), ('D', 'D', 'C', 'C')],
        name='pavlov-pd')
    return NamedArtifact(
        'pavlov-pd', protocol, "prisoner's dilemma under win-stay, lose-shift",
        matrix=prisoners_dilemma(3, 0, 5, 1, delta=2),
        absorbing_state='C',
        n_range=(2, 6),
        note='R=3 S=0 T=5 P=1 with threshold 2; every population, and every graph without isolated vertices, '
             'ends all-C',
    )


def _cycle3():
    protocol = Protocol.build(
        ['q0', 'q1', 'q2'], {'q0': 'q0', 'q1': 'q1', 'q2': 'q2'}, {'q0': 0, 'q1': 0, 'q2': 0},
        [('q0', 'q0', 'q1', 'q1'),
         ('q1', 'q0', 'q2', 'q0'), ('q0', 'q1', 'q0', 'q2'),
         ('q2', 'q0', 'q0', 'q0'), ('q0', 'q2', 'q0', 'q0')],
        name='cycle3-counterexample')
    return NamedArtifact(
        'cycle3-counterexample', protocol, 'symmetric deterministic 3-state protocol that is not Pavlovian',
        note='against q0: q0 moves to q1, q1 to q2, q2 to q0; no column of payoffs orders them consistently',
    )


def _threshold3_classic():
    levels = ['0', '1', '2', '3']
    rules = []
    for a in range(4):
        for b in range(4):
            out = (3, 3) if a == 3 else (min(a + b, 3), 0)
            rules.append((levels[a], levels[b], levels[out[0]], levels[out[1]]))
    protocol = Protocol.build(levels, {'sigma': '1', 'zero': '0'}, {'0': 0, '1': 0, '2': 0, '3': 1},
                              rules, name='threshold3-classic')
    return NamedArtifact(
        'threshold3-classic', protocol, 'threshold [x.sigma >= 3], non-symmetric token summing',
        predicate=parse_predicate('count(sigma) >= 3'),
        n_range=(2, 6),
        note='not Pavlovian; input for the symmetrization',
    )


_BUILDERS = {
    'or': _or,
    'and': _and,
    'xor-weak': _xor_weak,
    'threshold2': _threshold2,
    'leader-pavlovian': _leader_pavlovian,
    'leader-classic': _leader_classic,
    'majority': _majority,
    'pavlov-pd': _pavlov_pd,
    'cycle3-counterexample': _cycle3,
    'threshold3-classic': _threshold3_classic,
}


def names():
    return sorted(_BUILDERS)


def get(name) -> NamedArtifact:
    try:
        builder = _BUILDERS[name]
    except KeyError:
        raise NotFound('no catalog entry named %r; known: %s' % (name, ', '.join(names()))) from None
    return builder()
