#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# This code is distributed under the terms and conditions
# from the Apache License, Version 2.0
#
# http://opensource.org/licenses/apache2.0.php

"""
Protocol-to-protocol constructions.

`symmetrize` compiles any protocol into a symmetric one over Q and a primed
copy Q' that simulates it in populations of at least 3 agents: two agents in
the same state first disagree on their primes, and the primed/unprimed pair
then plays the original rule with its roles fixed by who is primed.
"""

import logging
from typing import Mapping, Optional

from .core import Protocol
from .errors import InvalidInput

logger = logging.getLogger(__name__)

PRIME_SUFFIX = '_p'


def primed(name: str) -> str:
    return name + PRIME_SUFFIX


def symmetrize(p: Protocol, name: Optional[str] = None) -> Protocol:
    """Symmetric, generally nondeterministic protocol over Q + Q' simulating `p`."""
    size = len(p.states)
    names = p.state_names + tuple(primed(q) for q in p.state_names)
    collisions = set(p.state_names) & set(names[size:])
    if collisions:
        raise InvalidInput('primed names collide with existing states: %s' % ' '.join(sorted(collisions)))

    def prime(q):
        return q + size

    rules = set()
    for q in range(size):
        qp = prime(q)
        for a, b in p.effective[(q, q)]:
            rules.add((q, qp, a, b))
            rules.add((qp, q, b, a))
        rules.add((q, q, qp, qp))
        rules.add((qp, qp, q, q))
        for gamma in range(2 * size):
            if gamma in (q, qp):
                continue
            rules.add((q, gamma, qp, gamma))
            rules.add((qp, gamma, q, gamma))
            rules.add((gamma, q, gamma, qp))
            rules.add((gamma, qp, gamma, q))

    for q in range(size):
        for r in range(size):
            if q == r:
                continue
            for a, b in p.effective[(q, r)]:
                for d, e in p.effective[(r, q)]:
                    rules.add((q, prime(r), a, b))
                    rules.add((prime(r), q, b, a))
                    rules.add((r, prime(q), d, e))
                    rules.add((prime(q), r, e, d))

    result = Protocol(names, p.symbol_names, p.input_map, p.output_map + p.output_map, rules,
                      name=name or ('%s-symmetrized' % p.name if p.name else None))
    logger.info('symmetrized %r into %r', p, result)
    return result


def negate(p: Protocol, name: Optional[str] = None) -> Protocol:
    """Flip every output; the result computes the negation of whatever `p` computes."""
    return p.with_dressing(p.symbol_names, p.input_map, tuple(1 - b for b in p.output_map),
                           name=name or ('not-%s' % p.name if p.name else None))


def relabel(p: Protocol, states: Mapping[str, str] = None, symbols: Mapping[str, str] = None,
            name: Optional[str] = None) -> Protocol:
    """Rename states and/or input symbols; names not mentioned are kept."""
    states = states or {}
    symbols = symbols or {}
    for mapping, known, what in ((states, p.state_names, 'state'), (symbols, p.symbol_names, 'symbol')):
        unknown = set(mapping) - set(known)
        if unknown:
            raise InvalidInput('cannot rename unknown %s %s' % (what, ' '.join(sorted(unknown))))
    return Protocol([states.get(q, q) for q in p.state_names], [symbols.get(s, s) for s in p.symbol_names],
                    p.input_map, p.output_map, p.rules, name=name or p.name)
