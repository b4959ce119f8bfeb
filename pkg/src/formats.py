#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# This code is distributed under the terms and conditions
# from the Apache License, Version 2.0
#
# http://opensource.org/licenses/apache2.0.php

"""
Text formats: protocol files, matrix files, graph specs, inputs and predicates.

Protocol file, one declaration per line, '#' starts a comment::

    states: 0 sigma 2
    inputs: zero->0 sigma->sigma
    outputs: 0=0 sigma=0 2=1
    rule: sigma sigma -> 2 2

Matrix file: a ``states:`` header, one row of rationals per line and an
optional ``delta:`` line, subtracted from every entry on load.
"""

import io
import logging
import re
from fractions import Fraction

import networkx as nx

from .core import InputMultiset, ModAtom, Not, And, Or, Protocol, ThresholdAtom
from .errors import InvalidInput, ParseError
from .games import GameMatrix

logger = logging.getLogger(__name__)


def _lines(text):
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split('#', 1)[0].strip()
        if line:
            yield lineno, line


def _declaration(line, lineno, source):
    key, sep, value = line.partition(':')
    if not sep:
        raise ParseError('expected "<key>: <value>", got %r' % line, lineno, source)
    return key.strip().lower(), value.strip()


def parse_protocol(text, source=None) -> Protocol:
    name = None
    states = None
    inputs = {}
    outputs = {}
    rules = []
    seen = set()
    for lineno, line in _lines(text):
        key, value = _declaration(line, lineno, source)
        if key in ('name', 'states', 'inputs', 'outputs') and key in seen:
            raise ParseError('duplicate %r declaration' % key, lineno, source)
        seen.add(key)
        if key == 'name':
            name = value
        elif key == 'states':
            states = value.split()
            if not states:
                raise ParseError('empty state list', lineno, source)
        elif key == 'inputs':
            for item in value.split():
                symbol, arrow, state = item.partition('->')
                if not arrow or not symbol or not state:
                    raise ParseError('bad input mapping %r, expected symbol->state' % item, lineno, source)
                if symbol in inputs:
                    raise ParseError('input symbol %r mapped twice' % symbol, lineno, source)
                inputs[symbol] = state
        elif key == 'outputs':
            for item in value.split():
                state, eq, bit = item.partition('=')
                if not eq or bit not in ('0', '1'):
                    raise ParseError('bad output %r, expected state=0 or state=1' % item, lineno, source)
                outputs[state] = int(bit)
        elif key == 'rule':
            left, arrow, right = value.partition('->')
            left, right = left.split(), right.split()
            if not arrow or len(left) != 2 or len(right) != 2:
                raise ParseError('bad rule %r, expected "q1 q2 -> r1 r2"' % value, lineno, source)
            if states is not None:
                unknown = [q for q in left + right if q not in states]
                if unknown:
                    raise ParseError('rule refers to unknown state %r' % unknown[0], lineno, source)
            rules.append(tuple(left + right))
        else:
            raise ParseError('unknown declaration %r' % key, lineno, source)

    for required, present in (('states', states), ('inputs', inputs), ('outputs', outputs)):
        if not present:
            raise ParseError('missing %r declaration' % required, source=source)
    try:
        return Protocol.build(states, inputs, outputs, rules, name=name)
    except InvalidInput as err:
        raise ParseError(str(err), source=source) from err


def format_protocol(p: Protocol) -> str:
    lines = []
    if p.name:
        lines.append('name: %s' % p.name)
    lines.append('states: %s' % ' '.join(p.state_names))
    lines.append('inputs: %s' % ' '.join(
        '%s->%s' % (s.name, p.states[q].name) for s, q in zip(p.alphabet, p.input_map)))
    lines.append('outputs: %s' % ' '.join('%s=%d' % (s.name, b) for s, b in zip(p.states, p.output_map)))
    lines.extend('rule: %s %s -> %s %s' % rule for rule in p.listed_rules())
    return '\n'.join(lines) + '\n'


def parse_matrix(text, source=None) -> GameMatrix:
    states = None
    rows = []
    delta = Fraction(0)
    for lineno, line in _lines(text):
        if ':' in line:
            key, value = _declaration(line, lineno, source)
            if key == 'states':
                if states is not None:
                    raise ParseError('duplicate "states" declaration', lineno, source)
                states = value.split()
            elif key == 'delta':
                try:
                    delta = Fraction(value)
                except (ValueError, ZeroDivisionError):
                    raise ParseError('bad delta %r' % value, lineno, source) from None
            else:
                raise ParseError('unknown declaration %r' % key, lineno, source)
            continue
        try:
            row = [Fraction(token) for token in line.split()]
        except (ValueError, ZeroDivisionError):
            raise ParseError('bad matrix row %r' % line, lineno, source) from None
        if states is not None and len(row) != len(states):
            raise ParseError('row has %d entries, expected %d' % (len(row), len(states)), lineno, source)
        rows.append(row)
    if not states:
        raise ParseError('missing "states" declaration', source=source)
    try:
        return GameMatrix.from_rows(states, rows, delta)
    except InvalidInput as err:
        raise ParseError(str(err), source=source) from err


def format_matrix(m: GameMatrix) -> str:
    lines = ['states: %s' % ' '.join(m.states)]
    lines.extend(' '.join(str(v) for v in row) for row in m.entries)
    return '\n'.join(lines) + '\n'


def read(path):
    with io.open(path, encoding='utf8') as fin:
        return fin.read()


def write(path, text):
    with io.open(path, 'w', encoding='utf8') as fout:
        fout.write(text)


def load_protocol(path) -> Protocol:
    return parse_protocol(read(path), source=path)


def load_matrix(path) -> GameMatrix:
    return parse_matrix(read(path), source=path)


def parse_input(text, alphabet) -> InputMultiset:
    """'sigma:3,zero:2' -> InputMultiset."""
    counts = {}
    for item in text.split(','):
        item = item.strip()
        if not item:
            continue
        symbol, sep, k = item.partition(':')
        symbol = symbol.strip()
        if not sep or not k.strip().isdigit():
            raise ParseError('bad input count %r, expected symbol:count' % item)
        counts[symbol] = counts.get(symbol, 0) + int(k)
    try:
        return InputMultiset.from_mapping(alphabet, counts)
    except InvalidInput as err:
        raise ParseError(str(err)) from err


def load_graph(spec) -> nx.Graph:
    """'ring:N', 'complete:N' or 'file:PATH' (one 'u v' edge per line) -> graph on vertices 0..N-1."""
    kind, sep, arg = spec.partition(':')
    if not sep:
        raise ParseError('bad graph spec %r, expected ring:N, complete:N or file:PATH' % spec)
    if kind in ('ring', 'complete'):
        if not arg.isdigit():
            raise ParseError('bad vertex count in %r' % spec)
        size = int(arg)
        return nx.cycle_graph(size) if kind == 'ring' else nx.complete_graph(size)
    if kind == 'file':
        try:
            graph = nx.read_edgelist(arg, nodetype=int)
        except (TypeError, ValueError) as err:
            raise ParseError('bad edge list: %s' % err, source=arg) from err
        return nx.convert_node_labels_to_integers(graph, ordering='sorted')
    raise ParseError('unknown graph kind %r' % kind)


# Predicate expressions ########################################################

_TOKEN = re.compile(r"\s*(?:(>=|<=|==|!=|=|>|<|\(|\)|\+|-|\*)|([A-Za-z0-9_'.]+))")
_KEYWORDS = ('count', 'mod', 'and', 'or', 'not')


def _tokenize(text):
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if not match or match.end() == pos:
            raise ParseError('unexpected character %r at offset %d in %r' % (text[pos], pos, text))
        tokens.append(match.group(1) or match.group(2))
        pos = match.end()
    return tokens


class _PredicateParser:

    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, expected=None):
        token = self.peek()
        if token is None or (expected is not None and token != expected):
            raise ParseError('expected %s, got %s in %r' % (
                repr(expected) if expected else 'more input', repr(token) if token else 'end', self.text))
        self.pos += 1
        return token

    def number(self):
        token = self.take()
        if not token.isdigit():
            raise ParseError('expected a number, got %r in %r' % (token, self.text))
        return int(token)

    def parse(self):
        node = self.disjunction()
        if self.peek() is not None:
            raise ParseError('trailing input %r in %r' % (self.peek(), self.text))
        return node

    def disjunction(self):
        children = [self.conjunction()]
        while self.peek() == 'or':
            self.take()
            children.append(self.conjunction())
        return children[0] if len(children) == 1 else Or(tuple(children))

    def conjunction(self):
        children = [self.unary()]
        while self.peek() == 'and':
            self.take()
            children.append(self.unary())
        return children[0] if len(children) == 1 else And(tuple(children))

    def unary(self):
        if self.peek() == 'not':
            self.take()
            return Not(self.unary())
        if self.peek() == '(':
            self.take()
            node = self.disjunction()
            self.take(')')
            return node
        return self.atom()

    def term(self):
        if self.peek() == 'count':
            return self.count(1)
        k = self.number()
        if self.peek() == '*':
            self.take()
            return self.count(k)
        return {}, k

    def count(self, k):
        self.take('count')
        self.take('(')
        symbol = self.take()
        if symbol in ('(', ')'):
            raise ParseError('expected a symbol name in count() in %r' % self.text)
        self.take(')')
        return {symbol: k}, 0

    def linear(self):
        sign = 1
        if self.peek() == '-':
            self.take()
            sign = -1
        coefficients, constant = {}, 0
        while True:
            coefs, const = self.term()
            for symbol, k in coefs.items():
                coefficients[symbol] = coefficients.get(symbol, 0) + sign * k
            constant += sign * const
            if self.peek() not in ('+', '-'):
                return coefficients, constant
            sign = 1 if self.take() == '+' else -1

    def atom(self):
        left, left_const = self.linear()
        if self.peek() == 'mod':
            self.take()
            modulus = self.number()
            if self.peek() not in ('==', '='):
                raise ParseError('expected == after mod in %r' % self.text)
            self.take()
            remainder = self.number()
            try:
                return ModAtom(_pack(left), remainder - left_const, modulus)
            except InvalidInput as err:
                raise ParseError('%s in %r' % (err, self.text)) from err

        relation = self.take()
        if relation not in ('>=', '<=', '==', '=', '!=', '>', '<'):
            raise ParseError('expected a comparison, got %r in %r' % (relation, self.text))
        right, right_const = self.linear()
        coefficients = dict(left)
        for symbol, k in right.items():
            coefficients[symbol] = coefficients.get(symbol, 0) - k
        constant = right_const - left_const
        coefficients = _pack(coefficients)
        if relation == '>':
            return ThresholdAtom(coefficients, constant + 1, '>=')
        if relation == '<':
            return ThresholdAtom(coefficients, constant - 1, '<=')
        if relation in ('==', '='):
            return ThresholdAtom(coefficients, constant, '=')
        if relation == '!=':
            return Not(ThresholdAtom(coefficients, constant, '='))
        return ThresholdAtom(coefficients, constant, relation)


def _pack(coefficients):
    return tuple((symbol, k) for symbol, k in coefficients.items() if k)


def parse_predicate(text):
    """Parse e.g. 'count(sigma) >= count(tau)' or 'count(one) mod 2 == 1 and not count(zero) = 0'."""
    return _PredicateParser(text).parse()
