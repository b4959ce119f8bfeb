#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# This code is distributed under the terms and conditions
# from the Apache License, Version 2.0
#
# http://opensource.org/licenses/apache2.0.php

"""
Command line entry point::

    pavlovpp recognize --protocol threshold2
    pavlovpp check --protocol majority.pp --predicate "count(sigma) >= count(tau)" --n 2..6
    pavlovpp simulate --protocol pavlov-pd --graph ring:8 --trials 100

`--protocol` and `--matrix` take a file path or a catalog name (see `catalog`).
Exit codes: 0 for a positive verdict, 1 for a negative one, 2 for usage,
parse and I/O errors.
"""

import argparse
import json
import logging
import os
import sys

from . import library
from .checker import (
    DEFAULT_MAX_STEPS, DEFAULT_NODE_BUDGET, DEFAULT_SEED, InteractionGraph, check_eventual_property,
    check_stable, check_weak_stable, describe_verdict, exactly_one_in, explore, leader_initial_set,
    leader_monotone, random_states, simulate, simulate_on_graph, verdict_to_json,
)
from .core import initial_configuration, output_of_configuration
from .errors import InvalidInput, NotFound, ParseError, PavlovError
from .formats import (
    format_matrix, format_protocol, load_graph, load_matrix, load_protocol, parse_input, parse_predicate, write,
)
from .games import Dressing, derive, recognize
from .search import falsify, worker_count
from .store import VerdictStore
from .transform import symmetrize

logger = logging.getLogger(__name__)

OK, NEGATIVE, ERROR = 0, 1, 2


class _Output:
    """Text lines, or one JSON object per verdict with --json."""

    def __init__(self, stream, as_json):
        self.stream = stream
        self.as_json = as_json

    def text(self, line):
        if not self.as_json:
            print(line, file=self.stream)

    def record(self, obj):
        if self.as_json:
            print(json.dumps(obj, sort_keys=True), file=self.stream)


def _artifact(name):
    try:
        return library.get(name)
    except NotFound:
        return None


def _protocol(arg):
    """Protocol file, or catalog entry of that name; returns (protocol, artifact or None)."""
    if os.path.exists(arg):
        return load_protocol(arg), None
    artifact = _artifact(arg)
    if artifact is None:
        raise NotFound('%r is neither a protocol file nor a catalog name' % arg)
    return artifact.protocol, artifact


def _predicate(args, artifact):
    if args.predicate:
        return parse_predicate(args.predicate)
    if artifact is not None and artifact.predicate is not None:
        return artifact.predicate
    raise InvalidInput('--predicate is required for this protocol')


def _size_range(text):
    """'2..8' or '5' -> range."""
    low, sep, high = text.partition('..')
    try:
        low = int(low)
        high = int(high) if sep else low
    except ValueError:
        raise argparse.ArgumentTypeError('expected N or A..B, got %r' % text) from None
    if low > high:
        raise argparse.ArgumentTypeError('empty range %r' % text)
    return range(low, high + 1)


def _default_sizes(artifact, fallback):
    low, high = artifact.n_range if artifact is not None else fallback
    return range(low, high + 1)


def _matrix_json(m):
    return {'states': list(m.states), 'rows': [[str(v) for v in row] for row in m.entries]}


# Subcommands ##################################################################

def cmd_check(args, out):
    p, artifact = _protocol(args.protocol)
    pred = _predicate(args, artifact)
    weak = args.weak
    sizes = args.n or _default_sizes(artifact, (2, 6))
    workers = worker_count()
    store = VerdictStore(args.cache, autocommit=True) if args.cache else None
    try:
        for n in sizes:
            if weak:
                verdict = check_weak_stable(p, pred, n, args.budget, workers=workers)
            else:
                verdict = check_stable(p, pred, n, args.budget, store=store, workers=workers)
            out.text('n=%d: %s' % (n, describe_verdict(p, verdict)))
            out.record(dict(verdict_to_json(p, verdict), n=n, predicate=pred.describe(), weak=weak))
            if not verdict.ok:
                return NEGATIVE
    finally:
        if store is not None:
            logger.info('%s: %s', store, store.summary())
            store.close()
    return OK


def cmd_leader_check(args, out):
    p, artifact = _protocol(args.protocol)
    if args.leader_states:
        leaders = [s.strip() for s in args.leader_states.split(',') if s.strip()]
    elif artifact is not None and artifact.leader_states:
        leaders = list(artifact.leader_states)
    else:
        raise InvalidInput('--leader-states is required for this protocol')
    prop = exactly_one_in(p, leaders)
    sizes = args.n or _default_sizes(artifact, (3, 5))
    out.text('leader count never increases: %s' % ('yes' if leader_monotone(p, leaders) else 'no'))
    for n in sizes:
        verdict = check_eventual_property(p, leader_initial_set(p, n, leaders), prop, args.budget)
        out.text('n=%d: %s' % (n, describe_verdict(p, verdict)))
        out.record(dict(verdict_to_json(p, verdict), n=n, property=str(prop)))
        if not verdict.ok:
            return NEGATIVE
    return OK


def _load_matrix(arg):
    if os.path.exists(arg):
        return load_matrix(arg)
    artifact = _artifact(arg)
    if artifact is None or artifact.matrix is None:
        raise NotFound('%r is neither a matrix file nor a catalog entry with a matrix' % arg)
    return artifact.matrix


def cmd_derive(args, out):
    m = _load_matrix(args.matrix)
    dressing = None
    if args.outputs:
        bits = {}
        for item in args.outputs.split(','):
            state, _, bit = item.strip().partition('=')
            if bit not in ('0', '1'):
                raise ParseError('bad output %r, expected state=0 or state=1' % item)
            bits[state] = int(bit)
        unknown = set(bits) - set(m.states)
        if unknown:
            raise InvalidInput('outputs name unknown states: %s' % ' '.join(sorted(unknown)))
        dressing = Dressing(m.states, tuple(range(m.dimension)), tuple(bits.get(q, 0) for q in m.states))
    p = derive(m, dressing, name=args.name)
    text = format_protocol(p)
    if args.out:
        write(args.out, text)
        out.text('wrote %s (%d rules) to %s' % (p, len(p.rules), args.out))
    else:
        out.text(text.rstrip('\n'))
    out.record({'verdict': 'Derived', 'protocol': text})
    return OK


def cmd_recognize(args, out):
    p, _ = _protocol(args.protocol)
    verdict = recognize(p)
    out.text(verdict.describe())
    obj = {'verdict': verdict.kind}
    if verdict.pavlovian:
        out.text(format_matrix(verdict.witness).rstrip('\n'))
        obj['witness'] = _matrix_json(verdict.witness)
    elif verdict.kind == 'Infeasible':
        obj['certificate'] = [con.describe(verdict.states) for con in verdict.certificate]
    elif verdict.kind == 'NotSymmetric':
        obj['counterexample'] = {'rule': list(verdict.rule), 'missing_mirror': list(verdict.missing_mirror)}
    else:
        obj['counterexample'] = {'pair': list(verdict.pair)}
    out.record(obj)
    return OK if verdict.pavlovian else NEGATIVE


def cmd_symmetrize(args, out):
    p, _ = _protocol(args.protocol)
    result = symmetrize(p)
    text = format_protocol(result)
    if args.out:
        write(args.out, text)
        out.text('wrote %s (%d states, %d rules) to %s' % (result, len(result.states), len(result.rules), args.out))
    else:
        out.text(text.rstrip('\n'))
    out.record({'verdict': 'Symmetrized', 'protocol': text})
    return OK


def _simulate_graph(args, p, out):
    graph = load_graph(args.graph)
    size = graph.number_of_nodes()
    trials = args.trials
    target = None
    if args.target:
        target = [q.strip() for q in args.target.split(',')]
        if len(target) == 1:
            target = target * size
    absorbed = 0
    for trial in range(trials):
        seed = args.seed + trial
        if args.vertex_states:
            states = [p.index(q.strip()) for q in args.vertex_states.split(',')]
        else:
            states = random_states(p, size, seed)
        g = InteractionGraph.from_networkx(graph, states)
        report = simulate_on_graph(p, g, args.steps, seed, target)
        absorbed += report.absorbed
        if trials == 1:
            out.text(report.format(p))
        out.record({'verdict': 'Absorbed' if report.absorbed else 'Timeout', 'trial': trial, 'seed': seed,
                    'steps': report.steps, 'final': [p.states[q].name for q in report.final]})
    if trials > 1:
        out.text('absorbed %d/%d' % (absorbed, trials))
    return OK if absorbed == trials else NEGATIVE


def cmd_simulate(args, out):
    p, _ = _protocol(args.protocol)
    if args.trials < 1:
        raise InvalidInput('--trials must be positive')
    if args.graph:
        return _simulate_graph(args, p, out)
    if not args.input:
        raise InvalidInput('--input is required without --graph')
    if args.target:
        raise InvalidInput('--target needs --graph')
    c0 = initial_configuration(p, parse_input(args.input, p.symbol_names))
    certified = explore(p, c0, args.budget) if args.certify else None
    trace = simulate(p, c0, args.steps, args.seed, certified)
    output = output_of_configuration(p, trace.final)
    out.text('%s after %d steps: %s, output %s' % (
        'silent' if trace.silent else 'stopped', trace.steps, trace.final.format(p),
        'undefined' if output is None else output))
    if certified is not None:
        out.text('entered a bottom SCC: %s' % (
            'at step %d' % trace.entered_at if trace.entered_bottom else 'no'))
    # with --certify, reaching a bottom SCC is success
    if trace.silent:
        verdict = 'Silent'
    elif trace.entered_bottom:
        verdict = 'EnteredBottom'
    else:
        verdict = 'Timeout'
    out.record({'verdict': verdict, 'steps': trace.steps, 'final': trace.final.as_dict(p), 'output': output,
                'entered_bottom': trace.entered_bottom, 'entered_at': trace.entered_at})
    return NEGATIVE if verdict == 'Timeout' else OK


def cmd_enumerate(args, out):
    target = parse_predicate(args.predicate)
    report = falsify(target, args.n_max, args.states, workers=worker_count(), node_budget=args.budget)
    lines = report.lines()
    if args.report:
        write(args.report, '\n'.join(lines) + '\n')
    for line in lines:
        out.text(line)
    out.record({'verdict': 'NoSurvivor' if not report.survivors else 'Survivors',
                'candidates': report.candidates, 'protocols': report.protocols,
                'survivors': [format_protocol(p) for p in report.survivors]})
    return OK if not report.survivors else NEGATIVE


def cmd_catalog(args, out):
    for name in library.names():
        artifact = library.get(name)
        out.text('%-22s %s' % (name, artifact.provenance))
        out.record({'name': name, 'provenance': artifact.provenance, 'note': artifact.note,
                    'matrix': artifact.matrix is not None})
    return OK


def cmd_export(args, out):
    artifact = library.get(args.name)
    text = format_protocol(artifact.protocol)
    if args.out:
        write(args.out, text)
        out.text('wrote protocol %s to %s' % (artifact.name, args.out))
    else:
        out.text(text.rstrip('\n'))
    if args.matrix_out:
        if artifact.matrix is None:
            raise NotFound('catalog entry %r has no matrix' % artifact.name)
        write(args.matrix_out, format_matrix(artifact.matrix))
        out.text('wrote matrix %s to %s' % (artifact.name, args.matrix_out))
    out.record({'name': artifact.name, 'protocol': text,
                'matrix': _matrix_json(artifact.matrix) if artifact.matrix is not None else None})
    return OK


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--json', action='store_true', help='one JSON object per verdict on stdout')
    common.add_argument('-v', '--verbose', action='count', default=0, help='log more (repeatable)')

    parser = argparse.ArgumentParser(prog='pavlovpp', description='Pavlovian population protocols toolkit.')
    sub = parser.add_subparsers(dest='command', metavar='COMMAND')
    sub.required = True

    def command(name, func, help):
        p = sub.add_parser(name, parents=[common], help=help, description=help)
        p.set_defaults(func=func)
        return p

    p = command('check', cmd_check, 'verify stable computation of a predicate for a range of sizes')
    p.add_argument('--protocol', required=True)
    p.add_argument('--predicate')
    p.add_argument('--n', type=_size_range, help='population sizes, N or A..B')
    p.add_argument('--budget', type=int, default=DEFAULT_NODE_BUDGET, help='configurations explored per input')
    p.add_argument('--cache', metavar='FILE', help='sqlite verdict cache to reuse and extend')
    p.add_argument('--weak', action='store_true', help='accept exactly one 1-output agent for true inputs')

    p = command('leader-check', cmd_leader_check, 'verify that exactly one leader eventually remains')
    p.add_argument('--protocol', required=True)
    p.add_argument('--leader-states', help='comma-separated leader states')
    p.add_argument('--n', type=_size_range)
    p.add_argument('--budget', type=int, default=DEFAULT_NODE_BUDGET)

    p = command('derive', cmd_derive, 'derive the protocol of a payoff matrix')
    p.add_argument('--matrix', required=True)
    p.add_argument('--outputs', help='state=bit,... (unlisted states output 0)')
    p.add_argument('--name')
    p.add_argument('--out')

    p = command('recognize', cmd_recognize, 'decide whether a protocol comes from a game')
    p.add_argument('--protocol', required=True)

    p = command('symmetrize', cmd_symmetrize, 'compile a protocol into a symmetric one')
    p.add_argument('--protocol', required=True)
    p.add_argument('--out')

    p = command('simulate', cmd_simulate, 'run random interactions, in a well-mixed population or on a graph')
    p.add_argument('--protocol', required=True)
    p.add_argument('--input', help='symbol:count,... for well-mixed runs')
    p.add_argument('--steps', type=int, default=DEFAULT_MAX_STEPS)
    p.add_argument('--seed', type=int, default=DEFAULT_SEED)
    p.add_argument('--graph', help='ring:N, complete:N or file:PATH')
    p.add_argument('--vertex-states', help='comma-separated initial state per vertex (default: random)')
    p.add_argument('--target', help='stop at this vertex-state vector (one state per vertex, or one state for all) '
                                     'instead of at silence')
    p.add_argument('--trials', type=int, default=1)
    p.add_argument('--certify', action='store_true', help='also report when a bottom SCC was entered')
    p.add_argument('--budget', type=int, default=DEFAULT_NODE_BUDGET)

    p = command('enumerate', cmd_enumerate, 'search all small Pavlovian protocols for one computing a predicate')
    p.add_argument('--states', type=int, default=3)
    p.add_argument('--predicate', required=True)
    p.add_argument('--n-max', type=int, required=True)
    p.add_argument('--report', metavar='FILE')
    p.add_argument('--budget', type=int, default=DEFAULT_NODE_BUDGET)

    command('catalog', cmd_catalog, 'list built-in protocols')

    p = command('export', cmd_export, 'write a built-in protocol (and its matrix) to files')
    p.add_argument('--name', required=True)
    p.add_argument('--out')
    p.add_argument('--matrix-out')
    return parser


def run(argv=None, stdout=None):
    """Execute one command; returns the exit code."""
    stdout = stdout or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as err:
        return ERROR if err.code else OK

    level = (logging.WARNING, logging.INFO, logging.DEBUG)[min(args.verbose, 2)]
    logging.basicConfig(format='%(asctime)s %(name)s %(levelname)s %(message)s', level=level, stream=sys.stderr)

    try:
        return args.func(args, _Output(stdout, args.json))
    except (PavlovError, OSError) as err:
        print('pavlovpp %s: error: %s' % (args.command, err), file=sys.stderr)
        logger.debug('%s failed', args.command, exc_info=True)
        return ERROR


def main():
    sys.exit(run())


if __name__ == '__main__':
    main()
