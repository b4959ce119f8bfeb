#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# This code is distributed under the terms and conditions
# from the Apache License, Version 2.0
#
# http://opensource.org/licenses/apache2.0.php

"""Exceptions raised by pavlovpp.

Verdicts (Pavlovian or not, Computes or Fails) are returned values and never
raised; the classes below are for misuse, malformed input and exhausted budgets.
"""


class PavlovError(RuntimeError):
    """Base class of every error raised by this package."""


class InvalidPopulation(PavlovError, ValueError):
    """A population of fewer than two agents was requested."""


class InvalidInput(PavlovError, ValueError):
    """Arguments do not satisfy an operation's preconditions."""


class InvalidGraph(PavlovError, ValueError):
    """An interaction graph cannot host any interaction."""


class NotFound(PavlovError, KeyError):
    """Unknown catalog name."""

    def __str__(self):
        return RuntimeError.__str__(self)


class BudgetExceeded(PavlovError):
    """Exploration or enumeration ran past its budget.

    `explored` is the number of nodes (or candidates) seen before giving up;
    `input` is set by callers that explore many inputs, so the offending one is reported.
    """

    def __init__(self, message, explored=0, input=None):
        super().__init__(message)
        self.explored = explored
        self.input = input


class ParseError(PavlovError, ValueError):
    """Malformed protocol, matrix, graph, input or predicate text."""

    def __init__(self, message, lineno=None, source=None):
        self.lineno = lineno
        self.source = source
        where = ''
        if source is not None:
            where += '%s:' % source
        if lineno is not None:
            where += '%d:' % lineno
        super().__init__('%s %s' % (where, message) if where else message)
