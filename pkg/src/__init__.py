"""Pavlovian population protocols: games, protocols, stable computation and simulation."""

__version__ = '0.1.0'

from .errors import (
    BudgetExceeded, InvalidGraph, InvalidInput, InvalidPopulation, NotFound, ParseError, PavlovError,
)
from .core import (
    UNDEFINED, And, Configuration, InputMultiset, ModAtom, Not, Or, Protocol, StateId, SymbolId, ThresholdAtom,
    configurations, evaluate_predicate, initial_configuration, input_multisets, is_silent, output_of_configuration,
    successor_counts, successors, threshold,
)
from .games import (
    Constraint, ConstraintSystem, Dressing, GameMatrix, Infeasible, NotProduct, NotSymmetric, Pavlovian,
    best_response, build_constraints, column_response, derive, prisoners_dilemma, recognize, successor_sets,
    two_state_matrix,
)
from .formats import (
    format_matrix, format_protocol, load_graph, load_matrix, load_protocol, parse_input, parse_matrix,
    parse_predicate, parse_protocol,
)
from .store import VerdictStore, protocol_fingerprint, verdict_key
from .storethread import StoreThread
from .checker import (
    AbsorptionReport, Computes, ExactlyOneIn, Fails, InteractionGraph, ReachabilityGraph, SimulationTrace,
    check_eventual_property, check_stable, check_weak_stable, complete, describe_verdict, exactly_one_in, explore,
    graph_absorbing_states, leader_initial_set, leader_monotone, random_states, ring, simulate, simulate_on_graph,
    verdict_from_json, verdict_to_json,
)
from .transform import negate, primed, relabel, symmetrize
from .library import NamedArtifact
from .search import (
    ColumnResponse, FalsificationReport, column_responses, enumerate_pavlovian, falsify, falsify_threshold3,
)
from . import cli, library
