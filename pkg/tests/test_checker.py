# std imports
import unittest

# 3rd party
import networkx as nx

# local
import pavlovpp
from pavlovpp import (
    BudgetExceeded, Computes, Configuration, Fails, InputMultiset, InteractionGraph, InvalidGraph,
    InvalidPopulation, Protocol, check_eventual_property, check_stable, check_weak_stable, complete,
    exactly_one_in, explore, graph_absorbing_states, initial_configuration, leader_initial_set, leader_monotone,
    parse_predicate, ring, simulate, simulate_on_graph, successors, symmetrize, threshold, verdict_from_json,
    verdict_to_json,
)
from accessories import catalog


class ExploreTest(unittest.TestCase):

    def test_bottom_components_are_closed_and_strongly_connected(self):
        p = catalog('leader-pavlovian').protocol
        graph = explore(p, Configuration.from_mapping(p, {'L1': 2, 'N': 2}))
        for component in graph.bottom_components():
            members = set(component)
            for c in component:
                self.assertTrue(successors(p, c) <= members)
                self.assertEqual(set(graph.component_of(c)), members)

    def test_threshold2_has_one_bottom_configuration(self):
        p = catalog('threshold2').protocol
        graph = explore(p, Configuration.from_mapping(p, {'sigma': 2, '0': 3}))
        self.assertEqual(graph.bottom_configurations(), frozenset([Configuration.from_mapping(p, {'2': 5})]))
        self.assertGreater(len(graph), 1)

    def test_budget(self):
        p = catalog('majority').protocol
        c0 = Configuration.from_mapping(p, {'sigma': 4, 'tau': 4})
        with self.assertRaises(BudgetExceeded) as ctx:
            explore(p, c0, node_budget=3)
        self.assertEqual(ctx.exception.explored, 3)


class CheckStableTest(unittest.TestCase):

    def test_threshold2(self):
        artifact = catalog('threshold2')
        for n in range(2, 9):
            with self.subTest(n=n):
                verdict = check_stable(artifact.protocol, artifact.predicate, n)
                self.assertIsInstance(verdict, Computes)
                self.assertEqual(verdict.checked, n + 1)

    def test_or_and_majority(self):
        for name, sizes in (('or', range(2, 9)), ('and', range(2, 9)), ('majority', range(2, 7))):
            artifact = catalog(name)
            for n in sizes:
                with self.subTest(name=name, n=n):
                    self.assertTrue(check_stable(artifact.protocol, artifact.predicate, n).ok)

    def test_wrong_threshold_fails_with_counterexample(self):
        # given: the threshold-2 protocol checked against threshold 3
        p = catalog('threshold2').protocol
        # exercise,
        verdict = check_stable(p, threshold('sigma', 3), 4)
        # verify,
        self.assertIsInstance(verdict, Fails)
        self.assertEqual(verdict.input.as_dict(), {'0': 2, 'sigma': 2})
        self.assertEqual(verdict.observed, 1)
        self.assertEqual(verdict.expected, 0)
        self.assertEqual(verdict.component, (Configuration.from_mapping(p, {'2': 4}),))

    def test_xor_fails_classically_but_passes_weakly(self):
        artifact = catalog('xor-weak')
        p = artifact.protocol
        verdict = check_stable(p, artifact.predicate, 2)
        self.assertIsInstance(verdict, Fails)
        # the mixed pair never interacts: frozen with undefined output
        frozen = Configuration.from_mapping(p, {'0': 1, '1': 1})
        self.assertEqual((verdict.configuration, verdict.component, verdict.observed), (frozen, (frozen,), None))
        for n in range(2, 9):
            with self.subTest(n=n):
                self.assertTrue(check_weak_stable(artifact.protocol, artifact.predicate, n).ok)

    def test_undefined_output_fails(self):
        # nobody ever changes: mixed inputs stay mixed
        p = Protocol.build(['a', 'b'], {'a': 'a', 'b': 'b'}, {'a': 0, 'b': 1}, [])
        verdict = check_stable(p, parse_predicate('count(b) >= 1'), 2)
        self.assertIsInstance(verdict, Fails)
        self.assertIsNone(verdict.observed)

    def test_population_of_one(self):
        artifact = catalog('or')
        with self.assertRaises(InvalidPopulation):
            check_stable(artifact.protocol, artifact.predicate, 1)

    def test_budget_names_the_input(self):
        artifact = catalog('majority')
        with self.assertRaises(BudgetExceeded) as ctx:
            check_stable(artifact.protocol, artifact.predicate, 6, node_budget=2)
        self.assertIsInstance(ctx.exception.input, InputMultiset)

    def test_parallel_matches_sequential(self):
        artifact = catalog('threshold2')
        sequential = check_stable(artifact.protocol, threshold('sigma', 3), 5)
        parallel = check_stable(artifact.protocol, threshold('sigma', 3), 5, workers=2)
        self.assertEqual(parallel, sequential)

    def test_json_round_trip(self):
        p = catalog('threshold2').protocol
        for verdict in (check_stable(p, threshold('sigma', 3), 4), check_stable(p, threshold('sigma', 2), 4)):
            with self.subTest(verdict=verdict.verdict):
                self.assertEqual(verdict_from_json(p, verdict_to_json(p, verdict)), verdict)


class LeaderTest(unittest.TestCase):

    def test_pavlovian_leader_election(self):
        artifact = catalog('leader-pavlovian')
        p = artifact.protocol
        prop = exactly_one_in(p, artifact.leader_states)
        for n in range(3, 6):
            with self.subTest(n=n):
                self.assertTrue(check_eventual_property(p, leader_initial_set(p, n, artifact.leader_states), prop).ok)

    def test_leader_count_never_increases(self):
        artifact = catalog('leader-pavlovian')
        self.assertTrue(leader_monotone(artifact.protocol, artifact.leader_states))
        self.assertFalse(leader_monotone(catalog('threshold2').protocol, ['2']))

    def test_classic_leader_election(self):
        artifact = catalog('leader-classic')
        p = artifact.protocol
        prop = exactly_one_in(p, ['L'])
        for n in range(2, 6):
            self.assertTrue(check_eventual_property(p, leader_initial_set(p, n, ['L']), prop).ok)

    def test_symmetrized_leader_election(self):
        p = symmetrize(catalog('leader-classic').protocol)
        prop = exactly_one_in(p, ['L', 'L_p'])
        for n in (3, 4):
            with self.subTest(n=n):
                self.assertTrue(check_eventual_property(p, leader_initial_set(p, n, ['L', 'L_p']), prop).ok)

    def test_initial_set(self):
        p = catalog('leader-classic').protocol
        self.assertEqual(len(leader_initial_set(p, 3, ['L'])), 3)


class SimulateTest(unittest.TestCase):

    def test_threshold2_reaches_all_two(self):
        p = catalog('threshold2').protocol
        c0 = Configuration.from_mapping(p, {'sigma': 2, '0': 3})
        trace = simulate(p, c0, max_steps=100000, seed=7, certified=explore(p, c0))
        self.assertTrue(trace.silent)
        self.assertEqual(trace.final, Configuration.from_mapping(p, {'2': 5}))
        self.assertTrue(trace.entered_bottom)
        self.assertLessEqual(trace.entered_at, trace.steps)

    def test_identity_protocol_never_moves(self):
        p = Protocol.build(['a', 'b'], {'a': 'a', 'b': 'b'}, {'a': 0, 'b': 1}, [])
        c0 = Configuration((2, 3))
        for seed in (1, 2, 3):
            trace = simulate(p, c0, max_steps=1000, seed=seed)
            self.assertEqual(trace.final, c0)
            self.assertEqual(trace.steps, 0)

    def test_majority_ends_with_yes(self):
        artifact = catalog('majority')
        p = artifact.protocol
        c0 = initial_configuration(p, InputMultiset.from_mapping(p.symbol_names, {'sigma': 2, 'tau': 1}))
        graph = explore(p, c0)
        self.assertTrue(all(pavlovpp.output_of_configuration(p, c) == 1 for c in graph.bottom_configurations()))
        trace = simulate(p, c0, max_steps=20000, seed=3, certified=graph)
        self.assertTrue(trace.entered_bottom)

    def test_same_seed_same_trace(self):
        p = catalog('leader-pavlovian').protocol
        c0 = Configuration.from_mapping(p, {'L1': 3, 'N': 3})
        self.assertEqual(simulate(p, c0, 500, seed=11), simulate(p, c0, 500, seed=11))

    def test_unique_bottom_component_is_entered(self):
        p = catalog('threshold2').protocol
        c0 = Configuration.from_mapping(p, {'sigma': 3, '0': 3})
        graph = explore(p, c0)
        for seed in range(100):
            self.assertTrue(simulate(p, c0, 100000, seed, certified=graph).entered_bottom)


class GraphTest(unittest.TestCase):

    def setUp(self):
        self.p = catalog('pavlov-pd').protocol
        self.C, self.D = self.p.index('C'), self.p.index('D')

    def test_complete_graph_from_all_defect(self):
        g = complete(6, [self.D] * 6)
        report = simulate_on_graph(self.p, g, max_steps=100000, seed=5, target=['C'] * 6)
        self.assertTrue(report.absorbed)
        self.assertEqual(report.final, (self.C,) * 6)

    def test_self_stabilizes_from_random_states(self):
        for make, size in ((complete, 6), (complete, 12), (ring, 8), (ring, 12)):
            for seed in range(100):
                g = make(size, pavlovpp.random_states(self.p, size, seed))
                report = simulate_on_graph(self.p, g, seed=seed)
                self.assertTrue(report.absorbed, 'seed %d: %s' % (seed, report.format(self.p)))
                self.assertEqual(report.final, (self.C,) * size)

    def test_from_networkx_relabels_sorted_nodes(self):
        graph = nx.Graph([('b', 'a'), ('b', 'c')])
        g = InteractionGraph.from_networkx(graph, [self.C, self.D, self.C])
        self.assertEqual((g.num_vertices, g.edges), (3, ((0, 1), (1, 2))))
        self.assertEqual(g.isolated(), ())

    def test_zero_steps_is_a_timeout(self):
        g = ring(4, [self.D] * 4)
        report = simulate_on_graph(self.p, g, max_steps=0)
        self.assertFalse(report.absorbed)
        self.assertEqual(report.final, (self.D,) * 4)
        self.assertIn('timeout', report.format(self.p))

    def test_graph_without_edges(self):
        g = InteractionGraph(3, (), (self.C,) * 3)
        with self.assertRaises(InvalidGraph):
            simulate_on_graph(self.p, g)
        self.assertEqual(g.isolated(), (0, 1, 2))

    def test_self_loop_rejected(self):
        with self.assertRaises(InvalidGraph):
            InteractionGraph(2, ((0, 0),), (self.C, self.C))

    def test_only_all_cooperate_is_absorbing(self):
        for g in (ring(5, [self.C] * 5), complete(4, [self.C] * 4)):
            self.assertEqual(graph_absorbing_states(self.p, g), [(self.C,) * g.num_vertices])

    def test_absorbing_enumeration_budget(self):
        with self.assertRaises(BudgetExceeded):
            graph_absorbing_states(self.p, ring(8, [self.C] * 8), budget=10)


if __name__ == '__main__':
    unittest.main()
