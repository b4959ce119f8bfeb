# std imports
import itertools
import os
import unittest
from unittest import mock

# local
import pavlovpp
from pavlovpp import (
    BudgetExceeded, Dressing, InvalidInput, Pavlovian, column_responses, derive, enumerate_pavlovian, falsify,
    falsify_threshold3, parse_predicate, recognize, threshold,
)
from accessories import catalog

worker_count = pavlovpp.search.worker_count


class ColumnResponseTest(unittest.TestCase):

    def test_two_states(self):
        # each state either stays or moves to the other one
        self.assertEqual(len(column_responses(2)), 4)

    def test_responses_are_distinct(self):
        responses = [c.response for c in column_responses(3)]
        self.assertEqual(len(responses), len(set(responses)))
        self.assertIn((frozenset([0]), frozenset([1]), frozenset([2])), responses)
        self.assertIn((frozenset([1, 2]), frozenset([1]), frozenset([2])), responses)


class EnumerateTest(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.three = list(enumerate_pavlovian(3))

    def test_two_state_family(self):
        # given: every symmetric deterministic two-state relation
        expected = set()
        for a, b, c, d in itertools.product(range(2), repeat=4):
            rules = [(0, 0, a, a), (1, 1, b, b), (0, 1, c, d), (1, 0, d, c)]
            expected.add(pavlovpp.Protocol('ab', 'ab', [0, 1], [0, 0], rules).relation)
        # exercise,
        found = [p.relation for p in enumerate_pavlovian(2)]
        # verify,
        self.assertEqual(len(found), 16)
        self.assertEqual(set(found), expected)

    def test_relations_are_distinct(self):
        relations = [p.relation for p in self.three]
        self.assertEqual(len(relations), len(set(relations)))

    def test_threshold2_is_found(self):
        relations = {p.relation for p in self.three}
        self.assertIn(catalog('threshold2').protocol.relation, relations)
        self.assertNotIn(catalog('cycle3-counterexample').protocol.relation, relations)

    def test_every_protocol_is_pavlovian(self):
        for p in self.three[::97]:
            with self.subTest(name=p.name):
                verdict = recognize(p)
                self.assertIsInstance(verdict, Pavlovian)
                self.assertEqual(derive(verdict.witness, Dressing.of(p)).relation, p.relation)

    def test_state_limit(self):
        with self.assertRaises(BudgetExceeded):
            next(enumerate_pavlovian(4))
        with self.assertRaises(InvalidInput):
            next(enumerate_pavlovian(0))


class FalsifyTest(unittest.TestCase):

    def test_or_survives_on_two_states(self):
        # given,
        report = falsify(threshold('sigma', 1), 4, num_states=2)
        # verify,
        self.assertEqual(report.protocols, 16)
        self.assertEqual(report.candidates, 16 * 2 * 4)
        self.assertTrue(report.survivors)
        for p in report.survivors:
            self.assertTrue(pavlovpp.check_stable(p, threshold('sigma', 1), 4).ok)
        self.assertEqual(report.lines()[-1], 'candidates=128 survivors=%d' % len(report.survivors))

    def test_threshold2_survives_on_three_states(self):
        report = falsify(threshold('sigma', 2), 3, workers=worker_count())
        target = catalog('threshold2').protocol.relation
        self.assertTrue(any(p.relation == target for p in report.survivors))
        self.assertTrue(all(line.startswith('survivor ') for line in report.lines()[1:-1]))

    def test_no_three_state_protocol_counts_to_three(self):
        # exercise,
        report = falsify_threshold3(4, workers=worker_count())
        # verify,
        self.assertEqual(report.survivors, ())
        self.assertEqual(report.candidates, report.protocols * 6 * 8)
        lines = report.lines()
        self.assertTrue(lines[0].startswith('# scope: all 3-state Pavlovian protocols'))
        self.assertIn('count(sigma) >= 3', lines[0])
        self.assertTrue(lines[-1].endswith('survivors=0'))

    def test_bad_arguments(self):
        with self.assertRaises(InvalidInput):
            falsify(threshold('sigma', 2), 2)
        with self.assertRaises(InvalidInput):
            falsify(parse_predicate('count(tau) >= 1'), 3)


class WorkerCountTest(unittest.TestCase):

    def test_environment(self):
        with mock.patch.dict(os.environ, {'PP_THREADS': '4'}):
            self.assertEqual(worker_count(), 4)
        with mock.patch.dict(os.environ, {'PP_THREADS': 'many'}):
            self.assertEqual(worker_count(), 1)
        with mock.patch.dict(os.environ, {'PP_THREADS': '0'}):
            self.assertEqual(worker_count(), 1)


if __name__ == '__main__':
    unittest.main()
