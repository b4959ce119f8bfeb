# std imports
import io
import json
import os
import shutil
import tempfile
import unittest

# local
import pavlovpp
from pavlovpp import cli


class CliTest(unittest.TestCase):

    def setUp(self):
        self.folder = tempfile.mkdtemp(prefix='pavlovpp-cli')

    def tearDown(self):
        shutil.rmtree(self.folder)

    def path(self, name):
        return os.path.join(self.folder, name)

    def run_cli(self, *argv):
        out = io.StringIO()
        code = cli.run(list(argv), stdout=out)
        return code, out.getvalue()

    def test_recognize(self):
        code, text = self.run_cli('recognize', '--protocol', 'threshold2')
        self.assertEqual(code, cli.OK)
        self.assertIn('Pavlovian', text)
        code, text = self.run_cli('recognize', '--protocol', 'cycle3-counterexample')
        self.assertEqual(code, cli.NEGATIVE)
        self.assertIn('q0', text)

    def test_recognize_json(self):
        code, text = self.run_cli('recognize', '--protocol', 'leader-classic', '--json')
        self.assertEqual(code, cli.NEGATIVE)
        obj = json.loads(text)
        self.assertEqual(obj['verdict'], 'NotSymmetric')
        self.assertEqual(obj['counterexample']['rule'], ['L', 'L', 'L', 'N'])

    def test_check(self):
        # given,
        code, text = self.run_cli('check', '--protocol', 'majority', '--n', '2..6')
        # verify,
        self.assertEqual(code, cli.OK)
        self.assertEqual(len(text.splitlines()), 5)
        self.assertTrue(text.startswith('n=2: Computes'))

    def test_check_counterexample_json(self):
        code, text = self.run_cli('check', '--protocol', 'threshold2', '--predicate', 'count(sigma) >= 3',
                                  '--n', '3..5', '--json')
        self.assertEqual(code, cli.NEGATIVE)
        # stops at the first failing size
        records = [json.loads(line) for line in text.splitlines()]
        self.assertEqual(len(records), 1)
        self.assertEqual(records[0]['verdict'], 'Fails')
        self.assertEqual((records[0]['n'], records[0]['predicate'], records[0]['weak']),
                         (3, 'count(sigma) >= 3', False))
        self.assertEqual(records[0]['counterexample']['input'], {'0': 1, 'sigma': 2})
        self.assertEqual(records[0]['counterexample']['component'], [{'2': 3}])

    def test_check_with_cache(self):
        cache = self.path('verdicts.sqlite')
        for _ in range(2):
            code, _ = self.run_cli('check', '--protocol', 'or', '--n', '2..4', '--cache', cache)
            self.assertEqual(code, cli.OK)
        with pavlovpp.VerdictStore(cache, flag='r') as store:
            self.assertEqual(store.summary(), {'Computes': 3})

    def test_xor_weak_fails_parity_by_default(self):
        # given: no --weak, so classical stable computation applies
        code, text = self.run_cli('check', '--protocol', 'xor-weak', '--n', '2', '--json')
        # verify,
        self.assertEqual(code, cli.NEGATIVE)
        record = json.loads(text)
        self.assertEqual((record['verdict'], record['n'], record['weak']), ('Fails', 2, False))
        self.assertEqual(self.run_cli('check', '--protocol', 'xor-weak', '--n', '2..4')[0], cli.NEGATIVE)

    def test_weak_check(self):
        code, text = self.run_cli('check', '--protocol', 'xor-weak', '--weak')
        self.assertEqual(code, cli.OK)
        self.assertEqual(len(text.splitlines()), 7)
        code, _ = self.run_cli('check', '--protocol', 'xor-weak', '--weak', '--predicate', 'count(1) mod 2 == 0',
                               '--n', '3')
        self.assertEqual(code, cli.NEGATIVE)

    def test_leader_check(self):
        code, text = self.run_cli('leader-check', '--protocol', 'leader-pavlovian')
        self.assertEqual(code, cli.OK)
        self.assertIn('never increases: yes', text)
        code, _ = self.run_cli('leader-check', '--protocol', 'leader-pavlovian', '--n', '2')
        self.assertEqual(code, cli.NEGATIVE)

    def test_usage_errors(self):
        self.assertEqual(self.run_cli('frobnicate')[0], cli.ERROR)
        self.assertEqual(self.run_cli('check', '--protocol', 'or', '--n', '5..2')[0], cli.ERROR)
        self.assertEqual(self.run_cli('check', '--protocol', 'no-such-thing')[0], cli.ERROR)
        self.assertEqual(self.run_cli('check', '--protocol', 'cycle3-counterexample')[0], cli.ERROR)

    def test_parse_error(self):
        fname = self.path('bad.pp')
        with open(fname, 'w') as fout:
            fout.write('states: a b\nrule: a b -> c\n')
        self.assertEqual(self.run_cli('recognize', '--protocol', fname)[0], cli.ERROR)

    def test_export_then_derive(self):
        # given,
        protocol, matrix = self.path('t2.pp'), self.path('t2.matrix')
        code, _ = self.run_cli('export', '--name', 'threshold2', '--out', protocol, '--matrix-out', matrix)
        self.assertEqual(code, cli.OK)
        # exercise,
        derived = self.path('derived.pp')
        code, _ = self.run_cli('derive', '--matrix', matrix, '--outputs', '2=1', '--out', derived)
        # verify,
        self.assertEqual(code, cli.OK)
        self.assertEqual(pavlovpp.load_protocol(derived).relation, pavlovpp.load_protocol(protocol).relation)
        self.assertEqual(pavlovpp.load_protocol(derived).output_map, (0, 0, 1))
        self.assertEqual(self.run_cli('recognize', '--protocol', derived)[0], cli.OK)

    def test_export_without_matrix(self):
        self.assertEqual(self.run_cli('export', '--name', 'leader-classic', '--matrix-out', self.path('m'))[0],
                         cli.ERROR)

    def test_symmetrize(self):
        out = self.path('sym.pp')
        code, _ = self.run_cli('symmetrize', '--protocol', 'leader-classic', '--out', out)
        self.assertEqual(code, cli.OK)
        self.assertTrue(pavlovpp.load_protocol(out).symmetric)
        code, _ = self.run_cli('leader-check', '--protocol', out, '--leader-states', 'L,L_p', '--n', '3..4')
        self.assertEqual(code, cli.OK)

    def test_simulate(self):
        code, text = self.run_cli('simulate', '--protocol', 'threshold2', '--input', 'sigma:2,0:3', '--certify')
        self.assertEqual(code, cli.OK)
        self.assertIn('{2:5}', text)
        self.assertIn('output 1', text)
        self.assertIn('entered a bottom SCC: at step', text)

    def test_simulate_on_graph(self):
        code, text = self.run_cli('simulate', '--protocol', 'pavlov-pd', '--graph', 'ring:6', '--trials', '5')
        self.assertEqual(code, cli.OK)
        self.assertEqual(text.strip(), 'absorbed 5/5')
        code, text = self.run_cli('simulate', '--protocol', 'pavlov-pd', '--graph', 'complete:4',
                                  '--vertex-states', 'D,D,D,D', '--steps', '0')
        self.assertEqual(code, cli.NEGATIVE)
        self.assertIn('timeout after 0 steps: D D D D', text)

    def test_certified_run_into_a_moving_bottom_scc(self):
        # given: one leader keeps toggling L1 <-> L2, so the run never falls silent
        argv = ['simulate', '--protocol', 'leader-pavlovian', '--input', 'L:1,N:2', '--steps', '2000']
        # exercise,
        code, text = self.run_cli(*argv, '--certify')
        # verify,
        self.assertEqual(code, cli.OK)
        self.assertIn('stopped after 2000 steps', text)
        self.assertIn('entered a bottom SCC: at step 0', text)
        record = json.loads(self.run_cli(*argv, '--certify', '--json')[1])
        self.assertEqual((record['verdict'], record['entered_at']), ('EnteredBottom', 0))
        self.assertEqual(self.run_cli(*argv)[0], cli.NEGATIVE)

    def test_simulate_on_graph_until_target(self):
        code, text = self.run_cli('simulate', '--protocol', 'pavlov-pd', '--graph', 'complete:4',
                                  '--vertex-states', 'D,D,D,D', '--target', 'D,D,D,D')
        self.assertEqual(code, cli.OK)
        self.assertIn('absorbed after 0 steps: D D D D', text)
        code, text = self.run_cli('simulate', '--protocol', 'pavlov-pd', '--graph', 'ring:6',
                                  '--vertex-states', 'D,D,D,D,D,D', '--target', 'C')
        self.assertEqual(code, cli.OK)
        self.assertIn(': C C C C C C', text)
        self.assertEqual(self.run_cli('simulate', '--protocol', 'pavlov-pd', '--graph', 'ring:6',
                                      '--target', 'C,C')[0], cli.ERROR)
        self.assertEqual(self.run_cli('simulate', '--protocol', 'pavlov-pd', '--input', 'C:2',
                                      '--target', 'C')[0], cli.ERROR)

    def test_enumerate(self):
        report = self.path('report.txt')
        code, text = self.run_cli('enumerate', '--states', '2', '--predicate', 'count(sigma) >= 1',
                                  '--n-max', '3', '--report', report)
        self.assertEqual(code, cli.NEGATIVE)
        with open(report) as fin:
            self.assertEqual(fin.read(), text)
        self.assertIn('survivor ', text)

    def test_catalog(self):
        code, text = self.run_cli('catalog', '--json')
        self.assertEqual(code, cli.OK)
        self.assertEqual([json.loads(line)['name'] for line in text.splitlines()], pavlovpp.library.names())


if __name__ == '__main__':
    unittest.main()
