import json
import os
import tempfile
from io import StringIO

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from expressions.exceptions import CatalogError, ConfigurationError
from expressions.verdicts import ZeroTestVerdict

from .catalog import PROVENANCE_CHOICES, CatalogEntry, load_catalog
from .config import load_run_config
from .forms import RunConfigForm
from .operations import Outcome
from .reports import REPORT_KEYS
from .suite import LOGICAL, NUMERICAL, PASS, classify_mismatch, verify_paper


def run(*args, **options):
    """call_command with captured output; returns the printed text."""
    out = StringIO()
    call_command(*args, stdout=out, **options)
    return out.getvalue()


def run_json(*args, **options):
    return json.loads(run(*args, json=True, **options))


def write_json(directory, name, document):
    path = os.path.join(directory, name)
    with open(path, 'w', encoding='utf-8') as handle:
        json.dump(document, handle)
    return path


# ============================================
# STEP 1: RUN CONFIGURATION TESTS
# ============================================
# These tests verify the three configuration layers and their validation

class RunConfigTest(SimpleTestCase):
    """
    Test suite for load_run_config() and RunConfigForm.
    """

    # TEST 1: Defaults
    def test_defaults(self):
        """
        Test that an empty environment gives the settings defaults.
        """
        config = load_run_config({}, environ={})
        self.assertEqual((config.tolerance, config.samples, config.seed), (1e-9, 20, 0))
        self.assertEqual(config.output, 'human')
        self.assertEqual(config.box, {})
        self.assertEqual(config.options['tol'], 1e-9)

    # TEST 2: Precedence
    def test_precedence(self):
        """
        Test settings < configuration file < flags.
        """
        with tempfile.TemporaryDirectory() as directory:
            path = write_json(directory, 'run.json', {'samples': 7, 'seed': 3, 'box': ['q:0.1:10']})
            config = load_run_config({'seed': 5, 'samples': None}, environ={'ODEGEOMETRY_CONFIG': path})
        self.assertEqual(config.samples, 7)
        self.assertEqual(config.seed, 5)
        self.assertEqual(config.box, {'q': (0.1, 10.0)})
        self.assertEqual(config.with_box(['q:1:2', 'y:0.5:2']), {'q': (0.1, 10.0), 'y': (0.5, 2.0)})

    # TEST 3: Invalid Values
    def test_invalid_values(self):
        """
        Test that a non-positive tolerance, too few samples, a bad box and a bad output are refused.
        """
        for flags in ({'tolerance': 0}, {'samples': 4}, {'box': ['q:1']}, {'output': 'xml'}):
            with self.assertRaises(ConfigurationError, msg=str(flags)):
                load_run_config(flags, environ={})
        with tempfile.TemporaryDirectory() as directory:
            path = write_json(directory, 'run.json', {'samplez': 7})
            with self.assertRaises(ConfigurationError):
                load_run_config({}, path=path)
            with self.assertRaises(ConfigurationError):
                load_run_config({}, path=os.path.join(directory, 'missing.json'))

    # TEST 4: Box Field
    def test_box_field(self):
        """
        Test that the box field accepts a whitespace-separated string of items.
        """
        form = RunConfigForm({'tolerance': 1e-8, 'samples': 5, 'seed': 0, 'precision': 30,
                              'box': 'q:0.1:10 y:1:2', 'output': 'json'})
        self.assertTrue(form.is_valid(), form.errors)
        self.assertEqual(form.cleaned_data['box'], {'q': (0.1, 10.0), 'y': (1.0, 2.0)})
        form = RunConfigForm({'tolerance': 1e-8, 'samples': 5, 'seed': 0, 'precision': 30,
                              'box': 'q:2:1', 'output': 'json'})
        self.assertFalse(form.is_valid())
        self.assertIn('box', form.errors)


# ============================================
# STEP 2: CATALOG TESTS
# ============================================
# These tests verify the checked-in catalog document

class CatalogTest(SimpleTestCase):
    """
    Test suite for load_catalog() and CatalogEntry.
    """

    # TEST 5: Checked-in Catalog
    def test_checked_in_catalog(self):
        """
        Test that entries are sorted, unique and tagged with a provenance.
        """
        entries = load_catalog()
        ids = [entry.id for entry in entries]
        self.assertEqual(ids, sorted(set(ids)))
        self.assertIn('ode3-c2', ids)
        self.assertIn('lie-ccg2', ids)
        for entry in entries:
            self.assertIn(entry.provenance, PROVENANCE_CHOICES)
            self.assertTrue(entry.expect, entry.id)

    # TEST 6: Malformed Entries
    def test_malformed_entries(self):
        """
        Test that a missing provenance, an unknown action and a bad box are refused.
        """
        good = {'id': 'x', 'family': 'ode3', 'action': 'classify', 'expect': {'verdict': 'generic'},
                'anchor': 'q^2', 'provenance': 'derived', 'inputs': {'formula': 'q^2'}}
        self.assertEqual(CatalogEntry.from_dict(good).inputs, {'formula': 'q^2'})
        for broken in ({k: v for k, v in good.items() if k != 'provenance'},
                       dict(good, action='solve'),
                       dict(good, provenance='guessed'),
                       dict(good, expect={}),
                       dict(good, box=['q:0.1'])):
            with self.assertRaises(CatalogError):
                CatalogEntry.from_dict(broken)
        with tempfile.TemporaryDirectory() as directory:
            path = write_json(directory, 'catalog.json', {'entries': [good, good]})
            with self.assertRaises(CatalogError):
                load_catalog(path)


# ============================================
# STEP 3: COMMAND TESTS
# ============================================
# These tests verify the management commands, their reports and exit codes

class CommandTest(SimpleTestCase):
    """
    Test suite for the ode3, dkp, ode2, monge and lie commands.
    """

    # TEST 7: JSON Report
    def test_ode3_classify_json(self):
        """
        Test that q^(3/2) on q in [0.1, 10] is reported Einstein-Weyl.
        """
        report = run_json('ode3', 'classify', F='q^(3/2)', box=['q:0.1:10'], samples=8)
        for key in REPORT_KEYS:
            self.assertIn(key, report)
        self.assertEqual(report['command'], 'ode3 classify')
        self.assertEqual(report['verdicts']['verdict'], 'einstein-weyl')
        self.assertEqual(report['status'], 'ok')
        self.assertEqual(report['config']['box'], {'q': [0.1, 10.0]})
        self.assertEqual(report['inputs']['formula'], 'q^(3/2)')

    # TEST 8: Human Output
    def test_monge_classify2_human(self):
        """
        Test that z' = y''^2 + y prints the g2 verdict.
        """
        text = run('monge', 'classify2', F='q^2+y', samples=5)
        self.assertIn('monge classify2: ok', text)
        self.assertIn('verdict: g2', text)

    # TEST 9: Expected Verdict
    def test_expect_mismatch_exits_1(self):
        """
        Test that a wrong --expect exits with status 1 after printing the report.
        """
        out = StringIO()
        with self.assertRaises(CommandError) as caught:
            call_command('monge', 'classify2', F='q+y', samples=5, expect=['verdict=g2'], stdout=out)
        self.assertEqual(caught.exception.returncode, 1)
        self.assertIn('integral-free', out.getvalue())
        self.assertIn('verdict: integral-free', run('monge', 'classify2', F='q+y', samples=5,
                                                      expect=['verdict=integral-free']))

    # TEST 10: Usage Errors
    def test_usage_errors_exit_2(self):
        """
        Test malformed formulas, unknown identifiers, bad boxes and missing inputs.
        """
        cases = (
            {'F': 'q^'},
            {'F': 'w*q'},
            {'F': 'q^2', 'box': ['q:1']},
            {'F': 'q^2', 'tol': 0.0},
            {},
        )
        for options in cases:
            with self.assertRaises(CommandError, msg=str(options)) as caught:
                run('ode3', 'classify', samples=5, **options)
            self.assertEqual(caught.exception.returncode, 2)
        with self.assertRaises(CommandError) as caught:
            run('ode3', 'invariants', F='q^2', param=['alpha'])
        self.assertEqual(caught.exception.returncode, 2)

    # TEST 11: Lie Algebra Verification
    def test_lie_verify(self):
        """
        Test the point-class structure table: Jacobi holds, Killing inertia (3,1,3).
        """
        report = run_json('lie', 'verify', 'syspoint')
        self.assertEqual(report['verdicts']['jacobi'], 'holds')
        self.assertEqual(report['verdicts']['d_squared'], 'zero')
        self.assertEqual(report['verdicts']['killing_signature'], [3, 1, 3])
        self.assertFalse(report['verdicts']['nondegenerate'])

    # TEST 12: dKP Residual
    def test_dkp_residual(self):
        """
        Test that u = sqrt(2x) solves dKP and u = x leaves a witness.
        """
        good = run_json('dkp', 'residual', u='sqrt(2*x)', samples=8)
        self.assertEqual(good['verdicts']['residual'], 'identically-zero')
        bad = run_json('dkp', 'residual', u='x', samples=5)
        self.assertEqual(bad['verdicts']['residual'], 'nonzero')
        self.assertIn('residual', bad['witnesses'])

    # TEST 13: Second-order Commands
    def test_ode2(self):
        """
        Test w2 = 24 for p^4 and the (2,2) signature of its Fefferman metric.
        """
        invariants = run_json('ode2', 'invariants', Q='p^4', samples=5)
        self.assertEqual(invariants['verdicts']['w2'], 'nonzero')
        self.assertEqual(invariants['details']['invariants']['w2'], '24')
        metric = run_json('ode2', 'metric', Q='p^4')
        self.assertEqual(metric['verdicts']['signature'], [2, 2, 0])

    # TEST 14: Solutions
    def test_verify_solution(self):
        """
        Test the integral-free solution of z' = (y')^2 and a hand-written wrong one.
        """
        report = run_json('monge', 'verify-solution', F='p^2', equation='monge1', solution='integral-free', samples=8)
        self.assertEqual(report['verdicts']['solution'], 'identically-zero')
        with tempfile.TemporaryDirectory() as directory:
            path = write_json(directory, 'solution.json', {'x': 'w_2', 'y': 'w_1', 'z': 'w_0'})
            out = StringIO()
            with self.assertRaises(CommandError) as caught:
                call_command('monge', 'verify-solution', F='p^2', equation='monge1', solution_file=path,
                             samples=5, expect=['solution=identically-zero'], stdout=out)
        self.assertEqual(caught.exception.returncode, 1)
        self.assertIn('witness for solution', out.getvalue())

    # TEST 15: Report File
    def test_report_file(self):
        """
        Test that --report writes the same JSON document.
        """
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'report.json')
            run('monge', 'classify1', F='z', samples=5, report=path)
            with open(path, encoding='utf-8') as handle:
                report = json.load(handle)
        self.assertEqual(report['verdicts']['verdict'], 'branch-cc2')
        self.assertEqual(report['config']['samples'], 5)


# ============================================
# STEP 4: CATALOG RUN TESTS
# ============================================
# These tests verify verify_paper() and the failure taxonomy

class VerifyPaperTest(SimpleTestCase):
    """
    Test suite for verify_paper() and the verify command.
    """

    # TEST 16: Catalog Subset
    def test_subset_passes(self):
        """
        Test that the first-order Monge entries and the point-class table pass.
        """
        report = run_json('verify', 'paper', only=['monge1-', 'lie-syspoint'], samples=8)
        self.assertEqual(report['status'], 'ok')
        self.assertIn('monge1-integral-free', report['verdicts'])
        self.assertTrue(all(status == PASS for status in report['verdicts'].values()))
        self.assertTrue(report['details']['passed'])

    # TEST 17: Failure Taxonomy
    def test_classify_mismatch(self):
        """
        Test that a tiny residual is numerical and a large one or a wrong class is logical.
        """
        outcome = Outcome('F')
        outcome.record('tiny', ZeroTestVerdict(False, 5, 0, 1e-13, scale=1.0, worst_ratio=1e-11,
                                               witness={'q': 1.0}, value=1e-11))
        outcome.record('large', ZeroTestVerdict(False, 5, 0, 1e-9, scale=1.0, worst_ratio=0.5,
                                                witness={'q': 1.0}, value=0.5))
        self.assertEqual(classify_mismatch('tiny', 'identically-zero', outcome), NUMERICAL)
        self.assertEqual(classify_mismatch('large', 'identically-zero', outcome), LOGICAL)
        self.assertEqual(classify_mismatch('verdict', 'generic', outcome), LOGICAL)

    # TEST 18: Failing Catalog
    def test_failing_catalog_exits_1(self):
        """
        Test a wrong expectation and an entry that raises in a custom catalog.
        """
        entries = [
            {'id': 'a-wrong', 'family': 'monge', 'action': 'classify2', 'inputs': {'formula': 'q^2'},
             'expect': {'verdict': 'integral-free'}, 'anchor': 'q^2', 'provenance': 'trivial'},
            {'id': 'b-broken', 'family': 'monge', 'action': 'classify2', 'inputs': {'formula': 'w*q'},
             'expect': {'verdict': 'g2'}, 'anchor': 'w q', 'provenance': 'trivial'},
            {'id': 'c-right', 'family': 'monge', 'action': 'classify2', 'inputs': {'formula': 'q+y'},
             'expect': {'verdict': 'integral-free'}, 'anchor': 'q + y', 'provenance': 'trivial'},
        ]
        with tempfile.TemporaryDirectory() as directory:
            path = write_json(directory, 'catalog.json', {'entries': entries})
            summary = verify_paper(load_run_config({'samples': 5}, environ={}), catalog=path)
            with self.assertRaises(CommandError) as caught:
                run('verify', 'paper', catalog=path, samples=5)
        self.assertEqual(caught.exception.returncode, 1)
        self.assertEqual(list(summary.frame['status']), ['logical', 'error', 'pass'])
        self.assertFalse(summary.passed)
        self.assertEqual(summary.counts(), {'logical': 1, 'error': 1, 'pass': 1})

    # TEST 19: Seed Stability
    def test_seed_stability(self):
        """
        Test that verdicts do not depend on the seed.
        """
        results = [verify_paper(load_run_config({'seed': seed, 'samples': 8}, environ={}),
                                only=['monge1-', 'monge2-linear', 'monge2-square']).verdicts
                   for seed in (0, 1, 2)]
        self.assertEqual(results[0], results[1])
        self.assertEqual(results[0], results[2])
