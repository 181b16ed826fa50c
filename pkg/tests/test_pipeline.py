#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Test script for the Toupie Classification Pipeline.

Covers the decision tree on the fixture presentations, the evidence record
and its JSON form, witness planning, verification and batch mode.
"""

import json
import os
import sys
import tempfile
import unittest
from pathlib import Path
from unittest.mock import patch

import pandas as pd

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from toupie.classification_pipeline import (
    SCHEMA_VERSION, ClassifierConfig, ClassLabel, FiredCase, ToupieClassifier, classify, invariants,
)
from toupie.tools.errors import PresentationError, WitnessConstraintError
from toupie.tools.quiver_model import SINK, SOURCE, load_presentation, make_presentation
from toupie.witness_lab import WitnessFamily

FIXTURES = Path(__file__).parent.parent / "fixtures"

EXPECTED = {
    "hereditary_222.txt": (ClassLabel.HEREDITARY, FiredCase.HEREDITARY),
    "hereditary_prime_222.txt": (ClassLabel.HEREDITARY, FiredCase.HEREDITARY),
    "tilted_22_comb.txt": (ClassLabel.TILTED_NOT_HEREDITARY, FiredCase.TILTED_M1),
    "tilted_2225.txt": (ClassLabel.TILTED_NOT_HEREDITARY, FiredCase.TILTED_ONE_LONG),
    "tilted_3222.txt": (ClassLabel.TILTED_NOT_HEREDITARY, FiredCase.TILTED_ONE_LONG),
    "tilted_33_monomials.txt": (ClassLabel.TILTED_NOT_HEREDITARY, FiredCase.TILTED_ONE_RELATION),
    "canonical_3322.txt": (ClassLabel.QUASITILTED_NOT_TILTED, FiredCase.CANONICAL),
    "canonical_222.txt": (ClassLabel.QUASITILTED_NOT_TILTED, FiredCase.CANONICAL),
    "weakly_shod_43.txt": (ClassLabel.WEAKLY_SHOD_NOT_QUASITILTED, FiredCase.WEAKLY_SHOD),
    "laura_31.txt": (ClassLabel.LAURA_NOT_WEAKLY_SHOD, FiredCase.LAURA),
    "m2_not_canonical_2222.txt": (ClassLabel.NOT_LAURA, FiredCase.M2_NOT_CANONICAL),
    "not_laura_t5.txt": (ClassLabel.NOT_LAURA, FiredCase.TOO_MANY_BRANCHES),
    "two_long_3322.txt": (ClassLabel.NOT_LAURA, FiredCase.TWO_LONG_BRANCHES),
    "not_laura_222.txt": (ClassLabel.NOT_LAURA, FiredCase.NO_BRANCH_IN_IDEAL),
    "several_in_ideal_331.txt": (ClassLabel.NOT_LAURA, FiredCase.SEVERAL_IN_IDEAL),
    "branch_in_ideal_311.txt": (ClassLabel.NOT_LAURA, FiredCase.BRANCH_IN_IDEAL),
    "linear_tilted_4.txt": (ClassLabel.LINEAR_TILTED, FiredCase.LINEAR_TILTED),
    "linear_not_tilted_5.txt": (ClassLabel.LINEAR_NOT_TILTED, FiredCase.LINEAR_NOT_TILTED),
}


def classify_fixture(name):
    return classify(load_presentation(str(FIXTURES / name)))


class TestClassifierConfig(unittest.TestCase):
    """Test cases for ClassifierConfig class."""

    def test_config_defaults(self):
        """Unset values come from the unified configuration."""
        config = ClassifierConfig()
        self.assertFalse(config.verify)
        self.assertEqual(config.lambdas, [1, 2, 3])
        self.assertEqual(config.random_modules, 20)
        self.assertEqual(config.random_module_seed, 0)
        self.assertEqual(config.jobs, 1)

    def test_config_creation(self):
        config = ClassifierConfig(verify=True, lambdas=["1/2"], random_modules=2, output_dir="out")
        self.assertTrue(config.verify)
        self.assertEqual(config.lambdas, ["1/2"])
        self.assertEqual(config.random_modules, 2)
        self.assertEqual(config.output_dir, "out")


class TestDecisionTree(unittest.TestCase):
    """Every fixture lands on its expected leaf."""

    def test_fixture_labels(self):
        for name, (label, fired) in EXPECTED.items():
            result = classify_fixture(name)
            self.assertIs(result.label, label, msg=name)
            self.assertEqual(result.evidence.fired_case, fired, msg=name)

    def test_invariants(self):
        e = invariants(load_presentation(str(FIXTURES / "not_laura_222.txt")))
        self.assertEqual((e.t, e.m), (3, 2))
        self.assertFalse(e.simply_connected)
        self.assertEqual(e.linkage_edges, [(1, 2)])
        self.assertEqual(e.branches_in_I, [])
        self.assertIsNone(e.canonical)

    def test_canonical_evidence(self):
        e = classify_fixture("canonical_3322.txt").evidence
        self.assertEqual(e.canonical, {'anchor': [1, 2], 'lambdas': [[3, "1"], [4, "2"]]})
        self.assertEqual(e.long_branch_count, 2)

    def test_quasitilted_overlap_warning(self):
        warnings = classify_fixture("canonical_222.txt").evidence.warnings
        self.assertEqual(len(warnings), 1)
        self.assertIn("MainTheorem(T-ii)", warnings[0])
        self.assertEqual(classify_fixture("canonical_3322.txt").evidence.warnings, [])

    def test_rank_order(self):
        ranks = [label.rank for label in (ClassLabel.HEREDITARY, ClassLabel.TILTED_NOT_HEREDITARY,
                                          ClassLabel.QUASITILTED_NOT_TILTED, ClassLabel.WEAKLY_SHOD_NOT_QUASITILTED,
                                          ClassLabel.LAURA_NOT_WEAKLY_SHOD, ClassLabel.NOT_LAURA)]
        self.assertEqual(ranks, sorted(ranks))
        self.assertEqual(ClassLabel.LINEAR_TILTED.rank, ClassLabel.TILTED_NOT_HEREDITARY.rank)

    def test_invalid_presentation(self):
        with self.assertRaises(PresentationError):
            classify(make_presentation([2, 2], monomials=[(1, 0, 1)]))

    def test_classification_ignores_branch_order(self):
        first = classify(make_presentation([3, 1], monomials=[(1, 0, 3)]))
        second = classify(make_presentation([1, 3], monomials=[(2, 0, 3)]))
        self.assertIs(first.label, second.label)


class TestEvidenceOutput(unittest.TestCase):
    """JSON and text renderings of a result."""

    def test_json_key_order(self):
        data = classify_fixture("laura_31.txt").to_dict()
        self.assertEqual(list(data), ['schema', 'label', 't', 'm', 'lengths', 'simply_connected', 'linkage_edges',
                                      'branches_in_I', 'relations_per_branch', 'canonical', 'long_branch_count',
                                      'fired_case', 'warnings', 'witnesses'])
        self.assertEqual(data['schema'], SCHEMA_VERSION)

    def test_json_is_byte_stable(self):
        first = classify_fixture("two_long_3322.txt").to_json()
        self.assertEqual(first, classify_fixture("two_long_3322.txt").to_json())
        self.assertEqual(json.loads(first)['fired_case'], FiredCase.TWO_LONG_BRANCHES)

    def test_text_output(self):
        text = classify_fixture("hereditary_222.txt").to_text()
        self.assertIn("label: hereditary\n", text)
        self.assertIn("fired_case: MainTheorem(H)\n", text)
        self.assertIn("linkage_edges: -\n", text)


class TestWitnessPlanning(unittest.TestCase):

    def families(self, name):
        return [spec.family for spec in classify_fixture(name).evidence.witnesses]

    def test_two_long_branches(self):
        witnesses = classify_fixture("two_long_3322.txt").evidence.witnesses
        self.assertEqual([w.family for w in witnesses], [WitnessFamily.RAD_P0, WitnessFamily.SIMPLY_CONNECTED_FAMILY])
        self.assertEqual(witnesses[0].parameters['tau_power'], 3)
        self.assertEqual(witnesses[0].parameters['vertices'],
                         [SOURCE, "1.1", "2.1", "3.1", "4.1", "1.2", "2.2", SINK])

    def test_no_branch_in_ideal(self):
        (spec,) = classify_fixture("not_laura_222.txt").evidence.witnesses
        self.assertEqual(spec.family, WitnessFamily.NO_BRANCH_IN_IDEAL)
        self.assertEqual((spec.parameters['r'], spec.parameters['s']), (2, 1))
        self.assertEqual(spec.parameters['branches'], [1, 2])

    def test_branch_in_ideal(self):
        (spec,) = classify_fixture("branch_in_ideal_311.txt").evidence.witnesses
        self.assertEqual(spec.to_dict()['parameters'],
                         {'m': 2, 'length': 3, 'branch': 1, 'monomials': [[1, 0, 3]]})

    def test_other_cases(self):
        self.assertEqual(self.families("laura_31.txt"), [WitnessFamily.ONE_SURVIVING_BRANCH, WitnessFamily.SEGMENT])
        self.assertEqual(self.families("several_in_ideal_331.txt"), [WitnessFamily.TWO_BRANCHES_IN_IDEAL])
        self.assertEqual(self.families("not_laura_t5.txt"),
                         [WitnessFamily.RAD_P0, WitnessFamily.SIMPLY_CONNECTED_FAMILY])
        self.assertEqual(self.families("tilted_22_comb.txt"), [WitnessFamily.RAD_P0])
        self.assertEqual(self.families("hereditary_222.txt"), [])
        self.assertEqual(self.families("weakly_shod_43.txt"), [])


class TestVerification(unittest.TestCase):
    """Verification reports for the fired case."""

    def setUp(self):
        self.classifier = ToupieClassifier(ClassifierConfig(verify=True, random_modules=3))

    def verify(self, name):
        return self.classifier.classify(load_presentation(str(FIXTURES / name))).verification

    def test_hereditary_has_nothing_to_check(self):
        self.assertEqual(self.verify("hereditary_222.txt"), {'status': 'ok', 'checks': []})

    def test_tilted_translate_is_projective(self):
        report = self.verify("tilted_2225.txt")
        self.assertEqual(report['status'], 'ok')
        self.assertIn("~ P_4.2", report['checks'][0]['check'])

    def test_socle_of_radical(self):
        self.assertEqual(self.verify("tilted_22_comb.txt")['status'], 'ok')

    def test_laura_witnesses(self):
        report = self.verify("laura_31.txt")
        self.assertEqual(report['status'], 'ok')
        names = [c['check'] for c in report['checks']]
        self.assertIn("tau N: dimension vector", names)
        self.assertIn("segment(1.2,1.1): relations", names)

    def test_segment_checks_cover_every_pair(self):
        checks = []
        p = make_presentation([4, 1], monomials=[(1, 0, 2)])
        self.classifier._segment_checks(checks, p, 1)
        self.assertTrue(all(c['passed'] for c in checks))
        relations = [c for c in checks if c['check'].endswith(": relations")]
        self.assertEqual(len(relations), 6)
        blocked = [c['check'] for c in relations if c['expected'] != "hold"]
        self.assertEqual(blocked, ["segment(1.2,1.1): relations", "segment(1.3,1.1): relations"])
        self.assertIn({'check': "segment(1.3,1.2): dimension at 1.3", 'expected': 2, 'observed': 2, 'passed': True},
                      checks)

    @patch('toupie.classification_pipeline.segment')
    def test_segment_failure_is_reported(self, mock_segment):
        mock_segment.side_effect = WitnessConstraintError("segment module violates its relations")
        report = self.verify("laura_31.txt")
        self.assertEqual(report['status'], 'failed')
        failed = [c for c in report['checks'] if not c['passed']]
        self.assertEqual({c['check'] for c in failed},
                         {"segment(1.1,1.2): relations", "segment(1.2,1.1): relations"})
        self.assertEqual(failed[0]['observed'], "segment module violates its relations")

    def test_property_suite_for_tilted_monomials(self):
        report = self.verify("tilted_33_monomials.txt")
        self.assertEqual(report['status'], 'ok')
        self.assertEqual(len(report['checks']), 1)

    def test_property_suite_on_twenty_random_modules(self):
        classifier = ToupieClassifier(ClassifierConfig(verify=True, random_modules=20))
        for name in ("weakly_shod_43.txt", "tilted_33_monomials.txt"):
            report = classifier.classify(load_presentation(str(FIXTURES / name))).verification
            self.assertEqual(report['status'], 'ok', msg=name)
            self.assertEqual([c['check'] for c in report['checks']],
                             ["M_0 = 0 or M_inf = 0 on summands of 20 random modules"], msg=name)

    def test_no_branch_witness_meets_contract(self):
        report = self.verify("not_laura_222.txt")
        self.assertEqual(report['status'], 'ok')
        names = [c['check'] for c in report['checks']]
        self.assertIn("no_branch_in_ideal(lambda=1): pd", names)
        self.assertIn("no_branch_in_ideal(lambda=3): last resolution term", names)
        self.assertIn("no_branch_in_ideal: pairwise non-isomorphic", names)

    def test_simply_connected_family_beyond_one_relation(self):
        for name in ("not_laura_t5.txt", "two_long_3322.txt"):
            checks = [c for c in self.verify(name)['checks'] if c['check'].startswith("simply_connected_family")]
            self.assertIn("simply_connected_family: pairwise non-isomorphic", [c['check'] for c in checks])
            self.assertIn("simply_connected_family(lambda=2): relations", [c['check'] for c in checks])
            self.assertTrue(all(c['passed'] for c in checks), msg=name)

    def test_m2_not_canonical_witness_meets_contract(self):
        self.assertEqual(self.verify("m2_not_canonical_2222.txt")['status'], 'ok')


class TestBatch(unittest.TestCase):
    """Batch mode with a summary table."""

    def test_batch_with_summary(self):
        names = ["tilted_22_comb.txt", "hereditary_222.txt", "invalid/bad_syntax.txt"]
        with tempfile.TemporaryDirectory() as temp_dir:
            classifier = ToupieClassifier(ClassifierConfig(output_dir=temp_dir))
            rows = classifier.classify_batch([str(FIXTURES / n) for n in names])
            self.assertEqual([Path(r['input']).name for r in rows],
                             ["hereditary_222.txt", "bad_syntax.txt", "tilted_22_comb.txt"])
            self.assertEqual(rows[1]['error_type'], 'ParseError')
            summary_path = os.path.join(temp_dir, "summary.csv")
            self.assertTrue(os.path.exists(summary_path))
            table = pd.read_csv(summary_path)
            self.assertEqual(len(table), 3)
            self.assertEqual(table['label'].iloc[0], 'hereditary')

    @patch('toupie.classification_pipeline.get_pipeline_param')
    def test_jobs_capped_by_configuration(self, mock_param):
        mock_param.side_effect = lambda section, name, default=None: 1 if name == 'max_parallel_jobs' else default
        classifier = ToupieClassifier(ClassifierConfig(jobs=8))
        rows = classifier.classify_batch([str(FIXTURES / "laura_31.txt"), str(FIXTURES / "canonical_222.txt")])
        self.assertEqual([r['label'] for r in rows], ['quasitilted-not-tilted', 'laura-not-weakly-shod'])


def run_tests():
    """Run all pipeline tests."""
    loader = unittest.TestLoader()
    suite = unittest.TestSuite()
    for case in (TestClassifierConfig, TestDecisionTree, TestEvidenceOutput, TestWitnessPlanning,
                 TestVerification, TestBatch):
        suite.addTests(loader.loadTestsFromTestCase(case))
    result = unittest.TextTestRunner(verbosity=2).run(suite)
    return result.wasSuccessful()


if __name__ == "__main__":
    success = run_tests()
    sys.exit(0 if success else 1)
