#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Tests for the witness module families.
"""

import sys
import unittest
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from toupie.tools.algebra_core import algebra_for, truncate
from toupie.tools.errors import WitnessConstraintError
from toupie.tools.ideal_analysis import close_ideal
from toupie.tools.quiver_model import SINK, SOURCE, load_presentation, make_presentation, recognize_toupie, to_general
from toupie.tools.rep_engine import Verdict, check, is_indecomposable, projective_resolution
from toupie.witness_lab import (
    WitnessFamily, branch_in_ideal, build_witness, evaluate_contract, family_members, no_branch_in_ideal,
    one_surviving_branch, pairwise_non_isomorphic, rad_p0, resolution_rank, segment, segment_obstruction,
    simply_connected_family, two_branches_in_ideal,
)

FIXTURES = Path(__file__).parent.parent / "fixtures"


def fixture(name):
    return load_presentation(str(FIXTURES / name))


class TestContracts(unittest.TestCase):
    """Relations hold and the homological bounds are met."""

    def test_branch_in_ideal(self):
        outcome = evaluate_contract(branch_in_ideal(lam=2, m=2, length=2))
        self.assertTrue(outcome['relations_hold'])
        self.assertEqual(outcome['pd'], 2)
        self.assertTrue(outcome['satisfied'])

    def test_one_surviving_branch(self):
        witness = one_surviving_branch(length=3)
        self.assertEqual(witness.module.dimension_vector()[SOURCE], 1)
        outcome = evaluate_contract(witness)
        self.assertEqual((outcome['pd'], outcome['id']), (2, 2))
        self.assertTrue(outcome['satisfied'])

    def test_two_branches_in_ideal(self):
        outcome = evaluate_contract(two_branches_in_ideal(lam=3))
        self.assertTrue(outcome['relations_hold'])
        self.assertTrue(outcome['satisfied'])

    def test_no_branch_family_meets_contract(self):
        for n in (1, 2, 3):
            witness = no_branch_in_ideal(r=2, s=1, lam=n)
            self.assertEqual(witness.spec.parameters['m'], 2)
            dims = witness.module.dimension_vector()
            self.assertEqual((dims[SOURCE], dims["1.1"], dims["2.1"], dims[SINK]), (n + 1, n, n, n + 1))
            outcome = evaluate_contract(witness)
            self.assertTrue(outcome['relations_hold'])
            self.assertEqual((outcome['pd'], outcome['id']), (2, 2))
            self.assertTrue(outcome['satisfied'])
            self.assertIs(is_indecomposable(witness.module).verdict, Verdict.YES)

    def test_no_branch_resolution_ends_in_projectives_at_sink(self):
        witness = no_branch_in_ideal(r=2, s=1, lam=2)
        terms = projective_resolution(witness.module)
        self.assertEqual(len(terms), 3)
        self.assertEqual(sorted(terms[0]), [SOURCE] * 3)
        self.assertEqual(terms[-1], [SINK])
        # 2(r - m + s) - 1 on a single relation
        self.assertEqual(witness.spec.parameters['resolution_k'], 1)
        self.assertEqual(resolution_rank(witness), 1)

    def test_no_branch_with_two_relations(self):
        witness = no_branch_in_ideal(r=3, s=1, lam=1)
        self.assertEqual(witness.spec.parameters['m'], 2)
        outcome = evaluate_contract(witness)
        self.assertEqual((outcome['pd'], outcome['id']), (2, 2))
        self.assertEqual(resolution_rank(witness), witness.spec.parameters['resolution_k'])
        self.assertEqual(resolution_rank(witness), 2)

    def test_no_branch_on_the_fixture_relation(self):
        witness = no_branch_in_ideal(r=2, s=1, lam=1, relations=[["1", "-1"]])
        outcome = evaluate_contract(witness)
        self.assertTrue(outcome['satisfied'])
        self.assertEqual(resolution_rank(witness), 1)

    def test_simply_connected_family(self):
        witness = simply_connected_family([2, 1, -1, 3], lam=5)
        self.assertEqual(check(witness.module), [])
        params = witness.spec.parameters
        self.assertEqual(params['m'], 3)
        self.assertEqual(witness.spec.to_dict()['parameters']['relations'][0][1], "1/2")
        self.assertEqual(params['scalars'][2:], [0, 0])
        self.assertEqual(sum(w * c for w, c in zip(params['relations'][0], params['scalars'])), 0)

    def test_simply_connected_family_with_two_relations(self):
        relations = [[1, 1, 1, 1, 1], [1, 2, 3, 4, 5]]
        members = [simply_connected_family(relations, lam=lam) for lam in (1, 2, 3)]
        for witness in members:
            self.assertEqual(check(witness.module), [])
            self.assertEqual(witness.spec.parameters['m'], 3)
            self.assertIs(is_indecomposable(witness.module).verdict, Verdict.YES)
        scalars = members[0].spec.parameters['scalars']
        self.assertEqual((scalars[2], scalars[3]), (0, 0))
        self.assertTrue(any(c != 0 for c in scalars))
        self.assertTrue(pairwise_non_isomorphic(members))


class TestFamilies(unittest.TestCase):

    def test_members_are_pairwise_non_isomorphic(self):
        for family, params in (("no_branch_in_ideal", {}), ("branch_in_ideal", {'m': 3}),
                               ("simply_connected_family", {'relations': [[1, 1, 1, 1]]})):
            members = family_members(family, [1, 2, 3], **params)
            self.assertEqual(len(members), 3)
            self.assertTrue(pairwise_non_isomorphic(members), msg=family)

    def test_same_parameter_is_isomorphic(self):
        members = family_members("branch_in_ideal", [2, 2])
        self.assertFalse(pairwise_non_isomorphic(members))

    def test_build_witness_by_tag(self):
        witness = build_witness("two_branches_in_ideal", lam=1)
        self.assertIs(witness.spec.family, WitnessFamily.TWO_BRANCHES_IN_IDEAL)
        self.assertEqual(witness.presentation.lengths, (3, 3, 1))

    def test_constraint_violations(self):
        bad = [
            lambda: no_branch_in_ideal(r=1),
            lambda: no_branch_in_ideal(r=2, s=0),
            lambda: no_branch_in_ideal(r=3, relations=[[1, 1]]),
            lambda: no_branch_in_ideal(r=3, relations=[[1, 1, 0], [1, -1, 0]]),
            lambda: no_branch_in_ideal(lam=0),
            lambda: no_branch_in_ideal(lam="1/2"),
            lambda: branch_in_ideal(m=1),
            lambda: branch_in_ideal(monomials=[]),
            lambda: one_surviving_branch(length=1),
            lambda: two_branches_in_ideal(length1=2),
            lambda: simply_connected_family([1, 1, 1]),
            lambda: simply_connected_family([[1, 1, 1, 1], [1, 2, 3, 4]]),
            lambda: simply_connected_family([[1, 1, 1, 1], [1, 1, 1]]),
            lambda: simply_connected_family([1, 1, 1, 1], lam=0),
            lambda: build_witness("segment"),
            lambda: build_witness("no_such_family"),
            lambda: build_witness("branch_in_ideal", colour=1),
        ]
        for k, make in enumerate(bad):
            with self.assertRaises(WitnessConstraintError, msg=f"case {k}"):
                make()


class TestPresentationWitnesses(unittest.TestCase):
    """Segment modules and rad P0 built from an input presentation."""

    def test_segment_forward_and_backward(self):
        p = fixture("laura_31.txt")
        forward = segment(p, "1.1", "1.2").module
        self.assertEqual(forward.dims["1.1"], 0)
        self.assertEqual(forward.dims["1.2"], 0)
        self.assertEqual((forward.dims[SOURCE], forward.dims[SINK]), (1, 1))
        backward = segment(p, "1.2", "1.1").module
        self.assertEqual(backward.dims["1.1"], 2)
        self.assertEqual(check(backward), [])

    def test_segment_respects_zero_paths(self):
        p = make_presentation([4, 1], monomials=[(1, 0, 2)])
        outside = segment(p, "1.3", "1.2").module
        self.assertEqual(check(outside), [])
        self.assertEqual(outside.maps["a1_1"].tolist(), [[0]])
        self.assertEqual(outside.dims["1.3"], 2)
        self.assertIsNone(segment_obstruction(p, "1.3", "1.2"))
        self.assertEqual(check(segment(p, "1.2", "1.3").module), [])
        self.assertEqual(segment_obstruction(p, "1.2", "1.1"), (0, 2))
        with self.assertRaises(WitnessConstraintError):
            segment(p, "1.2", "1.1")
        self.assertIsNone(segment_obstruction(fixture("laura_31.txt"), "1.2", "1.1"))

    def test_segment_constraints(self):
        p = fixture("laura_31.txt")
        with self.assertRaises(WitnessConstraintError):
            segment(p, "1.1", "1.1")
        with self.assertRaises(WitnessConstraintError):
            segment(p, "1.1", SINK)
        with self.assertRaises(WitnessConstraintError):
            segment(fixture("hereditary_222.txt"), "1.1", "2.1")

    def test_rad_p0(self):
        witness = rad_p0(to_general(fixture("canonical_222.txt")))
        dims = witness.module.dimension_vector()
        self.assertEqual(dims[SOURCE], 0)
        self.assertEqual(dims[SINK], 2)

    def test_no_branch_quiver_matches_truncation(self):
        p = fixture("not_laura_222.txt")
        corner = recognize_toupie(truncate(algebra_for(to_general(p)), [SOURCE, "1.1", "2.1", SINK]))
        witness = no_branch_in_ideal(r=2, s=1, relations=[[1, -1]])
        self.assertEqual(corner.lengths, witness.presentation.lengths)
        self.assertEqual(close_ideal(corner).W, close_ideal(witness.presentation).W)


def run_tests():
    """Run all witness tests."""
    loader = unittest.TestLoader()
    suite = unittest.TestSuite()
    for case in (TestContracts, TestFamilies, TestPresentationWitnesses):
        suite.addTests(loader.loadTestsFromTestCase(case))
    result = unittest.TextTestRunner(verbosity=2).run(suite)
    return result.wasSuccessful()


if __name__ == "__main__":
    success = run_tests()
    sys.exit(0 if success else 1)
