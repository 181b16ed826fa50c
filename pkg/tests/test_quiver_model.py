#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Tests for toupie quivers, presentations and the input grammar.
"""

import sys
import unittest
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from toupie.tools.errors import ParseError, PresentationError
from toupie.tools.quiver_model import (
    SINK, SOURCE, Arrow, Combination, GeneralBoundQuiver, Monomial, PathRef, ToupieQuiver, enumerate_paths,
    load_presentation, make_presentation, parse, recognize_toupie, require_valid, serialize,
    serialize_general, to_general, validate,
)

FIXTURES = Path(__file__).parent.parent / "fixtures"


class TestToupieQuiver(unittest.TestCase):

    def setUp(self):
        self.quiver = ToupieQuiver((3, 1, 2))

    def test_vertices(self):
        self.assertEqual(self.quiver.vertices, (SOURCE, "1.1", "1.2", "3.1", SINK))
        self.assertEqual(self.quiver.vertex_at(1, 0), SOURCE)
        self.assertEqual(self.quiver.vertex_at(1, 3), SINK)
        self.assertEqual(self.quiver.arrow_label(2, 1), "a2_1")

    def test_locate(self):
        self.assertEqual(self.quiver.locate("1.2"), (1, 2))
        self.assertIsNone(self.quiver.locate(SINK))
        with self.assertRaises(PresentationError):
            self.quiver.locate("2.1")


class TestValidation(unittest.TestCase):
    """Admissibility and shape checks."""

    def test_valid_presentation(self):
        p = make_presentation([2, 2], combinations=[[1, -1]])
        self.assertTrue(validate(p).valid)

    def test_short_monomial(self):
        p = make_presentation([2, 2], monomials=[(1, 0, 1)])
        report = validate(p)
        self.assertFalse(report.valid)
        self.assertIn("I in R^2", report.summary())

    def test_combination_on_direct_arrow(self):
        p = make_presentation([2, 1], combinations=[[1, 1]])
        self.assertFalse(validate(p).valid)
        with self.assertRaises(PresentationError):
            require_valid(p)

    def test_zero_combination_and_bad_branch(self):
        p = make_presentation([2, 2], monomials=[(3, 0, 2)], combinations=[[0, 0]])
        self.assertEqual(len(validate(p).issues), 2)


class TestPaths(unittest.TestCase):

    def setUp(self):
        self.p = make_presentation([3, 2])

    def test_enumerate_paths(self):
        self.assertEqual(enumerate_paths(self.p, SOURCE, SINK), [PathRef(1, 0, 3), PathRef(2, 0, 2)])
        self.assertEqual(enumerate_paths(self.p, "1.1", SINK), [PathRef(1, 1, 3)])
        self.assertEqual(enumerate_paths(self.p, "1.1", "2.1"), [])
        self.assertEqual(enumerate_paths(self.p, "1.2", "1.1"), [])
        self.assertTrue(enumerate_paths(self.p, "1.1", "1.1")[0].is_trivial)

    def test_general_quiver(self):
        g = to_general(self.p)
        self.assertEqual(len(g.arrows), 5)
        self.assertEqual(g.paths(SOURCE, SINK), [("a1_1", "a1_2", "a1_3"), ("a2_1", "a2_2")])
        self.assertEqual(g.topological_order[0], SOURCE)
        self.assertEqual(g.topological_order[-1], SINK)

    def test_opposite_reverses_relations(self):
        g = to_general(make_presentation([2, 2], combinations=[[1, -1]]))
        op = g.opposite()
        self.assertEqual(op.arrow_map["a1_1"], Arrow("a1_1", "1.1", SOURCE))
        self.assertEqual(op.relations[0][0][1], ("a1_2", "a1_1"))
        self.assertEqual(op.opposite(), g)

    def test_cycles_rejected(self):
        with self.assertRaises(PresentationError):
            GeneralBoundQuiver(("x", "y"), (Arrow("a", "x", "y"), Arrow("b", "y", "x")))


class TestGrammar(unittest.TestCase):
    """Parsing, error positions and serialisation."""

    def test_parse_fixture(self):
        p = load_presentation(str(FIXTURES / "canonical_3322.txt"))
        self.assertEqual(p.lengths, (3, 3, 2, 2))
        self.assertEqual(len(p.combinations), 2)
        self.assertEqual(p.combinations[1].coefficients, (1, 2, 0, -1))

    def test_parse_prime_field(self):
        p = load_presentation(str(FIXTURES / "hereditary_prime_222.txt"))
        self.assertTrue(p.field.is_prime_field)
        self.assertEqual(p.field.p, 5)

    def test_parse_error_position(self):
        with self.assertRaises(ParseError) as ctx:
            parse("branches 2\nlengths 2 two\n")
        self.assertEqual(ctx.exception.line, 2)
        self.assertEqual(ctx.exception.column, 11)

    def test_parse_errors(self):
        for text in ("lengths 2\n", "branches 2\nlengths 2\n", "branches 1\nlengths 2\nrelation foo 1\n",
                     "branches 1\nlengths 3\nrelation comb 1/0\n", "colour blue\n", ""):
            with self.assertRaises(ParseError):
                parse(text)

    def test_comments_and_fractions(self):
        p = parse("# comment\nbranches 2   # two\nlengths 2 2\nrelation comb 1/2 -1\n")
        self.assertEqual(p.combinations[0].coefficients, (Fraction(1, 2), -1))

    def test_serialize_round_trip(self):
        p = make_presentation([3, 1], monomials=[(1, 0, 3)])
        text = serialize(p)
        self.assertIn("relation mono 1 0 3", text)
        self.assertEqual(parse(text), p)

    def test_serialize_general(self):
        text = serialize_general(to_general(make_presentation([2, 2], combinations=[[1, -1]])))
        self.assertIn("arrow a1_1 0 1.1", text)
        self.assertIn("relation 1 [a1_1 a1_2] -1 [a2_1 a2_2]", text)


class TestRecognition(unittest.TestCase):

    def test_recognize_sorts_branches(self):
        p = make_presentation([1, 3], monomials=[(2, 0, 2)])
        recognized = recognize_toupie(to_general(p))
        self.assertEqual(recognized.lengths, (3, 1))
        self.assertEqual(recognized.relations, (Monomial(1, 0, 2),))

    def test_full_branch_monomial_keeps_its_form(self):
        text = "field rational\nbranches 3\nlengths 3 2 2\nrelation comb 0 -1 1\nrelation mono 1 0 3\n"
        p = parse(text)
        recognized = recognize_toupie(to_general(p))
        self.assertEqual(recognized.relations, (Combination((0, -1, 1)), Monomial(1, 0, 3)))
        self.assertEqual(serialize(recognized), serialize(p))

    def test_non_toupie(self):
        g = GeneralBoundQuiver(("x", "y", "z"), (Arrow("a", "x", "y"), Arrow("b", "x", "z")))
        self.assertIsNone(recognize_toupie(g))


def run_tests():
    """Run all quiver model tests."""
    loader = unittest.TestLoader()
    suite = unittest.TestSuite()
    for case in (TestToupieQuiver, TestValidation, TestPaths, TestGrammar, TestRecognition):
        suite.addTests(loader.loadTestsFromTestCase(case))
    result = unittest.TextTestRunner(verbosity=2).run(suite)
    return result.wasSuccessful()


if __name__ == "__main__":
    success = run_tests()
    sys.exit(0 if success else 1)
