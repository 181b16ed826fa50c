#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Tests for the exact linear algebra layer.
"""

import sys
import unittest
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from toupie.tools.errors import PresentationError
from toupie.tools.exact_linalg import (
    RATIONAL, FieldSpec, Subspace, complement_indices, inverse, is_invertible, kernel_vectors, kron, matmul,
    primitive_integer_vector, rank, rref, solve, spiral_coefficients,
)


class TestFieldSpec(unittest.TestCase):
    """Scalars, parsing and canonical formatting."""

    def test_parse_and_format_rational(self):
        self.assertEqual(RATIONAL.parse_scalar("3/6"), Fraction(1, 2))
        self.assertEqual(RATIONAL.parse_scalar("-4"), Fraction(-4))
        self.assertEqual(RATIONAL.format_scalar(Fraction(-2, 4)), "-1/2")
        self.assertEqual(RATIONAL.format_scalar(Fraction(6, 3)), "2")

    def test_malformed_scalars(self):
        for text in ("1.5", "a", "1/0", "1//2", ""):
            with self.assertRaises(PresentationError):
                RATIONAL.parse_scalar(text)

    def test_prime_field(self):
        field = FieldSpec.prime(5)
        self.assertTrue(field.is_prime_field)
        self.assertEqual(field.format_scalar(field.coerce(Fraction(1, 2))), "3")
        self.assertEqual(field.format_scalar(field.coerce(-1)), "4")
        self.assertEqual(field.describe(), "prime 5")
        with self.assertRaises(PresentationError):
            field.coerce(Fraction(1, 5))

    def test_non_prime_characteristic_rejected(self):
        with self.assertRaises(PresentationError):
            FieldSpec.prime(4)
        with self.assertRaises(PresentationError):
            FieldSpec("rational", 7)


class TestMatrices(unittest.TestCase):
    """Echelon forms, kernels and solving."""

    def test_rref_and_rank(self):
        reduced, pivots = rref(RATIONAL.matrix([[2, 4], [1, 3]]))
        self.assertEqual(pivots, [0, 1])
        self.assertEqual(reduced.tolist(), [[1, 0], [0, 1]])
        self.assertEqual(rank(RATIONAL.matrix([[1, 2], [2, 4]])), 1)
        self.assertEqual(rank(RATIONAL.zeros(0, 3)), 0)

    def test_rank_depends_on_field(self):
        rows = [[1, 2], [2, 1]]
        self.assertEqual(rank(RATIONAL.matrix(rows)), 2)
        self.assertEqual(rank(FieldSpec.prime(3).matrix(rows)), 1)

    def test_kernel_vectors(self):
        kernel = kernel_vectors(RATIONAL.matrix([[1, 2], [2, 4]]))
        self.assertEqual(kernel.tolist(), [[-2, 1]])
        self.assertEqual(kernel_vectors(RATIONAL.zeros(0, 2)).tolist(), [[1, 0], [0, 1]])

    def test_solve(self):
        x = solve(RATIONAL.matrix([[1, 1], [1, -1]]), [3, 1])
        self.assertEqual(list(x), [2, 1])
        self.assertIsNone(solve(RATIONAL.matrix([[1, 1], [1, 1]]), [1, 2]))

    def test_inverse(self):
        m = RATIONAL.matrix([[2, 1], [1, 1]])
        self.assertTrue(is_invertible(m))
        self.assertEqual(inverse(m).tolist(), [[1, -1], [-1, 2]])
        with self.assertRaises(ValueError):
            inverse(RATIONAL.matrix([[1, 1], [1, 1]]))

    def test_products_with_empty_sides(self):
        product = matmul(RATIONAL.zeros(2, 0), RATIONAL.zeros(0, 3))
        self.assertEqual(product.shape, (2, 3))
        self.assertTrue(all(x == 0 for x in product.flat))
        self.assertEqual(kron(RATIONAL.identity(2), RATIONAL.matrix([[1, 2]])).shape, (2, 4))

    def test_complement_indices(self):
        self.assertEqual(complement_indices(RATIONAL.matrix([[1, 1, 0]]), 3), [0, 2])


class TestSubspace(unittest.TestCase):
    """Span, membership, intersection and coordinate restriction."""

    def setUp(self):
        self.plane = Subspace.span([[1, 1, 0], [0, 1, 1]], 3)

    def test_span_and_contains(self):
        self.assertEqual(self.plane.dim, 2)
        self.assertTrue(self.plane.contains([1, 2, 1]))
        self.assertFalse(self.plane.contains([1, 0, 0]))

    def test_intersect(self):
        other = Subspace.span([[1, 0, 0], [0, 0, 1]], 3)
        meet = self.plane.intersect(other)
        self.assertEqual(meet.dim, 1)
        self.assertTrue(meet.contains([1, 0, -1]))

    def test_annihilator(self):
        line = Subspace.span([[1, 1, 1]], 3)
        annihilator = line.annihilator()
        self.assertEqual(annihilator.dim, 2)
        self.assertTrue(annihilator.contains([1, -1, 0]))
        self.assertEqual(Subspace.zero(3).annihilator().dim, 3)

    def test_restrict_to_coords(self):
        W = Subspace.span([[1, -1, 0], [0, 1, -1]], 3)
        restricted = W.restrict_to_coords([0, 1])
        self.assertEqual(restricted.dim, 1)
        self.assertTrue(restricted.contains([1, -1, 0]))
        self.assertEqual(W.restrict_to_coords([0, 1, 2]), W)

    def test_equality_is_basis_independent(self):
        self.assertEqual(self.plane, Subspace.span([[1, 2, 1], [1, 0, -1]], 3))


class TestHelpers(unittest.TestCase):

    def test_primitive_integer_vector(self):
        self.assertEqual(primitive_integer_vector([Fraction(1, 2), Fraction(-1, 3)]), (3, -2))
        self.assertEqual(primitive_integer_vector([Fraction(-2), Fraction(4)]), (1, -2))

    def test_spiral_order(self):
        first = list(spiral_coefficients(2, 1))
        self.assertEqual(len(first), 8)
        self.assertEqual(first[0], (0, 1))
        self.assertNotIn((0, 0), first)
        self.assertEqual(len(list(spiral_coefficients(2, 2))), 24)


def run_tests():
    """Run all exact linear algebra tests."""
    loader = unittest.TestLoader()
    suite = unittest.TestSuite()
    for case in (TestFieldSpec, TestMatrices, TestSubspace, TestHelpers):
        suite.addTests(loader.loadTestsFromTestCase(case))
    result = unittest.TextTestRunner(verbosity=2).run(suite)
    return result.wasSuccessful()


if __name__ == "__main__":
    success = run_tests()
    sys.exit(0 if success else 1)
