from fractions import Fraction

import numpy as np

from django.test import SimpleTestCase

from radixrational.exactnum import (
    COMPLEX,
    RATIONAL,
    ExactSpan,
    Matrix,
    binomial,
    format_scalar,
    induced_norm,
    lie_bracket,
    nullspace,
    parse_scalar,
    rank,
    solve,
    spectral_radius,
)
from radixrational.exceptions import NonFiniteError, ShapeError


class ScalarTest(SimpleTestCase):
    """Test cases for scalar parsing and formatting"""

    def test_parse_rational_forms(self):
        """Test that integers and 'p/q' strings become Fractions"""
        self.assertEqual(parse_scalar(3), Fraction(3))
        self.assertEqual(parse_scalar('3/4'), Fraction(3, 4))
        self.assertIsInstance(parse_scalar('-2'), Fraction)

    def test_parse_complex_forms(self):
        """Test that [re, im] pairs and floats become complex values"""
        self.assertEqual(parse_scalar([1, 2]), 1 + 2j)
        self.assertEqual(parse_scalar(0.5), 0.5 + 0j)
        self.assertEqual(parse_scalar('1/2', COMPLEX), 0.5 + 0j)

    def test_parse_rejects_booleans(self):
        with self.assertRaises(ValueError):
            parse_scalar(True)

    def test_parse_rejects_non_finite(self):
        with self.assertRaises(NonFiniteError):
            parse_scalar(float('nan'))
        with self.assertRaises(NonFiniteError):
            parse_scalar([float('inf'), 0])

    def test_format_scalar(self):
        """Test the JSON rendering of scalars"""
        self.assertEqual(format_scalar(Fraction(3)), 3)
        self.assertEqual(format_scalar(Fraction(-1, 2)), '-1/2')
        self.assertEqual(format_scalar(1 + 2j), [1.0, 2.0])

    def test_binomial_convention(self):
        self.assertEqual(binomial(5, 2), 10)
        self.assertEqual(binomial(3, 5), 0)
        self.assertEqual(binomial(2, -1), 0)


class MatrixTest(SimpleTestCase):
    """Test cases for the exact matrix type"""

    def setUp(self):
        """Set up test data"""
        self.M = Matrix.from_rows([[1, -2], [3, 4]])
        self.shear = Matrix.from_rows([[1, 1], [0, 1]])

    def test_domain_inference(self):
        self.assertEqual(self.M.domain, RATIONAL)
        self.assertEqual(Matrix.from_rows([[1, 0.5]]).domain, COMPLEX)

    def test_power(self):
        """Test exact repeated squaring"""
        self.assertEqual(self.shear.power(5), Matrix.from_rows([[1, 5], [0, 1]]))
        self.assertEqual(self.shear.power(0), Matrix.identity(2))

    def test_mixed_domains_promote_to_complex(self):
        product = self.M @ Matrix.from_rows([[0.5], [0]])
        self.assertEqual(product.domain, COMPLEX)
        self.assertEqual(product.column_values(0), [0.5 + 0j, 1.5 + 0j])

    def test_shape_mismatch(self):
        with self.assertRaises(ShapeError):
            self.M @ Matrix.from_rows([[1, 2, 3]])
        with self.assertRaises(ShapeError):
            self.M + Matrix.identity(3)

    def test_induced_norms_are_exact(self):
        """Test the column-sum and row-sum norms on rational input"""
        self.assertEqual(induced_norm(self.M, 'one'), Fraction(6))
        self.assertEqual(induced_norm(self.M, 'infinity'), Fraction(7))
        self.assertAlmostEqual(float(induced_norm(Matrix.identity(3), 'two')), 1.0)

    def test_unknown_norm(self):
        with self.assertRaises(ValueError):
            induced_norm(self.M, 'frobenius')

    def test_lie_bracket(self):
        E = Matrix.from_rows([[0, 1], [0, 0]])
        F = Matrix.from_rows([[0, 0], [1, 0]])
        self.assertEqual(lie_bracket(E, F), Matrix.from_rows([[1, 0], [0, -1]]))


class EliminationTest(SimpleTestCase):
    """Test cases for exact elimination and spans"""

    def test_rational_nullspace(self):
        kernel = nullspace(Matrix.from_rows([[1, 2], [2, 4]]))
        self.assertEqual(kernel, [(Fraction(-2), Fraction(1))])

    def test_complex_nullspace_needs_tolerance(self):
        with self.assertRaises(ValueError):
            nullspace(Matrix.from_rows([[1.0, 2.0], [2.0, 4.0]]))
        kernel = nullspace(Matrix.from_rows([[1.0, 2.0], [2.0, 4.0]]), 1e-9)
        self.assertEqual(len(kernel), 1)

    def test_rank(self):
        self.assertEqual(rank(Matrix.from_rows([[1, 2], [2, 4]])), 1)
        self.assertEqual(rank(Matrix.identity(3)), 3)

    def test_solve_exact(self):
        """Test that rational systems are solved without rounding"""
        x = solve(Matrix.from_rows([[2, 1], [1, 3]]), [Fraction(3), Fraction(5)])
        self.assertEqual(x, [Fraction(4, 5), Fraction(7, 5)])

    def test_solve_singular(self):
        with self.assertRaises(ShapeError):
            solve(Matrix.from_rows([[1, 2], [2, 4]]), [Fraction(1), Fraction(2)])

    def test_exact_span(self):
        span = ExactSpan(2)
        self.assertTrue(span.add((1, 0)))
        self.assertTrue(span.add((1, 1)))
        self.assertFalse(span.add((3, 2)))
        self.assertEqual(span.coordinates((2, 3)), [Fraction(-1), Fraction(3)])


def random_rational_matrix(rng, d):
    return Matrix.from_rows([
        [Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 4))) for _ in range(d)]
        for _ in range(d)
    ])


class NormInvariantTest(SimpleTestCase):
    """Test cases for norm and bracket identities on random rational matrices"""

    def setUp(self):
        """Set up test data"""
        rng = np.random.default_rng(11)
        self.triples = [
            tuple(random_rational_matrix(rng, d) for _ in range(3))
            for d in (1, 2, 3, 4, 2, 3)
        ]

    def test_submultiplicative(self):
        for A, B, _ in self.triples:
            for kind in ('one', 'infinity'):
                self.assertLessEqual(
                    induced_norm(A @ B, kind), induced_norm(A, kind) * induced_norm(B, kind)
                )
            two = float(induced_norm(A, 'two')) * float(induced_norm(B, 'two'))
            self.assertLessEqual(float(induced_norm(A @ B, 'two')), two * (1 + 1e-12) + 1e-12)

    def test_spectral_radius_below_every_norm(self):
        for A, _, _ in self.triples:
            radius = spectral_radius(A)
            for kind in ('one', 'infinity', 'two'):
                self.assertLessEqual(radius, float(induced_norm(A, kind)) * (1 + 1e-9) + 1e-12)

    def test_bracket_antisymmetry(self):
        for A, B, _ in self.triples:
            self.assertEqual(lie_bracket(A, B), -lie_bracket(B, A))
            self.assertTrue(lie_bracket(A, A).is_zero())

    def test_jacobi_identity(self):
        for A, B, C in self.triples:
            total = (
                lie_bracket(A, lie_bracket(B, C))
                + lie_bracket(B, lie_bracket(C, A))
                + lie_bracket(C, lie_bracket(A, B))
            )
            self.assertTrue(total.is_zero())
