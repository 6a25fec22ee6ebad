import math
from fractions import Fraction

import numpy as np
from django.test import SimpleTestCase

from radixrational import catalog
from radixrational.expansion import (
    INTEGERS,
    WORDS,
    ErrorClass,
    analyze,
    choose_lambda,
    error_class,
    eval_expansion_integers,
    eval_expansion_words,
    lrtoae1,
    lrtoae2,
    periodic_profile,
    periodicity,
    regular_part_at,
    scale_coefficients,
)
from radixrational.jsr import Attained, JsrEstimate
from radixrational.linrep import LinearRep, integer_log, running_sum_integers, running_sum_words


def as_vector(matrix):
    return np.array([complex(v) for v in matrix.flat()])


def recombine(pieces, t):
    """sum of rho^t C(floor t, s) Phi_{rho,s}(t)"""
    K = math.floor(t)
    return sum(rho ** t * math.comb(K, s) * vector for (rho, s), vector in pieces.items())


class LambdaChoiceTest(SimpleTestCase):
    """Test cases for the cut between kept terms and the error"""

    def test_attained(self):
        estimate = JsrEstimate(1.0, 1.0, 'one', 1, Attained.YES)
        choice = choose_lambda([2.0, 1.0], estimate)
        self.assertEqual((choice.value, choice.provenance), (1.0, 'attained'))

    def test_midpoint(self):
        estimate = JsrEstimate(1.0, 1.5, 'two', 3, Attained.UNKNOWN)
        choice = choose_lambda([2.0, 1.0, 1.5], estimate)
        self.assertEqual((choice.value, choice.provenance), (1.75, 'midpoint'))
        self.assertEqual(choice.jsr_upper, 1.5)

    def test_no_modulus_above(self):
        estimate = JsrEstimate(1.0, 1.5, 'two', 3, Attained.UNKNOWN)
        choice = choose_lambda([1.0], estimate)
        self.assertEqual((choice.value, choice.provenance), (1.5, 'upper-bound'))

    def test_error_class_counts_heights_at_lambda_star(self):
        """Test that a height-2 chain at modulus lambda* gives K^2"""
        _, _, decomposition = analyze(catalog.mergesort())
        estimate = JsrEstimate(1.0, 1.0, 'one', 1, Attained.YES)
        error = error_class(decomposition, estimate)
        self.assertEqual((error.kind, error.lam, error.m), ('attained', 1.0, 2))

    def test_error_class_not_attained(self):
        _, _, decomposition = analyze(catalog.mergesort())
        estimate = JsrEstimate(1.5, 1.6, 'one', 4, Attained.UNKNOWN)
        error = error_class(decomposition, estimate)
        self.assertEqual(error.kind, 'lambda')
        self.assertAlmostEqual(error.lam, 1.8)

    def test_zero_C(self):
        rep = LinearRep.build(2, [1, 0], [[[1, 0], [0, 1]], [[1, 1], [0, 1]]], [0, 0])
        expansion = lrtoae1(rep)
        self.assertEqual(expansion.terms, [])
        self.assertEqual(expansion.error.kind, 'zero')
        self.assertEqual(expansion.error.describe(), '0')
        self.assertEqual(expansion.error.word_envelope(10), 0.0)

    def test_describe(self):
        error = ErrorClass('attained', 1.0, 2, 'yes')
        self.assertEqual(error.describe(WORDS), 'O(lambda*^K K^2), lambda* = 1')
        self.assertEqual(error.describe(INTEGERS, 2), 'O(N^0 log^2 N), lambda* = 1')
        self.assertAlmostEqual(ErrorClass('lambda', 0.5).integer_envelope(1024, 2), 1 / 1024)
        self.assertEqual(ErrorClass('attained', 2.0, 1).word_envelope(3), 24.0)


class WordExpansionTest(SimpleTestCase):
    """Test cases for the expansion of S_K(x)"""

    def setUp(self):
        """Set up test data"""
        self.rep = catalog.mergesort()
        self.expansion = lrtoae1(self.rep, depth=10)

    def test_terms(self):
        kept = [(t.rho, t.level) for t in self.expansion.terms]
        self.assertIn((2.0, 1), kept)
        self.assertTrue(all(rho == 2.0 for rho, _ in kept))
        self.assertIn(self.expansion.lam.provenance, ('attained', 'midpoint'))
        self.assertEqual(list(self.expansion.grids), [0])

    def test_full_interval(self):
        """Test that the expansion at x = 1 is the modulus-2 part of Q^K C"""
        for K in range(1, 9):
            exact = as_vector(running_sum_words(self.rep, K, 1))
            ones = K * np.array([-1, 1, 1, -1]) + np.array([1, 0, -2, 1])
            np.testing.assert_allclose(eval_expansion_words(self.expansion, K, 1), exact - ones, atol=1e-9)

    def test_sum_of_digits_remainder(self):
        """Test that S_K(x) minus the expansion is A_w C for the K-digit word w of x"""
        rep = catalog.sum_of_digits()
        expansion = lrtoae1(rep, depth=8)
        self.assertEqual([(t.level, t.gamma) for t in expansion.terms], [(1, 1)])
        for K in (3, 6, 9):
            for k in (0, 1, 5, 2 ** K - 1, 2 ** (K - 1) + 3):
                x = Fraction(k, 2 ** K)
                exact = as_vector(running_sum_words(rep, K, x))
                remainder = exact - eval_expansion_words(expansion, K, x)
                np.testing.assert_allclose(remainder, [catalog.popcount(k), 1], atol=1e-9)

    def test_report(self):
        report = self.expansion.report()
        self.assertEqual(report['mode'], 'words')
        self.assertEqual(report['name'], 'mergesort')
        self.assertEqual(len(report['terms']), len(self.expansion.terms))
        self.assertEqual(report['grids']['chain0']['depth'], 10)
        self.assertEqual(report['terms'][0]['coefficient_grid_ref'], 'chain0')


class IntegerExpansionTest(SimpleTestCase):
    """Test cases for the expansion of Sigma_N"""

    def test_sum_of_digits_remainder(self):
        """Test that Sigma_N minus the expansion is (s_2(N), 1)"""
        rep = catalog.sum_of_digits()
        expansion = lrtoae2(rep)
        self.assertEqual(expansion.branch, 'lambda>=1')
        for N in (1, 2, 3, 10, 77, 1000, 4095):
            exact = as_vector(running_sum_integers(rep, N))
            remainder = exact - eval_expansion_integers(expansion, N)
            np.testing.assert_allclose(remainder, [catalog.popcount(N), 1], atol=1e-9)

    def test_billingsley_small_lambda(self):
        """Test the lambda < 1 branch: the remainder is the mass of the cylinder of N"""
        rep = catalog.billingsley(Fraction(1, 4))
        expansion = lrtoae2(rep)
        self.assertEqual(expansion.branch, 'lambda<1')
        self.assertEqual([t.block for t in expansion.terms], ['Z'])
        self.assertEqual(expansion.constants, {})
        self.assertEqual(float(np.abs(expansion.tail).max()), 0.0)
        for N in (1, 5, 6, 100, 1023, 1024):
            digits = integer_log(N, 2) + 1
            ones = catalog.popcount(N)
            mass = Fraction(1, 4) ** (digits - ones) * Fraction(3, 4) ** ones
            exact = float(running_sum_integers(rep, N)[0, 0])
            self.assertAlmostEqual(exact - eval_expansion_integers(expansion, N)[0].real, float(mass), places=12)

    def test_rudin_shapiro_branch(self):
        expansion = lrtoae2(catalog.rudin_shapiro())
        self.assertEqual(expansion.branch, 'lambda>=1')
        self.assertTrue(expansion.lambda_at_one)
        self.assertEqual(sorted(round(t.rho, 9) for t in expansion.terms), [1.414213562, 1.414213562])
        self.assertTrue(all(t.block == 'X' for t in expansion.terms))
        report = expansion.report()
        self.assertEqual(report['mode'], 'integers')
        self.assertEqual(report['branch'], 'lambda>=1')

    def test_regular_part_at_integer_t(self):
        expansion = lrtoae2(catalog.rudin_shapiro())
        np.testing.assert_allclose(regular_part_at(expansion, 6.0), eval_expansion_integers(expansion, 64), atol=1e-9)

    def test_scale_decomposition(self):
        """Test that the scale elements recombine into the regular part"""
        for rep in (catalog.rudin_shapiro(), catalog.billingsley(Fraction(1, 4)), catalog.mergesort()):
            expansion = lrtoae2(rep, depth=10)
            for t in (3.0, 5.3, 7.75):
                np.testing.assert_allclose(
                    recombine(scale_coefficients(expansion, t), t),
                    regular_part_at(expansion, t),
                    rtol=1e-9, atol=1e-9,
                )

    def test_scale_coefficients_need_integer_mode(self):
        with self.assertRaises(ValueError):
            scale_coefficients(lrtoae1(catalog.rudin_shapiro()), 2.5)


class PeriodicityTest(SimpleTestCase):
    """Test cases for periodic fluctuations"""

    def setUp(self):
        """Set up test data"""
        self.expansion = lrtoae2(catalog.rudin_shapiro(), depth=10)
        self.rho = self.expansion.terms[0].rho

    def test_period(self):
        """Test that eigenvalues +sqrt(2) and -sqrt(2) give period 2 in t"""
        self.assertEqual(periodicity(self.expansion, self.rho), 2)

    def test_profile_repeats(self):
        profile = periodic_profile(self.expansion, self.rho, [1.25, 3.25, 2.25])
        self.assertTrue(profile.periodic)
        np.testing.assert_allclose(profile.values[0], profile.values[1], atol=1e-9)
        self.assertEqual(profile.scalar.shape, (3,))

    def test_unknown_modulus(self):
        with self.assertRaises(ValueError):
            periodic_profile(self.expansion, 7.0, [1.5])

    def test_rotation_without_period(self):
        expansion = lrtoae2(catalog.rosette(1.0), depth=8)
        self.assertIsNone(periodicity(expansion, 1.0))


class WorkedExampleTest(SimpleTestCase):
    """Test cases for the leading terms of the catalog examples"""

    def test_van_der_corput_log_scale_is_constant(self):
        """Test that the N log N coefficient does not fluctuate"""
        expansion = lrtoae2(catalog.vdc_discrepancy(), depth=8)
        self.assertEqual(expansion.error.kind, 'attained')
        self.assertAlmostEqual(expansion.error.lam, 1.0, places=12)
        self.assertEqual(expansion.error.m, 1)
        coefficients = []
        for t in (3.0, 3.3, 4.5, 6.9):
            pieces = scale_coefficients(expansion, t)
            matches = [v for (rho, s), v in pieces.items() if s == 1 and abs(rho - 2) < 1e-9]
            self.assertEqual(len(matches), 1)
            coefficients.append(matches[0])
        self.assertGreater(float(np.abs(coefficients[0]).max()), 0.1)
        for vector in coefficients[1:]:
            np.testing.assert_allclose(vector, coefficients[0], atol=1e-9)

    def test_coquet_profile_is_positive(self):
        expansion = lrtoae2(catalog.coquet(), depth=6)
        self.assertEqual(expansion.lam.provenance, 'attained')
        self.assertEqual((expansion.error.kind, expansion.error.m), ('attained', 0))
        self.assertAlmostEqual(expansion.error.integer_envelope(10 ** 6, 4), 1.0, places=12)
        rho = max(t.rho for t in expansion.terms)
        self.assertAlmostEqual(rho, 3.0, places=12)
        profile = periodic_profile(expansion, rho, np.linspace(1, 2, 2000, endpoint=False))
        self.assertEqual(profile.period, 1)
        self.assertGreater(float(profile.scalar.real.min()), 0.0)
        self.assertLess(float(np.abs(profile.scalar.imag).max()), 1e-9)

    def test_rescaled_identity_profile(self):
        """Test L Phi(t) = 2^(-1/2) cosh((t - 1/2) ln 2) on one period"""
        expansion = lrtoae2(catalog.rescaled_identity(), depth=8)
        grid = np.linspace(3, 4, 41)
        profile = periodic_profile(expansion, 2.0, grid)
        frac = grid - np.floor(grid)
        expected = 2 ** -0.5 * np.cosh((frac - 0.5) * math.log(2))
        np.testing.assert_allclose(profile.scalar.real, expected, atol=1e-8)
        self.assertLess(float(np.abs(profile.scalar.imag).max()), 1e-9)
        self.assertAlmostEqual(float(profile.scalar.real[0]), 0.75, places=8)
        self.assertAlmostEqual(float(profile.scalar.real[20]), 2 ** -0.5, places=8)

    def test_lipmaa_wallen_terms(self):
        expansion = lrtoae1(catalog.lipmaa_wallen(), depth=3)
        self.assertEqual(sorted((round(t.rho, 9) for t in expansion.terms), reverse=True), [4.0, 2.0, 2.0, 2.0])
        self.assertEqual(expansion.error.kind, 'attained')
        self.assertAlmostEqual(expansion.error.lam, 1.0, places=12)
        self.assertEqual(expansion.error.m, 1)


class ContinuityTest(SimpleTestCase):
    """Test cases for the regular part across integer t"""

    def setUp(self):
        """Set up test data"""
        self.reps = [
            catalog.rudin_shapiro(),
            catalog.rudin_shapiro4(),
            catalog.coquet(),
            catalog.mergesort(),
            catalog.rescaled_identity(),
            catalog.vdc_discrepancy(),
            catalog.sum_of_digits(),
        ]
        self.delta = 1e-6

    def test_jump_is_hoelder_small(self):
        for rep in self.reps:
            expansion = lrtoae2(rep, depth=6)
            alpha = expansion.holder_exponent()
            self.assertTrue(0 < alpha <= 1)
            top = max(term.rho for term in expansion.terms)
            for t in (3, 4, 5):
                left = regular_part_at(expansion, t - self.delta)
                right = regular_part_at(expansion, t + self.delta)
                middle = regular_part_at(expansion, float(t))
                scale = max(1.0, float(np.abs(middle).max()), top ** t)
                bound = 100 * scale * self.delta ** alpha
                self.assertLessEqual(float(np.abs(right - left).max()), bound, msg=f"{rep.name} at t={t}")
                self.assertLessEqual(float(np.abs(middle - left).max()), bound, msg=f"{rep.name} at t={t}")
