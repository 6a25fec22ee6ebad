from fractions import Fraction

from django.test import SimpleTestCase

from radixrational import catalog
from radixrational.exceptions import (
    BudgetExceeded,
    NotRecognized,
    RepresentationError,
    UnsupportedOperation,
)
from radixrational.linrep import (
    DigitWord,
    LinearRep,
    brute_running_sums,
    eval_term,
    fractional_digits,
    infer_representation,
    integer_digits,
    integer_log,
    radix_power,
    reduce,
    running_sum_integers,
    running_sum_words,
    scale_rep,
    substitution_to_linrep,
    term_values,
    validate,
)


class DigitTest(SimpleTestCase):
    """Test cases for digit expansions"""

    def test_integer_digits(self):
        self.assertEqual(integer_digits(0, 2), [])
        self.assertEqual(integer_digits(6, 2), [1, 1, 0])
        self.assertEqual(integer_digits(17, 4), [1, 0, 1])

    def test_fractional_digits(self):
        self.assertEqual(fractional_digits(Fraction(3, 8), 2), [0, 1, 1])
        with self.assertRaises(ValueError):
            fractional_digits(Fraction(1, 3), 2)
        with self.assertRaises(ValueError):
            fractional_digits(Fraction(1), 2)

    def test_integer_log(self):
        self.assertEqual(integer_log(1, 2), 0)
        self.assertEqual(integer_log(7, 2), 2)
        self.assertEqual(integer_log(8, 2), 3)
        with self.assertRaises(ValueError):
            integer_log(0, 2)

    def test_digit_word(self):
        """Test that canonical integer words reject a leading zero"""
        self.assertEqual(DigitWord.from_integer(11, 2).value, 11)
        self.assertEqual(DigitWord((0, 1), 2, fractional=True).value, Fraction(1, 4))
        with self.assertRaises(RepresentationError):
            DigitWord((0, 1), 2)
        with self.assertRaises(RepresentationError):
            DigitWord((2,), 2, fractional=True)


class ValidationTest(SimpleTestCase):
    """Test cases for building and validating representations"""

    def test_build_converts_entries(self):
        rep = catalog.sum_of_digits()
        self.assertEqual(rep.dim, 2)
        self.assertEqual(rep.domain, 'rational')
        self.assertTrue(validate(rep).ok)
        self.assertTrue(validate(rep).insensitive)

    def test_sensitive_representation(self):
        rep = LinearRep.build(2, [1, 0], [[[2, 0], [0, 1]], [[1, 0], [0, 1]]], [1, 0])
        self.assertFalse(validate(rep).insensitive)

    def test_wrong_number_of_matrices(self):
        with self.assertRaises(RepresentationError):
            LinearRep.build(3, [1], [[[1]], [[1]]], [1])

    def test_wrong_shape(self):
        with self.assertRaises(RepresentationError):
            LinearRep.build(2, [1, 0], [[[1, 0], [0, 1]], [[1]]], [1, 0])


class TermTest(SimpleTestCase):
    """Test cases for term evaluation against independent oracles"""

    def test_sum_of_digits(self):
        rep = catalog.sum_of_digits()
        for n in range(256):
            self.assertEqual(eval_term(rep, n), catalog.popcount(n))
        self.assertEqual(eval_term(rep, 7), 3)

    def test_rudin_shapiro(self):
        rep = catalog.rudin_shapiro()
        self.assertEqual([eval_term(rep, n) for n in range(4)], [1, 1, 1, -1])
        for n in range(512):
            self.assertEqual(eval_term(rep, n), catalog.rudin_shapiro_term(n))

    def test_coquet(self):
        """Test u(n) = (-1)^{s_2(3n)} in radix 4"""
        rep = catalog.coquet()
        for n in range(4096):
            self.assertEqual(eval_term(rep, n), (-1) ** catalog.popcount(3 * n))

    def test_multiples_of_three(self):
        rep = catalog.multiples_of_three()
        for n in range(200):
            self.assertEqual(eval_term(rep, n), 1 if n % 3 == 0 else 0)

    def test_identity(self):
        rep = catalog.identity_sum(3)
        for n in range(100):
            self.assertEqual(eval_term(rep, n), n)

    def test_powers_of_two(self):
        rep = catalog.powers_of_two()
        values = [eval_term(rep, n) for n in range(17)]
        self.assertEqual([n for n, v in enumerate(values) if v], [1, 2, 4, 8, 16])

    def test_level_products_up_to_2_16(self):
        """Test u(n) for n < 2^16 against the digit oracles"""
        N = 2 ** 16 - 1
        cases = [
            (catalog.sum_of_digits(), catalog.popcount),
            (catalog.rudin_shapiro(), catalog.rudin_shapiro_term),
            (catalog.thue_morse(), catalog.thue_morse_term),
        ]
        for rep, oracle in cases:
            self.assertEqual(term_values(rep, N), [oracle(n) for n in range(N + 1)])

    def test_term_values_match_eval_term(self):
        rep = catalog.mergesort()
        self.assertEqual(term_values(rep, 40), [eval_term(rep, n) for n in range(41)])


class RunningSumTest(SimpleTestCase):
    """Test cases for running sums over words and over integers"""

    def setUp(self):
        """Set up test data"""
        self.reps = [catalog.sum_of_digits(), catalog.mergesort(), catalog.rudin_shapiro(), catalog.coquet()]

    def test_naive_matches_digitwise(self):
        for rep in self.reps:
            B = rep.radix
            for x in (Fraction(0), Fraction(1, B), Fraction(5, B ** 3), Fraction(B ** 4 - 1, B ** 4)):
                self.assertEqual(
                    running_sum_words(rep, 4, x, mode='naive'),
                    running_sum_words(rep, 4, x),
                )

    def test_full_interval_is_power_sum(self):
        """Test that S_K(1) = Q^K C"""
        rep = catalog.mergesort()
        self.assertEqual(running_sum_words(rep, 6, 1), rep.Q.power(6) @ rep.C)

    def test_naive_budget(self):
        with self.assertRaises(BudgetExceeded):
            running_sum_words(catalog.sum_of_digits(), 20, Fraction(1, 2), mode='naive', max_naive_k=16)

    def test_decomposition_matches_accumulation(self):
        """Test Sigma_N = (I - A_0) sum_k Q^k C + S_{K+1}(N / B^{K+1}) exactly"""
        for rep in self.reps:
            for N in (0, 1, 2, 5, 16, 37, 100, 255):
                self.assertEqual(
                    running_sum_integers(rep, N),
                    running_sum_integers(rep, N, method='accumulate'),
                )

    def test_brute_force_prefix_sums(self):
        rep = catalog.vdc_discrepancy()
        sums = brute_running_sums(rep, 300)
        for N in (0, 1, 7, 64, 199, 300):
            self.assertEqual(sums.at(N), tuple(running_sum_integers(rep, N).flat()))
        self.assertEqual(sums.as_array().shape, (301, 3))

    def test_brute_force_up_to_2_16(self):
        for rep in self.reps[:3]:
            sums = brute_running_sums(rep, 2 ** 16)
            for N in (2 ** 15 - 1, 2 ** 15, 40000, 2 ** 16 - 1, 2 ** 16):
                self.assertEqual(sums.at(N), tuple(running_sum_integers(rep, N).flat()))

    def test_brute_force_budget(self):
        with self.assertRaises(BudgetExceeded):
            brute_running_sums(catalog.sum_of_digits(), 100, max_n=50)


class TransformTest(SimpleTestCase):
    """Test cases for radix grouping, reduction, substitutions and inference"""

    def test_radix_power_keeps_terms(self):
        rep = catalog.rudin_shapiro()
        grouped = radix_power(rep, 2)
        self.assertEqual(grouped.radix, 4)
        for n in range(256):
            self.assertEqual(eval_term(grouped, n), eval_term(rep, n))

    def test_reduce_drops_unreachable_coordinates(self):
        A = [[[1, r, 0], [0, 1, 0], [0, 0, 1]] for r in range(2)]
        padded = LinearRep.build(2, [1, 0, 0], A, [0, 1, 0])
        reduced = reduce(padded)
        self.assertEqual(reduced.dim, 2)
        for n in range(64):
            self.assertEqual(eval_term(reduced, n), catalog.popcount(n))

    def test_reduce_complex_unsupported(self):
        with self.assertRaises(UnsupportedOperation):
            reduce(catalog.rosette())

    def test_thue_morse_substitution(self):
        rep = substitution_to_linrep({'a': 'ab', 'b': 'ba'}, {'a': 1, 'b': -1}, 'a')
        for n in range(1024):
            self.assertEqual(eval_term(rep, n), (-1) ** catalog.popcount(n))

    def test_period_doubling(self):
        rep = catalog.period_doubling()
        for n in range(256):
            self.assertEqual(eval_term(rep, n), catalog.period_doubling_term(n))

    def test_substitution_needs_constant_length(self):
        with self.assertRaises(UnsupportedOperation):
            substitution_to_linrep({'a': 'ab', 'b': 'a'}, {'a': 0, 'b': 1}, 'a')

    def test_infer_popcount(self):
        rep = infer_representation(catalog.popcount, 2, check_horizon=64)
        self.assertEqual(rep.dim, 2)
        self.assertTrue(validate(rep).insensitive)
        for n in range(1024):
            self.assertEqual(eval_term(rep, n), catalog.popcount(n))

    def test_infer_constant(self):
        rep = infer_representation(catalog.constant, 2, check_horizon=32)
        self.assertEqual(rep.dim, 1)
        self.assertEqual(rep.L.flat(), [Fraction(1)])
        self.assertEqual([m.flat() for m in rep.A], [[Fraction(1)], [Fraction(1)]])
        self.assertEqual(rep.C.flat(), [Fraction(1)])

    def test_infer_rudin_shapiro(self):
        rep = infer_representation(catalog.rudin_shapiro_term, 2, check_horizon=64)
        self.assertEqual(rep.dim, 2)
        for n in range(4096):
            self.assertEqual(eval_term(rep, n), catalog.rudin_shapiro_term(n))

    def test_infer_squares_not_recognized(self):
        def squares(n):
            return 1 if int(n ** 0.5) ** 2 == n else 0

        with self.assertRaises(NotRecognized):
            infer_representation(squares, 2, max_level=3, check_horizon=64)

    def test_scale_rep(self):
        """Test that scaling the digit matrices by 2 multiplies u(n) by 2 per digit"""
        rep = catalog.sum_of_digits()
        scaled = scale_rep(rep, Fraction(2))
        for n in range(1, 128):
            self.assertEqual(eval_term(scaled, n), 2 ** len(integer_digits(n, 2)) * catalog.popcount(n))
        self.assertEqual(running_sum_words(scaled, 5, Fraction(3, 8)), running_sum_words(rep, 5, Fraction(3, 8)).scale(32))
