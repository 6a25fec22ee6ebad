import json
from fractions import Fraction

from django.test import SimpleTestCase

from radixrational import catalog
from radixrational.exceptions import UnsupportedOperation
from radixrational.linrep import eval_term, validate
from radixrational.repfile import dump_repfile, load_repfile, parse_repfile, repfile_document


class BuilderTest(SimpleTestCase):
    """Test cases for the catalog builders"""

    def test_every_builder_validates(self):
        for name, builder in catalog.BUILDERS.items():
            with self.subTest(name=name):
                self.assertTrue(validate(builder()).ok)

    def test_names(self):
        self.assertEqual(catalog.billingsley(Fraction(1, 3)).name, 'billingsley-1/3')
        self.assertEqual(catalog.identity_sum(10).name, 'identity-10')

    def test_bad_parameters(self):
        with self.assertRaises(ValueError):
            catalog.billingsley(0)
        with self.assertRaises(UnsupportedOperation):
            catalog.rosette(3.141592653589793 / 2)

    def test_thue_morse_matches_oracle(self):
        rep = catalog.thue_morse()
        self.assertEqual([eval_term(rep, n) for n in range(8)], [1, -1, -1, 1, -1, 1, 1, -1])
        for n in range(512):
            self.assertEqual(eval_term(rep, n), catalog.thue_morse_term(n))


class FixtureTest(SimpleTestCase):
    """Test cases for the shipped representation files"""

    exact = {
        'sum_of_digits': catalog.sum_of_digits,
        'rudin_shapiro': catalog.rudin_shapiro,
        'multiples_of_three': catalog.multiples_of_three,
        'mergesort': catalog.mergesort,
        'billingsley': catalog.billingsley,
        'billingsley_half': lambda: catalog.billingsley(Fraction(1, 2)),
        'powers_of_two': catalog.powers_of_two,
        'vdc_discrepancy': catalog.vdc_discrepancy,
        'coquet': catalog.coquet,
        'identity': catalog.identity_sum,
        'rescaled_identity': catalog.rescaled_identity,
        'thue_morse': catalog.thue_morse,
        'rudin_shapiro4': catalog.rudin_shapiro4,
        'lipmaa_wallen': catalog.lipmaa_wallen,
    }

    def test_rational_fixtures_match_builders(self):
        for name, builder in self.exact.items():
            with self.subTest(name=name):
                loaded = load_repfile(catalog.representation_path(name))
                self.assertEqual(repfile_document(loaded), repfile_document(builder()))

    def test_complex_fixtures(self):
        for name, builder in (('triangular_tiling', catalog.triangular_tiling), ('rosette', catalog.rosette)):
            with self.subTest(name=name):
                loaded = load_repfile(catalog.representation_path(name))
                built = builder()
                self.assertEqual(loaded.domain, 'complex')
                self.assertEqual(loaded.name, built.name)
                for n in range(64):
                    self.assertAlmostEqual(eval_term(loaded, n), eval_term(built, n), places=12)

    def test_zero_c(self):
        rep = load_repfile(catalog.representation_path('zero_c'))
        self.assertTrue(rep.C.is_zero())

    def test_fixture_round_trip(self):
        """Test that dumping a loaded fixture and parsing it again keeps every term"""
        for name in ('thue_morse', 'rudin_shapiro4', 'lipmaa_wallen'):
            with self.subTest(name=name):
                loaded = load_repfile(catalog.representation_path(name))
                again = parse_repfile(json.loads(dump_repfile(loaded)))
                self.assertEqual(repfile_document(again), repfile_document(loaded))
                for n in range(256):
                    self.assertEqual(eval_term(again, n), eval_term(loaded, n))

    def test_thue_morse_fixture_terms(self):
        rep = load_repfile(catalog.representation_path('thue_morse'))
        for n in range(1024):
            self.assertEqual(eval_term(rep, n), (-1) ** catalog.popcount(n))

    def test_rudin_shapiro4_fixture_terms(self):
        rep = load_repfile(catalog.representation_path('rudin_shapiro4'))
        for n in range(4096):
            self.assertEqual(eval_term(rep, n), catalog.rudin_shapiro_term(n))
