import math
from fractions import Fraction

import numpy as np
from django.test import SimpleTestCase

from radixrational import catalog
from radixrational.dilation import (
    DilationSystem,
    cascade_grid,
    cascade_step,
    contraction_ratios,
    eval_exact_badic,
    eval_point,
    holder_constant,
    holder_exponent,
    residual,
    solve_jordan_system,
    solve_system,
)
from radixrational.exceptions import NoSolutionGuarantee
from radixrational.jsr import jsr_estimate
from radixrational.spectral import jordan_basis


class MergesortSystemTest(SimpleTestCase):
    """Test cases for the basic equation of the mergesort representation"""

    def setUp(self):
        """Set up test data"""
        self.rep = catalog.mergesort()
        self.jsr = jsr_estimate(self.rep)
        self.chain = jordan_basis(self.rep.Q)[0]
        self.V = self.chain.vectors[0]
        self.system = DilationSystem.basic(self.rep, Fraction(2), self.V, self.jsr)

    def test_admissible(self):
        admissible, bound = self.system.admissibility()
        self.assertTrue(admissible)
        self.assertLess(bound, 2.0)

    def test_solution_is_linear(self):
        """Test F(k / 2^10) = (k / 2^10) V at every node"""
        grid = solve_system(self.system, 10)
        expected = grid.x[:, None] * np.array([complex(v) for v in self.V])[None]
        self.assertLessEqual(float(np.abs(grid.column(0) - expected).max()), 1e-12)
        self.assertLessEqual(residual(self.system, grid), 1e-12)

    def test_exact_values(self):
        value = eval_exact_badic(self.system, Fraction(3, 8))
        self.assertEqual(value.column_values(0), [Fraction(3, 8) * v for v in self.V])
        self.assertEqual(eval_exact_badic(self.system, 1), self.system.V)

    def test_point_values(self):
        """Test F(x) = x V away from the dyadic nodes"""
        V = np.array([complex(v) for v in self.V])
        for x in (1 / 3, 0.1, math.pi / 4, 0.999999):
            np.testing.assert_allclose(eval_point(self.system, x)[:, 0], x * V, atol=1e-12)
        exact = eval_exact_badic(self.system, Fraction(3, 8)).to_numpy()
        np.testing.assert_allclose(eval_point(self.system, 0.375), exact, atol=1e-12)
        np.testing.assert_allclose(eval_point(self.system, 0.0), 0)
        np.testing.assert_allclose(eval_point(self.system, 1.0)[:, 0], V)

    def test_cascade_fixed_point(self):
        """Test that one cascade step leaves the exact grid unchanged"""
        grid = solve_system(self.system, 8)
        updated = cascade_step(self.system, grid.values, 8)
        self.assertLessEqual(float(np.abs(updated - grid.values).max()), 1e-12)

    def test_jordan_system(self):
        grid = solve_jordan_system(self.rep, self.chain, self.jsr, 8)
        self.assertEqual(grid.values.shape, (257, 4, 2))
        self.assertLessEqual(residual(DilationSystem.from_chain(self.rep, self.chain, self.jsr), grid), 1e-10)
        np.testing.assert_allclose(grid.values[-1], grid.V)
        np.testing.assert_allclose(grid.values[0], 0)


class BillingsleyCascadeTest(SimpleTestCase):
    """Test cases for cascade iteration on a distribution function"""

    def setUp(self):
        """Set up test data"""
        self.rep = catalog.billingsley(Fraction(1, 4))
        self.system = DilationSystem.basic(self.rep, Fraction(1), [1], jsr_estimate(self.rep))

    def test_contraction_rate(self):
        grid = cascade_grid(self.system, 12, 8)
        self.assertEqual(len(grid.differences), 8)
        self.assertGreater(grid.differences[0], 0)
        for ratio in contraction_ratios(grid):
            self.assertLessEqual(ratio, 0.75 + 1e-9)

    def test_cascade_reaches_exact_grid(self):
        """Test that depth iterations consume every digit of the grid nodes"""
        cascade = cascade_grid(self.system, 6, 6)
        exact = solve_system(self.system, 6)
        self.assertLessEqual(float(np.abs(cascade.values - exact.values).max()), 1e-12)

    def test_distribution_function_is_monotone(self):
        grid = cascade_grid(self.system, 10, 12)
        steps = np.diff(grid.values[:, 0, 0].real)
        self.assertGreaterEqual(float(steps.min()), -1e-15)

    def test_interpolation(self):
        grid = solve_system(self.system, 6)
        self.assertEqual(float(np.abs(grid.interpolate(-0.5)).max()), 0.0)
        np.testing.assert_allclose(grid.interpolate(1.5), grid.V)
        self.assertAlmostEqual(grid.interpolate(0.5)[0, 0].real, 0.25)

    def test_holder(self):
        alpha = holder_exponent(1, 0.75, 2)
        self.assertAlmostEqual(alpha, math.log2(4 / 3))
        grid = solve_system(self.system, 10)
        self.assertLess(holder_constant(grid, alpha), 2.0)


class AdmissibilityTest(SimpleTestCase):
    """Test cases for the refusal when rho does not exceed lambda*"""

    def setUp(self):
        """Set up test data"""
        self.rep = catalog.triangular_tiling()
        self.system = DilationSystem.basic(self.rep, 1.0, [1, 0], jsr_estimate(self.rep))

    def test_triangular_tiling_refused(self):
        with self.assertRaises(NoSolutionGuarantee) as caught:
            solve_system(self.system, 6)
        self.assertEqual(caught.exception.exit_code, 2)

    def test_override_warns(self):
        overridden = DilationSystem.basic(self.rep, 1.0, [1, 0], self.system.jsr, override=True)
        with self.assertLogs('radixrational.dilation', 'WARNING'):
            overridden.check_admissible()

    def test_holder_exponent_range(self):
        self.assertEqual(holder_exponent(2, 1, 2), 1.0)
        with self.assertRaises(ValueError):
            holder_exponent(1, 1, 2)
        with self.assertRaises(ValueError):
            holder_exponent(5, 1, 2)
