import unittest

import numpy as np
import numpy.testing as npt

from cfot.field import FieldDivergedError
from cfot.inference import IntegrationError, OdeConfig, integrate


def linear(x, pa, t):
    return x


def time_only(x, pa, t):
    return np.full_like(x, t)


class TestOdeConfig(unittest.TestCase):

    def test_defaults(self):
        config = OdeConfig()
        self.assertEqual(config.solver, 'euler')
        self.assertEqual(config.direction, 'forward')

    def test_invalid(self):
        with self.assertRaises(ValueError):
            OdeConfig(solver='dopri8')
        with self.assertRaises(ValueError):
            OdeConfig(direction='sideways')
        with self.assertRaises(ValueError):
            OdeConfig(nfe=0)
        with self.assertRaises(ValueError):
            OdeConfig(solver='adaptive_rk45', rtol=0)

    def test_adaptive_ignores_nfe(self):
        OdeConfig(solver='adaptive_rk45', nfe=0)

    def test_rk4_needs_whole_steps(self):
        for nfe in (2, 10, 50):
            with self.assertRaises(ValueError):
                OdeConfig(solver='rk4', nfe=nfe)


class TestIntegrate(unittest.TestCase):

    def setUp(self):
        self.x0 = np.array([[1.0, -2.0], [0.5, 3.0]])
        self.pa = np.zeros((2, 1))

    def test_euler_exact_sum(self):
        n = 10
        x = integrate(time_only, self.x0, self.pa, OdeConfig(nfe=n))
        npt.assert_allclose(x, self.x0 + (n - 1) / (2 * n))

        x = integrate(time_only, self.x0, self.pa,
                      OdeConfig(nfe=n, direction='backward'))
        npt.assert_allclose(x, self.x0 - (n + 1) / (2 * n))

    def test_rk4_polynomial(self):
        config = OdeConfig(solver='rk4', nfe=4)
        x = integrate(time_only, self.x0, self.pa, config)
        npt.assert_allclose(x, self.x0 + 0.5)

        back = integrate(time_only, x, self.pa,
                         OdeConfig(solver='rk4', nfe=4, direction='backward'))
        npt.assert_allclose(back, self.x0)

    def test_fixed_step_evaluation_count(self):
        calls = []

        def counted(x, pa, t):
            calls.append(t)
            return linear(x, pa, t)

        for solver in ('euler', 'rk4'):
            del calls[:]
            integrate(counted, self.x0, self.pa,
                      OdeConfig(solver=solver, nfe=8))
            self.assertEqual(len(calls), 8)

    def test_exponential(self):
        expected = self.x0 * np.e
        for config, rtol in [
                (OdeConfig(nfe=2000), 1e-3),
                (OdeConfig(solver='rk4', nfe=80), 1e-6),
                (OdeConfig(solver='adaptive_rk45', rtol=1e-9, atol=1e-9),
                 1e-6)]:
            npt.assert_allclose(
                integrate(linear, self.x0, self.pa, config), expected,
                rtol=rtol)

    def test_shape_kept(self):
        x = integrate(linear, [1.0, 1.0], 0.0, OdeConfig(nfe=5))
        self.assertEqual(x.shape, (2,))

    def test_input_unchanged(self):
        x0 = self.x0.copy()
        integrate(linear, x0, self.pa, OdeConfig(nfe=5))
        npt.assert_array_equal(x0, self.x0)

    def test_non_finite_state(self):
        def blow_up(x, pa, t):
            return np.full_like(x, np.inf if t > 0.25 else 1.0)

        with self.assertRaises(IntegrationError) as context:
            integrate(blow_up, self.x0, self.pa, OdeConfig(nfe=4))
        self.assertEqual(context.exception.step, 2)

        with self.assertRaises(IntegrationError):
            integrate(linear, [np.nan, 0.0], 0.0, OdeConfig())

    def test_field_diverged(self):
        def diverged(x, pa, t):
            raise FieldDivergedError('nan')

        for solver in ('euler', 'rk4', 'adaptive_rk45'):
            with self.assertRaises(IntegrationError):
                integrate(diverged, self.x0, self.pa,
                          OdeConfig(solver=solver))
