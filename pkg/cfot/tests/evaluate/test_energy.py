import unittest

import numpy as np
import numpy.testing as npt

from cfot.evaluate import EnergyTestResult, energy_distance, energy_test


class TestEnergy(unittest.TestCase):

    def setUp(self):
        rng = np.random.default_rng(0)
        self.a = rng.standard_normal((100, 2))
        self.b = rng.standard_normal((100, 2)) + 5.0

    def test_distance_zero_on_same_sample(self):
        npt.assert_allclose(energy_distance(self.a, self.a), 0.0, atol=1e-12)

    def test_distance_symmetric(self):
        npt.assert_allclose(energy_distance(self.a, self.b),
                            energy_distance(self.b, self.a))
        self.assertGreater(energy_distance(self.a, self.b), 1.0)

    def test_rejects_shifted(self):
        result = energy_test(self.a, self.b, 200, np.random.default_rng(1))
        self.assertIsInstance(result, EnergyTestResult)
        self.assertEqual(result.num_resamples, 200)
        self.assertTrue(result.rejects())

    def test_rejects_level(self):
        self.assertFalse(EnergyTestResult(1.0, 0.5, 100).rejects())
        self.assertTrue(EnergyTestResult(1.0, 0.01, 100).rejects())
