import unittest

import numpy as np

from cfot.coupling import PriorConfig


class TestPriorConfig(unittest.TestCase):

    def test_uniform(self):
        u = PriorConfig(dim=3).sample(np.random.default_rng(0), 1000)
        self.assertEqual(u.shape, (1000, 3))
        self.assertTrue(np.all((u >= 0) & (u < 1)))

    def test_gaussian(self):
        u = PriorConfig('standard_gaussian').sample(
            np.random.default_rng(0), 20000)
        self.assertLess(np.abs(u.mean()), 0.05)
        self.assertLess(np.abs(u.std() - 1), 0.05)

    def test_invalid(self):
        with self.assertRaises(ValueError):
            PriorConfig('laplace')
        with self.assertRaises(ValueError):
            PriorConfig(dim=0)
