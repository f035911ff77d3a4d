import os
import shutil
import tempfile
import unittest

import numpy as np
import numpy.testing as npt
import pandas as pd

from cfot.field import CurlMap, GridSpec, VectorFieldModel, curl
from cfot.field import curl_noise_floor


def rotation(x, pa, t):
    return np.stack([x[:, 1], -x[:, 0]], axis=1)


def identity(x, pa, t):
    return np.array(x, dtype=np.float64)


class TestGridSpec(unittest.TestCase):

    def test_degenerate(self):
        with self.assertRaises(ValueError):
            GridSpec(0.0, 1.0, 0.0, 1.0, n0=2)
        with self.assertRaises(ValueError):
            GridSpec(1.0, 1.0, 0.0, 1.0)
        with self.assertRaises(ValueError):
            GridSpec(0.0, 1.0, 2.0, 1.0)

    def test_points(self):
        grid = GridSpec(0.0, 1.0, 0.0, 2.0, n0=3, n1=5)
        points = grid.points()
        self.assertEqual(points.shape, (15, 2))
        npt.assert_array_equal(points[0], [0.0, 0.0])
        npt.assert_array_equal(points[1], [0.0, 0.5])
        self.assertEqual(grid.spacing, (0.5, 0.5))

    def test_around(self):
        points = np.array([[1.0, 2.0], [3.0, 6.0]])
        grid = GridSpec.around(points, n=10, pad=0.5)
        self.assertEqual((grid.x0_min, grid.x0_max), (0.0, 4.0))
        self.assertEqual((grid.x1_min, grid.x1_max), (0.0, 8.0))


class TestCurl(unittest.TestCase):

    def setUp(self):
        self.grid = GridSpec(-2.0, 3.0, -1.0, 4.0, n0=21, n1=17)

    def test_rotation(self):
        curl_map = curl(rotation, self.grid, 0.0, 0.5)
        npt.assert_allclose(curl_map.values, -2.0, atol=1e-8)
        self.assertEqual(curl_map.values.shape, (21, 17))

    def test_gradient_field(self):
        curl_map = curl(identity, self.grid, 0.0, 0.5)
        npt.assert_allclose(curl_map.values, 0.0, atol=1e-12)
        self.assertLessEqual(curl_map.max_abs,
                             curl_noise_floor(identity, self.grid, 0.0, 0.5))

    def test_only_two_dimensions(self):
        with self.assertRaises(ValueError):
            curl(lambda x, pa, t: np.ones((len(x), 3)), self.grid, 0.0, 0.0)

    def test_non_finite(self):
        with self.assertRaises(ValueError):
            CurlMap(self.grid, np.full((21, 17), np.nan), 0.0, np.zeros(1))

    def test_energy_field_is_curl_free(self):
        model = VectorFieldModel.init(
            'energy', np.random.default_rng(0), hidden_dim=16, n_blocks=2)
        grid = GridSpec(1.0, 6.0, 1.0, 6.0, n0=50, n1=50)
        for t in (0.0, 0.5, 1.0):
            curl_map = curl(model, grid, np.array([1.0]), t)
            self.assertLessEqual(
                curl_map.max_abs,
                curl_noise_floor(model, grid, np.array([1.0]), t))

    def test_direct_field_is_not(self):
        model = VectorFieldModel.init(
            'direct', np.random.default_rng(0), hidden_dim=16, n_blocks=2)
        grid = GridSpec(1.0, 6.0, 1.0, 6.0, n0=50, n1=50)
        curl_map = curl(model, grid, np.array([1.0]), 0.5)
        self.assertGreater(
            curl_map.max_abs,
            curl_noise_floor(model, grid, np.array([1.0]), 0.5))


class TestCurlMapOutput(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tmp)

    def test_to_csv(self):
        grid = GridSpec(0.0, 1.0, 0.0, 1.0, n0=4, n1=3)
        path = os.path.join(self.tmp, 'curl.csv')
        curl(rotation, grid, 0.25, 0.5).to_csv(path)

        frame = pd.read_csv(path)
        self.assertEqual(list(frame.columns), ['x0', 'x1', 'curl'])
        self.assertEqual(len(frame), 12)

        with open(os.path.join(self.tmp, 'curl.hdr')) as f:
            header = dict(line.strip().split('=', 1) for line in f)
        self.assertEqual(float(header['t']), 0.5)
        self.assertEqual(float(header['pa']), 0.25)
        self.assertEqual(int(header['n0']), 4)


if __name__ == '__main__':
    unittest.main()
