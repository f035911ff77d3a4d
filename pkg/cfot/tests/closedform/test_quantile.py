import unittest

import numpy.testing as npt

from cfot.closedform import (
    Mechanism1D,
    OutOfSupportError,
    cf_1d,
    quantile_table,
    rank_1d,
)


class TestMechanism1D(unittest.TestCase):

    def test_invalid(self):
        with self.assertRaises(ValueError):
            Mechanism1D('t4')
        with self.assertRaises(ValueError):
            Mechanism1D('t1')(2, 0.5)

    def test_inverse(self):
        for id in ('t1', 't2', 't3'):
            mech = Mechanism1D(id)
            for pa in (0, 1):
                for u in (0.0, 0.25, 1.0):
                    npt.assert_allclose(mech.inverse(pa, mech(pa, u)), u)

    def test_same_conditional_support(self):
        for id in ('t1', 't2', 't3'):
            mech = Mechanism1D(id)
            for pa in (0, 1):
                lo, hi = mech.support(pa)
                values = sorted([mech(pa, 0.0), mech(pa, 1.0)])
                npt.assert_allclose(values, [lo, hi])

    def test_out_of_support(self):
        with self.assertRaises(OutOfSupportError):
            Mechanism1D('t1').inverse(0, 1.5)
        with self.assertRaises(OutOfSupportError):
            rank_1d(Mechanism1D('t1'), 1, 0.5)
        # out of support is still a ValueError
        with self.assertRaises(ValueError):
            cf_1d(Mechanism1D('t3'), 0, -0.1, 1)


class TestQuantileTable(unittest.TestCase):

    def test_counterfactuals(self):
        table = quantile_table(pa=0, x=0.8, pa_star=1).set_index('mechanism')
        npt.assert_allclose(table['u'], [0.8, 0.2, 0.8])
        npt.assert_allclose(table['x_star'], [1.8, 1.8, 1.2])
        npt.assert_allclose(table['rank_x'], [0.8, 0.8, 0.8])
        npt.assert_allclose(table['rank_x_star'], [0.8, 0.8, 0.2])

    def test_t1_t2_agree_everywhere(self):
        t1, t2 = Mechanism1D('t1'), Mechanism1D('t2')
        for x in (0.0, 0.3, 0.99):
            npt.assert_allclose(cf_1d(t1, 0, x, 1), cf_1d(t2, 0, x, 1))

    def test_columns(self):
        table = quantile_table()
        self.assertEqual(
            list(table.columns),
            ['mechanism', 'pa', 'x', 'pa_star', 'u', 'x_star', 'rank_x',
             'rank_x_star'])
        self.assertEqual(len(table), 3)
