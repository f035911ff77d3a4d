import itertools
import unittest

import numpy as np
import numpy.testing as npt

from cfot.coupling import (
    BatchBuilder,
    ConditionalSamplingError,
    Observations,
    PriorConfig,
    binned_batch,
    dependence,
    independent_batch,
    markovian_batch,
    naive_batch,
    plan_cost,
)
from cfot.data import ConditionalSampler, DgpConfig, gen_dataset


def rows_of(observations):
    return {tuple(np.concatenate([pa, obs]))
            for pa, obs in zip(observations.pa, observations.obs)}


class TestObservations(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.dataset = gen_dataset(DgpConfig(n_samples=100, seed=3))
        cls.frontdoor = gen_dataset(
            DgpConfig(graph_variant='frontdoor', n_samples=100, seed=3))

    def test_outcome(self):
        obs = Observations.from_dataset(self.dataset)
        self.assertEqual(len(obs), 70)
        self.assertEqual(obs.obs.shape, (70, 2))
        self.assertTrue(obs.circular)

    def test_frontdoor_stages(self):
        outcome = Observations.from_dataset(self.frontdoor, 'outcome')
        self.assertFalse(outcome.circular)
        npt.assert_array_equal(outcome.pa, self.frontdoor.m('train'))

        mediator = Observations.from_dataset(self.frontdoor, 'mediator')
        npt.assert_array_equal(mediator.obs, self.frontdoor.m('train'))

        joint = Observations.from_dataset(self.frontdoor, 'joint', 'test')
        self.assertEqual(joint.obs.shape, (20, 4))


class TestBatches(unittest.TestCase):

    def setUp(self):
        self.rng = np.random.default_rng(7)
        self.prior = PriorConfig()
        dataset = gen_dataset(DgpConfig(n_samples=200, seed=1))
        self.observations = Observations.from_dataset(dataset)
        self.sampler = ConditionalSampler(DgpConfig(seed=1))

    def test_independent_keeps_rows(self):
        batch = independent_batch(self.rng, 16, self.observations, self.prior)
        self.assertEqual(len(batch), 16)
        known = rows_of(self.observations)
        for pa, x in zip(batch.pa, batch.x):
            self.assertIn(tuple(np.concatenate([pa, x])), known)
        self.assertTrue(np.all((batch.u >= 0) & (batch.u <= 1)))

    def test_naive_ot_is_optimal(self):
        m = 6
        batch, plan = naive_batch(self.rng, m, self.observations, self.prior)
        self.assertEqual(plan.scheme, 'naive_ot')

        # rows stay paired with their parent
        known = rows_of(self.observations)
        for pa, x in zip(batch.pa, batch.x):
            self.assertIn(tuple(np.concatenate([pa, x])), known)

        best = min(
            plan_cost(batch.u, batch.x, np.array(perm))
            for perm in itertools.permutations(range(m)))
        npt.assert_allclose(plan.cost, best)
        npt.assert_allclose(
            plan.cost, plan_cost(batch.u, batch.x, np.arange(m)))

    def test_markovian_shares_parent(self):
        batch, plan = markovian_batch(self.rng, 32, self.sampler, self.prior)
        self.assertTrue(batch.shared_parent())
        self.assertEqual(plan.scheme, 'markovian_ot')
        npt.assert_array_equal(np.sort(plan.assignment), np.arange(32))
        npt.assert_allclose(np.square(batch.u - batch.x).sum(), plan.cost)

    def test_markovian_single_pair(self):
        batch, plan = markovian_batch(self.rng, 1, self.sampler, self.prior)
        npt.assert_array_equal(plan.assignment, [0])
        self.assertEqual(len(batch), 1)

    def test_markovian_keeps_prior_independent(self):
        u, pa = [], []
        for _ in range(1000):
            batch, _ = markovian_batch(self.rng, 32, self.sampler, self.prior)
            u.append(batch.u)
            pa.append(batch.pa)
        u, pa = np.concatenate(u), np.concatenate(pa)[:, 0]
        for k in range(2):
            self.assertLess(abs(np.corrcoef(u[:, k], pa)[0, 1]), 0.03)

    def test_naive_entangles_parents(self):
        naive, _ = naive_batch(self.rng, 256, self.observations, self.prior)
        markovian, _ = markovian_batch(
            self.rng, 256, self.sampler, self.prior)
        self.assertGreater(dependence(naive.u, naive.pa),
                           dependence(markovian.u, markovian.pa))

    def test_ot_cheaper_than_random_pairing(self):
        independent, naive = [], []
        for _ in range(100):
            batch, plan = naive_batch(
                self.rng, 16, self.observations, self.prior)
            shuffled = self.rng.permutation(16)
            self.assertLessEqual(
                plan.cost, plan_cost(batch.u, batch.x, shuffled) + 1e-12)
            naive.append(plan.cost)

            batch = independent_batch(
                self.rng, 16, self.observations, self.prior)
            independent.append(
                plan_cost(batch.u, batch.x, np.arange(16)))
        self.assertGreater(np.mean(independent), np.mean(naive))

    def test_markovian_needs_source(self):
        with self.assertRaises(ConditionalSamplingError):
            markovian_batch(self.rng, 8, None, self.prior)
        with self.assertRaises(ValueError):
            markovian_batch(self.rng, 0, self.sampler, self.prior)

    def test_binned(self):
        batch, plan = binned_batch(
            self.rng, 16, self.observations, self.prior, 0.5)
        self.assertTrue(batch.shared_parent())
        anchor = batch.pa[0, 0]
        delta = np.mod(self.observations.pa[:, 0] - anchor + np.pi,
                       2 * np.pi) - np.pi
        members = {tuple(x) for x in
                   self.observations.obs[np.abs(delta) <= 0.25]}
        for x in batch.x:
            self.assertIn(tuple(x), members)

        with self.assertRaises(ValueError):
            binned_batch(self.rng, 16, self.observations, self.prior, 0.0)

    def test_dependence(self):
        u = self.rng.uniform(size=(200, 1))
        npt.assert_allclose(dependence(u, u), 1.0)


class TestBatchBuilder(unittest.TestCase):

    def setUp(self):
        self.prior = PriorConfig()
        dataset = gen_dataset(DgpConfig(n_samples=100, seed=2))
        self.observations = Observations.from_dataset(dataset)
        self.sampler = ConditionalSampler(DgpConfig(seed=2))

    def test_invalid(self):
        with self.assertRaises(ValueError):
            BatchBuilder('sinkhorn', self.prior, self.sampler,
                         self.observations)
        with self.assertRaises(ValueError):
            BatchBuilder('independent', self.prior, self.sampler)
        with self.assertRaises(ConditionalSamplingError):
            BatchBuilder('markovian_ot', self.prior)

    def test_independent_plan_is_identity(self):
        builder = BatchBuilder('independent', self.prior,
                               observations=self.observations)
        batch, plan = builder.draw(np.random.default_rng(0), 8)
        npt.assert_array_equal(plan.assignment, np.arange(8))
        npt.assert_allclose(plan.cost, np.square(batch.u - batch.x).sum())

    def test_bin_width_replaces_sampler(self):
        builder = BatchBuilder('markovian_ot', self.prior, self.sampler,
                               self.observations, bin_width=0.3)
        self.assertIsNone(builder.sampler)
        batch, _ = builder.draw(np.random.default_rng(0), 8)
        self.assertTrue(batch.shared_parent())

    def test_deterministic(self):
        builder = BatchBuilder('markovian_ot', self.prior, self.sampler)
        a, _ = builder.draw(np.random.default_rng(5), 16)
        b, _ = builder.draw(np.random.default_rng(5), 16)
        npt.assert_array_equal(a.u, b.u)
        npt.assert_array_equal(a.x, b.x)
        npt.assert_array_equal(a.pa, b.pa)
