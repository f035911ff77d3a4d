import unittest
from collections import OrderedDict

import numpy as np
import numpy.testing as npt

from cfot.nn import (
    AdamWState,
    EmaParams,
    NetworkSpec,
    NonFiniteGradientError,
    Params,
    adamw_step,
    ema_update,
)


class TestAdamW(unittest.TestCase):

    def setUp(self):
        self.spec = NetworkSpec(input_dim=3, hidden_dim=4, n_blocks=1)
        self.params = Params.init(self.spec, np.random.default_rng(2))
        self.state = AdamWState.init(self.params, lr=1e-2, weight_decay=0.1)

    def test_zero_gradient_decays(self):
        zeros = Params.zeros_like(self.params)
        updated, state = adamw_step(self.params, zeros, self.state)
        npt.assert_allclose(updated.flatten(),
                            self.params.flatten() * (1.0 - 1e-2 * 0.1),
                            rtol=1e-15)
        self.assertEqual(state.step, 1)

    def test_deterministic(self):
        grads = self.params.map(lambda p: np.sin(p) + 0.1)
        a, sa = adamw_step(self.params, grads, self.state)
        b, sb = adamw_step(self.params, grads, self.state)
        self.assertTrue(a.equals(b))
        self.assertTrue(sa.m.equals(sb.m))
        self.assertTrue(sa.v.equals(sb.v))

    def test_inputs_unchanged(self):
        before = self.params.flatten()
        grads = self.params.map(np.ones_like)
        adamw_step(self.params, grads, self.state)
        npt.assert_array_equal(self.params.flatten(), before)
        self.assertEqual(self.state.step, 0)

    def test_second_moments_nonnegative(self):
        state = self.state
        params = self.params
        rng = np.random.default_rng(0)
        for _ in range(5):
            grads = params.map(lambda p: rng.normal(size=p.shape))
            params, state = adamw_step(params, grads, state)
        self.assertTrue(np.all(state.v.flatten() >= 0.0))
        self.assertEqual(state.step, 5)

    def test_scalar_descent(self):
        spec = NetworkSpec(input_dim=1, hidden_dim=1, n_blocks=0,
                           output_dim=1)
        params = Params(spec, OrderedDict(
            (k, np.full(s, 2.0)) for k, s in spec.shapes().items()))
        grads = params.map(lambda p: np.full(p.shape, 0.5))
        state = AdamWState.init(params, lr=1e-2, weight_decay=1e-4)

        previous = params.flatten()
        for _ in range(50):
            params, state = adamw_step(params, grads, state)
            current = params.flatten()
            self.assertTrue(np.all(current < previous))
            previous = current

    def test_non_finite_gradient(self):
        grads = Params.zeros_like(self.params)
        grads['proj.bias'] = np.full(4, np.nan)
        with self.assertRaises(NonFiniteGradientError):
            adamw_step(self.params, grads, self.state)

    def test_lr_override(self):
        zeros = Params.zeros_like(self.params)
        updated, _ = adamw_step(self.params, zeros, self.state, lr=0.0)
        self.assertTrue(updated.equals(self.params))


class TestEma(unittest.TestCase):

    def setUp(self):
        spec = NetworkSpec(input_dim=3, hidden_dim=4, n_blocks=1)
        self.a = Params.init(spec, np.random.default_rng(0))
        self.b = Params.init(spec, np.random.default_rng(1))

    def test_decay_zero(self):
        ema = ema_update(EmaParams.init(self.a, 0.0), self.b)
        self.assertTrue(ema.shadow.equals(self.b))

    def test_decay_one(self):
        ema = ema_update(EmaParams.init(self.a, 1.0), self.b)
        self.assertTrue(ema.shadow.equals(self.a))

    def test_geometric_convergence(self):
        decay = 0.5
        ema = EmaParams.init(self.a, decay)
        for k in range(1, 6):
            ema = ema_update(ema, self.b)
            expected = self.b.flatten() + decay ** k * (
                self.a.flatten() - self.b.flatten())
            npt.assert_allclose(ema.shadow.flatten(), expected,
                                rtol=1e-12, atol=1e-15)

    def test_invalid_decay(self):
        with self.assertRaises(ValueError):
            EmaParams.init(self.a, 1.5)


if __name__ == '__main__':
    unittest.main()
