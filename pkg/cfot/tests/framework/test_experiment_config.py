import os
import shutil
import tempfile
import unittest

from cfot.framework import ConfigError, ExperimentConfig, RunManifest
from cfot.framework.model_framework import config_hash
from cfot.tests.cfot_test_case import CFOTTestCase


class TestDeriveScheme(unittest.TestCase):

    def test_defaults(self):
        self.assertEqual(ExperimentConfig.derive_scheme('flow'),
                         'independent')
        self.assertEqual(ExperimentConfig.derive_scheme('ebm'),
                         'independent')
        self.assertEqual(ExperimentConfig.derive_scheme('ot_flow'),
                         'markovian_ot')
        self.assertEqual(ExperimentConfig.derive_scheme('ot_ebm'),
                         'markovian_ot')

    def test_naive_ot(self):
        self.assertEqual(
            ExperimentConfig.derive_scheme('ot_ebm', 'naive_ot'), 'naive_ot')
        self.assertEqual(
            ExperimentConfig.derive_scheme('flow', 'independent'),
            'independent')

    def test_invalid(self):
        with self.assertRaises(ConfigError) as context:
            ExperimentConfig.derive_scheme('flow', 'naive_ot')
        self.assertEqual(context.exception.items, ['model.coupling'])

        with self.assertRaises(ConfigError) as context:
            ExperimentConfig.derive_scheme('ot_flow', 'independent')
        self.assertEqual(context.exception.items, ['model.coupling'])

        with self.assertRaises(ConfigError) as context:
            ExperimentConfig.derive_scheme('gan')
        self.assertEqual(context.exception.items, ['model.model_kind'])


class TestFromConfig(unittest.TestCase):

    def config(self):
        return CFOTTestCase.base_config_copy().cfg

    def assertConfigError(self, cfg, item):
        with self.assertRaises(ConfigError) as context:
            ExperimentConfig.from_config(cfg)
        self.assertEqual(context.exception.items, [item])
        self.assertIsInstance(context.exception, ValueError)

    def test_base(self):
        settings = ExperimentConfig.from_config(self.config())
        self.assertEqual(settings.scheme, 'markovian_ot')
        self.assertEqual(settings.field_kind, 'direct')
        self.assertEqual(settings.dgp.n_samples, 200)
        self.assertEqual(settings.eval.nfe, (2, 4))
        self.assertEqual(settings.ode.nfe, 4)
        self.assertEqual(settings.seeds, (0,))
        self.assertIsNone(settings.train.bin_width)
        self.assertEqual(settings.train.val_max_samples, 10)
        self.assertEqual(settings.prior, 'uniform_unit_box')

    def test_defaults_filled(self):
        settings = ExperimentConfig.from_config(self.config())
        self.assertEqual(settings.train.ema_decay, 0.9999)
        self.assertEqual(settings.train.selection, 'val_mu_ape')
        self.assertEqual(settings.train.val_batches, 8)
        self.assertEqual(settings.ode.rtol, 1e-5)
        self.assertTrue(settings.curl_map)

    def test_energy_kind(self):
        cfg = self.config()
        cfg['model']['model_kind'] = 'ebm'
        settings = ExperimentConfig.from_config(cfg)
        self.assertEqual(settings.field_kind, 'energy')
        self.assertEqual(settings.scheme, 'independent')

    def test_zero_means_none(self):
        cfg = self.config()
        cfg['eval']['max_samples'] = 0
        cfg['train']['bin_width'] = 0.25
        settings = ExperimentConfig.from_config(cfg)
        self.assertIsNone(settings.eval.max_samples)
        self.assertEqual(settings.train.bin_width, 0.25)

    def test_for_seed(self):
        settings = ExperimentConfig.from_config(self.config()).for_seed(7)
        self.assertEqual(settings.dgp.seed, 7)
        self.assertEqual(settings.train.seed, 7)

    def test_invalid_items(self):
        cfg = self.config()
        cfg['model']['hidden_dim'] = 0
        self.assertConfigError(cfg, 'model.hidden_dim')

        cfg = self.config()
        cfg['train']['steps'] = 5
        self.assertConfigError(cfg, 'train.steps')

        cfg = self.config()
        cfg['dgp']['n_samples'] = 0
        self.assertConfigError(cfg, 'dgp.n_samples')

        cfg = self.config()
        cfg['eval']['k_angles'] = 0
        self.assertConfigError(cfg, 'eval.k_angles')

        cfg = self.config()
        cfg['eval']['nfe'] = [2, 0]
        self.assertConfigError(cfg, 'eval.nfe')

        cfg = self.config()
        cfg['output']['curl_grid'] = 2
        self.assertConfigError(cfg, 'output.curl_grid')

        cfg = self.config()
        cfg['system']['seeds'] = []
        self.assertConfigError(cfg, 'system.seeds')

    def test_rk4_nfe_multiple_of_four(self):
        cfg = self.config()
        cfg['ode']['solver'] = 'rk4'
        cfg['eval']['nfe'] = [4, 8]
        settings = ExperimentConfig.from_config(cfg)
        self.assertEqual(settings.ode.nfe, 4)

        cfg['eval']['nfe'] = [2, 4]
        self.assertConfigError(cfg, 'eval.nfe')

        cfg = self.config()
        cfg['ode']['solver'] = 'rk4'
        cfg['eval']['nfe'] = [4]
        cfg['train']['nfe_eval'] = 10
        self.assertConfigError(cfg, 'train.nfe_eval')

    def test_missing_section(self):
        cfg = self.config()
        del cfg['prior']
        self.assertConfigError(cfg, 'prior')


class TestConfigHash(unittest.TestCase):

    def config(self):
        return CFOTTestCase.base_config_copy().cfg

    def test_stable(self):
        digest = config_hash(self.config())
        self.assertEqual(len(digest), 64)
        self.assertEqual(digest, config_hash(self.config()))

    def test_ignores_run_location(self):
        cfg = self.config()
        cfg['output']['out_location'] = '/somewhere/else'
        cfg['system']['seeds'] = [4, 5]
        cfg['system']['log_level'] = 'debug'
        self.assertEqual(config_hash(cfg), config_hash(self.config()))

    def test_changes_with_settings(self):
        cfg = self.config()
        cfg['train']['lr'] = 0.5
        self.assertNotEqual(config_hash(cfg), config_hash(self.config()))


class TestRunManifest(unittest.TestCase):

    def setUp(self):
        self.out_dir = tempfile.mkdtemp(prefix='cfot_manifest_')

    def tearDown(self):
        shutil.rmtree(self.out_dir)

    def test_round_trip(self):
        existing = os.path.join(self.out_dir, 'metrics.csv')
        open(existing, 'w').close()
        manifest = RunManifest(
            'abc123', (0, 1), artifacts={
                'metrics': existing,
                'table': os.path.join(self.out_dir, 'table.csv')},
            status='failed', message='Training diverged\nat step 3')
        manifest.write(os.path.join(self.out_dir, RunManifest.FILE_NAME))

        read = RunManifest.read(self.out_dir)
        self.assertEqual(read.config_hash, 'abc123')
        self.assertEqual(read.seeds, (0, 1))
        self.assertEqual(read.status, 'failed')
        self.assertEqual(read.message, 'Training diverged at step 3')
        self.assertEqual(dict(read.artifacts), dict(manifest.artifacts))
        self.assertEqual(read.missing(),
                         [os.path.join(self.out_dir, 'table.csv')])

    def test_no_manifest(self):
        with self.assertRaises(FileNotFoundError):
            RunManifest.read(self.out_dir)
