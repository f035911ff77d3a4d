"""
The module :mod:`~cfot.framework.model_framework` contains functions and
classes that act as a major wrapper to the system. This provides a way to
organize the experiment: parse the config, and for every seed generate the
ellipse data, train the flows, evaluate them at each solver setting and
write the artifacts.

The method :func:`~cfot.framework.model_framework.run_experiment` in the
:mod:`~cfot.framework.model_framework` performs the full run.

Example:
    The following example shows how to initialize a run and create the
    artifacts of one seed::

        with Experiment('config.ini') as e:
            dataset = e.generate(0)
            trained = e.train(0, dataset)
            reports = e.evaluate(0, dataset, e.best_fields(trained))

"""

import configparser
import hashlib
import logging
import os
import re
from collections import OrderedDict
from dataclasses import dataclass, field, replace
from datetime import datetime
from os.path import abspath, join

import numpy as np
import pandas as pd
from inicheck.config import UserConfig
from inicheck.output import generate_config, print_config_report
from inicheck.tools import check_config, get_user_config

import cfot
from cfot.coupling import (
    BatchBuilder,
    ConditionalSamplingError,
    Observations,
    PriorConfig,
)
from cfot.data import ConditionalSampler, Dataset, DgpConfig, gen_dataset
from cfot.evaluate import (
    EvalConfig,
    EvaluationSet,
    aggregate,
    cf_mae,
    evaluate_model,
    mu_ape,
    read_reports,
    write_reports,
)
from cfot.field import (
    FieldDivergedError,
    GridSpec,
    VectorFieldModel,
    curl,
    load_field,
)
from cfot.framework import logger
from cfot.inference import (
    FlowEngine,
    FrontdoorEngine,
    IntegrationError,
    OdeConfig,
)
from cfot.training import TrainConfig, TrainingDivergedError, train
from cfot.utils import STREAMS, stream_rng

MODEL_KINDS = ('flow', 'ebm', 'ot_flow', 'ot_ebm')
CURL_TIMES = (0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0)

EXIT_SUCCESS = 0
EXIT_CONFIG_ERROR = 1
EXIT_RUNTIME_FAILURE = 2

# items that do not change any result
UNHASHED_ITEMS = ('output.out_location', 'system.seeds', 'system.log_level',
                  'system.log_file')

# training stage of every flow, keys the random streams
STAGES = {'outcome': 0, 'mediator': 1}

SECTIONS = ('dgp', 'model', 'prior', 'train', 'ode', 'eval', 'output',
            'system')

# failures of a stage that still leave a failed manifest behind
RUN_ERRORS = (TrainingDivergedError, IntegrationError, FieldDivergedError,
              ConditionalSamplingError, ValueError, OSError)


class ConfigError(ValueError):
    """
    Invalid experiment configuration

    Attributes:
        items: dotted ``section.item`` names of the offending settings
    """

    def __init__(self, items, message):
        self.items = list(items)
        super().__init__('{}: {}'.format(', '.join(self.items), message))


def _offending_item(section, names, error):
    """The config item named earliest in a validation message"""
    message = str(error)
    found = []
    for name in names:
        match = re.search(r'\b{}\b'.format(re.escape(name)), message)
        if match:
            found.append((match.start(), name))
    item = min(found)[1] if found else '?'
    return '{}.{}'.format(section, item)


def _build(section, factory, **kwargs):
    try:
        return factory(**kwargs)
    except ValueError as e:
        raise ConfigError([_offending_item(section, kwargs, e)], e) from e


def _none_if_zero(value):
    return None if not value else value


@dataclass(frozen=True)
class ExperimentConfig():
    """
    Validated settings of one experiment

    Args:
        dgp: :class:`~cfot.data.DgpConfig`, seed filled per run
        model_kind: ``flow``, ``ebm``, ``ot_flow`` or ``ot_ebm``
        scheme: coupling scheme derived from the model kind
        train: :class:`~cfot.training.TrainConfig`, seed filled per run
        eval: :class:`~cfot.evaluate.EvalConfig`
        ode: :class:`~cfot.inference.OdeConfig`, nfe filled per evaluation
        prior: prior kind
        hidden_dim, n_blocks: network size
        periodic_pa: encode angle parents as sine and cosine
        seeds: run seeds
        output_dir: artifact directory
        curl_map, curl_grid, curl_pa: curl map output
    """

    dgp: DgpConfig
    model_kind: str
    scheme: str
    train: TrainConfig
    eval: EvalConfig
    ode: OdeConfig
    prior: str
    hidden_dim: int
    n_blocks: int
    periodic_pa: bool
    seeds: tuple
    output_dir: str
    curl_map: bool = True
    curl_grid: int = 50
    curl_pa: float = 1.0

    @property
    def field_kind(self):
        return 'energy' if self.model_kind.endswith('ebm') else 'direct'

    @staticmethod
    def derive_scheme(model_kind, coupling='default'):
        """
        Coupling scheme of a model kind, ``flow`` and ``ebm`` train on
        independent pairs and the ``ot_*`` kinds on the Markovian coupling,
        which may be swapped for the naive one
        """
        if model_kind not in MODEL_KINDS:
            raise ConfigError(
                ['model.model_kind'],
                'Unknown model_kind {}, expected one of {}'.format(
                    model_kind, MODEL_KINDS))

        implied = 'markovian_ot' if model_kind.startswith('ot_') else \
            'independent'
        if coupling in ('default', implied):
            return implied
        if coupling == 'naive_ot' and implied == 'markovian_ot':
            return coupling
        raise ConfigError(
            ['model.coupling'],
            'Coupling {} cannot be combined with model_kind {}'.format(
                coupling, model_kind))

    @classmethod
    def from_config(cls, config):
        """
        Args:
            config: cast inicheck config dictionary

        Raises:
            ConfigError naming the offending ``section.item``
        """
        missing = [s for s in SECTIONS if s not in config]
        if missing:
            raise ConfigError(missing, 'missing config section, an empty '
                                       'section takes every default')

        model = config['model']
        scheme = cls.derive_scheme(model['model_kind'],
                                   model.get('coupling', 'default'))

        dgp = _build('dgp', DgpConfig, **config['dgp'])

        t = dict(config['train'])
        t['bin_width'] = _none_if_zero(t.get('bin_width'))
        t['val_max_samples'] = _none_if_zero(t.get('val_max_samples'))
        train_config = _build('train', TrainConfig, scheme=scheme, **t)

        e = dict(config['eval'])
        e['nfe'] = tuple(int(n) for n in np.atleast_1d(e['nfe']))
        e['max_samples'] = _none_if_zero(e.get('max_samples'))
        eval_config = _build('eval', EvalConfig, **e)
        for nfe in eval_config.nfe:
            if nfe < 1:
                raise ConfigError(['eval.nfe'],
                                  'nfe must be >= 1, got {}'.format(nfe))

        # rk4 spends four field evaluations per step
        if config['ode'].get('solver') == 'rk4':
            for item, values in (('train.nfe_eval', [train_config.nfe_eval]),
                                 ('eval.nfe', eval_config.nfe)):
                uneven = [n for n in values if int(n) % 4 != 0]
                if uneven:
                    raise ConfigError(
                        [item], 'rk4 needs nfe in multiples of 4, got '
                                '{}'.format(uneven))

        ode = _build('ode', OdeConfig, nfe=train_config.nfe_eval,
                     **config['ode'])
        prior = _build('prior', PriorConfig, **config['prior'])

        for item in ('hidden_dim', 'n_blocks'):
            if int(model[item]) < 1:
                raise ConfigError(
                    ['model.{}'.format(item)],
                    '{} must be >= 1, got {}'.format(item, model[item]))

        output = config['output']
        if int(output.get('curl_grid', 50)) < 3:
            raise ConfigError(['output.curl_grid'],
                              'curl_grid must be >= 3')

        seeds = tuple(int(s) for s in np.atleast_1d(config['system']['seeds']))
        if len(seeds) == 0:
            raise ConfigError(['system.seeds'], 'No seeds given')

        return cls(
            dgp=dgp,
            model_kind=model['model_kind'],
            scheme=scheme,
            train=train_config,
            eval=eval_config,
            ode=ode,
            prior=prior.kind,
            hidden_dim=int(model['hidden_dim']),
            n_blocks=int(model['n_blocks']),
            periodic_pa=bool(model['periodic_pa']),
            seeds=seeds,
            output_dir=output['out_location'],
            curl_map=bool(output.get('curl_map', True)),
            curl_grid=int(output.get('curl_grid', 50)),
            curl_pa=float(output.get('curl_pa', 1.0)),
        )

    def for_seed(self, seed):
        return replace(self, dgp=replace(self.dgp, seed=int(seed)),
                       train=replace(self.train, seed=int(seed)))


def config_hash(config):
    """
    SHA-256 of the canonical ``section.item=value`` lines of a config,
    leaving out the items in :data:`UNHASHED_ITEMS`
    """
    lines = []
    for section in sorted(config):
        for item in sorted(config[section]):
            name = '{}.{}'.format(section, item)
            if name in UNHASHED_ITEMS:
                continue
            value = config[section][item]
            if isinstance(value, (list, tuple)):
                value = ','.join(str(v) for v in value)
            lines.append('{}={}'.format(name, value))
    return hashlib.sha256('\n'.join(lines).encode('utf-8')).hexdigest()


@dataclass
class RunManifest():
    """
    Record of one experiment run

    Args:
        config_hash: :func:`config_hash` of the run's config
        seeds: run seeds
        artifacts: artifact name to path
        version: package version
        status: ``success`` or ``failed``
        message: failure description
    """

    config_hash: str
    seeds: tuple
    artifacts: OrderedDict = field(default_factory=OrderedDict)
    version: str = cfot.__version__
    status: str = 'success'
    message: str = ''

    FILE_NAME = 'manifest.ini'

    def missing(self):
        """Listed artifacts that do not exist"""
        return [p for p in self.artifacts.values() if not os.path.exists(p)]

    def write(self, path):
        parser = configparser.ConfigParser(interpolation=None)
        parser['run'] = OrderedDict([
            ('config_hash', self.config_hash),
            ('seeds', ' '.join(str(s) for s in self.seeds)),
            ('version', self.version),
            ('status', self.status),
            ('message', self.message.replace('\n', ' ')),
        ])
        parser['artifacts'] = self.artifacts
        with open(path, 'w') as f:
            parser.write(f)

    @classmethod
    def read(cls, path):
        if os.path.isdir(path):
            path = join(path, cls.FILE_NAME)
        parser = configparser.ConfigParser(interpolation=None)
        if not parser.read(path):
            raise FileNotFoundError('No run manifest at {}'.format(path))
        run = parser['run']
        return cls(
            config_hash=run['config_hash'],
            seeds=tuple(int(s) for s in run['seeds'].split()),
            artifacts=OrderedDict(parser['artifacts'].items()),
            version=run['version'],
            status=run['status'],
            message=run.get('message', ''),
        )


class Experiment():
    """
    Experiment class for CFOT manages the data generation, training,
    evaluation and artifact writing of a counterfactual flow experiment.

    Args:
        config: string path to the config file or inicheck UserConfig
            instance
        external_logger: logger to use instead of configuring one

    Raises:
        ConfigError when the config does not validate
    """

    def __init__(self, config, external_logger=None):
        # read the config file and store
        if isinstance(config, str):
            if not os.path.isfile(config):
                raise FileNotFoundError(
                    'Configuration file does not exist --> {}'.format(config))
            self.configFile = config
            ucfg = get_user_config(config, modules='cfot')

        elif isinstance(config, UserConfig):
            ucfg = config
            self.configFile = config.filename

        else:
            raise TypeError(
                'Config passed to CFOT is neither file name nor UserConfig '
                'instance')

        # start logging
        if external_logger is None:
            self.cfot_logger = logger.CFOTLogger(ucfg.cfg.get('system', {}))
            self._logger = logging.getLogger(__name__)
        else:
            self._logger = external_logger

        # Make the output directory if it do not exist
        out = ucfg.cfg.get('output', {}).get('out_location')
        if out is not None:
            os.makedirs(out, exist_ok=True)

        self._logger.info('Checking config file for issues...')
        warnings, errors = check_config(ucfg)
        print_config_report(warnings, errors, logger=self._logger)
        self.ucfg = ucfg
        self.config = self.ucfg.cfg

        if len(errors) > 0:
            self._logger.error(
                'Errors in the config file. See configuration status report '
                'above.')
            raise ConfigError(
                ['.'.join(str(e).split()[:2]) for e in errors],
                'invalid config file {}'.format(self.configFile))

        self.settings = ExperimentConfig.from_config(self.config)
        self.out_dir = abspath(self.settings.output_dir)
        self.artifacts = OrderedDict()

        # Write the config file to the output dir
        full_config_out = join(self.out_dir, 'config.ini')
        self._logger.info('Writing config file with full options.')
        generate_config(self.ucfg, full_config_out)
        self.artifacts['config'] = full_config_out

        for k, v in self.config['system'].items():
            setattr(self, k, v)

        self.start_time = datetime.now()
        self._logger.info(
            'Started CFOT {} --> {}'.format(cfot.__version__, self.start_time))
        self._logger.info(
            'model_kind={} scheme={} graph_variant={} prior_variant={} '
            'seeds={}'.format(
                self.settings.model_kind, self.settings.scheme,
                self.settings.dgp.graph_variant,
                self.settings.dgp.prior_variant, list(self.settings.seeds)))

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc_value, traceback):
        """
        Provide some logging info about when CFOT was closed
        """
        now = datetime.now()
        self._logger.info('CFOT closed --> {} (elapsed {})'.format(
            now, now - self.start_time))

    @property
    def config_hash(self):
        return config_hash(self.config)

    @property
    def frontdoor(self):
        return self.settings.dgp.frontdoor

    @property
    def stages(self):
        """Flows trained per seed, in training order"""
        return ('mediator', 'outcome') if self.frontdoor else ('outcome',)

    def seed_dir(self, seed):
        path = join(self.out_dir, 'seed{}'.format(seed))
        os.makedirs(path, exist_ok=True)
        return path

    def data_path(self, seed):
        return join(self.seed_dir(seed), 'data.csv')

    def checkpoint_path(self, seed, stage, which='best'):
        return join(self.seed_dir(seed), '{}.ckpt.{}'.format(stage, which))

    def ode_config(self, nfe):
        return replace(self.settings.ode, nfe=int(nfe))

    def generate(self, seed):
        """
        Generate and write the dataset of a seed

        Returns:
            :class:`~cfot.data.Dataset`
        """
        dataset = gen_dataset(self.settings.for_seed(seed).dgp)
        dataset.to_csv(self.data_path(seed))
        self.artifacts['seed{}_data'.format(seed)] = self.data_path(seed)
        return dataset

    def load_dataset(self, seed):
        """The seed's dataset from disk, generated when missing"""
        path = self.data_path(seed)
        if not os.path.isfile(path):
            return self.generate(seed)
        return Dataset.from_csv(path, self.settings.for_seed(seed).dgp)

    def _angle_parent(self, stage):
        return stage == 'mediator' or not self.frontdoor

    def _initial_field(self, seed, stage, sampler):
        return VectorFieldModel.init(
            self.settings.field_kind,
            stream_rng(seed, STREAMS['init'], STAGES[stage]),
            x_dim=sampler.obs_dim,
            pa_dim=sampler.parent_dim,
            periodic_pa=self.settings.periodic_pa and
            self._angle_parent(stage),
            hidden_dim=self.settings.hidden_dim,
            n_blocks=self.settings.n_blocks)

    def _validator(self, stage, dataset, trained):
        """Score of a candidate field on the validation split"""
        t = self.settings.train
        ode = self.ode_config(t.nfe_eval)

        if stage == 'mediator':
            val = EvaluationSet.mediator_from_dataset(
                dataset, 'val', t.val_max_samples)
            return lambda f: cf_mae(f, val, t.val_k_angles, ode)

        val = EvaluationSet.from_dataset(dataset, 'val', t.val_max_samples)
        if not self.frontdoor:
            return lambda f: mu_ape(f, val, t.val_k_angles, ode)

        mediator = trained['mediator'].vector_field('best')
        return lambda f: mu_ape(FrontdoorEngine(mediator, f, ode), val,
                                t.val_k_angles, ode)

    def train(self, seed, dataset):
        """
        Train every flow of a seed and write their checkpoints and logs

        Returns:
            dict of stage to :class:`~cfot.training.TrainedModel`
        """
        settings = self.settings.for_seed(seed)
        prior = PriorConfig(settings.prior)
        trained = OrderedDict()

        for stage in self.stages:
            sampler = ConditionalSampler(settings.dgp, stage)
            builder = BatchBuilder(
                settings.scheme, prior, sampler=sampler,
                observations=Observations.from_dataset(dataset, stage),
                bin_width=settings.train.bin_width)
            val_builder = BatchBuilder(
                settings.scheme, prior, sampler=sampler,
                observations=Observations.from_dataset(
                    dataset, stage, split='val'),
                bin_width=settings.train.bin_width)

            self._logger.info('Seed {}: training the {} flow'.format(
                seed, stage))
            try:
                result = train(
                    settings.train, builder,
                    self._initial_field(seed, stage, sampler),
                    validate=self._validator(stage, dataset, trained),
                    stage=STAGES[stage], val_builder=val_builder)
            except TrainingDivergedError as e:
                self._register(
                    seed, e.checkpoint.save(self.seed_dir(seed), stage))
                raise

            self._register(seed, result.save(self.seed_dir(seed), stage))
            trained[stage] = result

        return trained

    def _register(self, seed, paths):
        for name, path in paths.items():
            self.artifacts['seed{}_{}'.format(seed, name)] = path

    @staticmethod
    def best_fields(trained):
        return OrderedDict(
            (stage, t.vector_field('best')) for stage, t in trained.items())

    def load_trained(self, seed, which='best'):
        """
        The seed's trained fields from their checkpoints

        Returns:
            dict of stage to :class:`~cfot.field.VectorFieldModel`
        """
        return OrderedDict(
            (stage, load_field(self.checkpoint_path(seed, stage, which)))
            for stage in self.stages)

    def engine(self, fields, nfe):
        """Counterfactual engine of the trained fields at ``nfe``"""
        ode = self.ode_config(nfe)
        if self.frontdoor:
            return FrontdoorEngine(fields['mediator'], fields['outcome'], ode)
        return FlowEngine(fields['outcome'], ode)

    def evaluate(self, seed, dataset, fields):
        """
        Metrics of the trained fields at every configured nfe, written to
        ``seed<seed>/metrics.csv``

        Returns:
            list of :class:`~cfot.evaluate.MetricsReport`
        """
        settings = self.settings.for_seed(seed)
        eval_set = EvaluationSet.from_dataset(
            dataset, 'test', settings.eval.max_samples)
        sampler = ConditionalSampler(
            settings.dgp, 'joint' if self.frontdoor else 'outcome')
        prior = PriorConfig(settings.prior, dim=sampler.obs_dim)

        reports = []
        for nfe in settings.eval.nfe:
            self._logger.info('Seed {}: evaluating at nfe={}'.format(
                seed, nfe))
            reports.append(evaluate_model(
                self.engine(fields, nfe), eval_set, sampler, prior,
                settings.eval, self.ode_config(nfe),
                stream_rng(seed, STREAMS['eval']),
                scheme=settings.scheme,
                model_kind=settings.model_kind,
                graph_variant=settings.dgp.graph_variant,
                prior_variant=settings.dgp.prior_variant,
                seed=int(seed)))

        path = join(self.seed_dir(seed), 'metrics.csv')
        write_reports(reports, path)
        self.artifacts['seed{}_metrics'.format(seed)] = path
        return reports

    def curl_maps(self, seed, dataset, fields):
        """
        Curl of every trained field at t = 0, 1/3, 2/3 and 1

        Returns:
            dict of artifact name to CSV path
        """
        paths = OrderedDict()
        for stage, model in fields.items():
            obs = Observations.from_dataset(dataset, stage)
            grid = GridSpec.around(obs.obs, n=self.settings.curl_grid)
            if self._angle_parent(stage):
                pa = np.array([self.settings.curl_pa])
            else:
                pa = np.mean(obs.pa, axis=0)

            for i, t in enumerate(CURL_TIMES):
                name = '{}_curl_t{}'.format(stage, i)
                path = join(self.seed_dir(seed), 'curl', name + '.csv')
                curl_map = curl(model, grid, pa, t)
                curl_map.to_csv(path)
                self._logger.info(
                    'Seed {}: {} field at t={:.3f} has max |curl| '
                    '{:.4g}'.format(seed, stage, t, curl_map.max_abs))
                paths[name] = path
        self._register(seed, paths)
        return paths

    def counterfactual_queries(self, fields, queries, nfe=None):
        """
        Answer a batch of counterfactual queries

        Args:
            fields: trained fields by stage
            queries: DataFrame with ``pa, x0, x1, pa_star`` columns, plus
                ``m0, m1`` in the frontdoor world
            nfe: solver steps, defaults to the last configured nfe

        Returns:
            the queries with ``x0_star, x1_star`` (and ``m0_star,
            m1_star``) appended
        """
        obs_columns = ['x0', 'x1']
        out_columns = ['x0_star', 'x1_star']
        if self.frontdoor:
            obs_columns = ['m0', 'm1'] + obs_columns
            out_columns = ['m0_star', 'm1_star'] + out_columns

        missing = set(['pa', 'pa_star'] + obs_columns) - set(queries.columns)
        if missing:
            raise ValueError('Query file is missing columns {}'.format(
                sorted(missing)))

        nfe = nfe or self.settings.eval.nfe[-1]
        engine = self.engine(fields, nfe)
        answers = engine.counterfactual(
            queries[obs_columns].values.astype(np.float64),
            queries[['pa']].values.astype(np.float64),
            queries[['pa_star']].values.astype(np.float64))

        result = queries.copy()
        for i, column in enumerate(out_columns):
            result[column] = answers[:, i]
        return result

    def run_seed(self, seed):
        """Generate, train, evaluate and map the curl of one seed"""
        dataset = self.generate(seed)
        fields = self.best_fields(self.train(seed, dataset))
        reports = self.evaluate(seed, dataset, fields)
        if self.settings.curl_map:
            self.curl_maps(seed, dataset, fields)
        return reports

    def run(self):
        """
        Run every seed sequentially and write the combined metrics, the
        aggregate table and the manifest

        Returns:
            :class:`RunManifest`, flagged ``failed`` when a seed raised one of
            :data:`RUN_ERRORS`
        """
        manifest = RunManifest(self.config_hash, self.settings.seeds)
        reports = []

        try:
            for seed in self.settings.seeds:
                self._logger.info('Starting seed {}'.format(seed))
                reports.extend(self.run_seed(seed))

        except RUN_ERRORS as e:
            manifest.status = 'failed'
            manifest.message = '{}: {}'.format(type(e).__name__, e)
            self._logger.error('Run failed: {}'.format(manifest.message))

        manifest.artifacts = OrderedDict(
            (k, p) for k, p in self.artifacts.items() if os.path.exists(p))

        if reports:
            metrics = join(self.out_dir, 'metrics.csv')
            write_reports(reports, metrics)
            manifest.artifacts['metrics'] = metrics

        path = join(self.out_dir, RunManifest.FILE_NAME)
        if manifest.status == 'success':
            table = join(self.out_dir, 'table.csv')
            aggregate(read_reports(metrics)).to_csv(
                table, index=False, float_format='%.17g')
            manifest.artifacts['table'] = table

        manifest.write(path)
        self._logger.info('Wrote run manifest {} ({})'.format(
            path, manifest.status))
        return manifest


def run_experiment(config, external_logger=None):
    """
    Function that runs a full experiment

    Args:
        config: string path to the config file or inicheck UserConfig
            instance
        external_logger: Logging instance

    Returns:
        :class:`RunManifest`
    """
    start = datetime.now()
    with Experiment(config, external_logger) as e:
        manifest = e.run()
        e._logger.info(datetime.now() - start)

    return manifest


def emit_table(manifests, path=None):
    """
    Aggregate the metric rows of one or more runs into one row per
    (graph_variant, prior_variant, scheme, model_kind, nfe)

    Args:
        manifests: :class:`RunManifest` instances or paths to them
        path: optional CSV to write the table to

    Returns:
        DataFrame with ``<metric>_mean`` and ``<metric>_std`` columns

    Raises:
        ValueError on no manifests or disagreeing evaluation settings
    """
    if len(manifests) == 0:
        raise ValueError('emit_table needs at least one manifest')

    frames = []
    for manifest in manifests:
        if not isinstance(manifest, RunManifest):
            manifest = RunManifest.read(manifest)
        if 'metrics' not in manifest.artifacts:
            raise ValueError(
                'Run {} has no metrics, status {}'.format(
                    manifest.config_hash, manifest.status))
        frames.append(read_reports(manifest.artifacts['metrics']))

    table = aggregate(pd.concat(frames, ignore_index=True))
    if path is not None:
        os.makedirs(os.path.dirname(abspath(path)), exist_ok=True)
        table.to_csv(path, index=False, float_format='%.17g')
    return table
