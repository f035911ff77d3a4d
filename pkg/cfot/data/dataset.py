import logging
import os

import numpy as np
import pandas as pd

from cfot.data.ellipse import (
    NOISE_COLUMNS,
    SAMPLE_COLUMNS,
    DgpConfig,
    draw_noise,
    mechanism,
)
from cfot.utils import STREAMS, stream_rng

SPLITS = ('train', 'val', 'test')
SPLIT_FRACTIONS = (0.70, 0.10, 0.20)
FLOAT_FORMAT = '%.17g'


class Sample():
    """One row of a :class:`Dataset`"""

    __slots__ = ('z', 'pa', 'u', 'm', 'x')

    def __init__(self, z, pa, u, m, x):
        self.z = z
        self.pa = pa
        self.u = u
        self.m = m
        self.x = x

    def __repr__(self):
        return 'Sample(z={}, pa={}, u={}, m={}, x={})'.format(
            self.z, self.pa, self.u, self.m, self.x)


def split_labels(n, rng):
    """
    Assign a split tag to each of ``n`` samples by a seeded permutation

    The train and validation sizes are the rounded fractions, the test split
    takes the remainder.
    """
    n_train = int(round(SPLIT_FRACTIONS[0] * n))
    n_val = int(round(SPLIT_FRACTIONS[1] * n))
    labels = np.empty(n, dtype=object)
    order = rng.permutation(n)
    labels[order[:n_train]] = 'train'
    labels[order[n_train:n_train + n_val]] = 'val'
    labels[order[n_train + n_val:]] = 'test'
    return labels


class Dataset():
    """
    Samples of an ellipse world with their recorded noise and split tags

    Args:
        config: :class:`~cfot.data.ellipse.DgpConfig`
        frame: DataFrame with the sample columns and ``split``
        noise: DataFrame with the noise columns, aligned with ``frame``
    """

    def __init__(self, config, frame, noise):
        self.config = config
        self.frame = frame
        self.noise = noise
        self._logger = logging.getLogger(__name__)

    def __len__(self):
        return len(self.frame)

    def __eq__(self, other):
        return (
            isinstance(other, Dataset) and
            self.config == other.config and
            self.frame.equals(other.frame) and
            self.noise.equals(other.noise)
        )

    def split(self, name):
        if name is None:
            return self.frame
        if name not in SPLITS:
            raise ValueError(
                'Unknown split {}, expected one of {}'.format(name, SPLITS))
        return self.frame[self.frame['split'] == name]

    def _columns(self, columns, split):
        return self.split(split)[columns].values.astype(np.float64)

    def pa(self, split=None):
        """Parent angles as an (n, 1) array"""
        return self._columns(['pa'], split)

    def x(self, split=None):
        return self._columns(['x0', 'x1'], split)

    def u(self, split=None):
        return self._columns(['u0', 'u1'], split)

    def m(self, split=None):
        return self._columns(['m0', 'm1'], split)

    def eps_m(self, split=None):
        rows = self.split(split).index
        return self.noise.loc[rows, ['eps_m0', 'eps_m1']].values

    def sample(self, i):
        row = self.frame.iloc[i]
        m = None
        if self.config.frontdoor:
            m = row[['m0', 'm1']].values.astype(np.float64)
        return Sample(
            z=float(row['z']), pa=float(row['pa']),
            u=row[['u0', 'u1']].values.astype(np.float64), m=m,
            x=row[['x0', 'x1']].values.astype(np.float64))

    def samples(self):
        return [self.sample(i) for i in range(len(self))]

    def regenerate(self):
        """Re-run the structural equations on the recorded noise"""
        return mechanism(self.noise, self.config.graph_variant)

    def to_csv(self, path):
        """
        Write ``<path>`` with the samples and ``<stem>_noise.csv`` with the
        recorded noise
        """
        os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
        self.frame.to_csv(path, index=False, float_format=FLOAT_FORMAT,
                          na_rep='')
        self.noise.to_csv(noise_path(path), index=False,
                          float_format=FLOAT_FORMAT, na_rep='')
        self._logger.info('Wrote {} samples to {}'.format(len(self), path))

    @classmethod
    def from_csv(cls, path, config):
        frame = pd.read_csv(path, dtype={'split': str},
                            float_precision='round_trip')
        frame = frame[SAMPLE_COLUMNS + ['split']]
        noise = pd.read_csv(noise_path(path),
                            float_precision='round_trip')[NOISE_COLUMNS]
        return cls(config, frame, noise)


def noise_path(path):
    stem, ext = os.path.splitext(path)
    return '{}_noise{}'.format(stem, ext or '.csv')


def gen_dataset(config):
    """
    Draw ``config.n_samples`` samples of the configured ellipse world

    Args:
        config: :class:`~cfot.data.ellipse.DgpConfig`

    Returns:
        :class:`Dataset`, a pure function of the config
    """
    if not isinstance(config, DgpConfig):
        raise ValueError('gen_dataset expects a DgpConfig')

    rng = stream_rng(config.seed, STREAMS['data'])
    noise = draw_noise(rng, config.n_samples, config)
    frame = mechanism(noise, config.graph_variant)
    frame['split'] = split_labels(
        config.n_samples, stream_rng(config.seed, STREAMS['split']))

    return Dataset(config, frame, noise)
