import os
import sys

import numpy as np

TWO_PI = 2.0 * np.pi

# independent random streams derived from one run seed
STREAMS = {
    'data': 0,
    'split': 1,
    'init': 2,
    'batches': 3,
    'times': 4,
    'eval': 5,
    'validation': 6,
}


def find_configs(directory):
    """Sorted full paths of the ``.ini`` files in a directory"""
    directory = os.path.abspath(os.path.expanduser(directory))
    return [
        os.path.join(directory, name)
        for name in sorted(os.listdir(directory))
        if os.path.splitext(name)[1] == '.ini'
    ]


def handle_run_script_options(config_option):
    """
    Resolve the ``--config`` argument of run_cfot to a config file

    Args:
        config_option: path to a config file, or to a directory holding
            exactly one

    Returns:
        absolute path of the config file, exits when there is none
    """
    path = os.path.abspath(os.path.expanduser(config_option))

    if os.path.isdir(path):
        candidates = find_configs(path)
        if len(candidates) != 1:
            sys.exit('Error: expected one config file in {}, found {}'.format(
                path, len(candidates)))
        path = candidates[0]

    if not os.path.isfile(path):
        sys.exit('Error: config file {} does not exist'.format(path))

    return path


def stream_rng(seed, *stream):
    """
    Counter-based random stream for a run seed and a stream label.

    Every source of randomness in a run (data, initialisation, batches, time
    draws, evaluation) gets its own Philox stream keyed by the run seed and
    the stream label, so streams never interact and a run is a pure function
    of its seed.

    Args:
        seed: run seed (64-bit integer)
        stream: integers identifying the stream

    Returns:
        numpy.random.Generator
    """
    sequence = np.random.SeedSequence(int(seed), spawn_key=tuple(stream))
    return np.random.Generator(np.random.Philox(sequence))


def wrap_angle(angle):
    """
    Map angles onto [0, 2 pi)
    """
    return np.mod(angle, TWO_PI)
