"""
Read and write network checkpoints.

Layout::

    cfot-ckpt v1
    input_dim=4
    ...
    end_header
    <little-endian float64 parameters in declaration order>
"""

import logging
import os

import numpy as np

from cfot.nn.network import NetworkSpec, Params

MAGIC = b'cfot-ckpt v1'
END_HEADER = b'end_header'

logger = logging.getLogger(__name__)

_SPEC_TYPES = {
    'input_dim': int,
    'hidden_dim': int,
    'n_blocks': int,
    'output_dim': int,
    'activation': str,
    'layer_norm': lambda s: s == 'True',
}


def save(params, path, extra=None):
    """
    Write ``params`` to ``path``

    Args:
        params: :class:`~cfot.nn.network.Params`
        path: destination file
        extra: optional dict of additional ``key=value`` header lines
    """
    lines = [MAGIC]
    for key, value in params.spec.to_dict().items():
        lines.append('{}={}'.format(key, value).encode('ascii'))
    for key, value in (extra or {}).items():
        lines.append('{}={}'.format(key, value).encode('ascii'))
    lines.append(END_HEADER)

    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    with open(path, 'wb') as f:
        f.write(b'\n'.join(lines) + b'\n')
        f.write(params.flatten().astype('<f8').tobytes())

    logger.debug('Wrote checkpoint {}'.format(path))


def load(path):
    """
    Read a checkpoint

    Returns:
        tuple of :class:`~cfot.nn.network.Params` and the dict of extra
        header entries
    """
    with open(path, 'rb') as f:
        if f.readline().rstrip(b'\n') != MAGIC:
            raise ValueError('{} is not a cfot checkpoint'.format(path))

        spec_kwargs = {}
        extra = {}
        while True:
            line = f.readline()
            if not line:
                raise ValueError(
                    'Checkpoint {} has no end_header line'.format(path))
            line = line.rstrip(b'\n')
            if line == END_HEADER:
                break
            key, value = line.decode('ascii').split('=', 1)
            if key in _SPEC_TYPES:
                spec_kwargs[key] = _SPEC_TYPES[key](value)
            else:
                extra[key] = value

        flat = np.frombuffer(f.read(), dtype='<f8').astype(np.float64)

    spec = NetworkSpec(**spec_kwargs)
    return Params.from_flat(spec, flat), extra
