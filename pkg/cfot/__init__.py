# -*- coding: utf-8 -*-
# flake8: noqa

import os

try:
    from .version import __version__
except ImportError:
    __version__ = '0.0.0.dev0'

__core_config__ = os.path.abspath(
    os.path.dirname(__file__) + '/framework/CoreConfig.ini')
__recipes__ = os.path.abspath(os.path.dirname(
    __file__) + '/framework/recipes.ini')

__config_titles__ = {
    "dgp": "Ellipse data-generating process",
    "model": "Vector field model and coupling scheme",
    "prior": "Exogenous prior",
    "train": "Flow matching training",
    "ode": "ODE solver for counterfactual inference",
    "eval": "Evaluation of counterfactuals and soundness axioms",
    "output": "Output location and artifacts",
    "system": "System variables and Logging"
}

from . import utils, data, nn, field, coupling, training, inference, evaluate, closedform, framework  # isort:skip

__config_header__ = "Config File for CFOT {0}\n".format(__version__)
