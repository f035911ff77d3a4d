# -*- coding: utf-8 -*-
from .model_framework import (  # noqa
    ConfigError,
    Experiment,
    ExperimentConfig,
    RunManifest,
    emit_table,
    run_experiment,
)
