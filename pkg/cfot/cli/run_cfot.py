#!/usr/bin/env python3

import argparse
import logging
import os
import sys

import pandas as pd
from inicheck.tools import get_user_config

from cfot.closedform import OutOfSupportError, quantile_table
from cfot.coupling import ConditionalSamplingError
from cfot.evaluate import write_reports
from cfot.field import FieldDivergedError
from cfot.framework.model_framework import (
    EXIT_CONFIG_ERROR,
    EXIT_RUNTIME_FAILURE,
    EXIT_SUCCESS,
    ConfigError,
    Experiment,
    emit_table,
)
from cfot.inference import IntegrationError
from cfot.training import TrainingDivergedError
from cfot.utils.utils import handle_run_script_options

RUNTIME_ERRORS = (TrainingDivergedError, IntegrationError, FieldDivergedError,
                  ConditionalSamplingError, OutOfSupportError,
                  FileNotFoundError, ValueError)

logger = logging.getLogger(__name__)


def _config_arguments(parser):
    parser.add_argument(
        '--config',
        metavar='file',
        type=str,
        required=True,
        help='Path to CFOT config file to run or to a directory containing '
             'one'
    )
    parser.add_argument(
        '--seed',
        type=int,
        default=None,
        help='Run this seed instead of [system] seeds'
    )
    parser.add_argument(
        '--out',
        type=str,
        default=None,
        help='Output directory instead of [output] out_location'
    )
    parser.add_argument(
        '--nfe',
        type=int,
        nargs='+',
        default=None,
        help='Solver evaluations per leg instead of [eval] nfe'
    )


def argument_parser():
    parser = argparse.ArgumentParser(
        description='Counterfactual inference with conditional flows on '
                    'the ellipse worlds.'
    )
    commands = parser.add_subparsers(dest='command', metavar='command')
    commands.required = True

    for name, description in (
            ('gen-data', 'Generate and write the dataset of every seed'),
            ('train', 'Train the flows of every seed'),
            ('eval', 'Evaluate the trained flows of every seed'),
            ('curl-map', 'Write curl maps of the trained flows'),
            ('run', 'Generate, train, evaluate and aggregate every seed')):
        _config_arguments(commands.add_parser(name, help=description))

    cf = commands.add_parser(
        'cf', help='Answer a CSV of counterfactual queries')
    _config_arguments(cf)
    cf.add_argument(
        '--queries',
        metavar='file',
        type=str,
        required=True,
        help='CSV with pa,x0,x1,pa_star columns (m0,m1 for the frontdoor '
             'world)'
    )

    demo = commands.add_parser(
        'quantile-demo',
        help='Print the one dimensional counterfactual table')
    demo.add_argument('--out', type=str, default=None,
                      help='Also write the table to this CSV')

    table = commands.add_parser(
        'table', help='Aggregate the metrics of run manifests')
    table.add_argument('manifests', metavar='manifest', nargs='+',
                       help='Run manifest files or run directories')
    table.add_argument('--out', type=str, default='table.csv',
                       help='CSV to write the table to')

    return parser


def load_config(args):
    """The user config with the command line overrides applied"""
    config_file = handle_run_script_options(args.config)
    ucfg = get_user_config(config_file, modules='cfot')

    if args.seed is not None:
        ucfg.cfg.setdefault('system', {})['seeds'] = [args.seed]
    if args.out is not None:
        ucfg.cfg.setdefault('output', {})['out_location'] = \
            os.path.abspath(args.out)
    if args.nfe is not None:
        ucfg.cfg.setdefault('eval', {})['nfe'] = list(args.nfe)
    return ucfg


def gen_data(experiment, args):
    for seed in experiment.settings.seeds:
        experiment.generate(seed)


def train(experiment, args):
    for seed in experiment.settings.seeds:
        experiment.train(seed, experiment.load_dataset(seed))


def evaluate(experiment, args):
    reports = []
    for seed in experiment.settings.seeds:
        reports.extend(experiment.evaluate(
            seed, experiment.load_dataset(seed),
            experiment.load_trained(seed)))
    write_reports(reports, os.path.join(experiment.out_dir, 'metrics.csv'))


def curl_map(experiment, args):
    for seed in experiment.settings.seeds:
        experiment.curl_maps(seed, experiment.load_dataset(seed),
                             experiment.load_trained(seed))


def cf(experiment, args):
    seed = experiment.settings.seeds[0]
    queries = pd.read_csv(args.queries, float_precision='round_trip')
    nfe = args.nfe[0] if args.nfe else None
    answers = experiment.counterfactual_queries(
        experiment.load_trained(seed), queries, nfe)

    stem = os.path.splitext(os.path.basename(args.queries))[0]
    path = os.path.join(experiment.out_dir, '{}_cf.csv'.format(stem))
    answers.to_csv(path, index=False, float_format='%.17g')
    experiment._logger.info(
        'Wrote {} counterfactuals to {}'.format(len(answers), path))


def run_all(experiment, args):
    return experiment.run().status


COMMANDS = {
    'gen-data': gen_data,
    'train': train,
    'eval': evaluate,
    'curl-map': curl_map,
    'cf': cf,
    'run': run_all,
}


def main(argv=None):
    """
    Dispatch a subcommand

    Returns:
        exit code, 0 on success, 1 on a config error and 2 on a runtime
        failure
    """
    args = argument_parser().parse_args(argv)

    if args.command == 'quantile-demo':
        table = quantile_table()
        print(table.to_string(index=False))
        if args.out is not None:
            table.to_csv(args.out, index=False, float_format='%.17g')
        return EXIT_SUCCESS

    if args.command == 'table':
        try:
            table = emit_table(args.manifests, path=args.out)
        except RUNTIME_ERRORS as e:
            logger.error(str(e))
            return EXIT_RUNTIME_FAILURE
        print(table.to_string(index=False))
        return EXIT_SUCCESS

    try:
        with Experiment(load_config(args)) as experiment:
            status = COMMANDS[args.command](experiment, args)
    except ConfigError as e:
        logger.error('Config error: {}'.format(e))
        return EXIT_CONFIG_ERROR
    except RUNTIME_ERRORS as e:
        logger.error('{}: {}'.format(type(e).__name__, e))
        return EXIT_RUNTIME_FAILURE

    if status == 'failed':
        return EXIT_RUNTIME_FAILURE
    return EXIT_SUCCESS


def run():
    """
    run_cfot is a command line program with one subcommand per stage of an
    experiment. ``run_cfot run --config config.ini`` performs the whole
    experiment, the other subcommands rerun single stages on the artifacts
    of an earlier run.
    """
    sys.exit(main())


if __name__ == '__main__':
    run()
