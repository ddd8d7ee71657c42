#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
.. currentmodule:: corrwalk.cli
.. moduleauthor:: Pat Daburu <pat@daburu.net>

The command line: ``corrwalk <experiment> [flags]``.  Results are written atomically, each grid point gets a one-line
summary on standard output, and failures end with a JSON diagnostic on standard error and one of these exit codes:

====  ===========================================
0     success
2     invalid arguments, models or configurations
3     numerical failure (e.g. a model that can't be embedded)
4     input/output failure
====  ===========================================
"""

import argparse
import json
import logging
import sys
from typing import List, Sequence, TextIO

from . import __version__
from . import logging as corrwalk_logging
from .codetools import Dicts, Files
from .config import ConfigurationManager
from .covariance import Family
from .envgen import build_environment
from .errors import CorrWalkException, NumericalException, ValidationException
from .mc import EstimateSeries, fit_power_law, mc_run
from .schemas.modeling import Experiment, ExperimentConfig, OutputFormat
from .schemas.parsing import JsonExperimentConfigParser, format_fit, read_series, write_records, write_series

EXIT_OK: int = 0  #: success
EXIT_VALIDATION: int = ValidationException.exit_code  #: invalid input
EXIT_NUMERICAL: int = NumericalException.exit_code  #: numerical failure
EXIT_IO: int = 4  #: input/output failure

#: Flags that become experiment parameters: flag destination -> parameter name.
PARAM_FLAGS = {
    'a': 'a',
    'q': 'q',
    'eps': 'eps',
    'y': 'y',
    'horizon_factor': 'horizon_factor',
    'alpha': 'alpha',
    'barrier': 'barrier',
    'max_generations': 'max_generations',
    'max_total': 'max_total',
    'curve': 'curve',
    'start': 'start',
    'mode': 'mode',
    'event': 'event',
    'input': 'input'
}

_logger = logging.getLogger(__name__)


def _seed(text: str) -> int:
    # Decimal or 0x-prefixed hexadecimal.
    return int(text, 0)


def _table(text: str) -> List[float]:
    return [float(value) for value in text.split(',')]


class ArgumentParser(argparse.ArgumentParser):
    """
    An argument parser that reports bad arguments as a :py:class:`corrwalk.errors.ValidationException`, so they end
    with the same diagnostic as every other failure.
    """
    def error(self, message: str):
        raise ValidationException(message)


def build_parser() -> ArgumentParser:
    """
    Create the argument parser.

    :rtype: :py:class:`ArgumentParser`
    """
    parser = ArgumentParser(
        prog='corrwalk',
        description='Random walks and branching processes in correlated Gaussian environments.')
    parser.add_argument('experiment', nargs='?', type=str.lower,
                        choices=[experiment.name.lower() for experiment in Experiment],
                        help='what to run (may come from --config instead)')
    parser.add_argument('--version', action='version', version='%(prog)s ' + __version__)
    model = parser.add_argument_group('model')
    model.add_argument('--model', type=str.lower,
                       choices=[family.name.lower() for family in Family if family is not Family.FLAT],
                       help='the covariance family')
    model.add_argument('--hurst', type=float, help='the Hurst index, in [0.5, 1)')
    model.add_argument('--table', type=_table, help='r(0),r(1),... for the table family')
    run = parser.add_argument_group('run')
    run.add_argument('--grid', help='values of N (or x): a..bxk, a comma-separated list, or one value')
    run.add_argument('--reps', type=int, help='replicates per grid point')
    run.add_argument('--seed', type=_seed, help='the master seed (decimal or 0x hexadecimal)')
    run.add_argument('--workers', type=int, help='worker processes (default: $CORRWALK_WORKERS or 1)')
    run.add_argument('--config', help='an experiment configuration (JSON text or file); flags override it')
    run.add_argument('--settings', help='an INI file of settings (default: $CORRWALK_SETTINGS)')
    output = parser.add_argument_group('output')
    output.add_argument('--out', help='where to write the results')
    output.add_argument('--format', type=str.lower, choices=[fmt.name.lower() for fmt in OutputFormat],
                        help='the output format (default: csv)')
    output.add_argument('--records', help='where to write per-replicate records (JSON lines)')
    output.add_argument('--in', dest='input', help='the series to fit (fit)')
    output.add_argument('--verbose', action='store_true', help='log progress and details to standard error')
    params = parser.add_argument_group('experiment parameters')
    params.add_argument('--mode', help='walk: persistence|simulate|total; passage: hit_order|persistence; '
                                       'lemma4: functional|kappa')
    params.add_argument('--a', type=float, help='events: the level multiplier a > 1')
    params.add_argument('--q', type=float, help='events: the exponent q > 1 of b_N')
    params.add_argument('--eps', type=float, help='events: the slack eps in (0, 1)')
    params.add_argument('--event', help='events: bad_complement|good')
    params.add_argument('--y', type=float, help='passage: the upper level y')
    params.add_argument('--horizon-factor', type=float, help='passage: scales the hit-order horizon')
    params.add_argument('--alpha', type=float, help='passage: exponent of the reported side condition')
    params.add_argument('--barrier', type=float, help='passage: the persistence barrier')
    params.add_argument('--max-generations', type=int, help='branching: the generation cap')
    params.add_argument('--max-total', type=int, help='branching: the total-population cap')
    params.add_argument('--curve', help='branching: extinction_time|total|max')
    params.add_argument('--start', type=int, help='lemma4: 0 or 1')
    return parser


def load_settings(path: str=None) -> ConfigurationManager:
    """
    Get the settings: the defaults, ``$CORRWALK_SETTINGS``, then ``path`` (if given).

    :rtype: :py:class:`corrwalk.config.ConfigurationManager`
    """
    settings = ConfigurationManager.default()
    if path is not None:
        settings.load(path)
    return settings


def config_from_args(args: argparse.Namespace, settings: ConfigurationManager) -> ExperimentConfig:
    """
    Build the experiment configuration: the ``--config`` JSON (if any) with the flags laid on top.

    :rtype: :py:class:`corrwalk.schemas.modeling.ExperimentConfig`
    """
    parser = JsonExperimentConfigParser(settings=settings)
    base = parser.load(args.config) if args.config is not None else {}
    model = Dicts.overlay(Dicts.try_get(base, 'model', {}).value,
                          {'family': args.model, 'hurst': args.hurst, 'values': args.table})
    params = Dicts.overlay(Dicts.try_get(base, 'params', {}).value,
                           {name: getattr(args, dest) for dest, name in PARAM_FLAGS.items()})
    merged = Dicts.overlay(base, {
        'experiment': args.experiment,
        'grid': args.grid,
        'reps': args.reps,
        'seed': args.seed,
        'output': args.out,
        'format': args.format,
        'records': args.records
    })
    if 'experiment' not in merged:
        raise ValidationException('name an experiment (or give one in --config)')
    merged['model'] = model if model else None
    merged['params'] = params
    return parser.from_dict(merged)


def _summary(experiment: Experiment, point) -> str:
    return '{name} n={n} estimate={estimate!r} stderr={stderr!r} reps={reps} censored={censored}'.format(
        name=experiment.name.lower(), n=point.n, estimate=point.estimate, stderr=point.stderr, reps=point.reps,
        censored=point.censored)


def _write_env(config: ExperimentConfig, stdout: TextIO) -> int:
    env = build_environment(config.model, config.grid[-1], config.seed)
    if config.output is not None:
        with Files.atomic_writer(config.output) as stream:
            if config.output_format is OutputFormat.CSV:
                env.write_csv(stream)
            else:
                write_records(env.records(), stream)
    stdout.write('env n={n} seed={seed} max|v|={vmax!r}\n'.format(
        n=env.n, seed=config.seed, vmax=float(abs(env.v).max())))
    return EXIT_OK


def _fit(config: ExperimentConfig, stdout: TextIO) -> int:
    with open(config.params['input']) as stream:
        series = read_series(stream)
    text = format_fit(fit_power_law(series))
    if config.output is not None:
        with Files.atomic_writer(config.output) as stream:
            stream.write(text + '\n')
    stdout.write(text + '\n')
    return EXIT_OK


def run(config: ExperimentConfig, workers: int=1, stdout: TextIO=None) -> int:
    """
    Run an experiment and write its results.

    :param config: the experiment
    :type config:  :py:class:`corrwalk.schemas.modeling.ExperimentConfig`
    :param workers: the number of worker processes
    :type workers:  ``int``
    :param stdout: where summaries go (standard output by default)
    :type stdout:  text stream
    :return: the exit code
    :rtype:  ``int``
    """
    stdout = stdout if stdout is not None else sys.stdout
    if config.experiment is Experiment.ENV:
        return _write_env(config, stdout)
    if config.experiment is Experiment.FIT:
        return _fit(config, stdout)
    series: EstimateSeries = mc_run(config, workers=workers)
    for point in series:
        stdout.write(_summary(config.experiment, point) + '\n')
    if config.output is not None:
        with Files.atomic_writer(config.output) as stream:
            write_series(series, stream, config.output_format)
    if config.records is not None:
        with Files.atomic_writer(config.records) as stream:
            write_records(series.records, stream)
    return EXIT_OK


def diagnostic(error: BaseException, exit_code: int) -> str:
    """
    Format the machine-readable diagnostic of a failure.

    :rtype: ``str``
    """
    message = error.message if isinstance(error, CorrWalkException) else str(error)
    return json.dumps({'error': type(error).__name__, 'message': message, 'exit_code': exit_code}, sort_keys=True)


def _exit_code(error: BaseException) -> int:
    if isinstance(error, CorrWalkException):
        return error.exit_code
    if isinstance(error, OSError):
        return EXIT_IO
    if isinstance(error, ArithmeticError):
        return EXIT_NUMERICAL
    return EXIT_VALIDATION


def main(argv: Sequence[str]=None, stdout: TextIO=None, stderr: TextIO=None) -> int:
    """
    Run the command line.

    :param argv: the arguments (``sys.argv[1:]`` by default)
    :type argv:  sequence of ``str``
    :return: the exit code
    :rtype:  ``int``
    """
    stderr = stderr if stderr is not None else sys.stderr
    try:
        args = build_parser().parse_args(argv)
        corrwalk_logging.configure(verbose=args.verbose)
        settings = load_settings(args.settings)
        config = config_from_args(args, settings)
        workers = args.workers if args.workers is not None else settings.get_int('engine', 'workers', 1)
        if workers < 1:
            raise ValidationException('workers must be at least 1')
        return run(config, workers=workers, stdout=stdout)
    except (CorrWalkException, OSError, ArithmeticError, ValueError) as error:
        exit_code = _exit_code(error)
        _logger.debug('Failed.', exc_info=True)
        stderr.write(diagnostic(error, exit_code) + '\n')
        return exit_code


if __name__ == '__main__':
    sys.exit(main())
