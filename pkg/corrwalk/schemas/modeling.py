#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
.. currentmodule:: corrwalk.schemas.modeling
.. moduleauthor:: Pat Daburu <pat@daburu.net>

The shape an experiment takes.
"""

import math
import re
from enum import Enum
from typing import Callable, Dict, List, Sequence

from ..codetools import Enums
from ..config import ConfigurationManager
from ..covariance import CovarianceModel, Family
from ..errors import InvalidConfigException, InvalidModelException

SEED_BITS: int = 64  #: seeds are unsigned integers of this many bits

_GEOMETRIC_GRID = re.compile(r'^\s*(\d+)\s*\.\.\s*(\d+)\s*x\s*(\d+(?:\.\d+)?)\s*$')


class Experiment(Enum):
    """
    These are the experiments the command line can run.
    """
    ENV = 'ENV'              #: Dump one sampled environment.
    WALK = 'WALK'            #: Annealed persistence of the walk (exact or simulated) and the total-population tail.
    BRANCHING = 'BRANCHING'  #: Direct simulation of the branching process and its survival curves.
    TAIL = 'TAIL'            #: The extinction-time tail through the reciprocal exponential sum.
    PASSAGE = 'PASSAGE'      #: Hit order of two levels, or persistence of the potential.
    EVENTS = 'EVENTS'        #: Frequencies of the bad and good environment events.
    LEMMA4 = 'LEMMA4'        #: The scaled reciprocal exponential sum, or the running-maximum constant.
    FIT = 'FIT'              #: A power-law fit to an existing series.


class OutputFormat(Enum):
    """
    These are the supported output formats.
    """
    CSV = 'CSV'      #: Comma-separated values with a header row.
    JSONL = 'JSONL'  #: One JSON object per line.


def _choice(*options: str) -> Callable:
    def convert(value) -> str:
        value = str(value).lower()
        if value not in options:
            raise ValueError('must be one of: {options}'.format(options=', '.join(options)))
        return value
    return convert


def _optional_int(value) -> int or None:
    return None if value is None else int(value)


def _setting(section: str, option: str) -> Callable:
    return lambda settings: settings.get_float(section, option)


#: The parameters each experiment takes: name -> (converter, default).  A callable default is read from the settings.
PARAMETERS: Dict[Experiment, Dict[str, tuple]] = {
    Experiment.ENV: {},
    Experiment.TAIL: {},
    Experiment.WALK: {
        'mode': (_choice('persistence', 'simulate', 'total'), 'persistence')
    },
    Experiment.BRANCHING: {
        'max_generations': (_optional_int, None),
        'max_total': (int, lambda settings: settings.get_int('bpcge', 'max_total')),
        'curve': (_choice('extinction_time', 'total', 'max'), 'extinction_time')
    },
    Experiment.PASSAGE: {
        'mode': (_choice('hit_order', 'persistence'), 'hit_order'),
        'y': (float, 2.0),
        'horizon_factor': (float, _setting('passage', 'horizon_factor')),
        'alpha': (float, _setting('passage', 'alpha')),
        'barrier': (float, 0.0)
    },
    Experiment.EVENTS: {
        'a': (float, _setting('passage', 'a')),
        'q': (float, _setting('passage', 'q')),
        'eps': (float, _setting('passage', 'eps')),
        'event': (_choice('bad_complement', 'good'), 'bad_complement')
    },
    Experiment.LEMMA4: {
        'mode': (_choice('functional', 'kappa'), 'functional'),
        'start': (int, 1)
    },
    Experiment.FIT: {
        'input': (str, None)
    }
}


def parse_grid(text: str) -> List[int]:
    """
    Parse a grid: ``a..bxk`` (a, a k, a k^2, ... up to b), a comma-separated list, or a single value.

    :param text: the grid
    :type text:  ``str``
    :rtype: ``list`` of ``int``
    :raises InvalidConfigException: if the text isn't a grid
    """
    match = _GEOMETRIC_GRID.match(text)
    if match is not None:
        first, last, ratio = int(match.group(1)), int(match.group(2)), float(match.group(3))
        if first < 1 or last < first or ratio <= 1:
            raise InvalidConfigException('a geometric grid a..bxk needs 1 <= a <= b and k > 1')
        grid = []
        for power in range(int(math.floor(math.log(last / first) / math.log(ratio) + 1e-9)) + 1):
            value = int(round(first * ratio ** power))
            if not grid or value > grid[-1]:
                grid.append(value)
        return grid
    try:
        return [int(value) for value in text.split(',')]
    except ValueError as ve:
        raise InvalidConfigException('cannot read the grid {text!r}'.format(text=text)) from ve


class ExperimentConfig(object):
    """
    An experiment configuration says what to run (the experiment and its parameters), on which model, over which
    grid, with how many replicates, from which seed, and where the results go.
    """
    def __init__(self,
                 experiment: Experiment or str,
                 model: CovarianceModel=None,
                 grid: Sequence[int] or str=None,
                 reps: int=1,
                 seed: int=0,
                 params: dict=None,
                 output: str=None,
                 output_format: OutputFormat or str=OutputFormat.CSV,
                 records: str=None,
                 settings: ConfigurationManager=None):
        """

        :param experiment: the experiment
        :type experiment:  :py:class:`Experiment` or ``str``
        :param model: the covariance model (every experiment but ``FIT`` needs one)
        :type model:  :py:class:`corrwalk.covariance.CovarianceModel`
        :param grid: the values of N (or x), strictly increasing
        :type grid:  sequence of ``int`` or ``str``
        :param reps: the number of replicates per grid point
        :type reps:  ``int``
        :param seed: the master seed, a 64-bit unsigned integer
        :type seed:  ``int``
        :param params: the experiment-specific parameters (missing ones take their defaults)
        :type params:  ``dict``
        :param output: where to write the results (``None`` for nowhere)
        :type output:  ``str``
        :param output_format: the output format
        :type output_format:  :py:class:`OutputFormat` or ``str``
        :param records: where to write per-replicate records as JSON lines (``None`` for nowhere)
        :type records:  ``str``
        :param settings: where parameter defaults come from (``None`` for the built-in defaults)
        :type settings:  :py:class:`corrwalk.config.ConfigurationManager`
        :raises InvalidConfigException: if the configuration isn't valid
        """
        self._experiment = self._enum(Experiment, experiment, 'experiment')
        self._output_format = self._enum(OutputFormat, output_format, 'format')
        if model is None and self._experiment is not Experiment.FIT:
            raise InvalidConfigException('the {name} experiment needs a model'.format(name=self._experiment.name))
        if model is not None and model.family is Family.FLAT:
            raise InvalidModelException('the flat model is a test hook, not something to experiment on')
        self._model = model
        self._grid = self._validate_grid(grid)
        self._reps = int(reps)
        if self._reps < 1:
            raise InvalidConfigException('reps must be at least 1')
        self._seed = int(seed)
        if not 0 <= self._seed < 1 << SEED_BITS:
            raise InvalidConfigException('the seed must be a {bits}-bit unsigned integer'.format(bits=SEED_BITS))
        self._params = self._resolve_params(params or {}, settings or ConfigurationManager())
        self._output = output
        self._records = records

    @staticmethod
    def _enum(enum_cls, value, what: str):
        try:
            return Enums.from_name(enum_cls, value)
        except KeyError as ke:
            raise InvalidConfigException('{what} must be one of: {names}'.format(
                what=what, names=Enums.names(enum_cls))) from ke

    def _validate_grid(self, grid) -> List[int]:
        if isinstance(grid, str):
            grid = parse_grid(grid)
        grid = [int(n) for n in (grid or [])]
        if self._experiment is Experiment.FIT:
            return grid
        if not grid:
            raise InvalidConfigException('the grid must not be empty')
        if any(later <= earlier for earlier, later in zip(grid, grid[1:])):
            raise InvalidConfigException('the grid must be strictly increasing')
        if grid[0] < 1:
            raise InvalidConfigException('grid values must be positive')
        return grid

    def _resolve_params(self, params: dict, settings: ConfigurationManager) -> dict:
        known = PARAMETERS[self._experiment]
        unknown = sorted(set(params) - set(known))
        if unknown:
            raise InvalidConfigException('the {name} experiment takes no parameter(s): {unknown}'.format(
                name=self._experiment.name, unknown=', '.join(unknown)))
        resolved = {}
        for name, (convert, default) in known.items():
            value = params.get(name)
            if value is None:
                value = default(settings) if callable(default) else default
            try:
                resolved[name] = None if value is None else convert(value)
            except (TypeError, ValueError) as err:
                raise InvalidConfigException('parameter {name}: {err}'.format(name=name, err=err)) from err
        if self._experiment is Experiment.FIT and not resolved['input']:
            raise InvalidConfigException('a fit needs an input series')
        if self._experiment is Experiment.LEMMA4 and resolved['start'] not in (0, 1):
            raise InvalidConfigException('start must be 0 or 1')
        return resolved

    @property
    def experiment(self) -> Experiment:
        """
        Get the experiment.

        :rtype: :py:class:`Experiment`
        """
        return self._experiment

    @property
    def model(self) -> CovarianceModel or None:
        """
        Get the covariance model.

        :rtype: :py:class:`corrwalk.covariance.CovarianceModel`
        """
        return self._model

    @property
    def grid(self) -> List[int]:
        """
        Get the grid.

        :rtype: ``list`` of ``int``
        """
        return list(self._grid)

    @property
    def reps(self) -> int:
        """
        Get the number of replicates per grid point.

        :rtype: ``int``
        """
        return self._reps

    @property
    def seed(self) -> int:
        """
        Get the master seed.

        :rtype: ``int``
        """
        return self._seed

    @property
    def params(self) -> dict:
        """
        Get the experiment parameters, defaults filled in.

        :rtype: ``dict``
        """
        return dict(self._params)

    @property
    def output(self) -> str or None:
        """
        Get the output path.

        :rtype: ``str``
        """
        return self._output

    @property
    def output_format(self) -> OutputFormat:
        """
        Get the output format.

        :rtype: :py:class:`OutputFormat`
        """
        return self._output_format

    @property
    def records(self) -> str or None:
        """
        Get the path per-replicate records go to.

        :rtype: ``str``
        """
        return self._records

    def to_dict(self) -> dict:
        """
        Get the JSON-ready form of the configuration, which
        :py:class:`corrwalk.schemas.parsing.JsonExperimentConfigParser` reads back.

        :rtype: ``dict``
        """
        return {
            'experiment': self._experiment.name.lower(),
            'model': self._model.to_dict() if self._model is not None else None,
            'grid': list(self._grid),
            'reps': self._reps,
            'seed': self._seed,
            'params': dict(self._params),
            'output': self._output,
            'format': self._output_format.name.lower(),
            'records': self._records
        }
