#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
.. currentmodule:: corrwalk.schemas.parsing
.. moduleauthor:: Pat Daburu <pat@daburu.net>

Read experiment configurations from JSON, and read and write estimate series (CSV or JSON lines) and fits (JSON).
"""

import csv
import io
import json
from functools import wraps
from typing import Iterable, TextIO

from .modeling import ExperimentConfig, OutputFormat
from ..codetools import Dicts
from ..config import ConfigurationManager
from ..covariance import CovarianceModel
from ..errors import CorrWalkException, ValidationException
from ..mc import EstimatePoint, EstimateSeries, FitResult

#: The columns of a series, in order.
SERIES_COLUMNS = ['n', 'estimate', 'stderr', 'reps', 'censored']


def throws_parse_exception(f):
    """
    This is a decorator for parsing methods that standardizes exceptions as :py:class:`ParseException` instances.
    Our own exceptions pass through untouched.

    :param f: the decorated function
    :type f:  ``func``
    :return:  the wrapped function
    :rtype:  ``func``
    """
    @wraps(f)
    def wrapped(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except CorrWalkException:
            raise
        except KeyError as k:
            raise ParseException('Missing key {key}.'.format(key=k)) from k
        except (TypeError, ValueError) as v:
            raise ParseException('Malformed input: {err}'.format(err=v)) from v

    return wrapped


class FormatException(ValidationException):
    """
    Raised when a formatting attempt fails.

    :param message: the exception message
    :type message:  ``str``
    """


class ParseException(ValidationException):
    """
    Raised when a parsing attempt fails.

    :param message: the exception message
    :type message:  ``str``
    """


def _load_json(s: str):
    parsed = None  # We're going to try a couple of ways to parse the JSON.
    try:  # Let's see if we can just parse the input as JSON.
        parsed = json.loads(s)
    except ValueError:
        pass  # Maybe the argument was a file path?
    if parsed is None:
        with open(s) as json_file:
            parsed = json.load(json_file)
    return parsed


@throws_parse_exception
def parse_model(jsobj: dict) -> CovarianceModel:
    """
    Create a covariance model from its JSON form, e.g. ``{"family": "fgn", "hurst": 0.75}`` or
    ``{"family": "table", "values": [1, 0.5, 0.25]}``.

    :param jsobj: the parsed JSON object
    :type jsobj:  ``dict``
    :rtype: :py:class:`corrwalk.covariance.CovarianceModel`
    """
    return CovarianceModel(family=jsobj['family'],
                           hurst=Dicts.try_get(jsobj, 'hurst', 0.5).value,
                           table=Dicts.try_get(jsobj, 'values').value)


class JsonExperimentConfigParser(object):
    """
    This class converts JSON into :py:class:`corrwalk.schemas.modeling.ExperimentConfig` objects.
    """
    def __init__(self, settings: ConfigurationManager=None):
        """

        :param settings: where parameter defaults come from
        :type settings:  :py:class:`corrwalk.config.ConfigurationManager`
        """
        self._settings = settings

    @throws_parse_exception
    def load(self, s: str) -> dict:
        """
        Read the raw JSON object of a configuration.

        :param s: the JSON string, or the path to a file containing it
        :type s:  ``str``
        :rtype: ``dict``
        :raises ParseException: if the input isn't a JSON object
        """
        parsed = _load_json(s)
        if not isinstance(parsed, dict):
            raise ParseException('An experiment configuration must be a JSON object.')
        return parsed

    @throws_parse_exception
    def from_dict(self, jsobj: dict) -> ExperimentConfig:
        """
        Create a configuration from its JSON object (keys as in
        :py:func:`corrwalk.schemas.modeling.ExperimentConfig.to_dict`).

        :param jsobj: the JSON object
        :type jsobj:  ``dict``
        :rtype: :py:class:`corrwalk.schemas.modeling.ExperimentConfig`
        """
        model = Dicts.try_get(jsobj, 'model').value
        return ExperimentConfig(
            experiment=jsobj['experiment'],
            model=parse_model(model) if model is not None else None,
            grid=Dicts.try_get(jsobj, 'grid').value,
            reps=Dicts.try_get(jsobj, 'reps', 1).value,
            seed=int(str(Dicts.try_get(jsobj, 'seed', 0).value), 0),
            params=Dicts.try_get(jsobj, 'params', {}).value,
            output=Dicts.try_get(jsobj, 'output').value,
            output_format=Dicts.try_get(jsobj, 'format', OutputFormat.CSV.name).value,
            records=Dicts.try_get(jsobj, 'records').value,
            settings=self._settings)

    def parse(self, s: str) -> ExperimentConfig:
        """
        Parse a JSON string (or file) into a configuration.

        :param s: the JSON string, or the path to a file containing it
        :type s:  ``str``
        :rtype: :py:class:`corrwalk.schemas.modeling.ExperimentConfig`
        :raises ParseException: if we can't parse the input
        """
        return self.from_dict(self.load(s))


def _format_float(value: float) -> str:
    # repr round-trips every double exactly.
    return repr(float(value))


def series_rows(series: Iterable[EstimatePoint]) -> Iterable[dict]:
    """
    Get the points of a series as dictionaries keyed by :py:data:`SERIES_COLUMNS`.
    """
    for point in series:
        yield {'n': int(point.n), 'estimate': float(point.estimate), 'stderr': float(point.stderr),
               'reps': int(point.reps), 'censored': int(point.censored)}


def write_series(series: Iterable[EstimatePoint], stream: TextIO, output_format: OutputFormat=OutputFormat.CSV):
    """
    Write a series as CSV (columns ``n, estimate, stderr, reps, censored``) or as JSON lines.

    :param series: the series
    :type series:  :py:class:`corrwalk.mc.EstimateSeries`
    :param stream: where to write
    :type stream:  text stream
    :param output_format: the format
    :type output_format:  :py:class:`corrwalk.schemas.modeling.OutputFormat`
    """
    if output_format is OutputFormat.CSV:
        writer = csv.writer(stream, lineterminator='\n')
        writer.writerow(SERIES_COLUMNS)
        for row in series_rows(series):
            writer.writerow([row['n'], _format_float(row['estimate']), _format_float(row['stderr']), row['reps'],
                             row['censored']])
    elif output_format is OutputFormat.JSONL:
        write_records(series_rows(series), stream)
    else:
        raise FormatException('Unsupported output format: {fmt}'.format(fmt=output_format))


def write_records(records: Iterable[dict], stream: TextIO):
    """
    Write one JSON object per line.
    """
    for record in records:
        stream.write(json.dumps(record, sort_keys=True))
        stream.write('\n')


@throws_parse_exception
def read_series(stream: TextIO, probability: bool=False) -> EstimateSeries:
    """
    Read a series written by :py:func:`write_series`; the format is recognized from the content.

    :param stream: where to read from
    :type stream:  text stream
    :param probability: ``True`` to insist the estimates lie in [0, 1]
    :type probability:  ``bool``
    :rtype: :py:class:`corrwalk.mc.EstimateSeries`
    :raises ParseException: if the content isn't a series
    """
    text = stream.read()
    if text.lstrip().startswith('{'):
        rows = [json.loads(line) for line in text.splitlines() if line.strip()]
    else:
        reader = csv.DictReader(io.StringIO(text))
        if reader.fieldnames is None or any(column not in reader.fieldnames for column in SERIES_COLUMNS):
            raise ParseException('A series needs the columns: {columns}'.format(columns=', '.join(SERIES_COLUMNS)))
        rows = list(reader)
    points = [EstimatePoint(int(row['n']), float(row['estimate']), float(row['stderr']), int(row['reps']),
                            int(row['censored'])) for row in rows]
    return EstimateSeries(points, probability=probability)


def format_fit(fit: FitResult) -> str:
    """
    Format a fit as a JSON object ``{"slope", "intercept", "slope_stderr", "r_squared"}``.

    :rtype: ``str``
    """
    return json.dumps(fit.to_dict(), sort_keys=True)
