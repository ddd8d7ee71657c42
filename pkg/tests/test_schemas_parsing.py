#!/usr/bin/env python
# -*- coding: utf-8 -*-

import io
import json
import os
import tempfile
import unittest
from corrwalk.covariance import Family
from corrwalk.errors import InvalidConfigException, InvalidModelException, ValidationException
from corrwalk.mc import EstimatePoint, EstimateSeries, FitResult
from corrwalk.schemas.modeling import Experiment, OutputFormat
from corrwalk.schemas.parsing import (JsonExperimentConfigParser, ParseException, format_fit, parse_model,
                                      read_series, write_series)

SERIES = EstimateSeries([EstimatePoint(16, 0.25, 0.01, 100, 0),
                         EstimatePoint(32, 0.1 + 0.2, 0.0125, 100, 3),
                         EstimatePoint(64, 1.0 / 3.0, 0.0, 100, 0)])


class TestParseModel(unittest.TestCase):

    def test_fgn(self):
        model = parse_model({'family': 'fgn', 'hurst': 0.75})
        self.assertEqual(Family.FGN, model.family)
        self.assertEqual(0.75, model.hurst)

    def test_table(self):
        model = parse_model({'family': 'TABLE', 'values': [1, 0.5, 0.25]})
        self.assertEqual((1.0, 0.5, 0.25), model.table)

    def test_missing_family(self):
        with self.assertRaises(ParseException):
            parse_model({'hurst': 0.75})

    def test_invalid_hurst(self):
        with self.assertRaises(InvalidModelException) as context:
            parse_model({'family': 'fgn', 'hurst': 1.2})
        self.assertEqual('hurst must lie in [0.5,1)', context.exception.message)


class TestJsonExperimentConfigParser(unittest.TestCase):

    def test_parse(self):
        jsons = """
        {
            "experiment": "walk",
            "model": {"family": "power", "hurst": 0.8},
            "grid": "8..64x2",
            "reps": 25,
            "seed": "0xff",
            "params": {"mode": "simulate"},
            "format": "jsonl"
        }
        """
        config = JsonExperimentConfigParser().parse(jsons)
        self.assertEqual(Experiment.WALK, config.experiment)
        self.assertEqual(Family.POWER, config.model.family)
        self.assertEqual([8, 16, 32, 64], config.grid)
        self.assertEqual(25, config.reps)
        self.assertEqual(255, config.seed)
        self.assertEqual('simulate', config.params['mode'])
        self.assertEqual(OutputFormat.JSONL, config.output_format)

    def test_parse_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'config.json')
            with open(path, 'w') as json_file:
                json.dump({'experiment': 'tail', 'model': {'family': 'iid'}, 'grid': [4, 8]}, json_file)
            config = JsonExperimentConfigParser().parse(path)
        self.assertEqual(Family.IID, config.model.family)
        self.assertEqual(1, config.reps)
        self.assertEqual(0, config.seed)

    def test_round_trip(self):
        jsons = '{"experiment": "events", "model": {"family": "fgn", "hurst": 0.6}, "grid": [100, 1000]}'
        parser = JsonExperimentConfigParser()
        config = parser.parse(jsons)
        self.assertEqual(config.to_dict(), parser.from_dict(config.to_dict()).to_dict())

    def test_not_an_object(self):
        with self.assertRaises(ParseException):
            JsonExperimentConfigParser().parse('[1, 2, 3]')

    def test_missing_experiment(self):
        with self.assertRaises(ParseException):
            JsonExperimentConfigParser().parse('{"model": {"family": "iid"}, "grid": [4]}')

    def test_malformed_seed(self):
        with self.assertRaises(ParseException):
            JsonExperimentConfigParser().parse('{"experiment": "tail", "model": {"family": "iid"}, "grid": [4], '
                                               '"seed": "twelve"}')

    def test_invalid_config_passes_through(self):
        with self.assertRaises(InvalidConfigException):
            JsonExperimentConfigParser().parse('{"experiment": "tail", "model": {"family": "iid"}, "grid": [8, 4]}')


class TestSeriesIo(unittest.TestCase):

    def test_csv(self):
        stream = io.StringIO()
        write_series(SERIES, stream)
        lines = stream.getvalue().split('\n')
        self.assertEqual('n,estimate,stderr,reps,censored', lines[0])
        self.assertEqual('16,0.25,0.01,100,0', lines[1])
        self.assertEqual(read_series(io.StringIO(stream.getvalue())).points, SERIES.points)

    def test_jsonl(self):
        stream = io.StringIO()
        write_series(SERIES, stream, OutputFormat.JSONL)
        first = json.loads(stream.getvalue().splitlines()[0])
        self.assertEqual({'n': 16, 'estimate': 0.25, 'stderr': 0.01, 'reps': 100, 'censored': 0}, first)
        self.assertEqual(read_series(io.StringIO(stream.getvalue())).points, SERIES.points)

    def test_missing_columns(self):
        with self.assertRaises(ParseException):
            read_series(io.StringIO('n,estimate\n1,0.5\n'))

    def test_malformed_values(self):
        with self.assertRaises(ParseException):
            read_series(io.StringIO('n,estimate,stderr,reps,censored\n1,half,0.1,10,0\n'))

    def test_probability_check(self):
        text = 'n,estimate,stderr,reps,censored\n1,1.5,0.1,10,0\n'
        self.assertEqual(1.5, read_series(io.StringIO(text)).points[0].estimate)
        with self.assertRaises(ValidationException):
            read_series(io.StringIO(text), probability=True)


class TestFormatFit(unittest.TestCase):

    def test_format(self):
        fit = FitResult(slope=-0.25, intercept=0.5, slope_stderr=0.01, r_squared=0.99)
        self.assertEqual({'slope': -0.25, 'intercept': 0.5, 'slope_stderr': 0.01, 'r_squared': 0.99},
                         json.loads(format_fit(fit)))
