#!/usr/bin/env python
# -*- coding: utf-8 -*-

import unittest
from corrwalk.config import ConfigurationManager
from corrwalk.covariance import CovarianceModel, Family
from corrwalk.errors import InvalidConfigException, InvalidModelException
from corrwalk.schemas.modeling import Experiment, ExperimentConfig, OutputFormat, parse_grid

MODEL = CovarianceModel.fgn(0.75)


class TestParseGrid(unittest.TestCase):

    def test_geometric(self):
        self.assertEqual([1024 * 2 ** k for k in range(8)], parse_grid('1024..131072x2'))

    def test_geometric_with_fractional_ratio(self):
        self.assertEqual([1, 2, 3, 4], parse_grid('1..4x1.2'))
        self.assertEqual([10, 15], parse_grid('10..20x1.5'))

    def test_list_and_single(self):
        self.assertEqual([3, 5, 8], parse_grid('3,5,8'))
        self.assertEqual([100], parse_grid('100'))

    def test_malformed(self):
        for text in ['abc', '1..10', '10..1x2', '1..10x1', '']:
            with self.assertRaises(InvalidConfigException, msg=text):
                parse_grid(text)


class TestExperimentConfig(unittest.TestCase):

    def test_init(self):
        config = ExperimentConfig('Tail', MODEL, grid='16..64x2', reps=10, seed=7)
        self.assertEqual(Experiment.TAIL, config.experiment)
        self.assertEqual(MODEL, config.model)
        self.assertEqual([16, 32, 64], config.grid)
        self.assertEqual(10, config.reps)
        self.assertEqual(7, config.seed)
        self.assertEqual(OutputFormat.CSV, config.output_format)
        self.assertEqual({}, config.params)

    def test_defaults_come_from_settings(self):
        config = ExperimentConfig(Experiment.EVENTS, MODEL, grid=[100])
        self.assertEqual({'a': 2.0, 'q': 2.0, 'eps': 0.1, 'event': 'bad_complement'}, config.params)
        settings = ConfigurationManager()
        settings.set('passage', 'eps', '0.25')
        self.assertEqual(0.25, ExperimentConfig(Experiment.EVENTS, MODEL, grid=[100], settings=settings).params['eps'])

    def test_explicit_params_win(self):
        config = ExperimentConfig('passage', MODEL, grid=[8], params={'y': '3', 'mode': 'Persistence'})
        self.assertEqual(3.0, config.params['y'])
        self.assertEqual('persistence', config.params['mode'])

    def test_unknown_experiment(self):
        with self.assertRaises(InvalidConfigException):
            ExperimentConfig('teleport', MODEL, grid=[8])

    def test_unknown_param(self):
        with self.assertRaises(InvalidConfigException):
            ExperimentConfig('tail', MODEL, grid=[8], params={'y': 2})

    def test_bad_param_value(self):
        with self.assertRaises(InvalidConfigException):
            ExperimentConfig('walk', MODEL, grid=[8], params={'mode': 'fly'})
        with self.assertRaises(InvalidConfigException):
            ExperimentConfig('lemma4', MODEL, grid=[8], params={'start': 2})

    def test_needs_a_model(self):
        with self.assertRaises(InvalidConfigException):
            ExperimentConfig('tail', grid=[8])

    def test_rejects_the_flat_model(self):
        with self.assertRaises(InvalidModelException):
            ExperimentConfig('tail', CovarianceModel(Family.FLAT), grid=[8])

    def test_grid(self):
        for grid in [[], [8, 8], [16, 8], [0, 8]]:
            with self.assertRaises(InvalidConfigException, msg=str(grid)):
                ExperimentConfig('tail', MODEL, grid=grid)

    def test_reps_and_seed(self):
        with self.assertRaises(InvalidConfigException):
            ExperimentConfig('tail', MODEL, grid=[8], reps=0)
        with self.assertRaises(InvalidConfigException):
            ExperimentConfig('tail', MODEL, grid=[8], seed=-1)
        with self.assertRaises(InvalidConfigException):
            ExperimentConfig('tail', MODEL, grid=[8], seed=2 ** 64)
        self.assertEqual(2 ** 64 - 1, ExperimentConfig('tail', MODEL, grid=[8], seed=2 ** 64 - 1).seed)

    def test_fit(self):
        config = ExperimentConfig('fit', params={'input': 'series.csv'})
        self.assertEqual([], config.grid)
        self.assertIsNone(config.model)
        with self.assertRaises(InvalidConfigException):
            ExperimentConfig('fit')

    def test_to_dict(self):
        config = ExperimentConfig('branching', MODEL, grid=[4, 8], reps=3, seed=1, output='out.csv',
                                  output_format='jsonl')
        jsobj = config.to_dict()
        self.assertEqual('branching', jsobj['experiment'])
        self.assertEqual({'family': 'fgn', 'hurst': 0.75}, jsobj['model'])
        self.assertEqual('jsonl', jsobj['format'])
        self.assertEqual('extinction_time', jsobj['params']['curve'])
        self.assertEqual(2 ** 40, jsobj['params']['max_total'])
