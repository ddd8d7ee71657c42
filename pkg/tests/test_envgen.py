#!/usr/bin/env python
# -*- coding: utf-8 -*-

import csv
import math
import os
import tempfile
import unittest
import numpy as np
from scipy.stats import kstest
from corrwalk.covariance import CovarianceModel, Family, cov
from corrwalk.envgen import CirculantEmbedding, Environment, build_environment, sample_noise
from corrwalk.errors import IndexOutOfEnvironmentException, NotEmbeddableException, ValidationException


def sample_matrix(model: CovarianceModel, n: int, reps: int, seed: int) -> np.ndarray:
    return np.array([sample_noise(model, n, seed * 1_000_003 + i) for i in range(reps)])


class TestSampleNoise(unittest.TestCase):

    def test_deterministic(self):
        model = CovarianceModel.fgn(0.7)
        first = sample_noise(model, 100, 42)
        second = sample_noise(model, 100, 42)
        self.assertEqual(first.tobytes(), second.tobytes())
        self.assertNotEqual(first.tobytes(), sample_noise(model, 100, 43).tobytes())

    def test_length(self):
        for n in [1, 2, 3, 63, 64, 65, 1000]:
            self.assertEqual(n + 1, sample_noise(CovarianceModel.fgn(0.6), n, 1).size)

    def test_n_must_be_positive(self):
        with self.assertRaises(ValidationException):
            sample_noise(CovarianceModel.iid(), 0, 1)

    def test_fgn_covariance(self):
        model = CovarianceModel.fgn(0.8)
        reps = 20_000
        samples = sample_matrix(model, 63, reps, 11)
        for lag in [0, 1, 2, 4, 8, 16]:
            products = samples[:, 0] * samples[:, lag]
            stderr = products.std(ddof=1) / math.sqrt(reps)
            self.assertLess(abs(products.mean() - cov(model, lag)), 5 * stderr, msg='lag {lag}'.format(lag=lag))

    def test_iid_lag_one(self):
        samples = sample_matrix(CovarianceModel.iid(), 63, 20_000, 5)
        products = samples[:, 10] * samples[:, 11]
        stderr = products.std(ddof=1) / math.sqrt(products.size)
        self.assertLess(abs(products.mean()), 5 * stderr)

    def test_coordinates_are_standard_normal(self):
        samples = sample_matrix(CovarianceModel.fgn(0.75), 31, 10_000, 3)
        for coordinate in [0, 15, 31]:
            self.assertGreater(kstest(samples[:, coordinate], 'norm').pvalue, 0.001)

    def test_flat_model_is_zero(self):
        self.assertTrue(np.all(sample_noise(CovarianceModel(Family.FLAT), 10, 1) == 0.0))


class TestCirculantEmbedding(unittest.TestCase):

    def test_fgn_needs_no_clamping(self):
        for hurst in [0.5, 0.6, 0.7, 0.8, 0.9, 0.95]:
            for length in [2, 17, 64, 1000]:
                embedding = CirculantEmbedding(CovarianceModel.fgn(hurst), length)
                self.assertEqual(0, embedding.clamped)

    def test_size_is_a_power_of_two(self):
        embedding = CirculantEmbedding(CovarianceModel.fgn(0.7), 100)
        self.assertEqual(256, embedding.size)
        self.assertEqual(100, embedding.length)

    def test_not_embeddable(self):
        # r(1) = 0.9, r(2) = 0 isn't even a covariance.
        model = CovarianceModel(Family.TABLE, table=[1.0, 0.9, 0.0, 0.0])
        with self.assertRaises(NotEmbeddableException) as context:
            CirculantEmbedding(model, 3)
        self.assertLess(context.exception.min_eigenvalue, 0.0)

    def test_not_embeddable_is_numerical(self):
        model = CovarianceModel(Family.TABLE, table=[1.0, 0.9, 0.0, 0.0])
        with self.assertRaises(ArithmeticError):
            CirculantEmbedding(model, 3)

    def test_table_model(self):
        model = CovarianceModel(Family.TABLE, table=[1.0, 0.5, 0.25, 0.125, 0.0625])
        x = sample_noise(model, 4, 9)
        self.assertEqual(5, x.size)


class TestEnvironment(unittest.TestCase):

    def test_flat(self):
        env = Environment.from_noise([0.0, 0.0, 0.0])
        np.testing.assert_array_equal([0.0, 0.0, 0.0, 0.0], env.v)
        np.testing.assert_array_equal([0.5, 0.5, 0.5], env.omega)
        self.assertEqual(2, env.n)

    def test_v_minus_one(self):
        env = Environment.from_noise([math.log(3.0), 0.0])
        self.assertAlmostEqual(-math.log(3.0), env.potential(-1, -1)[0], places=15)
        self.assertAlmostEqual(0.25, env.omega[0], places=15)

    def test_prefix_sums(self):
        env = Environment.from_noise([0.0, 1.0, -1.0])
        np.testing.assert_array_equal([0.0, 0.0, 1.0, 0.0], env.potential(-1, 2))

    def test_increments_are_the_noise(self):
        env = build_environment(CovarianceModel.fgn(0.7), 200, 8)
        np.testing.assert_allclose(np.diff(env.v), env.x, rtol=0, atol=1e-12)
        self.assertTrue(np.all((env.omega > 0) & (env.omega < 1)))

    def test_omega_round_trip(self):
        x = np.linspace(-30.0, 30.0, 601)
        env = Environment.from_noise(x)
        np.testing.assert_allclose(np.log(env.omega_complement / env.omega), x, rtol=0, atol=1e-12)
        np.testing.assert_allclose(env.omega + env.omega_complement, 1.0, rtol=0, atol=1e-15)

    def test_extreme_noise_does_not_overflow(self):
        env = Environment.from_noise([-1000.0, 1000.0])
        self.assertEqual(1.0, env.omega[0])
        self.assertEqual(0.0, env.omega[1])

    def test_read_only(self):
        env = Environment.from_noise([0.0, 1.0])
        with self.assertRaises(ValueError):
            env.x[0] = 2.0

    def test_require(self):
        env = Environment.from_noise([0.0, 1.0, 2.0])
        env.require(-1, 2)
        with self.assertRaises(IndexOutOfEnvironmentException) as context:
            env.potential(0, 3)
        self.assertEqual(3, context.exception.index)
        with self.assertRaises(IndexOutOfEnvironmentException):
            env.potential(-2, 0)

    def test_build_environment_keeps_model_and_seed(self):
        model = CovarianceModel.fgn(0.6)
        env = build_environment(model, 10, 77)
        self.assertEqual(model, env.model)
        self.assertEqual(77, env.seed)
        np.testing.assert_array_equal(sample_noise(model, 10, 77), env.x)

    def test_to_csv(self):
        env = Environment.from_noise([0.5, -0.25])
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'env.csv')
            env.to_csv(path)
            with open(path) as stream:
                rows = list(csv.reader(stream))
        self.assertEqual(['index', 'x', 'v', 'omega'], rows[0])
        self.assertEqual(['-1', '', '-0.5', ''], rows[1])
        self.assertEqual(-0.25, float(rows[3][1]))
        self.assertEqual(-0.25, float(rows[3][2]))
        self.assertEqual(4, len(rows))

    def test_records(self):
        records = list(Environment.from_noise([0.0, 1.0]).records())
        self.assertEqual({'index': -1, 'x': None, 'v': -0.0, 'omega': None}, records[0])
        self.assertEqual(1.0, records[2]['v'])
