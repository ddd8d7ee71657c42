#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Desk-scale acceptance runs.  They take minutes, so they only run with ``CORRWALK_ACCEPTANCE=1``.
"""

import io
import itertools
import json
import math
import os
import tempfile
import unittest
import numpy as np
from corrwalk.bpcge import from_walk
from corrwalk.cli import main
from corrwalk.covariance import CovarianceModel, cov
from corrwalk.engine import generator, split_seed
from corrwalk.envgen import build_environment, embedding
from corrwalk.mc import EstimatePoint, extinction_tail_estimate, fit_power_law, lemma4_functional, mc_run
from corrwalk.passage import EnvEventParams, event_frequency_mc, hit_order_mc, potential_persistence_mc
from corrwalk.schemas.modeling import ExperimentConfig
from corrwalk.walk import HitKind, HitQuery, hit_prob, hit_prob_linear_solve, persistence_dp, simulate_walk

ACCEPTANCE = os.environ.get('CORRWALK_ACCEPTANCE') == '1'


def persistence_by_enumeration(env, big_n: int) -> float:
    steps = np.array(list(itertools.product([1, -1], repeat=big_n)), dtype=int)
    after = np.cumsum(steps, axis=1)
    before = np.hstack([np.zeros((steps.shape[0], 1), dtype=int), after[:, :-1]])
    alive = np.all(after >= 0, axis=1)
    sites = np.maximum(before, 0)
    probs = np.where(steps == 1, env.omega[sites], env.omega_complement[sites])
    return float(np.sum(np.prod(probs[alive], axis=1)))


def slope_of(grid, estimates) -> float:
    return fit_power_law([EstimatePoint(n, p, 0.0, 1, 0) for n, p in zip(grid, estimates)]).slope


@unittest.skipUnless(ACCEPTANCE, 'set CORRWALK_ACCEPTANCE=1 to run the acceptance suite')
class TestAcceptance(unittest.TestCase):

    def test_exact_formulas_match_oracles(self):
        rng = generator(1)
        model = CovarianceModel.fgn(0.7)
        for i in range(100):
            span = int(rng.integers(2, 13))
            low = int(rng.integers(-1, 3))
            start = low + int(rng.integers(1, span))
            query = HitQuery(low, start, low + span)
            env = build_environment(model, query.high + 1, split_seed(2, i))
            self.assertAlmostEqual(hit_prob_linear_solve(env, query), hit_prob(env, query), delta=1e-10)
        for big_n in range(1, 19):
            env = build_environment(model, big_n, split_seed(3, big_n))
            self.assertAlmostEqual(persistence_by_enumeration(env, big_n), persistence_dp(env, big_n), delta=1e-12)

    def test_sampler_covariance(self):
        reps, length = 200_000, 64
        for hurst in [0.6, 0.8]:
            model = CovarianceModel.fgn(hurst)
            circulant = embedding(model, length)
            self.assertEqual(0, circulant.clamped)
            samples = np.array([circulant.sample(generator(split_seed(int(hurst * 10), i)))
                                for i in range(reps)])
            for lag in range(17):
                products = samples[:, 0] * samples[:, lag]
                error = abs(products.mean() - cov(model, lag))
                self.assertLess(error, 5 * products.std(ddof=1) / math.sqrt(reps), msg='lag {lag}'.format(lag=lag))

    def test_coupling_identity(self):
        for hurst in [0.5, 0.75]:
            model = CovarianceModel.fgn(hurst)
            absorbed = 0
            i = 0
            while absorbed < 10_000:
                env = build_environment(model, 64, split_seed(4, i))
                outcome = simulate_walk(env, HitQuery(-1, 0, 64), 10 ** 6, split_seed(5, i), record_path=True)
                i += 1
                if outcome.kind is not HitKind.HIT_LOW:
                    continue
                self.assertEqual(outcome.time, 2 * from_walk(env, outcome.path).total - 1)
                absorbed += 1

    def test_extinction_tail_exponent(self):
        grid = [2 ** k for k in range(10, 18)]
        for hurst in [0.5, 0.7, 0.8]:
            model = CovarianceModel.fgn(hurst)
            estimates = [extinction_tail_estimate(model, n, 20_000, split_seed(6, n)).estimate for n in grid]
            self.assertLess(abs(slope_of(grid, estimates) + (1.0 - hurst)), 0.07, msg='H={h}'.format(h=hurst))

    def test_direct_simulation_agrees_with_identity(self):
        model = CovarianceModel.fgn(0.7)
        direct = mc_run(ExperimentConfig('branching', model, grid=[16, 32, 64], reps=100_000, seed=7,
                                         params={'max_total': 2 ** 60}), workers=4)
        identity = mc_run(ExperimentConfig('tail', model, grid=[16, 32, 64], reps=100_000, seed=8), workers=4)
        for simulated, exact in zip(direct, identity):
            self.assertLessEqual(simulated.censored, simulated.reps // 1000)
            combined = math.sqrt(simulated.stderr ** 2 + exact.stderr ** 2)
            self.assertLess(abs(simulated.estimate - exact.estimate), 3 * combined, msg='N={n}'.format(n=exact.n))

    def test_hit_order_trend(self):
        model = CovarianceModel.fgn(0.75)
        grid = [8, 16, 32, 64]
        results = [hit_order_mc(model, float(x), 2.0, 50_000, horizon_factor=4.0, seed=split_seed(9, x), workers=4)
                   for x in grid]
        estimates = [result.estimate for result in results]
        self.assertTrue(all(later < earlier for earlier, later in zip(estimates, estimates[1:])))
        self.assertLess(abs(slope_of(grid, estimates) + 1.0 / 3.0), 0.15)
        for result in results:
            self.assertLess(result.censored / result.reps, 0.01)

    def test_potential_persistence_exponent(self):
        model = CovarianceModel.fgn(0.7)
        grid = [2 ** k for k in range(8, 15)]
        estimates = [potential_persistence_mc(model, n, 100_000, split_seed(10, n), workers=4).estimate for n in grid]
        self.assertLess(abs(slope_of(grid, estimates) + 0.3), 0.08)

    def test_reciprocal_functional_limit(self):
        value = lemma4_functional(CovarianceModel.fgn(0.5), 2 ** 16, 20_000, seed=11, start=1, workers=4)
        target = math.sqrt(2.0 / math.pi) / 2.0
        self.assertLess(abs(value.value - target), 0.2 * target)

    def test_event_machinery(self):
        model = CovarianceModel.fgn(0.7)
        params = EnvEventParams()
        complements = []
        for big_n in [10 ** 4, 10 ** 6, 10 ** 8]:
            first = event_frequency_mc(model, big_n, params, 10_000, seed=12, workers=4)
            second = event_frequency_mc(model, big_n, params, 10_000, seed=12, workers=4)
            keys = ['beta_N', 'gamma', 'b_N', 'f_N']
            self.assertEqual([{k: r['witnesses'][k] for k in keys} for r in first.reports],
                             [{k: r['witnesses'][k] for k in keys} for r in second.reports])
            complements.append(first.bad_complement.estimate)
        self.assertEqual(sorted(complements, reverse=True), complements)

    def test_output_does_not_depend_on_workers(self):
        runs = [
            ['env', '--model', 'fgn', '--hurst', '0.7', '--grid', '4096'],
            ['walk', '--model', 'fgn', '--hurst', '0.7', '--grid', '16..256x2', '--reps', '200'],
            ['walk', '--model', 'fgn', '--hurst', '0.7', '--grid', '16..64x2', '--reps', '200', '--mode', 'simulate'],
            ['branching', '--model', 'fgn', '--hurst', '0.7', '--grid', '1..64x2', '--reps', '2000'],
            ['tail', '--model', 'fgn', '--hurst', '0.7', '--grid', '1024..16384x2', '--reps', '500'],
            ['passage', '--model', 'fgn', '--hurst', '0.75', '--grid', '8,16', '--reps', '500'],
            ['passage', '--model', 'fgn', '--hurst', '0.7', '--grid', '256', '--reps', '500', '--mode',
             'persistence'],
            ['events', '--model', 'fgn', '--hurst', '0.7', '--grid', '10000,1000000', '--reps', '500'],
            ['lemma4', '--model', 'fgn', '--hurst', '0.5', '--grid', '1024', '--reps', '500']
        ]
        with tempfile.TemporaryDirectory() as tmp:
            for i, argv in enumerate(runs):
                outputs = []
                for workers in ['1', '8']:
                    out = os.path.join(tmp, '{i}-{w}.out'.format(i=i, w=workers))
                    records = os.path.join(tmp, '{i}-{w}.jsonl'.format(i=i, w=workers))
                    code = main(argv + ['--seed', '99', '--workers', workers, '--out', out, '--records', records],
                                stdout=io.StringIO(), stderr=io.StringIO())
                    self.assertEqual(0, code, msg=json.dumps(argv))
                    with open(out, 'rb') as stream:
                        outputs.append(stream.read())
                    if os.path.exists(records):
                        with open(records, 'rb') as stream:
                            outputs[-1] += stream.read()
                self.assertEqual(outputs[0], outputs[1], msg=json.dumps(argv))
