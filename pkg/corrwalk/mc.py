#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
.. currentmodule:: corrwalk.mc
.. moduleauthor:: Pat Daburu <pat@daburu.net>

Monte Carlo estimators built on exact identities of the model, power-law fitting and the runner that turns an
experiment configuration into a series of estimates.
"""

import logging
import math
from collections import namedtuple
from typing import Iterable, List

import numpy as np
from scipy.special import logsumexp
from scipy.stats import linregress

from . import passage, walk
from .bpcge import Caps, simulate, tail_statistics
from .covariance import CovarianceModel, sigma2
from .engine import DYNAMICS_STREAM, ENV_STREAM, Estimate, ReplicatePool, mean_and_stderr, split_seed
from .envgen import Environment, build_environment
from .errors import NonPositiveEstimateException, ValidationException
from .schemas.modeling import Experiment, ExperimentConfig

_logger = logging.getLogger(__name__)


class EstimatePoint(namedtuple('EstimatePoint', ['n', 'estimate', 'stderr', 'reps', 'censored'])):
    """
    One grid point of a series: the grid value, the estimate, its standard error, the number of replicates and the
    number of censored replicates.
    """


class FitResult(namedtuple('FitResult', ['slope', 'intercept', 'slope_stderr', 'r_squared'])):
    """
    A least-squares line through (log n, log estimate).
    """
    def to_dict(self) -> dict:
        return dict(self._asdict())


class EstimateSeries(object):
    """
    An estimate series is a sequence of estimates over a strictly increasing grid, together with the model they were
    computed for and a label saying what they estimate.  Some experiments also keep per-replicate ``records`` (e.g.
    branching trajectories or event reports).
    """
    def __init__(self, points: Iterable[EstimatePoint], model: CovarianceModel=None, label: str='',
                 probability: bool=True, records: List[dict]=None):
        """

        :param points: the points
        :type points:  iterable of :py:class:`EstimatePoint`
        :param model: the covariance model
        :type model:  :py:class:`corrwalk.covariance.CovarianceModel`
        :param label: what the estimates estimate
        :type label:  ``str``
        :param probability: ``True`` if the estimates are probabilities (and so must lie in [0, 1])
        :type probability:  ``bool``
        :param records: per-replicate records
        :type records:  ``list`` of ``dict``
        """
        self._points = [EstimatePoint(int(p[0]), float(p[1]), float(p[2]), int(p[3]), int(p[4])) for p in points]
        for previous, current in zip(self._points, self._points[1:]):
            if current.n <= previous.n:
                raise ValidationException('the grid of a series must be strictly increasing')
        for point in self._points:
            if point.stderr < 0 or math.isnan(point.stderr):
                raise ValidationException('standard errors must be nonnegative (n={n})'.format(n=point.n))
            if probability and not 0.0 <= point.estimate <= 1.0:
                raise ValidationException('probability estimates must lie in [0, 1] (n={n})'.format(n=point.n))
        self._model = model
        self._label = label
        self._probability = probability
        self._records = list(records or [])

    @property
    def points(self) -> List[EstimatePoint]:
        """
        Get the points.

        :rtype: ``list`` of :py:class:`EstimatePoint`
        """
        return list(self._points)

    @property
    def model(self) -> CovarianceModel or None:
        """
        Get the covariance model.

        :rtype: :py:class:`corrwalk.covariance.CovarianceModel`
        """
        return self._model

    @property
    def label(self) -> str:
        """
        Get the label.

        :rtype: ``str``
        """
        return self._label

    @property
    def probability(self) -> bool:
        """
        Are the estimates probabilities?

        :rtype: ``bool``
        """
        return self._probability

    @property
    def records(self) -> List[dict]:
        """
        Get the per-replicate records.

        :rtype: ``list`` of ``dict``
        """
        return list(self._records)

    def __len__(self):
        return len(self._points)

    def __iter__(self):
        return iter(self._points)


def reciprocal_exp_sum(env: Environment, x: int, start: int=0) -> float:
    """
    Get (sum_{l=start}^{x} e^{V(l)})^{-1}, computed with a log-sum-exp.

    :param env: the environment (covering [0, x])
    :type env:  :py:class:`corrwalk.envgen.Environment`
    :param x: the last index (at least 1)
    :type x:  ``int``
    :param start: ``0`` to include the term e^{V(0)} = 1, ``1`` to leave it out
    :type start:  ``int``
    :rtype: ``float``
    """
    if start not in (0, 1):
        raise ValidationException('start must be 0 or 1')
    if x < 1:
        raise ValidationException('x must be at least 1')
    return float(np.exp(-logsumexp(env.potential(start, x))))


def _reciprocal_replicate(model: CovarianceModel, x: int, start: int, seed: int) -> float:
    env = build_environment(model, x, split_seed(seed, ENV_STREAM))
    return reciprocal_exp_sum(env, x, start)


def _mean_estimate(values: List[float]) -> Estimate:
    mean, stderr = mean_and_stderr(values)
    return Estimate(mean, stderr, len(values), 0)


def extinction_tail_estimate(model: CovarianceModel, big_n: int, reps: int, seed: int, workers: int=1) -> Estimate:
    """
    Estimate P[T > N] = E[(sum_{k=0}^{N} e^{V(k)})^{-1}] by averaging over fresh environments.  No walk or branching
    process is simulated.

    :param model: the covariance model
    :type model:  :py:class:`corrwalk.covariance.CovarianceModel`
    :param big_n: N (at least 1)
    :type big_n:  ``int``
    :param reps: the number of environments (at least 2)
    :type reps:  ``int``
    :param seed: the master seed
    :type seed:  ``int``
    :param workers: the number of worker processes
    :type workers:  ``int``
    :rtype: :py:class:`corrwalk.engine.Estimate`
    """
    if big_n < 1:
        raise ValidationException('N must be at least 1')
    if reps < 2:
        raise ValidationException('reps must be at least 2')
    return _mean_estimate(ReplicatePool(workers).replicate(_reciprocal_replicate, (model, big_n, 0), seed, reps))


class ReciprocalSumFunctional(namedtuple('ReciprocalSumFunctional', ['value', 'stderr', 'reps', 'normalized'])):
    """
    x^(1-H) times the mean reciprocal exponential sum.  ``normalized`` says whether the slowly varying factor is known
    to be 1 (otherwise the value is reported raw, without dividing by it).
    """


def lemma4_functional(model: CovarianceModel, x: int, reps: int, seed: int, start: int=1,
                      workers: int=1) -> ReciprocalSumFunctional:
    """
    Get x^(1-H) E[(sum_{l=start}^{x} e^{V(l)})^{-1}], which tends to kappa H as x grows.

    :param model: the covariance model
    :type model:  :py:class:`corrwalk.covariance.CovarianceModel`
    :param x: the last index (at least 2)
    :type x:  ``int``
    :param reps: the number of environments
    :type reps:  ``int``
    :param seed: the master seed
    :type seed:  ``int``
    :param start: ``0`` or ``1``
    :type start:  ``int``
    :param workers: the number of worker processes
    :type workers:  ``int``
    :rtype: :py:class:`ReciprocalSumFunctional`
    """
    if x < 2:
        raise ValidationException('x must be at least 2')
    if reps < 1:
        raise ValidationException('reps must be at least 1')
    if start not in (0, 1):
        raise ValidationException('start must be 0 or 1')
    values = ReplicatePool(workers).replicate(_reciprocal_replicate, (model, x, start), seed, reps)
    mean, stderr = mean_and_stderr(values)
    scale = float(x) ** (1.0 - model.hurst)
    return ReciprocalSumFunctional(scale * mean, scale * stderr, reps, model.ell_is_one)


def _running_max_replicate(model: CovarianceModel, t: int, seed: int) -> float:
    env = build_environment(model, t, split_seed(seed, ENV_STREAM))
    return float(np.max(env.potential(0, t)))


def kappa_estimate(model: CovarianceModel, t: int, reps: int, seed: int, workers: int=1) -> Estimate:
    """
    Estimate E[max_{k=0..t} V(k)] / sigma_t, which tends to the constant kappa (sqrt(2/pi) for independent noise).

    :rtype: :py:class:`corrwalk.engine.Estimate`
    """
    if t < 1 or reps < 1:
        raise ValidationException('t and reps must be at least 1')
    maxima = ReplicatePool(workers).replicate(_running_max_replicate, (model, t), seed, reps)
    mean, stderr = mean_and_stderr(maxima)
    sigma = math.sqrt(sigma2(model, t))
    return Estimate(mean / sigma, stderr / sigma, reps, 0)


def _persistence_replicate(model: CovarianceModel, big_n: int, seed: int) -> float:
    env = build_environment(model, big_n, split_seed(seed, ENV_STREAM))
    return walk.persistence_dp(env, big_n)


def persistence_estimate(model: CovarianceModel, big_n: int, reps: int, seed: int, workers: int=1) -> Estimate:
    """
    Estimate the annealed persistence P[tau(-1) > N] by averaging the exact quenched probability over fresh
    environments.

    :rtype: :py:class:`corrwalk.engine.Estimate`
    """
    if big_n < 1 or reps < 1:
        raise ValidationException('N and reps must be at least 1')
    return _mean_estimate(ReplicatePool(workers).replicate(_persistence_replicate, (model, big_n), seed, reps))


def _simulated_persistence_replicate(model: CovarianceModel, big_n: int, seed: int) -> int:
    env = build_environment(model, big_n, split_seed(seed, ENV_STREAM))
    # From 0 the walk can't get past N in N steps, so N + 1 is never hit.
    outcome = walk.simulate_walk(env, walk.HitQuery(-1, 0, big_n + 1), big_n, split_seed(seed, DYNAMICS_STREAM))
    return int(outcome.kind is not walk.HitKind.HIT_LOW)


def simulated_persistence_estimate(model: CovarianceModel, big_n: int, reps: int, seed: int,
                                   workers: int=1) -> Estimate:
    """
    Estimate P[tau(-1) > N] as the frequency of simulated walks that avoid -1 for N steps.

    :rtype: :py:class:`corrwalk.engine.Estimate`
    """
    if big_n < 1 or reps < 1:
        raise ValidationException('N and reps must be at least 1')
    return _mean_estimate(
        ReplicatePool(workers).replicate(_simulated_persistence_replicate, (model, big_n), seed, reps))


def total_population_tail_estimate(model: CovarianceModel, big_n: int, reps: int, seed: int,
                                   workers: int=1) -> Estimate:
    """
    Estimate P[sum_n Z_n > N] through P[sum_n Z_n > N] = P[tau(-1) > 2N - 1].

    :rtype: :py:class:`corrwalk.engine.Estimate`
    """
    return persistence_estimate(model, 2 * big_n - 1, reps, seed, workers)


def fit_power_law(series: EstimateSeries or Iterable[EstimatePoint]) -> FitResult:
    """
    Fit log(estimate) = intercept + slope log(n) by ordinary least squares.

    :param series: at least three points with positive estimates
    :type series:  :py:class:`EstimateSeries`
    :rtype: :py:class:`FitResult`
    :raises NonPositiveEstimateException: if an estimate isn't positive
    """
    points = list(series)
    if len(points) < 3:
        raise ValidationException('a power-law fit needs at least 3 points')
    for point in points:
        if not point.estimate > 0:
            raise NonPositiveEstimateException(
                'cannot take the logarithm of the estimate at n={n}'.format(n=point.n), n=point.n)
    log_n = np.log([float(point.n) for point in points])
    log_p = np.log([point.estimate for point in points])
    fit = linregress(log_n, log_p)
    return FitResult(slope=float(fit.slope),
                     intercept=float(fit.intercept),
                     slope_stderr=float(fit.stderr),
                     r_squared=min(max(float(fit.rvalue) ** 2, 0.0), 1.0))


def _branching_replicate(model: CovarianceModel, caps: Caps, seed: int):
    env = build_environment(model, max(caps.max_generations, 1), split_seed(seed, ENV_STREAM))
    return simulate(env, caps, split_seed(seed, DYNAMICS_STREAM))


def _point(n: int, estimate: Estimate) -> EstimatePoint:
    return EstimatePoint(n, estimate.estimate, estimate.stderr, estimate.reps, estimate.censored)


def _run_branching(config: ExperimentConfig, master_seed: int, pool: ReplicatePool) -> EstimateSeries:
    caps = Caps(config.params['max_generations'] or config.grid[-1], config.params['max_total'])
    seeds = [split_seed(master_seed, i) for i in range(config.reps)]
    trajectories = pool.map(_branching_replicate, (config.model, caps), seeds)
    stats = tail_statistics(trajectories, grid=config.grid)
    if stats.censored:
        _logger.info('%d of %d trajectories were censored.', stats.censored, stats.reps)
    records = [t.to_record(seed) for t, seed in zip(trajectories, seeds)]
    return EstimateSeries(stats.curve(config.params['curve']), config.model, 'branching_' + config.params['curve'],
                          records=records)


def _estimate_at(config: ExperimentConfig, n: int, seed: int, workers: int) -> (EstimatePoint, List[dict]):
    experiment, model, reps, params = config.experiment, config.model, config.reps, config.params
    if experiment is Experiment.TAIL:
        return _point(n, extinction_tail_estimate(model, n, reps, seed, workers)), []
    if experiment is Experiment.WALK:
        estimator = {
            'persistence': persistence_estimate,
            'simulate': simulated_persistence_estimate,
            'total': total_population_tail_estimate
        }[params['mode']]
        return _point(n, estimator(model, n, reps, seed, workers)), []
    if experiment is Experiment.PASSAGE:
        if params['mode'] == 'hit_order':
            result = passage.hit_order_mc(model, float(n), params['y'], reps, params['horizon_factor'], seed,
                                          workers, params['alpha'])
            if result.censored:
                _logger.info('x=%d: %d of %d replicates crossed neither level.', n, result.censored, reps)
            record = {'x': n, 'complement': result.complement, 'horizon': result.horizon,
                      'y_above_e': result.y_above_e, 'alpha_condition': result.alpha_condition}
            return EstimatePoint(n, result.estimate, result.stderr, reps, result.censored), [record]
        return _point(n, passage.potential_persistence_mc(model, n, reps, seed, params['barrier'], workers)), []
    if experiment is Experiment.EVENTS:
        event_params = passage.EnvEventParams(params['a'], params['q'], params['eps'])
        frequency = passage.event_frequency_mc(model, n, event_params, reps, seed, workers)
        estimate = frequency.good if params['event'] == 'good' else frequency.bad_complement
        return _point(n, estimate), frequency.reports
    if experiment is Experiment.LEMMA4:
        if params['mode'] == 'kappa':
            return _point(n, kappa_estimate(model, n, reps, seed, workers)), []
        value = lemma4_functional(model, n, reps, seed, params['start'], workers)
        return EstimatePoint(n, value.value, value.stderr, reps, 0), [{'x': n, 'normalized': value.normalized}]
    raise ValidationException('unknown experiment {name}'.format(name=experiment.name))


_LABELS = {
    Experiment.TAIL: lambda params: 'extinction_tail',
    Experiment.WALK: lambda params: {'persistence': 'persistence', 'simulate': 'simulated_persistence',
                                     'total': 'total_population_tail'}[params['mode']],
    Experiment.PASSAGE: lambda params: params['mode'],
    Experiment.EVENTS: lambda params: params['event'],
    Experiment.LEMMA4: lambda params: 'reciprocal_functional_start{start}'.format(start=params['start'])
    if params['mode'] == 'functional' else 'kappa'
}


def mc_run(config: ExperimentConfig, master_seed: int=None, workers: int=1) -> EstimateSeries:
    """
    Run an experiment over its grid.  Grid point ``j`` gets the seed ``split_seed(master_seed, j)`` and splits it
    again per replicate, so the series is a pure function of the configuration and the seed, whatever the number of
    workers.  (``BRANCHING`` simulates one set of trajectories and reads every grid point off it.)

    :param config: the experiment
    :type config:  :py:class:`corrwalk.schemas.modeling.ExperimentConfig`
    :param master_seed: the master seed (``None`` for the configured one)
    :type master_seed:  ``int``
    :param workers: the number of worker processes
    :type workers:  ``int``
    :rtype: :py:class:`EstimateSeries`
    """
    if config.experiment in (Experiment.ENV, Experiment.FIT):
        raise ValidationException('{name} experiments do not produce an estimate series'.format(
            name=config.experiment.name))
    master_seed = config.seed if master_seed is None else master_seed
    if config.experiment is Experiment.BRANCHING:
        return _run_branching(config, master_seed, ReplicatePool(workers))
    points, records = [], []
    for j, n in enumerate(config.grid):
        point, point_records = _estimate_at(config, n, split_seed(master_seed, j), workers)
        _logger.info('%s n=%d estimate=%.6g stderr=%.3g', config.experiment.name, n, point.estimate, point.stderr)
        points.append(point)
        records.extend(point_records)
    probability = config.experiment is not Experiment.LEMMA4
    return EstimateSeries(points, config.model, _LABELS[config.experiment](config.params), probability, records)
