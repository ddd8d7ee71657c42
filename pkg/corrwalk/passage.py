#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
.. currentmodule:: corrwalk.passage
.. moduleauthor:: Pat Daburu <pat@daburu.net>

First passages of the potential, hit-order and persistence estimates for it, and the indicators of the "bad" and
"good" environment events.
"""

import math
from collections import namedtuple
from typing import List

import numpy as np
from scipy.special import logsumexp

from .config import DEFAULTS
from .covariance import CovarianceModel, b_index
from .engine import ENV_STREAM, Estimate, ReplicatePool, binomial_stderr, split_seed
from .envgen import Environment, build_environment
from .errors import EnvironmentTooShortException, LevelZeroException, ValidationException

HORIZON_FACTOR: float = float(DEFAULTS['passage']['horizon_factor'])  #: default horizon factor of hit_order_mc
ALPHA: float = float(DEFAULTS['passage']['alpha'])  #: default alpha of the hit-order side condition

LOW_FIRST, HIGH_FIRST, NEITHER = 1, 0, -1  #: hit-order replicate outcomes

#: One-sided evaluations that differ from the two-sided event definitions.
BAD_DEVIATION = 'B2 checks |X_i| for i in [0, b_N]; i = -1 needs V(-2), which a one-sided environment lacks'
GOOD_DEVIATION = 'G3 checks |X_k| for k in [0, window]; the window is one-sided'


class EnvEventParams(object):
    """
    The parameters of the environment events: a > 1, q > 1 and eps in (0, 1).
    """
    def __init__(self, a: float=float(DEFAULTS['passage']['a']), q: float=float(DEFAULTS['passage']['q']),
                 eps: float=float(DEFAULTS['passage']['eps'])):
        """

        :param a: the level multiplier of the upward passage (a > 1)
        :type a:  ``float``
        :param q: the exponent of b_N (q > 1)
        :type q:  ``float``
        :param eps: the slack (0 < eps < 1)
        :type eps:  ``float``
        """
        if not a > 1:
            raise ValidationException('a must be greater than 1')
        if not q > 1:
            raise ValidationException('q must be greater than 1')
        if not 0 < eps < 1:
            raise ValidationException('eps must lie in (0, 1)')
        self._a = float(a)
        self._q = float(q)
        self._eps = float(eps)

    @property
    def a(self) -> float:
        """
        Get the level multiplier a.

        :rtype: ``float``
        """
        return self._a

    @property
    def q(self) -> float:
        """
        Get the exponent q.

        :rtype: ``float``
        """
        return self._q

    @property
    def eps(self) -> float:
        """
        Get the slack eps.

        :rtype: ``float``
        """
        return self._eps

    def to_dict(self) -> dict:
        return {'a': self._a, 'q': self._q, 'eps': self._eps}


class EventReport(object):
    """
    An event report holds the indicators evaluated on one environment, the values that witness them and notes on
    where the evaluation departs from the two-sided definitions.  Indicators that weren't evaluated are ``None``.
    """
    def __init__(self, big_n: int, flags: dict, witnesses: dict, notes: List[str]=None):
        """

        :param big_n: N
        :type big_n:  ``int``
        :param flags: the indicators, keyed ``'B1'``, ``'B2'``, ``'G1'`` ... ``'G4'``
        :type flags:  ``dict``
        :param witnesses: the auxiliary values (crossing times, b_N, beta_N, gamma, f(N), ...)
        :type witnesses:  ``dict``
        :param notes: deviations from the two-sided definitions
        :type notes:  ``list`` of ``str``
        """
        self._big_n = big_n
        self._flags = dict(flags)
        self._witnesses = dict(witnesses)
        self._notes = list(notes or [])

    @property
    def big_n(self) -> int:
        """
        Get N.

        :rtype: ``int``
        """
        return self._big_n

    @property
    def flags(self) -> dict:
        """
        Get the indicators.

        :rtype: ``dict``
        """
        return dict(self._flags)

    @property
    def witnesses(self) -> dict:
        """
        Get the witness values.

        :rtype: ``dict``
        """
        return dict(self._witnesses)

    @property
    def notes(self) -> List[str]:
        """
        Get the notes on one-sided deviations.

        :rtype: ``list`` of ``str``
        """
        return list(self._notes)

    def _conjunction(self, names: List[str]) -> bool or None:
        values = [self._flags.get(name) for name in names]
        return None if any(value is None for value in values) else all(values)

    @property
    def bad(self) -> bool or None:
        """
        Get B_N = B1 and B2 (``None`` if not evaluated).

        :rtype: ``bool``
        """
        return self._conjunction(['B1', 'B2'])

    @property
    def good(self) -> bool or None:
        """
        Get G_N = G1 and G2 and G3 and G4 (``None`` if not evaluated).

        :rtype: ``bool``
        """
        return self._conjunction(['G1', 'G2', 'G3', 'G4'])

    def merge(self, other: 'EventReport') -> 'EventReport':
        """
        Combine two reports about the same environment and N.

        :rtype: :py:class:`EventReport`
        """
        flags = {**self._flags, **{k: v for k, v in other._flags.items() if v is not None}}
        return EventReport(self._big_n, flags, {**self._witnesses, **other._witnesses}, self._notes + other._notes)

    def to_dict(self) -> dict:
        """
        Get the JSON-ready form of the report.

        :rtype: ``dict``
        """
        return {
            'N': self._big_n,
            'flags': {**self._flags, 'B': self.bad, 'G': self.good},
            'witnesses': self._witnesses,
            'notes': self._notes
        }


def first_passage(env: Environment, level: float, horizon: int) -> int or None:
    """
    Get T(level), the first k in [0, horizon] with V(k) >= level (level > 0) or V(k) <= level (level < 0).

    :param env: the environment
    :type env:  :py:class:`corrwalk.envgen.Environment`
    :param level: the level (not 0)
    :type level:  ``float``
    :param horizon: the last index to look at
    :type horizon:  ``int``
    :return: the passage time, or ``None`` if it is censored (no crossing up to the horizon)
    :rtype:  ``int`` or ``None``
    :raises LevelZeroException: if the level is 0
    """
    if level == 0:
        raise LevelZeroException('a first passage needs a nonzero level')
    if horizon < 0:
        raise ValidationException('the horizon must be nonnegative')
    v = env.potential(0, horizon)
    crossed = v >= level if level > 0 else v <= level
    first = int(np.argmax(crossed))
    return first if crossed[first] else None


def _before(t: int or None, u: int or None) -> bool:
    # t < u with a censored (None) passage read as +infinity; infinity is never before infinity.
    if t is None:
        return False
    return u is None or t < u


def _log_log(big_n: int) -> float:
    return math.log(math.log(big_n))


def hit_order_horizon(x: float, hurst: float, horizon_factor: float=HORIZON_FACTOR) -> int:
    """
    Get the horizon ceil(horizon_factor * x^(1/H) * (log x)^2) a hit-order replicate looks at, and at least 1.

    :rtype: ``int``
    """
    return max(1, int(math.ceil(horizon_factor * x ** (1.0 / hurst) * math.log(x) ** 2)))


def _hit_order_replicate(model: CovarianceModel, x: float, y: float, horizon: int, seed: int) -> int:
    env = build_environment(model, horizon, split_seed(seed, ENV_STREAM))
    low = first_passage(env, -x, horizon)
    high = first_passage(env, y, horizon)
    if low is None and high is None:
        return NEITHER
    return LOW_FIRST if _before(low, high) else HIGH_FIRST


class HitOrderEstimate(namedtuple('HitOrderEstimate', ['estimate', 'stderr', 'complement', 'censored', 'reps',
                                                       'horizon', 'y_above_e', 'alpha_condition'])):
    """
    The estimate of P[T(-x) < T(y)], the fraction of replicates that crossed y first (``complement``) and the number
    that crossed neither level (``censored``, counted as "not -x first" in the estimate).  ``y_above_e`` and
    ``alpha_condition`` report the side conditions y > e and log x <= (log(x/y))^alpha.
    """


def hit_order_mc(model: CovarianceModel, x: float, y: float, reps: int, horizon_factor: float=HORIZON_FACTOR,
                 seed: int=0, workers: int=1, alpha: float=ALPHA) -> HitOrderEstimate:
    """
    Estimate the probability that the potential crosses -x strictly before it crosses y.

    :param model: the covariance model
    :type model:  :py:class:`corrwalk.covariance.CovarianceModel`
    :param x: the lower level's distance (x > y)
    :type x:  ``float``
    :param y: the upper level (y > 0)
    :type y:  ``float``
    :param reps: the number of environments
    :type reps:  ``int``
    :param horizon_factor: scales the horizon x^(1/H) (log x)^2
    :type horizon_factor:  ``float``
    :param seed: the master seed
    :type seed:  ``int``
    :param workers: the number of worker processes
    :type workers:  ``int``
    :param alpha: the exponent of the reported side condition
    :type alpha:  ``float``
    :rtype: :py:class:`HitOrderEstimate`
    """
    if not y > 0:
        raise ValidationException('y must be positive')
    if not x > y:
        raise ValidationException('x must be greater than y')
    if reps < 1:
        raise ValidationException('reps must be at least 1')
    horizon = hit_order_horizon(x, model.hurst, horizon_factor)
    outcomes = np.array(ReplicatePool(workers).replicate(_hit_order_replicate, (model, x, y, horizon), seed, reps))
    low_first = int(np.count_nonzero(outcomes == LOW_FIRST))
    high_first = int(np.count_nonzero(outcomes == HIGH_FIRST))
    estimate = low_first / reps
    return HitOrderEstimate(
        estimate=estimate,
        stderr=binomial_stderr(estimate, reps),
        complement=high_first / reps,
        censored=reps - low_first - high_first,
        reps=reps,
        horizon=horizon,
        y_above_e=y > math.e,
        alpha_condition=math.log(x) <= math.log(x / y) ** alpha)


def _persistence_replicate(model: CovarianceModel, n: int, barrier: float, seed: int) -> int:
    env = build_environment(model, n, split_seed(seed, ENV_STREAM))
    return int(np.max(env.potential(1, n)) <= barrier)


def potential_persistence_mc(model: CovarianceModel, n: int, reps: int, seed: int, barrier: float=0.0,
                             workers: int=1) -> Estimate:
    """
    Estimate P[max_{k=1..n} V(k) <= barrier] over fresh environments.

    :param model: the covariance model
    :type model:  :py:class:`corrwalk.covariance.CovarianceModel`
    :param n: the number of steps (at least 1)
    :type n:  ``int``
    :param reps: the number of environments
    :type reps:  ``int``
    :param seed: the master seed
    :type seed:  ``int``
    :param barrier: the barrier
    :type barrier:  ``float``
    :param workers: the number of worker processes
    :type workers:  ``int``
    :rtype: :py:class:`corrwalk.engine.Estimate`
    """
    if n < 1 or reps < 1:
        raise ValidationException('n and reps must be at least 1')
    stayed = ReplicatePool(workers).replicate(_persistence_replicate, (model, n, barrier), seed, reps)
    p = float(np.sum(stayed)) / reps
    return Estimate(p, binomial_stderr(p, reps), reps, 0)


def event_bad(env: Environment, big_n: int, params: EnvEventParams) -> EventReport:
    """
    Evaluate B_N = B1 and B2 on an environment, with

        B1 = {T(a log log N) <= b_N <= T(-(1 - eps)/2 log N)}
        B2 = {|V(i) - V(i-1)| <= (1/2) log log N for every i in [0, b_N]}

    Passages that don't happen by b_N count as +infinity.

    :param env: the environment (covering [-1, b_N], with a model)
    :type env:  :py:class:`corrwalk.envgen.Environment`
    :param big_n: N (at least 16)
    :type big_n:  ``int``
    :param params: the event parameters
    :type params:  :py:class:`EnvEventParams`
    :rtype: :py:class:`EventReport`
    """
    if env.model is None:
        raise ValidationException('event indicators need an environment that knows its covariance model')
    b_n = b_index(env.model, big_n, params.q)
    if env.n < b_n:
        raise EnvironmentTooShortException(
            'B_N needs the environment up to b_N = {b}'.format(b=b_n), index=b_n)
    log_n = math.log(big_n)
    log_log_n = _log_log(big_n)
    t_up = first_passage(env, params.a * log_log_n, b_n)
    t_down = first_passage(env, -(1.0 - params.eps) / 2.0 * log_n, b_n)
    max_abs_x = float(np.max(np.abs(env.x[:b_n + 1])))
    flags = {
        'B1': t_up is not None and t_up <= b_n and (t_down is None or t_down >= b_n),
        'B2': max_abs_x <= 0.5 * log_log_n
    }
    witnesses = {'b_N': b_n, 'T_up': t_up, 'T_down': t_down, 'max_abs_x_bad': max_abs_x}
    return EventReport(big_n, flags, witnesses, [BAD_DEVIATION])


def good_window(big_n: int, hurst: float, eps: float) -> float:
    """
    Get the window (log N)^((1 + eps)/H) of the good-environment events.

    :rtype: ``float``
    """
    return math.log(big_n) ** ((1.0 + eps) / hurst)


def kappa_env(hurst: float) -> float:
    """
    Get kappa = 5 (2/H)^2, the constant of f(N).

    :rtype: ``float``
    """
    return 5.0 * (2.0 / hurst) ** 2


def f_level(big_n: int, hurst: float) -> float:
    """
    Get f(N) = 1 / (kappa (log log N)^2).

    :rtype: ``float``
    """
    return 1.0 / (kappa_env(hurst) * _log_log(big_n) ** 2)


def event_good(env: Environment, big_n: int, eps: float) -> EventReport:
    """
    Evaluate G_N = G1 and G2 and G3 and G4 on an environment, with gamma = T(1) and

        G1 = {beta_N := T(-2 log N) < gamma}
        G2 = {gamma < (log N)^((1 + eps)/H)}
        G3 = {|X_k| <= sqrt((4 - 2H)(1 + eps)/H log log N) for k in [0, (log N)^((1 + eps)/H)]}
        G4 = {(sum_{k=0}^{beta_N - 1} e^{V(k)})^{-1} >= f(N)}

    The passages are searched over the whole environment.

    :param env: the environment (covering [0, ceil((log N)^((1 + eps)/H))], with a model)
    :type env:  :py:class:`corrwalk.envgen.Environment`
    :param big_n: N (at least 16)
    :type big_n:  ``int``
    :param eps: the slack, in (0, 1)
    :type eps:  ``float``
    :rtype: :py:class:`EventReport`
    """
    if env.model is None:
        raise ValidationException('event indicators need an environment that knows its covariance model')
    if big_n < 16:
        raise ValidationException('N must be at least 16')
    if not 0 < eps < 1:
        raise ValidationException('eps must lie in (0, 1)')
    hurst = env.model.hurst
    window = good_window(big_n, hurst, eps)
    if env.n < math.ceil(window):
        raise EnvironmentTooShortException(
            'G_N needs the environment up to {w}'.format(w=math.ceil(window)), index=math.ceil(window))
    log_log_n = _log_log(big_n)
    gamma = first_passage(env, 1.0, env.n)
    beta_n = first_passage(env, -2.0 * math.log(big_n), env.n)
    threshold = math.sqrt((4.0 - 2.0 * hurst) * (1.0 + eps) / hurst * log_log_n)
    max_abs_x = float(np.max(np.abs(env.x[:int(math.floor(window)) + 1])))
    f_n = f_level(big_n, hurst)
    reciprocal = None
    if beta_n is not None:
        # beta_N >= 1 since V(0) = 0 lies above -2 log N.
        reciprocal = float(np.exp(-logsumexp(env.potential(0, beta_n - 1))))
    flags = {
        'G1': _before(beta_n, gamma),
        'G2': gamma is not None and gamma < window,
        'G3': max_abs_x <= threshold,
        'G4': reciprocal is not None and reciprocal >= f_n
    }
    witnesses = {
        'beta_N': beta_n,
        'gamma': gamma,
        'f_N': f_n,
        'window': window,
        'g3_threshold': threshold,
        'max_abs_x_good': max_abs_x,
        'reciprocal_sum': reciprocal
    }
    return EventReport(big_n, flags, witnesses, [GOOD_DEVIATION])


def bad_environment_persistence_bound(big_n: int, a: float) -> float:
    """
    Get 2 / (log N)^(a - 1), the bound on P_omega[tau(-1) > N] shared by every bad environment (for large N).

    :rtype: ``float``
    """
    return 2.0 / math.log(big_n) ** (a - 1.0)


def good_environment_persistence_floor(env: Environment, report: EventReport) -> float or None:
    """
    Get (1/2) (1 + sum_{k=0}^{beta_N - 1} e^{V(k) - V(-1)})^{-1}, the lower bound on P_omega[tau(-1) > N] that a good
    environment enjoys (for large N).  ``None`` if the report has no beta_N.

    :rtype: ``float``
    """
    beta_n = report.witnesses.get('beta_N')
    if beta_n is None:
        return None
    v = env.potential(-1, beta_n - 1)
    # 1 + sum e^{V(k) - V(-1)} = sum_{k=-1}^{beta_N - 1} e^{V(k) - V(-1)}
    return 0.5 * float(np.exp(-(logsumexp(v) - v[0])))


def event_environment_length(model: CovarianceModel, big_n: int, params: EnvEventParams) -> int:
    """
    Get how far an environment must reach for both event reports.

    :rtype: ``int``
    """
    return max(b_index(model, big_n, params.q), int(math.ceil(good_window(big_n, model.hurst, params.eps))), 1)


def evaluate_events(env: Environment, big_n: int, params: EnvEventParams) -> EventReport:
    """
    Evaluate both the bad and the good events on an environment.  The witnesses also carry the persistence bound of
    a bad environment (``persistence_bound``) and the floor of a good one (``persistence_floor``), each ``None`` when
    its event doesn't hold.

    :rtype: :py:class:`EventReport`
    """
    report = event_bad(env, big_n, params).merge(event_good(env, big_n, params.eps))
    bounds = {
        'persistence_bound': bad_environment_persistence_bound(big_n, params.a) if report.bad else None,
        'persistence_floor': good_environment_persistence_floor(env, report) if report.good else None
    }
    return report.merge(EventReport(big_n, {}, bounds))


def _events_replicate(model: CovarianceModel, big_n: int, params: EnvEventParams, length: int, seed: int) -> dict:
    env = build_environment(model, length, split_seed(seed, ENV_STREAM))
    record = evaluate_events(env, big_n, params).to_dict()
    record['seed'] = seed
    return record


class EventFrequency(namedtuple('EventFrequency', ['bad_complement', 'good', 'reports'])):
    """
    Empirical P(B_N^c) and P(G_N), with the per-environment reports behind them.
    """


def event_frequency_mc(model: CovarianceModel, big_n: int, params: EnvEventParams, reps: int, seed: int,
                       workers: int=1) -> EventFrequency:
    """
    Estimate P(B_N^c) and P(G_N) over fresh environments.

    :rtype: :py:class:`EventFrequency`
    """
    if reps < 1:
        raise ValidationException('reps must be at least 1')
    length = event_environment_length(model, big_n, params)
    reports = ReplicatePool(workers).replicate(_events_replicate, (model, big_n, params, length), seed, reps)
    bad_c = sum(1 for report in reports if not report['flags']['B']) / reps
    good = sum(1 for report in reports if report['flags']['G']) / reps
    return EventFrequency(
        bad_complement=Estimate(bad_c, binomial_stderr(bad_c, reps), reps, 0),
        good=Estimate(good, binomial_stderr(good, reps), reps, 0),
        reports=reports)
