#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
.. currentmodule:: corrwalk.walk
.. moduleauthor:: Pat Daburu <pat@daburu.net>

The walk in a fixed (quenched) environment: exact hitting and survival probabilities from the potential, the exit-time
bound, direct simulation and an exact persistence oracle.
"""

from collections import namedtuple
from enum import Enum

import numpy as np
from scipy.linalg import solve_banded
from scipy.special import logsumexp

from .engine import generator
from .envgen import Environment
from .errors import IndexOutOfEnvironmentException, ValidationException

BLOCK: int = 1024  #: uniforms are drawn in blocks of this size (one per step, consumed in order)


class HitKind(Enum):
    """
    How a walk ended.
    """
    HIT_LOW = 'HIT_LOW'    #: The walk reached the low boundary first.
    HIT_HIGH = 'HIT_HIGH'  #: The walk reached the high boundary first.
    CENSORED = 'CENSORED'  #: The walk ran out of steps first.


class HitQuery(namedtuple('HitQuery', ['low', 'start', 'high'])):
    """
    A walk started at ``start`` and stopped at ``low`` or ``high`` (with low < start < high).
    """
    def __new__(cls, low: int, start: int, high: int):
        if not low < start < high:
            raise ValidationException('a hit query needs low < start < high (got {low}, {start}, {high})'.format(
                low=low, start=start, high=high))
        return super().__new__(cls, int(low), int(start), int(high))


class HitOutcome(namedtuple('HitOutcome', ['kind', 'time', 'path'])):
    """
    The result of a walk: how it ended, after how many steps and (if it was recorded) the visited positions.
    """
    def __new__(cls, kind: HitKind, time: int, path: np.ndarray=None):
        return super().__new__(cls, kind, time, path)


def _require_jump_sites(env: Environment, query: HitQuery):
    # The walk reads omega on the open interval (low, high).
    if query.low + 1 < 0:
        raise IndexOutOfEnvironmentException('the walk needs omega from index 0 on', index=query.low + 1)
    env.require(query.low + 1, query.high - 1)


def _log_sum_exp_v(env: Environment, lo: int, hi: int) -> float:
    # log sum_{k=lo}^{hi} e^{V(k)}, shifted by the running maximum so V in the hundreds doesn't overflow.
    return float(logsumexp(env.potential(lo, hi)))


def hit_prob(env: Environment, query: HitQuery) -> float:
    """
    Get the probability, starting at ``query.start``, of hitting ``query.high`` before ``query.low``:

        (sum_{k=low}^{start-1} e^{V(k)}) / (sum_{k=low}^{high-1} e^{V(k)})

    :param env: the environment
    :type env:  :py:class:`corrwalk.envgen.Environment`
    :param query: the boundaries and the start
    :type query:  :py:class:`HitQuery`
    :rtype: ``float``
    :raises IndexOutOfEnvironmentException: if the environment doesn't cover [low, high - 1]
    """
    env.require(query.low, query.high - 1)
    return float(np.exp(_log_sum_exp_v(env, query.low, query.start - 1) -
                        _log_sum_exp_v(env, query.low, query.high - 1)))


def hit_prob_low(env: Environment, query: HitQuery) -> float:
    """
    Get the probability of hitting ``query.low`` first, computed on its own as
    (sum_{k=start}^{high-1} e^{V(k)}) / (sum_{k=low}^{high-1} e^{V(k)}).

    :rtype: ``float``
    """
    env.require(query.low, query.high - 1)
    return float(np.exp(_log_sum_exp_v(env, query.start, query.high - 1) -
                        _log_sum_exp_v(env, query.low, query.high - 1)))


def survival_prob(env: Environment, big_n: int) -> float:
    """
    Get the probability, starting at 0, of reaching N before -1:
    e^{V(-1)} (sum_{k=-1}^{N-1} e^{V(k)})^{-1}.

    :param env: the environment
    :type env:  :py:class:`corrwalk.envgen.Environment`
    :param big_n: N (at least 1)
    :type big_n:  ``int``
    :rtype: ``float``
    """
    return hit_prob(env, HitQuery(-1, 0, big_n))


def hit_prob_linear_solve(env: Environment, query: HitQuery) -> float:
    """
    Get the same probability as :py:func:`hit_prob` by solving the harmonic equations of the absorbing chain,
    h(low) = 0, h(high) = 1, h(i) = omega_i h(i+1) + (1 - omega_i) h(i-1).  This is an oracle, not a shortcut.

    :rtype: ``float``
    """
    _require_jump_sites(env, query)
    sites = np.arange(query.low + 1, query.high)
    omega = env.omega[sites]
    omega_c = env.omega_complement[sites]
    size = sites.size
    # Banded form of: h(i) - omega_i h(i+1) - (1 - omega_i) h(i-1) = 0, boundary values moved to the right side.
    ab = np.zeros((3, size))
    ab[0, 1:] = -omega[:-1]
    ab[1, :] = 1.0
    ab[2, :-1] = -omega_c[1:]
    rhs = np.zeros(size)
    rhs[-1] = omega[-1]
    h = solve_banded((1, 1), ab, rhs)
    return float(h[query.start - query.low - 1])


def exit_time_bound(env: Environment, g: int, h: int, i: int) -> float:
    """
    Bound the expected exit time from (g, i) of a walk started at h:

        E^h[tau(g) ^ tau(i)] <= sum_{k=h}^{i-1} sum_{l=g}^{k} (1 + e^{X_l}) e^{V(k) - V(l)}

    The noise X_{-1} isn't part of a one-sided environment; for l = g = -1 it is taken to be 0 (the l = g factor only
    has to be at least 1 for the bound to hold).

    :rtype: ``float``
    """
    if not g < h < i:
        raise ValidationException('the exit-time bound needs g < h < i')
    v = env.potential(g, i - 1)
    x = np.array([0.0 if l < 0 else env.x[l] for l in range(g, i)])
    # log of (1 + e^{X_l}) e^{-V(l)}, for every l in [g, i - 1]
    log_left = np.logaddexp(0.0, x) - v
    # Running log-sum over l <= k, then add V(k) and sum over k >= h.
    cumulative = np.logaddexp.accumulate(log_left)
    terms = cumulative[h - g:] + v[h - g:]
    return float(np.exp(logsumexp(terms)))


def simulate_walk(env: Environment, query: HitQuery, horizon: int, rng_seed: int,
                  record_path: bool=False) -> HitOutcome:
    """
    Run the walk from ``query.start`` until it hits ``query.low`` or ``query.high`` or takes ``horizon`` steps.  Each
    step consumes one uniform of a counter-based generator, so a run replays exactly from its seed.

    :param env: the environment
    :type env:  :py:class:`corrwalk.envgen.Environment`
    :param query: the boundaries and the start
    :type query:  :py:class:`HitQuery`
    :param horizon: the most steps to take
    :type horizon:  ``int``
    :param rng_seed: the seed
    :type rng_seed:  ``int``
    :param record_path: keep the visited positions in the outcome?
    :type record_path:  ``bool``
    :rtype: :py:class:`HitOutcome`
    """
    _require_jump_sites(env, query)
    rng = generator(rng_seed)
    omega = env.omega
    position = query.start
    path = [position] if record_path else None
    time = 0
    uniforms = None
    while time < horizon:
        offset = time % BLOCK
        if offset == 0:
            uniforms = rng.random(BLOCK)
        position += 1 if uniforms[offset] < omega[position] else -1
        time += 1
        if record_path:
            path.append(position)
        if position == query.low or position == query.high:
            kind = HitKind.HIT_LOW if position == query.low else HitKind.HIT_HIGH
            return HitOutcome(kind, time, np.array(path) if record_path else None)
    return HitOutcome(HitKind.CENSORED, time, np.array(path) if record_path else None)


def persistence_profile(env: Environment, big_n: int) -> (float, float):
    """
    Run the exact forward recursion of the walk from 0 for N steps with -1 absorbing.  The distribution lives in one
    vector of length N + 1, shifted in place each step.

    :param env: the environment (covering [0, N])
    :type env:  :py:class:`corrwalk.envgen.Environment`
    :param big_n: N
    :type big_n:  ``int``
    :return: the mass still alive (P[min_{k<=N} S_k > -1]) and the mass absorbed at -1
    :rtype:  ``(float, float)``
    """
    env.require(0, big_n)
    omega = env.omega[:big_n + 1]
    omega_c = env.omega_complement[:big_n + 1]
    alive = np.zeros(big_n + 1)
    alive[0] = 1.0
    up = np.empty(big_n + 1)
    absorbed = 0.0
    for step in range(big_n):
        # After 'step' steps the walk sits at most at 'step', so alive[top] is 0 here.
        top = step + 1
        absorbed += alive[0] * omega_c[0]
        np.multiply(alive[:top], omega[:top], out=up[:top])
        np.multiply(alive[1:top + 1], omega_c[1:top + 1], out=alive[:top])
        alive[top] = 0.0
        alive[1:top + 1] += up[:top]
    return float(np.sum(alive)), absorbed


def persistence_dp(env: Environment, big_n: int) -> float:
    """
    Get P_omega[min_{k=1..N} S_k > -1] exactly (up to floating point).  S_0 = 0 doesn't count as a visit.

    :param env: the environment (covering [0, N])
    :type env:  :py:class:`corrwalk.envgen.Environment`
    :param big_n: N
    :type big_n:  ``int``
    :rtype: ``float``
    """
    return persistence_profile(env, big_n)[0]
