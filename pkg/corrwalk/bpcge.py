#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
.. currentmodule:: corrwalk.bpcge
.. moduleauthor:: Pat Daburu <pat@daburu.net>

The critical branching process in a correlated Gaussian environment: generation n reproduces with geometric offspring
of parameter omega_n.  Trajectories come either from direct simulation or from counting the up-steps of a walk that was
absorbed at -1.
"""

import math
from collections import namedtuple
from typing import Iterable, List, Sequence

import numpy as np

from .config import DEFAULTS
from .engine import binomial_stderr, generator
from .envgen import Environment
from .errors import AllCensoredException, PathCensoredException, ValidationException

MAX_TOTAL: int = int(DEFAULTS['bpcge']['max_total'])  #: the default cap on the total population
NEGBIN_THRESHOLD: int = 64  #: larger generations draw their offspring total from the negative binomial law
MAX_MEAN: float = float(2 ** 60)  #: the largest expected generation size a trajectory may step into


class Caps(namedtuple('Caps', ['max_generations', 'max_total'])):
    """
    Limits on a simulated trajectory.  A trajectory that reaches either one is censored.
    """
    def __new__(cls, max_generations: int, max_total: int=MAX_TOTAL):
        if max_generations < 0 or max_total < 1:
            raise ValidationException('caps must be nonnegative (and max_total positive)')
        return super().__new__(cls, int(max_generations), int(max_total))


class BranchingTrajectory(object):
    """
    A branching trajectory is the sequence of generation sizes Z_0 = 1, Z_1, ... up to extinction (or up to the point
    where it was censored).
    """
    def __init__(self, z: Sequence[int], censored: bool=False):
        """

        :param z: the generation sizes, starting with Z_0 = 1
        :type z:  sequence of ``int``
        :param censored: ``True`` if the trajectory was cut short before extinction
        :type censored:  ``bool``
        """
        self._z = np.array(z, dtype=np.int64)
        if self._z.size == 0 or self._z[0] != 1:
            raise ValidationException('a trajectory starts with Z_0 = 1')
        self._z.setflags(write=False)
        self._censored = bool(censored)
        zeros = np.flatnonzero(self._z[1:] == 0)
        self._extinction_time = None if censored or zeros.size == 0 else int(zeros[0]) + 1
        if not censored and self._extinction_time is None:
            raise ValidationException('an uncensored trajectory must end in extinction')
        self._total = int(np.sum(self._z))
        self._max_pop = int(np.max(self._z))

    @property
    def z(self) -> np.ndarray:
        """
        Get the generation sizes.

        :rtype: :py:class:`numpy.ndarray`
        """
        return self._z

    @property
    def censored(self) -> bool:
        """
        Was the trajectory cut short before extinction?

        :rtype: ``bool``
        """
        return self._censored

    @property
    def extinction_time(self) -> int or None:
        """
        Get the first generation n >= 1 with Z_n = 0 (``None`` if censored).

        :rtype: ``int``
        """
        return self._extinction_time

    @property
    def generations(self) -> int:
        """
        Get the number of generations observed after the first one (the last index of ``z``).

        :rtype: ``int``
        """
        return self._z.size - 1

    @property
    def total(self) -> int:
        """
        Get the total population (a lower bound if censored).

        :rtype: ``int``
        """
        return self._total

    @property
    def max_pop(self) -> int:
        """
        Get the largest generation (a lower bound if censored).

        :rtype: ``int``
        """
        return self._max_pop

    def to_record(self, seed: int=None) -> dict:
        """
        Get the JSON-lines record of the trajectory: ``{"seed", "T", "total", "max", "censored"}``.

        :rtype: ``dict``
        """
        return {
            'seed': seed,
            'T': self._extinction_time,
            'total': self._total,
            'max': self._max_pop,
            'censored': self._censored
        }


def sample_offspring(omega: float, rng: np.random.Generator, size: int=None):
    """
    Draw the offspring count of one individual: geometric on {0, 1, 2, ...} with P(O = m) = (1 - omega) omega^m, by
    inversion O = floor(log U / log omega).  The mean is omega / (1 - omega) = e^{-x}.

    :param omega: the parameter, in (0, 1)
    :type omega:  ``float``
    :param rng: the random generator
    :type rng:  :py:class:`numpy.random.Generator`
    :param size: draw this many independent counts at once (``None`` for a single ``int``)
    :type size:  ``int``
    :rtype: ``int`` or :py:class:`numpy.ndarray`
    """
    if not 0.0 < omega < 1.0:
        raise ValidationException('omega must lie in (0, 1)')
    # 1 - random() lies in (0, 1], so the logarithm is finite.
    u = 1.0 - rng.random(size)
    counts = np.floor(np.log(u) / math.log(omega)).astype(np.int64)
    return int(counts) if size is None else counts


def simulate(env: Environment, caps: Caps, rng_seed: int) -> BranchingTrajectory:
    """
    Simulate Z_0 = 1, Z_{n+1} = O_{n,1} + ... + O_{n,Z_n} with geometric offspring of parameter omega_n.  A generation
    of at most :py:data:`NEGBIN_THRESHOLD` parents draws one uniform per individual; a larger one draws its sum of
    geometric counts at once from the negative binomial law NegBin(Z_n, 1 - omega_n).  The trajectory is censored if
    it outlives ``caps.max_generations``, the environment, or its total exceeds ``caps.max_total``.

    :param env: the environment
    :type env:  :py:class:`corrwalk.envgen.Environment`
    :param caps: the limits
    :type caps:  :py:class:`Caps`
    :param rng_seed: the seed
    :type rng_seed:  ``int``
    :rtype: :py:class:`BranchingTrajectory`
    """
    rng = generator(rng_seed)
    z: List[int] = [1]
    total = 1
    generation = 0
    while z[-1] > 0:
        if generation >= caps.max_generations or generation > env.n or total > caps.max_total:
            return BranchingTrajectory(z, censored=True)
        omega = float(env.omega[generation])
        parents = z[-1]
        if parents <= NEGBIN_THRESHOLD:
            children = int(np.sum(sample_offspring(omega, rng, size=parents)))
        else:
            # A generation whose mean doesn't fit in 64 bits has certainly passed any representable cap.
            if parents > MAX_MEAN * math.exp(float(env.x[generation])):
                return BranchingTrajectory(z, censored=True)
            if not 0.0 < omega < 1.0:
                raise ValidationException('omega must lie in (0, 1)')
            children = int(rng.negative_binomial(parents, 1.0 - omega))
        z.append(children)
        total += children
        generation += 1
    return BranchingTrajectory(z)


def from_walk(env: Environment, walk_path: Sequence[int]) -> BranchingTrajectory:
    """
    Build the trajectory of a walk absorbed at -1: Z_0 = 1 and, for n >= 1, Z_n is the number of steps from n - 1 to
    n made before absorption.  Such a trajectory satisfies tau(-1) = 2 (Z_0 + Z_1 + ...) - 1.

    :param env: the environment the walk ran in
    :type env:  :py:class:`corrwalk.envgen.Environment`
    :param walk_path: the positions S_0 = 0, S_1, ..., S_tau = -1
    :type walk_path:  sequence of ``int``
    :rtype: :py:class:`BranchingTrajectory`
    :raises PathCensoredException: if the path doesn't end at -1
    """
    path = np.asarray(walk_path, dtype=np.int64)
    if path.size < 2 or path[0] != 0 or path[-1] != -1:
        raise PathCensoredException('the walk path must start at 0 and end at -1')
    steps = np.diff(path)
    if np.any(np.abs(steps) != 1) or np.any(path[:-1] < 0):
        raise ValidationException('the walk path must take unit steps and stay nonnegative until its last step')
    top = int(np.max(path))
    env.require(0, top)
    # The level reached by each up-step, counted level by level; level top + 1 is never reached, hence the final 0.
    up_levels = path[1:][steps == 1]
    counts = np.bincount(up_levels, minlength=top + 2)
    return BranchingTrajectory(np.concatenate([[1], counts[1:top + 2]]))


class TailStatistics(object):
    """
    Tail statistics are the empirical survival curves P[T > N], P[sum Z > N] and P[sup Z > N] of a collection of
    trajectories.  A censored trajectory counts as exceeding N only when its observed part already does; otherwise it
    is a lower bound, counted as not exceeding and reported in the ``censored`` column.
    """
    def __init__(self, trajectories: Iterable[BranchingTrajectory], grid: Sequence[int]=None):
        """

        :param trajectories: the trajectories
        :type trajectories:  iterable of :py:class:`BranchingTrajectory`
        :param grid: the values of N (defaults to 1, 2, 4, ... up to the largest observed value)
        :type grid:  sequence of ``int``
        :raises AllCensoredException: if every trajectory is censored (or there are none)
        """
        trajectories = list(trajectories)
        if not trajectories or all(t.censored for t in trajectories):
            raise AllCensoredException('tail statistics need at least one trajectory that went extinct')
        self._reps = len(trajectories)
        self._censored = sum(1 for t in trajectories if t.censored)
        # A censored trajectory is still alive at its last observed generation g, so T >= g + 1.
        extinction = np.array([t.generations + 1 if t.censored else t.extinction_time for t in trajectories])
        total = np.array([t.total for t in trajectories])
        max_pop = np.array([t.max_pop for t in trajectories])
        censored = np.array([t.censored for t in trajectories])
        if grid is None:
            top = int(max(extinction.max(), total.max()))
            grid = [1 << k for k in range(max(top, 1).bit_length())]
        self._grid = [int(n) for n in grid]
        self._curves = {
            'extinction_time': self._curve(extinction, censored),
            'total': self._curve(total, censored),
            'max': self._curve(max_pop, censored)
        }

    def _curve(self, values: np.ndarray, censored: np.ndarray) -> List[tuple]:
        curve = []
        for n in self._grid:
            exceeds = values > n
            p = float(np.count_nonzero(exceeds)) / self._reps
            undetermined = int(np.count_nonzero(censored & ~exceeds))
            curve.append((n, p, binomial_stderr(p, self._reps), self._reps, undetermined))
        return curve

    @property
    def grid(self) -> List[int]:
        """
        Get the values of N.

        :rtype: ``list`` of ``int``
        """
        return self._grid

    @property
    def reps(self) -> int:
        """
        Get the number of trajectories.

        :rtype: ``int``
        """
        return self._reps

    @property
    def censored(self) -> int:
        """
        Get the number of censored trajectories.

        :rtype: ``int``
        """
        return self._censored

    def curve(self, name: str) -> List[tuple]:
        """
        Get a survival curve as (N, estimate, stderr, reps, censored) rows.

        :param name: ``'extinction_time'``, ``'total'`` or ``'max'``
        :type name:  ``str``
        :rtype: ``list`` of ``tuple``
        """
        return self._curves[name]


def tail_statistics(trajectories: Iterable[BranchingTrajectory], grid: Sequence[int]=None) -> TailStatistics:
    """
    Get the empirical survival curves of extinction time, total population and maximum population.

    :rtype: :py:class:`TailStatistics`
    """
    return TailStatistics(trajectories=trajectories, grid=grid)
