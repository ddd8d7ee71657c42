#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
.. currentmodule:: corrwalk.engine
.. moduleauthor:: Pat Daburu <pat@daburu.net>

Reproducible replicates: seed splitting, counter-based generators and a pool that runs independent work items on any
number of worker processes without changing a single bit of the result.

Seed splitting
--------------

Replicate ``i`` derives its seed from a parent seed with SplitMix64's finalizer::

    z = (parent XOR (i * 0x9E3779B97F4A7C15)) mod 2**64
    z = ((z XOR (z >> 30)) * 0xBF58476D1CE4E5B9) mod 2**64
    z = ((z XOR (z >> 27)) * 0x94D049BB133111EB) mod 2**64
    seed = z XOR (z >> 31)

Any language with 64-bit unsigned arithmetic reproduces the same seeds.  Random numbers come from numpy's ``Philox``
bit generator keyed by the seed, so a trajectory replays identically wherever it runs.
"""

import math
import multiprocessing
from collections import namedtuple
from typing import Callable, Iterable, List, Sequence, Tuple

import numpy as np

from .logging import loggable_class

MASK64: int = (1 << 64) - 1  #: 64-bit unsigned mask
GOLDEN_GAMMA: int = 0x9E3779B97F4A7C15  #: the odd constant that spreads replicate indices
ENV_STREAM: int = 0  #: child index of a replicate seed that samples its environment
DYNAMICS_STREAM: int = 1  #: child index of a replicate seed that drives its walk or branching process


class Estimate(namedtuple('Estimate', ['estimate', 'stderr', 'reps', 'censored'])):
    """
    A Monte Carlo estimate with its standard error, the number of replicates behind it and how many of them were
    censored.
    """


def split_seed(seed: int, index: int) -> int:
    """
    Derive the seed of the ``index``-th child of ``seed``.

    :param seed: the parent seed (64-bit)
    :type seed:  ``int``
    :param index: the child index
    :type index:  ``int``
    :return: the child seed
    :rtype:  ``int``
    """
    z = (int(seed) ^ ((int(index) * GOLDEN_GAMMA) & MASK64)) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def generator(seed: int) -> np.random.Generator:
    """
    Create a counter-based random generator keyed by a 64-bit seed.

    :param seed: the seed
    :type seed:  ``int``
    :rtype: :py:class:`numpy.random.Generator`
    """
    return np.random.Generator(np.random.Philox(key=int(seed) & MASK64))


def mean_and_stderr(values: Sequence[float]) -> Tuple[float, float]:
    """
    Get the sample mean and its standard error.  The mean uses numpy's pairwise summation, so it doesn't depend on how
    the values were produced, only on their order.

    :param values: the replicate values
    :type values:  sequence of ``float``
    :rtype: ``(float, float)``
    """
    arr = np.asarray(values, dtype=float)
    mean = float(np.sum(arr) / arr.size)
    if arr.size < 2:
        return mean, 0.0
    return mean, float(np.std(arr, ddof=1) / math.sqrt(arr.size))


def binomial_stderr(p: float, n: int) -> float:
    """
    Get the standard error of a frequency ``p`` observed over ``n`` trials.

    :rtype: ``float``
    """
    return math.sqrt(max(p * (1.0 - p), 0.0) / n) if n > 0 else 0.0


def _call(item):
    # Module level so the pool can pickle it.
    fn, args, seed = item
    return fn(*args, seed)


@loggable_class()
class ReplicatePool(object):
    """
    A replicate pool runs a function once per seed and hands the results back in seed order, which makes the output
    independent of the number of workers.
    """
    def __init__(self, workers: int=1):
        """

        :param workers: the number of worker processes (``1`` runs everything in this process)
        :type workers:  ``int``
        """
        self._workers = max(int(workers), 1)

    @property
    def workers(self) -> int:
        """
        Get the number of worker processes.

        :rtype: ``int``
        """
        return self._workers

    def map(self, fn: Callable, args: tuple, seeds: Iterable[int]) -> List:
        """
        Evaluate ``fn(*args, seed)`` for every seed.

        :param fn: a module-level (picklable) function whose last argument is the replicate seed
        :type fn:  ``callable``
        :param args: the leading arguments shared by every replicate
        :type args:  ``tuple``
        :param seeds: the replicate seeds
        :type seeds:  iterable of ``int``
        :return: the results, in the order of the seeds
        :rtype:  ``list``
        """
        items = [(fn, args, seed) for seed in seeds]
        if self._workers == 1 or len(items) < 2:
            return [_call(item) for item in items]
        chunksize = max(1, math.ceil(len(items) / (self._workers * 4)))
        self.logger.debug('Dispatching %d replicates of %s to %d workers.', len(items), fn.__name__, self._workers)
        with multiprocessing.Pool(processes=self._workers) as pool:
            # 'map' keeps the input order no matter which worker finishes first.
            return pool.map(_call, items, chunksize=chunksize)

    def replicate(self, fn: Callable, args: tuple, seed: int, reps: int) -> List:
        """
        Run ``reps`` replicates of ``fn`` with seeds ``split_seed(seed, i)`` for ``i`` in ``0..reps-1``.

        :rtype: ``list``
        """
        return self.map(fn, args, (split_seed(seed, i) for i in range(reps)))
