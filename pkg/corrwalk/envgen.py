#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
.. currentmodule:: corrwalk.envgen
.. moduleauthor:: Pat Daburu <pat@daburu.net>

Sample the environment: a stationary Gaussian noise ``X`` with an exact covariance (circulant embedding), the potential
``V`` it builds and the jump probabilities ``omega``.
"""

import csv
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.special import expit

from .config import DEFAULTS
from .covariance import CovarianceModel, Family
from .engine import generator
from .errors import IndexOutOfEnvironmentException, InvalidModelException, NotEmbeddableException
from .logging import loggable_class

TOL_REL: float = float(DEFAULTS['envgen']['tol_rel'])  #: relative tolerance for slightly negative eigenvalues


@loggable_class()
class CirculantEmbedding(object):
    """
    A circulant embedding holds the square roots of the (scaled) eigenvalues of the circulant matrix that extends the
    covariance of ``length`` consecutive noise values.
    """
    def __init__(self, model: CovarianceModel, length: int, tol_rel: float=TOL_REL):
        """

        :param model: the covariance model
        :type model:  :py:class:`CovarianceModel`
        :param length: how many consecutive values a sample will have
        :type length:  ``int``
        :param tol_rel: eigenvalues down to ``-tol_rel`` times the largest one are clamped to 0
        :type tol_rel:  ``float``
        :raises NotEmbeddableException: if an eigenvalue is more negative than that
        """
        self._model = model
        self._length = length
        # The circulant extension wraps around at 'half'.  Round it up to a power of two for the FFT, unless a
        # tabulated covariance doesn't go that far.
        half = 1 << max(length - 2, 0).bit_length()
        if model.family is Family.TABLE and half + 1 > len(model.table):
            half = max(length - 1, 1)
        r = model.autocovariances(half + 1)
        row = np.concatenate([r, r[-2:0:-1]])
        eigenvalues = np.fft.fft(row).real
        largest = float(np.max(eigenvalues))
        smallest = float(np.min(eigenvalues))
        if smallest < -tol_rel * largest:
            raise NotEmbeddableException(
                'the circulant extension of {model} for length {length} has eigenvalue {ev:.3e}'.format(
                    model=model, length=length, ev=smallest),
                min_eigenvalue=smallest)
        negative = eigenvalues < 0
        self._clamped = int(np.count_nonzero(negative))
        if self._clamped:
            self.logger.warning('Clamped %d slightly negative eigenvalues (min %.3e) for %r.',
                                self._clamped, smallest, model)
            eigenvalues[negative] = 0.0
        self._size = row.size
        self._scale = np.sqrt(eigenvalues / self._size)
        self.logger.debug('Built a circulant embedding of size %d for %r.', self._size, model)

    @property
    def model(self) -> CovarianceModel:
        """
        Get the covariance model.

        :rtype: :py:class:`CovarianceModel`
        """
        return self._model

    @property
    def length(self) -> int:
        """
        Get the number of values in a sample.

        :rtype: ``int``
        """
        return self._length

    @property
    def size(self) -> int:
        """
        Get the size of the circulant matrix.

        :rtype: ``int``
        """
        return self._size

    @property
    def clamped(self) -> int:
        """
        Get the number of slightly negative eigenvalues that were clamped to 0.

        :rtype: ``int``
        """
        return self._clamped

    def sample(self, rng: np.random.Generator) -> np.ndarray:
        """
        Draw one sample.

        :param rng: the random generator
        :type rng:  :py:class:`numpy.random.Generator`
        :rtype: :py:class:`numpy.ndarray`
        """
        z = rng.standard_normal((2, self._size))
        # The real part of the transform has exactly the covariance of the circulant (the imaginary part is an
        # independent copy we don't need).
        y = np.fft.fft(self._scale * (z[0] + 1j * z[1]))
        return y.real[:self._length].copy()


@lru_cache(maxsize=64)
def embedding(model: CovarianceModel, length: int) -> CirculantEmbedding:
    """
    Get the (cached) circulant embedding for ``length`` consecutive values of a model.

    :rtype: :py:class:`CirculantEmbedding`
    """
    return CirculantEmbedding(model=model, length=length)


def sample_noise(model: CovarianceModel, n: int, seed: int) -> np.ndarray:
    """
    Sample X_0, ..., X_n, jointly Gaussian with mean 0 and covariance ``cov(model, |i - j|)``.

    :param model: the covariance model
    :type model:  :py:class:`CovarianceModel`
    :param n: the last index (at least 1)
    :type n:  ``int``
    :param seed: the seed; the same (model, n, seed) always gives the same sequence
    :type seed:  ``int``
    :rtype: :py:class:`numpy.ndarray`
    :raises NotEmbeddableException: if the model can't be embedded at this length
    """
    if n < 1:
        raise InvalidModelException('n must be at least 1')
    if model.family is Family.FLAT:
        return np.zeros(n + 1)
    return embedding(model, n + 1).sample(generator(seed))


class Environment(object):
    """
    An environment is one realization of the noise X_0..X_n together with the potential V(-1..n) and the jump
    probabilities omega_0..omega_n.  Its arrays are read-only.
    """
    def __init__(self, x: Sequence[float], model: CovarianceModel=None, seed: int=None):
        """

        :param x: the noise X_0, ..., X_n
        :type x:  sequence of ``float``
        :param model: the covariance model the noise was sampled from (if any)
        :type model:  :py:class:`CovarianceModel`
        :param seed: the seed the noise was sampled with (if any)
        :type seed:  ``int``
        """
        x = np.array(x, dtype=float)
        if x.ndim != 1 or x.size < 1:
            raise InvalidModelException('an environment needs at least one noise value')
        # v is stored from index -1 on: v(-1) = -x_0, v(0) = 0, v(k) = x_1 + ... + x_k.
        v = np.empty(x.size + 1)
        v[0] = -x[0]
        v[1] = 0.0
        np.cumsum(x[1:], out=v[2:])
        self._x = x
        self._v = v
        # omega = 1 / (1 + e^x) and 1 - omega = 1 / (1 + e^-x), both without overflow.
        self._omega = expit(-x)
        self._omega_complement = expit(x)
        for arr in (self._x, self._v, self._omega, self._omega_complement):
            arr.setflags(write=False)
        self._model = model
        self._seed = seed

    @staticmethod
    def from_noise(x: Sequence[float], model: CovarianceModel=None, seed: int=None) -> 'Environment':
        """
        Build an environment from explicit noise (handy for tests).

        :rtype: :py:class:`Environment`
        """
        return Environment(x=x, model=model, seed=seed)

    @property
    def model(self) -> CovarianceModel or None:
        """
        Get the covariance model the noise came from.

        :rtype: :py:class:`CovarianceModel`
        """
        return self._model

    @property
    def seed(self) -> int or None:
        """
        Get the seed the noise was sampled with.

        :rtype: ``int``
        """
        return self._seed

    @property
    def n(self) -> int:
        """
        Get the last index of the environment.

        :rtype: ``int``
        """
        return self._x.size - 1

    @property
    def x(self) -> np.ndarray:
        """
        Get the noise X_0..X_n.

        :rtype: :py:class:`numpy.ndarray`
        """
        return self._x

    @property
    def v(self) -> np.ndarray:
        """
        Get the potential V(-1..n); entry ``j`` holds V(j - 1).

        :rtype: :py:class:`numpy.ndarray`
        """
        return self._v

    @property
    def omega(self) -> np.ndarray:
        """
        Get the probabilities omega_0..omega_n of jumping to the right.

        :rtype: :py:class:`numpy.ndarray`
        """
        return self._omega

    @property
    def omega_complement(self) -> np.ndarray:
        """
        Get 1 - omega_0, ..., 1 - omega_n, computed directly from the noise (exact even where omega is close to 1).

        :rtype: :py:class:`numpy.ndarray`
        """
        return self._omega_complement

    def require(self, lo: int, hi: int):
        """
        Make sure the potential is defined on every index in [lo, hi].

        :raises IndexOutOfEnvironmentException: if it isn't
        """
        if lo < -1:
            raise IndexOutOfEnvironmentException(
                'index {lo} lies left of the environment (which starts at -1)'.format(lo=lo), index=lo)
        if hi > self.n:
            raise IndexOutOfEnvironmentException(
                'index {hi} lies right of the environment (which ends at {n})'.format(hi=hi, n=self.n), index=hi)

    def potential(self, lo: int, hi: int) -> np.ndarray:
        """
        Get V(lo), ..., V(hi).

        :param lo: the first index (at least -1)
        :type lo:  ``int``
        :param hi: the last index (at most n)
        :type hi:  ``int``
        :rtype: :py:class:`numpy.ndarray`
        :raises IndexOutOfEnvironmentException: if the range isn't covered
        """
        self.require(lo, hi)
        return self._v[lo + 1:hi + 2]

    def to_csv(self, path: str):
        """
        Dump the environment as CSV with the columns index, x, v and omega (x and omega are empty at index -1).

        :param path: where to write
        :type path:  ``str``
        """
        with open(path, 'w', newline='') as csv_file:
            self.write_csv(csv_file)

    def write_csv(self, stream):
        """
        Write the CSV form of the environment to a text stream.
        """
        writer = csv.writer(stream, lineterminator='\n')
        writer.writerow(['index', 'x', 'v', 'omega'])
        writer.writerows(self.rows())

    def rows(self):
        """
        Iterate over the CSV rows (index, x, v, omega) of the environment.
        """
        yield [-1, '', repr(float(self._v[0])), '']
        for k in range(self._x.size):
            yield [k, repr(float(self._x[k])), repr(float(self._v[k + 1])), repr(float(self._omega[k]))]

    def records(self):
        """
        Iterate over the environment as JSON-ready dictionaries ``{"index", "x", "v", "omega"}`` (``x`` and ``omega``
        are ``None`` at index -1).
        """
        yield {'index': -1, 'x': None, 'v': float(self._v[0]), 'omega': None}
        for k in range(self._x.size):
            yield {'index': k, 'x': float(self._x[k]), 'v': float(self._v[k + 1]), 'omega': float(self._omega[k])}


def build_environment(model: CovarianceModel, n: int, seed: int) -> Environment:
    """
    Sample an environment on the indices 0..n.

    :param model: the covariance model
    :type model:  :py:class:`CovarianceModel`
    :param n: the last index (at least 1)
    :type n:  ``int``
    :param seed: the seed
    :type seed:  ``int``
    :rtype: :py:class:`Environment`
    :raises NotEmbeddableException: if the model can't be embedded at this length
    """
    return Environment(x=sample_noise(model, n, seed), model=model, seed=seed)
