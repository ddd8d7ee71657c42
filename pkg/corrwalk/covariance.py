#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
.. currentmodule:: corrwalk.covariance
.. moduleauthor:: Pat Daburu <pat@daburu.net>

Stationary covariance families for the noise ``X``, the variance of the potential and the level indices built on it.
"""

import math
from enum import Enum
from typing import Sequence

import numpy as np

from .codetools import Enums
from .errors import BigNTooSmallException, InvalidModelException, LagOutOfRangeException

FSUM_THRESHOLD: int = 100_000  #: above this many terms, sigma2 switches to compensated summation
MIN_BIG_N: int = 16  #: the smallest N for which level indices are defined


class Family(Enum):
    """
    These are the supported covariance families.
    """
    FGN = 'FGN'      #: Fractional Gaussian noise, the increments of fractional Brownian motion.
    POWER = 'POWER'  #: r(n) = (1 + n)^(2H - 2) for n >= 1.
    IID = 'IID'      #: Independent standard Gaussians.
    TABLE = 'TABLE'  #: An explicitly tabulated covariance.
    FLAT = 'FLAT'    #: X identically 0.  A zero-variance hook for tests, not a model.


class CovarianceModel(object):
    """
    A covariance model pairs a stationary covariance family ``r`` with a Hurst index ``H``.
    """
    def __init__(self, family: Family or str, hurst: float=0.5, table: Sequence[float]=None):
        """

        :param family: the covariance family
        :type family:  :py:class:`Family` or ``str``
        :param hurst: the Hurst index, in [1/2, 1)
        :type hurst:  ``float``
        :param table: the tabulated values r(0), r(1), ... (``TABLE`` only)
        :type table:  sequence of ``float``
        :raises InvalidModelException: if the model is malformed
        """
        try:
            self._family = Enums.from_name(Family, family)
        except KeyError as ke:
            raise InvalidModelException(
                'family must be one of: {names}'.format(names=Enums.names(Family))) from ke
        hurst = float(hurst)
        if not 0.5 <= hurst < 1.0:
            raise InvalidModelException('hurst must lie in [0.5,1)')
        self._hurst = hurst
        self._table = None
        if self._family is Family.TABLE:
            if table is None or len(table) == 0:
                raise InvalidModelException('a table model needs a nonempty table of values')
            self._table = tuple(float(value) for value in table)
            if self._table[0] != 1.0:
                raise InvalidModelException('table values must start with r(0) = 1')
            if any(value < 0 or not math.isfinite(value) for value in self._table):
                raise InvalidModelException('table values must be finite and nonnegative')
        elif table is not None:
            raise InvalidModelException('only table models take a table of values')

    @staticmethod
    def fgn(hurst: float) -> 'CovarianceModel':
        """
        Create a fractional Gaussian noise model.

        :rtype: :py:class:`CovarianceModel`
        """
        return CovarianceModel(Family.FGN, hurst)

    @staticmethod
    def iid() -> 'CovarianceModel':
        """
        Create the independent model.

        :rtype: :py:class:`CovarianceModel`
        """
        return CovarianceModel(Family.IID, 0.5)

    @property
    def family(self) -> Family:
        """
        Get the covariance family.

        :rtype: :py:class:`Family`
        """
        return self._family

    @property
    def hurst(self) -> float:
        """
        Get the Hurst index.

        :rtype: ``float``
        """
        return self._hurst

    @property
    def table(self) -> tuple or None:
        """
        Get the tabulated covariance values (``TABLE`` models only).

        :rtype: ``tuple`` or ``None``
        """
        return self._table

    @property
    def ell_is_one(self) -> bool:
        """
        Is the slowly varying factor of sigma_n^2 = n^(2H) l(n) known to be identically 1?  (It is for ``FGN`` and
        ``IID``.)

        :rtype: ``bool``
        """
        return self._family in (Family.FGN, Family.IID)

    def autocovariances(self, count: int) -> np.ndarray:
        """
        Get r(0), r(1), ..., r(count - 1).

        :param count: how many lags you want
        :type count:  ``int``
        :rtype: :py:class:`numpy.ndarray`
        :raises LagOutOfRangeException: if a ``TABLE`` model doesn't reach that far
        """
        lags = np.arange(count, dtype=float)
        if self._family is Family.FGN:
            two_h = 2.0 * self._hurst
            r = 0.5 * ((lags + 1.0) ** two_h - 2.0 * lags ** two_h + np.abs(lags - 1.0) ** two_h)
        elif self._family is Family.POWER:
            r = (1.0 + lags) ** (2.0 * self._hurst - 2.0)
        elif self._family is Family.IID:
            r = np.zeros(count)
        elif self._family is Family.TABLE:
            if count > len(self._table):
                raise LagOutOfRangeException(
                    'lag {lag} lies beyond the table of {size} values'.format(lag=count - 1,
                                                                              size=len(self._table)),
                    lag=count - 1)
            r = np.array(self._table[:count])
        else:
            return np.zeros(count)
        if count > 0:
            r[0] = 1.0
        return r

    def to_dict(self) -> dict:
        """
        Describe the model as a JSON-ready dictionary, e.g. ``{"family": "fgn", "hurst": 0.75}``.

        :rtype: ``dict``
        """
        description = {'family': self._family.name.lower(), 'hurst': self._hurst}
        if self._table is not None:
            description['values'] = list(self._table)
        return description

    def _key(self) -> tuple:
        return self._family, self._hurst, self._table

    def __eq__(self, other):
        return isinstance(other, CovarianceModel) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return 'CovarianceModel({family}, hurst={hurst})'.format(family=self._family.name, hurst=self._hurst)


def cov(model: CovarianceModel, lag: int) -> float:
    """
    Get the covariance r(lag) = E[X_0 X_lag].

    :param model: the covariance model
    :type model:  :py:class:`CovarianceModel`
    :param lag: the lag (nonnegative)
    :type lag:  ``int``
    :rtype: ``float``
    :raises LagOutOfRangeException: for a ``TABLE`` model and a lag past the end of its table
    """
    lag = int(lag)
    if lag < 0:
        raise LagOutOfRangeException('lag must be nonnegative', lag=lag)
    if model.family is Family.TABLE and lag >= len(model.table):
        raise LagOutOfRangeException(
            'lag {lag} lies beyond the table of {size} values'.format(lag=lag, size=len(model.table)), lag=lag)
    if model.family is Family.FLAT:
        return 0.0
    if lag == 0:
        return 1.0
    return float(model.autocovariances(lag + 1)[lag])


def sigma2(model: CovarianceModel, n: int) -> float:
    """
    Get the variance of the potential, sigma_n^2 = Var(V(n)) = n r(0) + 2 sum_{m=1}^{n-1} (n - m) r(m).

    :param model: the covariance model
    :type model:  :py:class:`CovarianceModel`
    :param n: the number of steps (at least 1)
    :type n:  ``int``
    :rtype: ``float``
    """
    n = int(n)
    if n < 1:
        raise InvalidModelException('n must be at least 1')
    r = model.autocovariances(n)
    if model.family is Family.FLAT:
        return 0.0
    terms = 2.0 * (n - np.arange(1, n)) * r[1:]
    if n > FSUM_THRESHOLD:
        return math.fsum(terms) + n * r[0]
    return float(n * r[0] + np.sum(terms))


def ell_ratio(model: CovarianceModel, n: int) -> float:
    """
    Get the empirical slowly varying factor sigma_n^2 / n^(2H).  It is exactly 1 for ``FGN`` and ``IID``; for other
    families it is reported as observed, never modeled.

    :rtype: ``float``
    """
    return sigma2(model, n) / float(n) ** (2.0 * model.hurst)


def b_index(model: CovarianceModel, big_n: int, q: float) -> int:
    """
    Get b_N, the largest k with sigma_k <= (log N)(log log N)^(-q/2), or 0 if even sigma_1 is too big.

    :param model: the covariance model
    :type model:  :py:class:`CovarianceModel`
    :param big_n: N (at least 16)
    :type big_n:  ``int``
    :param q: the exponent (greater than 1)
    :type q:  ``float``
    :rtype: ``int``
    :raises BigNTooSmallException: if N < 16
    """
    if big_n < MIN_BIG_N:
        raise BigNTooSmallException('N must be at least {min}'.format(min=MIN_BIG_N))
    if q <= 1:
        raise InvalidModelException('q must be greater than 1')
    if model.family is Family.FLAT:
        raise InvalidModelException('a flat model has no variance scale')
    log_n = math.log(big_n)
    threshold = (log_n * math.log(log_n) ** (-q / 2.0)) ** 2
    if sigma2(model, 1) > threshold:
        return 0
    # sigma2 is strictly increasing, so bracket the answer by doubling, then bisect.
    lo, hi = 1, 2
    while sigma2(model, hi) <= threshold:
        lo, hi = hi, hi * 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if sigma2(model, mid) <= threshold:
            lo = mid
        else:
            hi = mid
    return lo
