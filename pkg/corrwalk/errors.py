#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
.. currentmodule:: corrwalk.errors
.. moduleauthor:: Pat Daburu <pat@daburu.net>

Things that go wrong, and what we say about them.
"""


class CorrWalkException(Exception):
    """
    This is the common ancestor of every exception raised on purpose by ``corrwalk``.

    :param message: the exception message
    :type message:  ``str``
    """
    exit_code: int = 1  #: the process exit code the command line reports for this kind of failure

    def __init__(self, message: str):
        super().__init__(message)
        self._message = message

    @property
    def message(self) -> str:
        """
        Get the exception message.

        :rtype: ``str``
        """
        return self._message


class ValidationException(CorrWalkException, ValueError):
    """
    Raised when arguments, models or configurations don't satisfy their preconditions.
    """
    exit_code: int = 2


class NumericalException(CorrWalkException, ArithmeticError):
    """
    Raised when a computation can't be carried out faithfully in floating point.
    """
    exit_code: int = 3


class InvalidModelException(ValidationException):
    """
    Raised when a covariance model is malformed (a Hurst index outside of [1/2, 1), a bad table, and so on).
    """


class InvalidConfigException(ValidationException):
    """
    Raised when an experiment configuration doesn't validate.
    """


class LagOutOfRangeException(ValidationException):
    """
    Raised when a tabulated covariance is asked for a lag past the end of its table.

    :param message: the exception message
    :type message:  ``str``
    :param lag: the offending lag
    :type lag:  ``int``
    """
    def __init__(self, message: str, lag: int):
        super().__init__(message)
        self._lag = lag

    @property
    def lag(self) -> int:
        """
        Get the offending lag.

        :rtype: ``int``
        """
        return self._lag


class BigNTooSmallException(ValidationException):
    """
    Raised when a level index is requested for an ``N`` too small for ``log log N`` to be useful.
    """


class NotEmbeddableException(NumericalException):
    """
    Raised when the circulant extension of a covariance has an eigenvalue that is too negative to clamp.

    :param message: the exception message
    :type message:  ``str``
    :param min_eigenvalue: the most negative eigenvalue
    :type min_eigenvalue:  ``float``
    """
    def __init__(self, message: str, min_eigenvalue: float):
        super().__init__(message)
        self._min_eigenvalue = min_eigenvalue

    @property
    def min_eigenvalue(self) -> float:
        """
        Get the most negative eigenvalue of the circulant extension.

        :rtype: ``float``
        """
        return self._min_eigenvalue


class IndexOutOfEnvironmentException(ValidationException):
    """
    Raised when a computation needs sites that a sampled environment doesn't cover.

    :param message: the exception message
    :type message:  ``str``
    :param index: the first site that isn't covered
    :type index:  ``int``
    """
    def __init__(self, message: str, index: int):
        super().__init__(message)
        self._index = index

    @property
    def index(self) -> int:
        """
        Get the first site that isn't covered.

        :rtype: ``int``
        """
        return self._index


class EnvironmentTooShortException(IndexOutOfEnvironmentException):
    """
    Raised when an environment is too short for the window an event indicator inspects.
    """


class PathCensoredException(ValidationException):
    """
    Raised when a walk path that should have been absorbed at -1 never got there.
    """


class AllCensoredException(ValidationException):
    """
    Raised when every trajectory handed to an estimator is censored.
    """


class LevelZeroException(ValidationException):
    """
    Raised when a first passage is requested for the level 0 (which is neither above nor below).
    """


class NonPositiveEstimateException(ValidationException):
    """
    Raised when a log-log fit meets an estimate that is zero or negative.

    :param message: the exception message
    :type message:  ``str``
    :param n: the grid value whose estimate isn't positive
    :type n:  ``int``
    """
    def __init__(self, message: str, n: int):
        super().__init__(message)
        self._n = n

    @property
    def n(self) -> int:
        """
        Get the grid value whose estimate isn't positive.

        :rtype: ``int``
        """
        return self._n
