#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
.. currentmodule:: corrwalk.logging
.. moduleauthor:: Pat Daburu <pat@daburu.net>

Dear diary...
"""
import logging


def loggable_class(logger_name: str=None):
    """
    This is a decorator you can apply to a class to set it up with a Python ``logger`` property suitable for your
    logging needs.  If the decorated class defines a ``logger_name`` attribute, that name wins over the default one.

    :param logger_name: a custom logger name
    :type logger_name:  ``str``
    """
    # We need an inner function that actually adds the logger instance to the class.
    def add_logger(cls):
        # Establish what the name of the logger is going to be.  The caller's argument comes first, then the class's
        # own 'logger_name' attribute, and finally a default built from the module and class names.
        _logger_name = (logger_name if logger_name is not None
                        else getattr(cls, 'logger_name', None) or '{module}.{cls}'.format(module=cls.__module__,
                                                                                             cls=cls.__name__))
        # Add a logger property to the class.
        cls.logger = logging.getLogger(_logger_name)
        return cls
    # Return the inner function.
    return add_logger


def configure(verbose: bool=False):
    """
    Configure logging for a command-line run.  Library modules never call this; only :py:mod:`corrwalk.cli` does.

    :param verbose: ``True`` to log everything down to ``DEBUG``
    :type verbose:  ``bool``
    """
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format='%(asctime)s %(levelname)s %(name)s: %(message)s'
    )
