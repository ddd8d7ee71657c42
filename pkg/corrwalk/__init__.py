#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
.. currentmodule:: corrwalk
.. moduleauthor:: Pat Daburu <pat@daburu.net>

Random walks and branching processes in correlated Gaussian environments.
"""
import logging

__version__ = '0.1.0'
__release__ = '0.1.0'

# Library code never configures handlers; the consuming application (or our CLI) does that.
logging.getLogger(__name__).addHandler(logging.NullHandler())
