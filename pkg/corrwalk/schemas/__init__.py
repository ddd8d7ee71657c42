#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
.. currentmodule:: corrwalk.schemas
.. moduleauthor:: Pat Daburu <pat@daburu.net>

Experiment configurations: what they hold and how they're read and written.
"""
