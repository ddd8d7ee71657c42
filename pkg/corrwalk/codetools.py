#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
.. currentmodule:: corrwalk.codetools
.. moduleauthor:: Pat Daburu <pat@daburu.net>

Small helpers for enumerations, dictionaries and files.
"""

import os
import tempfile
from collections import namedtuple
from contextlib import contextmanager
from enum import Enum
from insensitive_dict import CaseInsensitiveDict


class TryGetResult(namedtuple('TryResult', ['result', 'value'])):
    """
    This is a named tuple that contains a ``bool`` result that indicates success or failure of a "try-get" operation,
    and the value retrieved.
    """


class Enums(object):
    """
    This is a utility class that wants to help you work with :py:class:`Enum` types.
    """
    _names2members = {}  #: An index of enumeration member values indexed first by class, then by member name.

    @staticmethod
    def from_name(enum_cls, name: str) -> Enum:
        """
        Get an enumeration member value from its name.  Names are matched without regard to case, so ``'fgn'``
        and ``'FGN'`` find the same member.

        :param enum_cls: the :py:class:`Enum` ``class``
        :type enum_cls:  ``class``
        :param name: the enumeration member's name
        :type name:  ``str``
        :return: the enumeration member
        :rtype:  :py:class:`Enum`
        :raises KeyError: if no member has the name
        """
        # Benign forgiveness:  If we were actually passed a value from the enumeration instead of its name...
        if isinstance(name, enum_cls):
            # ...that's OK.  Just return the enumeration value.
            return name
        # Make sure we're dealing with an Enum type.
        if not issubclass(enum_cls, Enum):
            raise ValueError('enum_class must be of type {typ}'.format(typ=type(Enum)))
        # It's possible we haven't see this type before, so we may not have the index on file.
        symbols2members = Enums._names2members.get(enum_cls)
        # If we haven't already done so...
        if symbols2members is None:
            # ...now's the time to create the index of symbols to the member names.
            symbols2members = CaseInsensitiveDict({
                _name: _member for _name, _member in enum_cls.__members__.items()
            })
            # Now save the collection we just created for next time.
            Enums._names2members[enum_cls] = symbols2members
        # Return the enumeration member indexed to the symbol that was passed in.
        return symbols2members[name]

    @staticmethod
    def names(enum_cls) -> str:
        """
        Get the lower-case member names of an enumeration, joined for use in messages and help text.

        :param enum_cls: the :py:class:`Enum` ``class``
        :type enum_cls:  ``class``
        :rtype: ``str``
        """
        return ', '.join(_name.lower() for _name in enum_cls.__members__)


class Dicts(object):
    """
    This is a utility class that wants to help you work with ``dict`` types.
    """
    @staticmethod
    def try_get(obj: dict, key: str, default=None) -> TryGetResult:
        """
        Try to retrieve a value from a :py:class:`dict` that may, or may not be present.

        :param obj: the object that defines the value
        :type obj:  ``dict``
        :param key: the key whose value you want
        :type key:  ``str``
        :param default: the value that will be returned if no value is defined for the key
        :return: a named tuple that indicates whether or not the key was defined, and the value
        :rtype:  :py:class:`TryGetResult`
        """
        if obj is None:  # Sanity check.
            return TryGetResult(False, default)
        elif key in obj and obj[key] is not None:  # If the key is defined...
            # ...just return the value.
            return TryGetResult(True, obj[key])
        else:  # We didn't find the key, eh?...
            # ...return the default value to the caller.
            return TryGetResult(False, default)

    @staticmethod
    def overlay(base: dict, overrides: dict) -> dict:
        """
        Make a new dictionary from ``base`` with every key of ``overrides`` whose value isn't ``None`` laid on top.

        :param base: the underlying values
        :type base:  ``dict``
        :param overrides: the values that win (``None`` means "not given")
        :type overrides:  ``dict``
        :rtype: ``dict``
        """
        merged = dict(base if base is not None else {})
        merged.update({key: value for key, value in (overrides or {}).items() if value is not None})
        return merged


class Files(object):
    """
    This is a utility class for writing files.
    """
    @staticmethod
    @contextmanager
    def atomic_writer(path: str):
        """
        Open a text stream whose content replaces ``path`` in one step when the ``with`` block exits cleanly.  If the
        block raises, ``path`` is left as it was.

        :param path: the file to (re)write
        :type path:  ``str``
        """
        directory = os.path.dirname(os.path.abspath(path))
        fd, temp_path = tempfile.mkstemp(dir=directory, prefix='.' + os.path.basename(path) + '.', suffix='.tmp')
        try:
            with os.fdopen(fd, 'w', newline='') as stream:
                yield stream
            os.replace(temp_path, path)
        except BaseException:
            if os.path.exists(temp_path):
                os.remove(temp_path)
            raise
