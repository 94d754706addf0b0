"""Numeric inner loops behind the ranking algorithms.

Two interchangeable backends exist: numba-compiled loops (the default when
numba imports) and vectorised numpy.  Set ``WORDRANK_NUMBA=0`` in the
environment before import to force the numpy path.
"""

import importlib
import os

from . import _numpy

_FALSEY = {"0", "false", "no", "off"}


def get_backend(name: str):
    if name == "numpy":
        return _numpy
    if name == "numba":
        return importlib.import_module("._numba", __name__)
    raise ValueError(f"unknown kernel backend {name!r}")


def _select():
    if os.environ.get("WORDRANK_NUMBA", "1").strip().lower() in _FALSEY:
        return _numpy
    try:
        return get_backend("numba")
    except ImportError:
        return _numpy


backend = _select()
BACKEND = backend.NAME
