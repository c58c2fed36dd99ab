"""Kernel backend selection.

The compiled backend is used when the extension built; set
``SKEWGIBBS_BACKEND=python`` (or call :func:`select_backend`) to force the
pure-Python mirror. Both backends draw identically from a given generator,
so the choice affects speed only.
"""

import os

from . import _purepy

try:
    from . import _ckernels
except ImportError:
    _ckernels = None

_BACKENDS = {"python": _purepy}
if _ckernels is not None:
    _BACKENDS["c"] = _ckernels

_active = _purepy
_active_name = "python"


def available_backends():
    return sorted(_BACKENDS)


def active_backend():
    return _active_name


def select_backend(name):
    """Switch the process-wide kernel backend ("c" or "python")."""
    global _active, _active_name
    if name not in _BACKENDS:
        raise ValueError(f"unknown backend {name!r}; available: {available_backends()}")
    _active = _BACKENDS[name]
    _active_name = name


def trunc_normal(generator, mu, sd, lo, hi):
    return _active.trunc_normal(generator, mu, sd, lo, hi)


def trunc_normal_fill(generator, mu, sd, lo, hi, out):
    return _active.trunc_normal_fill(generator, mu, sd, lo, hi, out)


def z_gibbs_scan(generator, z, mean, prec, scale):
    return _active.z_gibbs_scan(generator, z, mean, prec, scale)


def z_column_scan(generator, z, mean, prec, scale, col):
    return _active.z_column_scan(generator, z, mean, prec, scale, col)


_env = os.environ.get("SKEWGIBBS_BACKEND")
if _env:
    select_backend(_env)
elif _ckernels is not None:
    select_backend("c")
