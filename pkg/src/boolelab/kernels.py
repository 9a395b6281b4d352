"""Kernel backend selection.

The compiled extension is used when it imports; otherwise (or when
``BOOLELAB_PURE`` is set) the numpy implementation is used. Both expose
``scan_bounds(masks, start, stop)`` and ``counter_uniforms(seed, trials, draw)``.
"""

import os

from . import _pykernels

try:
    if os.environ.get("BOOLELAB_PURE"):
        raise ImportError("pure backend requested")
    from . import _ckernels as _impl

    BACKEND = "cython"
except ImportError:
    _impl = _pykernels
    BACKEND = "python"

scan_bounds = _impl.scan_bounds
counter_uniforms = _impl.counter_uniforms

__all__ = ["BACKEND", "scan_bounds", "counter_uniforms"]
