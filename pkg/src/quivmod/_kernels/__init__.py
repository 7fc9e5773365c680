"""Modular elimination kernels.

The compiled extension is used when it was built and importable; set
``QUIVMOD_PURE_PYTHON=1`` to force the pure-Python fallback.  ``BACKEND``
names the implementation in use.
"""

import os

from . import _pykernels

_C_PRIME_LIMIT = 2**31

if os.environ.get("QUIVMOD_PURE_PYTHON", "") not in ("", "0"):
    _ck = None
else:
    try:
        from . import _ckernels as _ck
    except ImportError:  # extension not built
        _ck = None

BACKEND = "cython" if _ck is not None else "python"


def _pick(name):
    py = getattr(_pykernels, name)
    if _ck is None:
        return py
    c = getattr(_ck, name)

    def dispatch(*args):
        # p is always the last positional argument
        if args[-1] >= _C_PRIME_LIMIT:
            return py(*args)
        return c(*args)

    dispatch.__name__ = name
    dispatch.__doc__ = py.__doc__
    return dispatch


rref_mod_p = _pick("rref_mod_p")
rank_mod_p = _pick("rank_mod_p")
det_mod_p = _pick("det_mod_p")
reduce_by_rref = _pick("reduce_by_rref")

__all__ = ["BACKEND", "rref_mod_p", "rank_mod_p", "det_mod_p", "reduce_by_rref"]
