"""Backend selection for the integer normal-form kernels.

The compiled extension is used when it imports and ``RELTRACE_PURE_PYTHON``
is unset; any ``OverflowError`` from it (int64 exhausted) reruns the call on
the pure-Python bigint implementation, so results never depend on backend.
"""
import os

from reltrace import _pykernels

try:
    if os.environ.get("RELTRACE_PURE_PYTHON"):
        raise ImportError("pure Python requested")
    from reltrace import _ckernels
except ImportError:
    _ckernels = None

BACKEND = "cython" if _ckernels is not None else "python"


def _dispatch(name, *args):
    if _ckernels is not None:
        try:
            return getattr(_ckernels, name)(*args)
        except OverflowError:
            pass
    return getattr(_pykernels, name)(*args)


def hermite_rows(rows, ncols):
    return _dispatch("hermite_rows", rows, ncols)


def reduce_vector(x, hnf):
    if not hnf:
        return list(x)
    if len(x) != len(hnf[0]):
        raise ValueError(f"vector of length {len(x)} reduced modulo a lattice in Z^{len(hnf[0])}")
    return _dispatch("reduce_vector", x, hnf)


def smith(M, nrows, ncols):
    return _dispatch("smith", M, nrows, ncols)
