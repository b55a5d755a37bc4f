"""Kernel backend selection.

The dense finite-field kernels (rref, matmul, charpoly, 2x2 conjugation
batches) exist twice: a numba @njit version and a pure-numpy vectorized
version with identical signatures.  MODPSYM_BACKEND=numpy|numba forces a
choice; the default is numba when it imports, numpy otherwise.
"""

import os

from . import _kernels_numpy

try:
    from . import _kernels_numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    _kernels_numba = None

_FORCED = None


def available():
    names = ["numpy"]
    if _kernels_numba is not None:
        names.append("numba")
    return names


def set_backend(name):
    """Force a backend ('numpy', 'numba' or None to restore the env default)."""
    global _FORCED
    if name is not None and name not in available():
        raise ValueError(f"unknown backend {name!r}; available: {available()}")
    _FORCED = name


def name():
    if _FORCED is not None:
        return _FORCED
    env = os.environ.get("MODPSYM_BACKEND", "").strip().lower()
    if env in ("numpy", "py", "python"):
        return "numpy"
    if env == "numba":
        if _kernels_numba is None:
            raise RuntimeError("MODPSYM_BACKEND=numba but numba is not importable")
        return "numba"
    return "numba" if _kernels_numba is not None else "numpy"


def kernels():
    return _kernels_numba if name() == "numba" else _kernels_numpy
