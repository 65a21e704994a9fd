"""Hot finite-field kernels with a numba path and a pure-numpy fallback.

The numba path is used when numba imports and ``WIRETAPNET_NO_NUMBA`` is
unset (or ``0``). Both backends stay importable so they can be compared.
"""
import os

from . import _numpy as numpy_backend

try:
    from . import _jit as numba_backend
except ImportError:  # pragma: no cover - numba is an optional accelerator
    numba_backend = None

_disabled = os.environ.get("WIRETAPNET_NO_NUMBA", "0") not in ("", "0")

if numba_backend is not None and not _disabled:
    BACKEND = "numba"
    _active = numba_backend
else:
    BACKEND = "numpy"
    _active = numpy_backend

matmul = _active.matmul
rref = _active.rref
rank = _active.rank

# elementwise ops always come from numpy: they act on whole arrays
add = numpy_backend.add
neg = numpy_backend.neg
mul = numpy_backend.mul
inv = numpy_backend.inv

__all__ = ["BACKEND", "numpy_backend", "numba_backend", "matmul", "rref", "rank",
           "add", "neg", "mul", "inv"]
