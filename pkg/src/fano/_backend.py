"""Kernel backend selection.

The compiled Cython kernels are used when the extension built; otherwise
the pure numpy/Python fallback with identical semantics.  Set
FANO_FORCE_PYTHON_KERNELS=1 to force the fallback (used by tests and the
benchmark)."""

import os

from . import _kernels_py

if os.environ.get("FANO_FORCE_PYTHON_KERNELS"):
    kernels = _kernels_py
else:
    try:
        from . import _kernels_c as kernels  # type: ignore[no-redef]
    except ImportError:
        kernels = _kernels_py


def backend_name():
    return kernels.NAME
