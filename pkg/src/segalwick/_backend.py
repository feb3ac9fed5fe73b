"""Kernel selection at import time.

The compiled ``_ckernels`` extension is used when it was built; otherwise
the pure-Python ``_pykernels`` twin. Set ``SEGALWICK_PURE_PYTHON=1`` to force
the fallback.
"""
import os

from . import _pykernels as pykernels

if os.environ.get("SEGALWICK_PURE_PYTHON", "") not in ("", "0"):
    kernels = pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as kernels
    except ImportError:
        kernels = pykernels
        BACKEND = "python"
    else:
        BACKEND = "cython"

enumerate_tables = kernels.enumerate_tables
min_kernel_form = kernels.min_kernel_form
