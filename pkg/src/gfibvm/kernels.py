"""Backend selection for the triangular grid kernels.

The compiled extension is used when it imports; setting the environment
variable ``GFIBVM_PURE_PYTHON=1`` forces the numpy implementation.
"""

import os

from . import _kernels_py

python_backend = _kernels_py

try:
    if os.environ.get("GFIBVM_PURE_PYTHON", "") not in ("", "0"):
        raise ImportError("pure python backend requested")
    from . import _kernels as compiled_backend
except ImportError:
    compiled_backend = None

backend = compiled_backend if compiled_backend is not None else python_backend
BACKEND = "cython" if compiled_backend is not None else "python"

GF, MODGF, FLAT, JEFFREYS = _kernels_py.GF, _kernels_py.MODGF, _kernels_py.FLAT, _kernels_py.JEFFREYS

tri_log_terms = backend.tri_log_terms
tri_interval = backend.tri_interval
tri_intervals = backend.tri_intervals
