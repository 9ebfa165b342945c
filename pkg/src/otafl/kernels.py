"""Backend dispatch for the hot solver kernels.

Prefers the compiled Cython module; falls back to the pure-NumPy port so the
package works without a C toolchain. Set OTAFL_PURE_PYTHON=1 to force the
fallback (used by the backend-comparison benchmark and tests).
"""

import os

from otafl import _kernels_py

if os.environ.get("OTAFL_PURE_PYTHON"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from otafl import _kernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

OPTIMAL = _kernels_py.OPTIMAL
INFEASIBLE = _kernels_py.INFEASIBLE
MAX_ITER = _kernels_py.MAX_ITER

boxlin_bisect = _impl.boxlin_bisect
qcqp_bisect = _impl.qcqp_bisect
