"""Kernel selection: compiled extension when available, pure Python otherwise.

Set CSPCOUNT_PURE_PYTHON=1 to force the fallback (used by the benchmark
and the backend-equality tests).
"""

import os

if os.environ.get("CSPCOUNT_PURE_PYTHON"):
    from . import _kernel_py as kernel
else:
    try:
        from . import _ckernel as kernel  # type: ignore[no-redef]
    except ImportError:
        from . import _kernel_py as kernel  # type: ignore[no-redef]

contract = kernel.contract
BACKEND_NAME = kernel.BACKEND_NAME
