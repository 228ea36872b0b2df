"""Backend selection for the graph kernels.

The compiled extension is used when it imports; otherwise the numpy fallback.
Set ``CASMC_PURE=1`` to force the fallback.
"""
import os

from . import _kernels_py

BACKENDS = {"python": _kernels_py}

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None
else:
    BACKENDS["cython"] = _ckernels

if _ckernels is not None and os.environ.get("CASMC_PURE", "") in ("", "0"):
    BACKEND = "cython"
else:
    BACKEND = "python"

_impl = BACKENDS[BACKEND]
closure_step = _impl.closure_step
flood = _impl.flood
surrounded = _impl.surrounded
