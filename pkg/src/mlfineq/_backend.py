"""Select the summation kernels at import time.

The compiled module is used when it imports cleanly; set ``MLF_PURE_PYTHON=1``
to force the pure-Python fallback.
"""

import os

from . import _kernels_py

if os.environ.get("MLF_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = _kernels_py

BACKEND = "python" if _impl is _kernels_py else "compiled"


def kernels(name=None):
    """Return ``(series_kernel, asymptotic_kernel)`` for a backend name."""
    if name is None:
        impl = _impl
    elif name == "python":
        impl = _kernels_py
    elif name == "compiled":
        from . import _kernels as impl
    else:
        raise ValueError(f"unknown backend {name!r}")
    return impl.series_kernel, impl.asymptotic_kernel


series_kernel, asymptotic_kernel = kernels()
