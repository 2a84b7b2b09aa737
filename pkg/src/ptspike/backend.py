"""Backend selection for the hot membrane scans.

Set PTSPIKE_BACKEND=numpy to force the pure-numpy path, or =numba to
require the compiled path. Unset, the compiled path is used when numba
imports cleanly and the numpy path otherwise. benchmarks/bench_backends.py
compares the two.
"""

import os
import warnings

from . import _scan_numpy

_requested = os.environ.get("PTSPIKE_BACKEND", "").strip().lower()

if _requested not in ("", "numpy", "numba"):
    raise RuntimeError(
        f"PTSPIKE_BACKEND must be 'numpy' or 'numba', got {_requested!r}"
    )

if _requested == "numpy":
    _impl = _scan_numpy
    ACTIVE_BACKEND = "numpy"
else:
    try:
        from . import _scan_numba as _impl

        ACTIVE_BACKEND = "numba"
    except ImportError as exc:
        if _requested == "numba":
            raise RuntimeError(f"PTSPIKE_BACKEND=numba but numba is unusable: {exc}")
        warnings.warn(f"numba unavailable ({exc}); falling back to numpy scans")
        _impl = _scan_numpy
        ACTIVE_BACKEND = "numpy"

trace_scan = _impl.trace_scan
wta_scan = _impl.wta_scan
update_scan = _impl.update_scan


def active_backend() -> str:
    return ACTIVE_BACKEND
