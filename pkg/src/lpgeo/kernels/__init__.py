"""Backend dispatch for the hot interpolation/inversion kernels.

The environment variable LPGEO_NUMBA selects the path:
  unset / "auto"  use numba when importable, else pure numpy
  "1"             require numba (ImportError if missing)
  "0"             force the pure-numpy fallback
"""

from __future__ import annotations

import os

from . import numpy_impl

_flag = os.environ.get("LPGEO_NUMBA", "auto").strip().lower()

if _flag in ("0", "false", "no", "numpy"):
    _impl = numpy_impl
    USING_NUMBA = False
elif _flag in ("1", "true", "yes", "numba"):
    from . import numba_impl as _impl  # noqa: F401

    USING_NUMBA = True
else:
    try:
        from . import numba_impl as _impl
        USING_NUMBA = True
    except ImportError:
        _impl = numpy_impl
        USING_NUMBA = False

interp_periodic = _impl.interp_periodic
interp_line = _impl.interp_line
interp_periodic6 = _impl.interp_periodic6
interp_line6 = _impl.interp_line6
invert_periodic_lift = _impl.invert_periodic_lift
invert_line_map = _impl.invert_line_map


def backend_name() -> str:
    return "numba" if USING_NUMBA else "numpy"
