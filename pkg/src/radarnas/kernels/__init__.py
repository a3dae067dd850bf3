"""Hot numeric kernels with a numba fast path and a pure-numpy fallback.

The backend is chosen once at import time:

  RADARNAS_NUMBA=0   force the pure-numpy reference implementations
  RADARNAS_NUMBA=1   require numba (ImportError if missing)
  unset / auto       use numba when importable, else fall back

``BACKEND`` names the active path; both expose the same functions.
"""

import os

_flag = os.environ.get("RADARNAS_NUMBA", "auto").strip().lower()

if _flag in ("0", "false", "no", "off"):
    from . import numpy_ops as _impl

    BACKEND = "numpy"
elif _flag in ("1", "true", "yes", "on"):
    from . import numba_ops as _impl

    BACKEND = "numba"
else:
    try:
        from . import numba_ops as _impl

        BACKEND = "numba"
    except ImportError:
        from . import numpy_ops as _impl

        BACKEND = "numpy"

conv2d_forward = _impl.conv2d_forward
conv2d_backward = _impl.conv2d_backward
maxpool2d_forward = _impl.maxpool2d_forward
maxpool2d_backward = _impl.maxpool2d_backward
cfar_noise_map = _impl.cfar_noise_map
