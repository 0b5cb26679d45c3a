"""JIT dispatch layer.

Hot kernels are compiled with numba by default.  Setting the environment
variable ``PERCLAP_NUMBA=0`` (before import) selects the pure-numpy
fallbacks instead, which produce bit-identical results.
"""

import os

_flag = os.environ.get("PERCLAP_NUMBA", "1").strip().lower()
NUMBA_ENABLED = _flag not in ("0", "false", "no", "off")

if NUMBA_ENABLED:
    try:
        from numba import njit
    except ImportError:
        NUMBA_ENABLED = False

if not NUMBA_ENABLED:

    def njit(func=None, **kwargs):
        if func is not None:
            return func

        def wrapper(f):
            return f

        return wrapper
