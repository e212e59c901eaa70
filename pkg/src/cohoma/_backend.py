"""Pick the compiled kernels when available, else the pure-Python ones.

Set ``COHOMA_PURE=1`` to force the fallback.
"""
import os

from . import _pykernels as pure

kernels = pure
BACKEND = "python"

if not os.environ.get("COHOMA_PURE"):
    try:
        from . import _kernels as _compiled
    except ImportError:
        pass
    else:
        kernels = _compiled
        BACKEND = "cython"
