"""Numerical hot kernels with backend selection at import.

The compiled Cython extension is preferred when it built successfully;
otherwise the numpy fallback is used.  Set ``RDOPT_PURE_PYTHON=1`` to
force the fallback (useful for benchmarking and debugging).
"""

import os

from . import pyfallback

if os.environ.get("RDOPT_PURE_PYTHON", "") in ("1", "true", "yes"):
    _impl = pyfallback
    BACKEND = "python"
else:
    try:
        from . import _fastkern as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = pyfallback
        BACKEND = "python"

field_pairs = _impl.field_pairs
lti_outputs = _impl.lti_outputs
MU0 = pyfallback.MU0

__all__ = ["BACKEND", "MU0", "field_pairs", "lti_outputs", "pyfallback"]
