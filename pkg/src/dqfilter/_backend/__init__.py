"""Kernel backend selection.

The compiled extension (``dqfilter._backend._native``) and the NumPy
fallback (``dqfilter._backend._py``) implement the same functions with the
same semantics. The extension is preferred when importable; set
``DQFILTER_BACKEND=python`` or ``DQFILTER_BACKEND=native`` to force one.
"""

import os

_requested = os.environ.get("DQFILTER_BACKEND", "auto").strip().lower()

if _requested in ("auto", ""):
    try:
        from . import _native as core

        BACKEND = "native"
    except ImportError:
        from . import _py as core

        BACKEND = "python"
elif _requested in ("native", "cython"):
    from . import _native as core

    BACKEND = "native"
elif _requested in ("python", "numpy"):
    from . import _py as core

    BACKEND = "python"
else:
    raise ImportError(
        f"unknown DQFILTER_BACKEND={_requested!r} (use 'auto', 'native' or 'python')"
    )

__all__ = ["core", "BACKEND"]
