"""Pick the split kernel at import time.

The compiled ``_split`` extension is preferred. Set the environment
variable ``TSALLIS_TREE_BACKEND=python`` to force the pure-Python fallback,
or ``=cython`` to fail loudly when the extension is missing.
"""

import os

from . import _split_py

_requested = os.environ.get("TSALLIS_TREE_BACKEND", "auto").lower()
if _requested not in ("auto", "cython", "python"):
    raise ImportError(f"TSALLIS_TREE_BACKEND must be auto, cython or python, not {_requested!r}")

if _requested == "python":
    kernel = _split_py
    BACKEND = "python"
else:
    try:
        from . import _split as kernel
        BACKEND = "cython"
    except ImportError:
        if _requested == "cython":
            raise
        kernel = _split_py
        BACKEND = "python"


def get_kernel(name: str):
    """Kernel module by name, for side-by-side comparisons."""
    if name == "python":
        return _split_py
    if name == "cython":
        from . import _split

        return _split
    raise ValueError(f"unknown backend {name!r}")
