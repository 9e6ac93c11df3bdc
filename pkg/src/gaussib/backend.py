"""Kernel backend selection.

Imports the compiled extension when available, otherwise the pure-Python
fallback.  Set the environment variable ``GAUSSIB_PURE_PYTHON=1`` before
import to force the fallback (used by the benchmark and backend tests).
"""

import os

if os.environ.get("GAUSSIB_PURE_PYTHON"):
    from gaussib import _core_py as kernels

    COMPILED = False
else:
    try:
        from gaussib import _core as kernels  # type: ignore[no-redef]

        COMPILED = True
    except ImportError:
        from gaussib import _core_py as kernels  # type: ignore[no-redef]

        COMPILED = False

BACKEND_NAME = "compiled" if COMPILED else "python"

KIND_SHANNON = kernels.KIND_SHANNON
KIND_RENYI = kernels.KIND_RENYI
KIND_JEFFREYS = kernels.KIND_JEFFREYS
