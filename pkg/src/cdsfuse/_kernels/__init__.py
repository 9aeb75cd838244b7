"""Kernel backend selection: compiled extension if available, numpy otherwise.

Set ``CDSFUSE_PURE_PYTHON=1`` to force the fallback (used by the benchmark).
"""

import os

from cdsfuse._kernels.fallback import replicator_step

if os.environ.get("CDSFUSE_PURE_PYTHON"):
    from cdsfuse._kernels.fallback import replicator

    BACKEND = "python"
else:
    try:
        from cdsfuse._kernels._replicator import replicator

        BACKEND = "cython"
    except ImportError:
        from cdsfuse._kernels.fallback import replicator

        BACKEND = "python"

__all__ = ["replicator", "replicator_step", "BACKEND"]
