"""Link-cut forest with a compiled backend when available.

``UDKERNEL_PURE_PYTHON=1`` forces the pure-Python implementation.
"""

from __future__ import annotations

import os

from ._lct_py import LinkCutError
from ._lct_py import LinkCutForest as PyLinkCutForest

CyLinkCutForest = None
if not os.environ.get("UDKERNEL_PURE_PYTHON"):
    try:
        from ._lct import LinkCutForest as CyLinkCutForest
    except ImportError:
        pass

LinkCutForest = CyLinkCutForest or PyLinkCutForest
BACKEND = LinkCutForest.backend

__all__ = ["BACKEND", "CyLinkCutForest", "LinkCutError", "LinkCutForest", "PyLinkCutForest"]
