"""Select the tableau kernel: GMP extension when built, pure Python otherwise.

Set ``KWISE_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _tableau_py

if os.environ.get("KWISE_PURE_PYTHON"):
    Tableau = _tableau_py.Tableau
    IMPLEMENTATION = _tableau_py.IMPLEMENTATION
else:
    try:
        from . import _tableau_gmp
    except ImportError:
        Tableau = _tableau_py.Tableau
        IMPLEMENTATION = _tableau_py.IMPLEMENTATION
    else:
        Tableau = _tableau_gmp.Tableau
        IMPLEMENTATION = _tableau_gmp.IMPLEMENTATION

PyTableau = _tableau_py.Tableau

__all__ = ["IMPLEMENTATION", "PyTableau", "Tableau"]
