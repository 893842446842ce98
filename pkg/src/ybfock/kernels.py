"""Kernel backend selection.

The compiled extension is used when importable; setting
``YBFOCK_PURE_PYTHON=1`` forces the numpy fallback.
"""

from __future__ import annotations

import os

from . import _kernels_py

BACKEND = "python"

if os.environ.get("YBFOCK_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled
    except ImportError:  # extension not built
        _compiled = None
else:
    _compiled = None

if _compiled is not None:
    monomial_perm_sum = _compiled.monomial_perm_sum
    permutation_matrix = _compiled.permutation_matrix
    BACKEND = "compiled"
else:
    monomial_perm_sum = _kernels_py.monomial_perm_sum
    permutation_matrix = _kernels_py.permutation_matrix

multi_index_digits = _kernels_py.multi_index_digits

__all__ = ["BACKEND", "monomial_perm_sum", "permutation_matrix", "multi_index_digits"]
