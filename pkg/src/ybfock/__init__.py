"""Desk-scale numerics for Yang-Baxter deformed Fock spaces.

Deformations ``T`` on ``H (x) H``, the symmetrizers ``P_T^(n)``, truncated
Fock operators, Wick products, operator-space norms of Khintchine type, the
quasi-free setting and the non-injectivity witness chain.
"""

__version__ = "0.1.0"

from .deformation import YangBaxterOperator, make_q_flip, make_qij, from_matrix  # noqa: E402
from .fock import DeformedFockSpace, FockOperator, c_q_constant  # noqa: E402
from .kernels import BACKEND  # noqa: E402
from .report import CheckReport  # noqa: E402

__all__ = [
    "__version__",
    "BACKEND",
    "CheckReport",
    "DeformedFockSpace",
    "FockOperator",
    "YangBaxterOperator",
    "c_q_constant",
    "from_matrix",
    "make_q_flip",
    "make_qij",
]
