"""Sampling kernels: the compiled extension if present, else the Python twin.

Set ``FACCUM_PURE=1`` to force the Python implementation.  ``BACKEND`` names
the one in use.
"""

import os

from . import _kernels_py as python

if os.environ.get("FACCUM_PURE", "") not in ("", "0"):
    compiled = None
else:
    try:
        from . import _kernels as compiled
    except ImportError:
        compiled = None

_impl = compiled if compiled is not None else python
BACKEND = "cython" if compiled is not None else "python"

occupancy_distinct = _impl.occupancy_distinct
occupancy_indistinct = _impl.occupancy_indistinct
occupancy_coloured = _impl.occupancy_coloured
occupancy_forest = _impl.occupancy_forest
occupancy_negmulti = _impl.occupancy_negmulti
occupancy_dirichlet = _impl.occupancy_dirichlet
inverse_cdf = _impl.inverse_cdf
uniforms = _impl.uniforms

__all__ = [
    "BACKEND",
    "compiled",
    "python",
    "occupancy_distinct",
    "occupancy_indistinct",
    "occupancy_coloured",
    "occupancy_forest",
    "occupancy_negmulti",
    "occupancy_dirichlet",
    "inverse_cdf",
    "uniforms",
]
