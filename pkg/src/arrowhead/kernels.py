"""Backend selection for the hot kernels.

The compiled extension is preferred. Setting ``ARROWHEAD_PURE_PYTHON=1``
before import forces the NumPy fallback.
"""

import os

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    BACKENDS["compiled"] = _ckernels

if _ckernels is not None and not os.environ.get("ARROWHEAD_PURE_PYTHON"):
    BACKEND = "compiled"
else:
    BACKEND = "python"

_impl = BACKENDS[BACKEND]
turtle_walk = _impl.turtle_walk
sturm_count = _impl.sturm_count
tridiag_eigvalsh = _impl.tridiag_eigvalsh


def get_backend(name=None):
    """Return the kernel module called ``name`` (default: the active one)."""
    if name is None:
        name = BACKEND
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"kernel backend {name!r} is not available; have {sorted(BACKENDS)}") from None
