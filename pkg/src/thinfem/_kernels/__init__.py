"""Hot-kernel dispatch: compiled Cython core when available, numpy otherwise.

Set THINFEM_PURE=1 in the environment to force the numpy fallback (used by
the benchmark and by tests that compare the two implementations).
"""

import os

from . import numpy_impl

if os.environ.get("THINFEM_PURE") == "1":
    _impl = numpy_impl
    HAVE_COMPILED = False
else:
    try:
        from . import _core as _impl  # type: ignore[no-redef]

        HAVE_COMPILED = True
    except ImportError:
        _impl = numpy_impl
        HAVE_COMPILED = False

csr_matvec = _impl.csr_matvec
tri_corner_angles = _impl.tri_corner_angles

__all__ = ["HAVE_COMPILED", "csr_matvec", "tri_corner_angles", "numpy_impl"]
