"""Kernel selection.

The compiled kernel is used when it imported and the frame fits in 64 points
per sort; ``POLARFRAMES_PURE=1`` forces the pure-Python kernel everywhere.
"""

import os

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

FORCE_PURE = os.environ.get("POLARFRAMES_PURE", "") not in ("", "0")


def compiled_available():
    return _ckernels is not None


def active_backend():
    return "python" if FORCE_PURE or _ckernels is None else _ckernels.BACKEND


def make_kernel(nx, ny, gal_rows, rp, backend=None):
    """Build a kernel for the given tables.

    ``backend`` may be ``"python"`` or ``"cython"`` to pin one; ``None`` picks
    the fastest usable one.
    """
    if backend == "python":
        return _pykernels.FrameKernel(nx, ny, gal_rows, rp)
    if backend == "cython":
        if _ckernels is None:
            raise RuntimeError("compiled kernel is not available")
        return _ckernels.FrameKernel(nx, ny, gal_rows, rp)
    if backend is not None:
        raise ValueError(f"unknown backend {backend!r}")
    if FORCE_PURE or _ckernels is None or nx > 64 or ny > 64:
        return _pykernels.FrameKernel(nx, ny, gal_rows, rp)
    return _ckernels.FrameKernel(nx, ny, gal_rows, rp)
