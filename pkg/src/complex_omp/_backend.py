"""Kernel backend selection.

The compiled ``_ckernels`` extension is used when it was built; otherwise the
numpy kernels in ``_pykernels``. ``COMPLEX_OMP_BACKEND`` (``auto``, ``cython``
or ``python``) overrides the choice at import time, and :func:`set_backend`
switches it at runtime (the benchmark uses this).
"""

import os

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

_available = {"python": _pykernels}
if _ckernels is not None:
    _available["cython"] = _ckernels

kernels = None


def available():
    return sorted(_available)


def set_backend(name="auto"):
    global kernels
    if name == "auto":
        name = "cython" if "cython" in _available else "python"
    if name not in _available:
        raise ValueError(f"backend {name!r} not available (have {available()})")
    kernels = _available[name]
    return name


def get_backend():
    return kernels.NAME


set_backend(os.environ.get("COMPLEX_OMP_BACKEND", "auto"))
