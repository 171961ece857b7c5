"""Backend selection for the hot kernels.

The compiled ``_ckernels`` extension is preferred; the numpy module
``_pykernels`` is used when the extension was not built or when the
environment variable ``FTR_PURE_PYTHON`` is set to a non-empty value other
than ``0``. ``BACKEND`` names the active choice.
"""

import os

import numpy as np

from . import _pykernels

if os.environ.get("FTR_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"


def ftr_transform(p, a1, a2, a3, a4, m, lead, ucoef, impl=None):
    impl = impl or _impl
    p = np.asarray(p, dtype=complex)
    out = impl.ftr_transform(p.ravel(), a1, a2, a3, a4, int(m), lead, ucoef)
    return np.asarray(out).reshape(p.shape)


def mixture_pdf(x, beta, m, kappas, weights, impl=None):
    impl = impl or _impl
    x = np.asarray(x, dtype=float)
    out = impl.mixture_pdf(x.ravel(), beta, int(m), np.asarray(kappas, float), np.asarray(weights, float))
    return np.asarray(out).reshape(x.shape)


def mixture_sf(x, beta, m, kappas, weights, impl=None):
    impl = impl or _impl
    x = np.asarray(x, dtype=float)
    out = impl.mixture_sf(x.ravel(), beta, int(m), np.asarray(kappas, float), np.asarray(weights, float))
    return np.asarray(out).reshape(x.shape)


def implementations():
    """Every importable backend, keyed by name (used by tests and benchmarks)."""
    found = {"python": _pykernels}
    try:
        from . import _ckernels

        found["cython"] = _ckernels
    except ImportError:
        pass
    return found
