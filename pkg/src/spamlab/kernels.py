"""Backend selection for the hot loops.

The compiled ``_ckernels`` extension is used when it imports; otherwise,
or when ``SPAMLAB_PURE_PYTHON=1`` is set, the pure-Python ``_pykernels``.
"""

import os

from . import _pykernels

if os.environ.get("SPAMLAB_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:  # extension not built
        _impl = _pykernels

BACKEND = "cython" if _impl is not _pykernels else "python"

best_split_scan = _impl.best_split_scan
nb_scores = _impl.nb_scores


def available_backends() -> dict:
    backends = {"python": _pykernels}
    try:
        from . import _ckernels
        backends["cython"] = _ckernels
    except ImportError:
        pass
    return backends
