"""Backend selection for the hot loops.

The compiled extension is used when it imports; otherwise the pure-Python
module is. Setting ``CRDCACHE_PURE_PYTHON=1`` forces the fallback.
"""

import os

import numpy as np

from crdcache import _kernels_py

BACKENDS = {"python": _kernels_py}

try:
    from crdcache import _kernels as _compiled
except ImportError:
    _compiled = None
else:
    BACKENDS["cython"] = _compiled

if _compiled is not None and not os.environ.get("CRDCACHE_PURE_PYTHON"):
    BACKEND = "cython"
else:
    BACKEND = "python"

_impl = BACKENDS[BACKEND]


def get_backend(name=None):
    """Return the kernel module called ``name`` (default: the active one)."""
    if name is None:
        return _impl
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"kernel backend {name!r} is not available; have {sorted(BACKENDS)}") from None


def intersection_counts(incidence, combos, backend=None):
    incidence = np.ascontiguousarray(incidence, dtype=np.uint8)
    combos = np.ascontiguousarray(combos, dtype=np.int64)
    if combos.ndim != 2 or combos.shape[1] == 0:
        raise ValueError("combos must be a non-empty 2-D array of block indices")
    return get_backend(backend).intersection_counts(incidence, combos)


def decode_symbolic(cached, demands, n_files, term_files, term_points, backend=None):
    return get_backend(backend).decode_symbolic(
        np.ascontiguousarray(cached, dtype=np.uint8),
        np.ascontiguousarray(demands, dtype=np.int64),
        int(n_files),
        np.ascontiguousarray(term_files, dtype=np.int64),
        np.ascontiguousarray(term_points, dtype=np.int64),
    )


def decode_payload(cached, demands, n_files, term_files, term_points, tx_values, file_values, backend=None):
    return get_backend(backend).decode_payload(
        np.ascontiguousarray(cached, dtype=np.uint8),
        np.ascontiguousarray(demands, dtype=np.int64),
        int(n_files),
        np.ascontiguousarray(term_files, dtype=np.int64),
        np.ascontiguousarray(term_points, dtype=np.int64),
        np.ascontiguousarray(tx_values, dtype=np.uint64),
        np.ascontiguousarray(file_values, dtype=np.uint64),
    )
