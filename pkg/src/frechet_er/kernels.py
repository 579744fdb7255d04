"""Backend dispatch for the hot loops.

The numba kernels are used when numba imports cleanly. Setting the
environment variable ``FRECHET_ER_BACKEND=numpy`` (before import) selects
the pure-numpy path instead; both produce identical integer outputs.
"""

import os

import numpy as np

from . import _kernels_numpy

BACKEND_ENV = "FRECHET_ER_BACKEND"


def _select_backend():
    if os.environ.get(BACKEND_ENV, "numba").strip().lower() == "numpy":
        return "numpy", _kernels_numpy
    # TBB on this class of machine is too old and only produces a warning
    os.environ.setdefault("NUMBA_THREADING_LAYER", "workqueue")
    try:
        from . import _kernels_numba
    except ImportError:
        return "numpy", _kernels_numpy
    return "numba", _kernels_numba


BACKEND, _impl = _select_backend()


def set_threads(count):
    """Size the worker pool. Results never depend on this value."""
    if BACKEND != "numba" or count is None:
        return
    import numba

    numba.set_num_threads(max(1, min(int(count), numba.config.NUMBA_NUM_THREADS)))


def edge_positions(n, p, key):
    """Sorted 0-based lexicographic positions of the sampled edges."""
    return _impl.edge_positions(int(n), float(p), np.uint64(key))


def fn2_batch(n, p, seed, ref_deg, ref_pos, first, count):
    """Squared Laplacian-Frobenius distances from replicas ``first ..
    first + count - 1`` to a fixed reference graph."""
    return _impl.fn2_batch(
        int(n),
        float(p),
        np.uint64(seed),
        np.ascontiguousarray(ref_deg, dtype=np.int64),
        np.ascontiguousarray(ref_pos, dtype=np.int64),
        int(first),
        int(count),
    )


def stein_terms(n, z, zp):
    return _impl.stein_terms(
        int(n), np.ascontiguousarray(z, np.uint8), np.ascontiguousarray(zp, np.uint8)
    )


def stein_batch(n, p, seed, first, count):
    """Integer sums behind ``V_n`` and ``V_n*`` for paired samples."""
    return _impl.stein_batch(int(n), float(p), np.uint64(seed), int(first), int(count))
