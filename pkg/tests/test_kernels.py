import os
import subprocess
import sys

import numpy as np
import pytest

from frechet_er import _kernels_numpy, kernels, rng
from frechet_er.er_model import ErParams
from frechet_er.frechet import construct_mean

numba_only = pytest.mark.skipif(kernels.BACKEND != "numba", reason="numba backend not active")


def reference(n, p):
    mean = construct_mean(ErParams(n, p))
    return mean.degrees().astype(np.int64), mean.positions.astype(np.int64)


@numba_only
@pytest.mark.parametrize("n, p", [(2, 0.5), (10, 0.05), (60, 0.3), (200, 0.97), (1000, 4e-6)])
def test_edge_positions_agree(n, p):
    for stream in range(4):
        key = np.uint64(rng.derive_key(17, stream))
        assert np.array_equal(kernels.edge_positions(n, p, key),
                              _kernels_numpy.edge_positions(n, p, key))


@numba_only
@pytest.mark.parametrize("n, p", [(5, 0.3), (60, 0.23), (300, 0.01), (150, 0.8)])
def test_fn2_batch_agree(n, p):
    deg, pos = reference(n, p)
    fast = kernels.fn2_batch(n, p, 99, deg, pos, 3, 40)
    slow = _kernels_numpy.fn2_batch(n, p, np.uint64(99), deg, pos, 3, 40)
    assert np.array_equal(fast, slow)


@numba_only
@pytest.mark.parametrize("n, p", [(3, 0.5), (30, 0.1), (80, 0.3)])
def test_stein_agree(n, p):
    fast = kernels.stein_batch(n, p, 5, 2, 8)
    slow = _kernels_numpy.stein_batch(n, p, np.uint64(5), 2, 8)
    assert np.array_equal(fast, slow)
    z = (np.arange(n * (n - 1) // 2) % 3 == 0).astype(np.uint8)
    zp = (np.arange(n * (n - 1) // 2) % 2 == 0).astype(np.uint8)
    for a, b in zip(kernels.stein_terms(n, z, zp), _kernels_numpy.stein_terms(n, z, zp)):
        assert np.array_equal(a, b)


def test_batch_windows_compose():
    deg, pos = reference(70, 0.2)
    whole = kernels.fn2_batch(70, 0.2, 8, deg, pos, 0, 30)
    parts = np.concatenate([kernels.fn2_batch(70, 0.2, 8, deg, pos, 0, 12),
                            kernels.fn2_batch(70, 0.2, 8, deg, pos, 12, 18)])
    assert np.array_equal(whole, parts)


def test_env_flag_selects_numpy():
    code = "from frechet_er import kernels; print(kernels.BACKEND)"
    env = dict(os.environ, FRECHET_ER_BACKEND="numpy")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                         text=True, check=True)
    assert out.stdout.strip() == "numpy"


def test_set_threads_accepts_any_count():
    for count in (1, 4, 8, None):
        kernels.set_threads(count)
