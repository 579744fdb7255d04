"""Counter-based random streams.

Every random draw in the package is a pure function of ``(seed, stream, k)``:

* ``mix64`` is the SplitMix64 finaliser (multipliers ``0xBF58476D1CE4E5B9``
  and ``0x94D049BB133111EB``, shifts 30/27/31).
* ``derive_key(seed, stream) = mix64(seed ^ mix64((stream + 1) * GAMMA))``
  with ``GAMMA = 0x9E3779B97F4A7C15``. Replica ``r`` of a simulation uses
  stream ``r``; paired Stein samples use streams ``2r`` and ``2r + 1``.
* The ``k``-th uniform (``k >= 1``) of a key is
  ``((mix64(key + k * GAMMA) >> 11) + 1) * 2**-53``, which lies in ``(0, 1]``.

All arithmetic is modulo 2**64, so the numba kernels and the numpy fallback
produce the same bits on any platform, whatever the thread count.
"""

import numpy as np

GAMMA = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB
MASK64 = (1 << 64) - 1
INV_2_53 = 1.0 / 9007199254740992.0


def mix64_int(z: int) -> int:
    """SplitMix64 finaliser on a Python integer."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * MIX1) & MASK64
    z = ((z ^ (z >> 27)) * MIX2) & MASK64
    return z ^ (z >> 31)


def mix64(z):
    """Vectorised SplitMix64 finaliser on a ``uint64`` array."""
    z = np.asarray(z, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * np.uint64(MIX1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(MIX2)
    return z ^ (z >> np.uint64(31))


def normalize_seed(seed: int) -> int:
    return int(seed) & MASK64


def derive_key(seed: int, stream: int) -> int:
    """Key of stream ``stream`` under ``seed`` (both reduced mod 2**64)."""
    inner = mix64_int(((int(stream) + 1) * GAMMA) & MASK64)
    return mix64_int(normalize_seed(seed) ^ inner)


def uniforms(key: int, start: int, count: int) -> np.ndarray:
    """Uniforms ``k = start, ..., start + count - 1`` of stream ``key``."""
    k = np.arange(start, start + count, dtype=np.uint64)
    with np.errstate(over="ignore"):
        x = mix64(np.uint64(key) + k * np.uint64(GAMMA))
    return ((x >> np.uint64(11)).astype(np.float64) + 1.0) * INV_2_53
