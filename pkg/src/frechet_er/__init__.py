"""Frechet means of Erdos-Renyi random graphs under the Frobenius distance
between graph Laplacians.

Submodules are imported explicitly (``from frechet_er import frechet``) so
that the command line can configure the numba thread pool before any
kernel is compiled.
"""

__version__ = "0.1.0"
SCHEMA_VERSION = 1
