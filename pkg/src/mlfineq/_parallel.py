"""Chunked thread parallelism for the array kernels.

The compiled kernels release the GIL, so a thread pool gives real speedup.
``MLF_THREADS`` caps the worker count.
"""

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import _backend

MIN_CHUNK = 1024


def n_threads():
    cap = os.cpu_count() or 1
    env = os.environ.get("MLF_THREADS")
    if env:
        try:
            cap = max(1, min(cap, int(env)))
        except ValueError:
            pass
    return cap


def run_kernel(kernel, z, *args):
    """Apply ``kernel(z, *args)`` over chunks of ``z``, preserving order."""
    z = np.ascontiguousarray(z, dtype=np.complex128)
    workers = n_threads() if _backend.BACKEND == "compiled" else 1
    if workers == 1 or z.size < 2 * MIN_CHUNK:
        return kernel(z, *args)
    n_chunks = min(workers * 4, z.size // MIN_CHUNK)
    parts = np.array_split(z, n_chunks)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(lambda part: kernel(part, *args), parts))
    return tuple(np.concatenate([r[i] for r in results]) for i in range(3))
