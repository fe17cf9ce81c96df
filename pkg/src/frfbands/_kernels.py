"""Compiled per-replicate statistics for the bootstrap.

Inputs are PIRs stored time-major, ``XT[t, i]``, so the per-member loops run
over contiguous memory and vectorize. Each replicate writes only its own
output slot, so results do not depend on how replicates are spread over
threads.
"""

import os

import numpy as np
from numba import config, njit, prange

if "NUMBA_THREADING_LAYER" not in os.environ and "NUMBA_THREADING_LAYER_PRIORITY" not in os.environ:
    # the bundled TBB is often too old and numba warns on every import
    config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]


@njit(cache=True, fastmath=True)
def _moments(XT, row, weights, mean, inv_sigma, eps):
    n_t, n = XT.shape
    m = row.shape[0]
    weights[:] = 0.0
    for j in range(m):
        weights[row[j]] += 1.0
    degenerate = False
    for t in range(n_t):
        acc = 0.0
        for i in range(n):
            acc += weights[i] * XT[t, i]
        mu = acc / m
        acc = 0.0
        for i in range(n):
            d = XT[t, i] - mu
            acc += weights[i] * d * d
        s = np.sqrt(acc / (m - 1))
        if s < eps:
            s = eps
            degenerate = True
        mean[t] = mu
        inv_sigma[t] = 1.0 / s
    return degenerate


@njit(parallel=True, cache=True, fastmath=True)
def prediction_statistics(XT, indices, eps):
    """``out[b, i] = max_t |x_i(t) - mean_b(t)| / sigma_b(t)`` for each original member."""
    n_t, n = XT.shape
    n_rep = indices.shape[0]
    out = np.empty((n_rep, n))
    degenerate = np.zeros(n_rep, dtype=np.bool_)
    for b in prange(n_rep):
        weights = np.empty(n)
        mean = np.empty(n_t)
        inv_sigma = np.empty(n_t)
        degenerate[b] = _moments(XT, indices[b], weights, mean, inv_sigma, eps)
        acc = np.zeros(n)
        for t in range(n_t):
            mu = mean[t]
            w = inv_sigma[t]
            for i in range(n):
                acc[i] = max(acc[i], abs(XT[t, i] - mu) * w)
        out[b, :] = acc
    return out, degenerate


@njit(parallel=True, cache=True, fastmath=True)
def confidence_statistics(XT, indices, reference, eps):
    """``out[b] = max_t |reference(t) - mean_b(t)| / sigma_b(t)``."""
    n_t, n = XT.shape
    n_rep = indices.shape[0]
    out = np.empty(n_rep)
    degenerate = np.zeros(n_rep, dtype=np.bool_)
    for b in prange(n_rep):
        weights = np.empty(n)
        mean = np.empty(n_t)
        inv_sigma = np.empty(n_t)
        degenerate[b] = _moments(XT, indices[b], weights, mean, inv_sigma, eps)
        mx = 0.0
        for t in range(n_t):
            mx = max(mx, abs(reference[t] - mean[t]) * inv_sigma[t])
        out[b] = mx
    return out, degenerate
