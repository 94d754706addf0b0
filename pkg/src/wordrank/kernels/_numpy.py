"""Vectorised numpy kernels.

Used when numba is unavailable or disabled.  Each kernel sweeps the whole
edge array at once (``bincount`` / ``ufunc.at``) instead of walking vertices
in topological order, so no Python-level loop touches individual edges.
"""

import numpy as np

NAME = "numpy"


def prefix_scores(n, start, order, in_ptr, in_edges, src, tgt, weights):
    lo = np.full(n, np.inf)
    hi = np.full(n, -np.inf)
    lo[start] = 0.0
    hi[start] = 0.0
    # Bellman-Ford rounds; a DAG settles after (longest path + 1) rounds
    for _ in range(n):
        new_lo = lo.copy()
        new_hi = hi.copy()
        np.minimum.at(new_lo, tgt, lo[src] + weights)
        np.maximum.at(new_hi, tgt, hi[src] + weights)
        if np.array_equal(new_lo, lo) and np.array_equal(new_hi, hi):
            break
        lo, hi = new_lo, new_hi
    return lo, hi


def ppf(n, start, src, tgt, weights):
    count = np.zeros(n)
    count[start] = 1.0
    possum = np.zeros(n)
    total = np.zeros(n)
    k = 0
    while k < n and count.any():
        k += 1
        flow = count[src]
        new_possum = np.bincount(tgt, weights=possum[src] + flow * weights / k, minlength=n)
        count = np.bincount(tgt, weights=flow, minlength=n)
        possum = new_possum
        total += possum
    return total


def _unit(x):
    norm = np.sqrt(np.dot(x, x))
    return x / norm if norm > 0 else x


def hits(n, src, tgt, tol, max_iter):
    auth = np.ones(n)
    hub = np.ones(n)
    iterations = 0
    converged = False
    while iterations < max_iter:
        iterations += 1
        new_auth = _unit(np.bincount(tgt, weights=hub[src], minlength=n))
        new_hub = _unit(np.bincount(src, weights=new_auth[tgt], minlength=n))
        delta = max(np.abs(new_auth - auth).max(), np.abs(new_hub - hub).max())
        auth, hub = new_auth, new_hub
        if delta < tol:
            converged = True
            break
    return auth, hub, iterations, converged


def pagerank(n, src, tgt, damping, tol, max_iter):
    outdeg = np.bincount(src, minlength=n).astype(np.float64)
    dangling = outdeg == 0
    share = np.divide(1.0, outdeg, out=np.zeros(n), where=~dangling)
    pr = np.full(n, 1.0 / n)
    mass = np.zeros(max_iter)
    iterations = 0
    converged = False
    while iterations < max_iter:
        flow = np.bincount(tgt, weights=pr[src] * share[src], minlength=n)
        new = damping * flow + ((1.0 - damping) + damping * pr[dangling].sum()) / n
        mass[iterations] = new.sum()
        new /= mass[iterations]
        iterations += 1
        delta = np.abs(new - pr).max()
        pr = new
        if delta < tol:
            converged = True
            break
    return pr, iterations, converged, mass[:iterations]
