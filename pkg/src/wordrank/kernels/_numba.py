"""numba-compiled kernels, same signatures and results as :mod:`._numpy`.

fastmath stays off: the prefix-score kernel relies on IEEE infinities.
"""

import numpy as np
from numba import njit

NAME = "numba"

_opts = dict(cache=True, nogil=True, fastmath=False)


@njit(**_opts)
def prefix_scores(n, start, order, in_ptr, in_edges, src, tgt, weights):
    lo = np.full(n, np.inf)
    hi = np.full(n, -np.inf)
    lo[start] = 0.0
    hi[start] = 0.0
    for v in order:
        for k in range(in_ptr[v], in_ptr[v + 1]):
            e = in_edges[k]
            u = src[e]
            a = lo[u] + weights[e]
            if a < lo[v]:
                lo[v] = a
            b = hi[u] + weights[e]
            if b > hi[v]:
                hi[v] = b
    return lo, hi


@njit(**_opts)
def ppf(n, start, src, tgt, weights):
    count = np.zeros(n)
    count[start] = 1.0
    possum = np.zeros(n)
    total = np.zeros(n)
    new_count = np.empty(n)
    new_possum = np.empty(n)
    k = 0
    alive = True
    while k < n and alive:
        k += 1
        new_count[:] = 0.0
        new_possum[:] = 0.0
        for e in range(src.shape[0]):
            u = src[e]
            flow = count[u]
            new_possum[tgt[e]] += possum[u] + flow * weights[e] / k
            new_count[tgt[e]] += flow
        alive = False
        for v in range(n):
            count[v] = new_count[v]
            possum[v] = new_possum[v]
            total[v] += possum[v]
            if count[v] != 0.0:
                alive = True
    return total


@njit(**_opts)
def _unit(x):
    norm = np.sqrt(np.dot(x, x))
    if norm > 0:
        return x / norm
    return x


@njit(**_opts)
def hits(n, src, tgt, tol, max_iter):
    auth = np.ones(n)
    hub = np.ones(n)
    iterations = 0
    converged = False
    m = src.shape[0]
    while iterations < max_iter:
        iterations += 1
        new_auth = np.zeros(n)
        for e in range(m):
            new_auth[tgt[e]] += hub[src[e]]
        new_auth = _unit(new_auth)
        new_hub = np.zeros(n)
        for e in range(m):
            new_hub[src[e]] += new_auth[tgt[e]]
        new_hub = _unit(new_hub)
        delta = 0.0
        for v in range(n):
            delta = max(delta, abs(new_auth[v] - auth[v]), abs(new_hub[v] - hub[v]))
        auth = new_auth
        hub = new_hub
        if delta < tol:
            converged = True
            break
    return auth, hub, iterations, converged


@njit(**_opts)
def pagerank(n, src, tgt, damping, tol, max_iter):
    outdeg = np.zeros(n)
    for e in range(src.shape[0]):
        outdeg[src[e]] += 1.0
    pr = np.full(n, 1.0 / n)
    mass = np.zeros(max_iter)
    iterations = 0
    converged = False
    while iterations < max_iter:
        flow = np.zeros(n)
        for e in range(src.shape[0]):
            u = src[e]
            flow[tgt[e]] += pr[u] * (1.0 / outdeg[u])
        dangling = 0.0
        for v in range(n):
            if outdeg[v] == 0.0:
                dangling += pr[v]
        base = ((1.0 - damping) + damping * dangling) / n
        new = damping * flow + base
        mass[iterations] = new.sum()
        new /= mass[iterations]
        iterations += 1
        delta = np.abs(new - pr).max()
        pr = new
        if delta < tol:
            converged = True
            break
    return pr, iterations, converged, mass[:iterations]
