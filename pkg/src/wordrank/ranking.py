"""Vertex scoring on word graphs and attribution of vertex scores to words."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from . import kernels
from .graph import WordGraph, GraphError, path_counts

ALGORITHMS = ("minmax", "refscore", "hits-r1", "hits-r2", "hits-r3", "hits-r4", "ppf", "pagerank")
HITS_VARIANTS = ("r1", "r2", "r3", "r4")
AGGREGATES = ("sum", "max", "mean")


@dataclass(frozen=True, eq=False)
class VertexScores:
    values: np.ndarray
    converged: bool = True
    iterations: int = 0
    # per-sweep total mass before renormalisation (PageRank only)
    mass_history: np.ndarray | None = None

    def __getitem__(self, v: int) -> float:
        return float(self.values[v])

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True, eq=False)
class PrefixScores:
    min_score: np.ndarray
    max_score: np.ndarray


@dataclass(frozen=True)
class IterationParams:
    damping: float = 0.85
    tolerance: float = 1e-8
    max_iterations: int = 100

    def __post_init__(self):
        if not 0.0 < self.damping < 1.0:
            raise ValueError("damping must lie in (0, 1)")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if int(self.max_iterations) != self.max_iterations or self.max_iterations < 1:
            raise ValueError("max_iterations must be a positive integer")


@dataclass(frozen=True)
class WordRanking:
    entries: tuple[tuple[str, float], ...]
    algorithm: str
    graph_stats: tuple[int, int]
    converged: bool = True

    def words(self) -> list[str]:
        return [w for w, _ in self.entries]

    def top(self, k: int) -> list[str]:
        return [w for w, _ in self.entries[:k]]

    def __len__(self):
        return len(self.entries)


def _backend(name):
    return kernels.backend if name is None else kernels.get_backend(name)


def prefix_scores(g: WordGraph, backend: str | None = None) -> PrefixScores:
    """Minimum and maximum start-to-v path weight for every vertex.

    The maximum starts from -inf rather than 0 so vertices reached only by
    negative-weight paths report their true maximum.
    """
    in_ptr, in_edges = g.in_csr
    lo, hi = _backend(backend).prefix_scores(
        g.n_vertices, g.start, g.topological_order.order, in_ptr, in_edges, g.src, g.tgt, g.weights
    )
    return PrefixScores(lo, hi)


class _PathFraction:
    """Fraction of start-to-v paths whose weight is at most ``r``, memoised.

    ``frac(v, r) = sum over edges u->v of paths[u]/paths[v] * frac(u, r - w)``,
    with exact shortcuts once ``r`` clears the vertex's max or falls below
    its min.  Evaluated with an explicit stack so deep graphs don't hit the
    recursion limit.
    """

    def __init__(self, g: WordGraph, prefix: PrefixScores):
        self.lo = prefix.min_score.tolist()
        self.hi = prefix.max_score.tolist()
        self.paths = [float(p) for p in path_counts(g)]
        self.src = g.src.tolist()
        self.w = g.weights.tolist()
        indptr, ids = (a.tolist() for a in g.in_csr)
        self.incoming = [ids[indptr[v] : indptr[v + 1]] for v in range(g.n_vertices)]
        self.memo: dict[tuple[int, float], float] = {}

    def _leaf(self, v, r):
        if r >= self.hi[v]:
            return 1.0
        if r < self.lo[v]:
            return 0.0
        return None

    def __call__(self, v: int, r: float) -> float:
        memo = self.memo
        stack = [(v, r)]
        while stack:
            node, rem = stack[-1]
            if (node, rem) in memo:
                stack.pop()
                continue
            leaf = self._leaf(node, rem)
            if leaf is not None:
                memo[node, rem] = leaf
                stack.pop()
                continue
            children = [(self.src[e], rem - self.w[e]) for e in self.incoming[node]]
            pending = [c for c in children if c not in memo]
            if pending:
                stack.extend(pending)
                continue
            total = sum(self.paths[u] * memo[u, x] for u, x in children)
            memo[node, rem] = total / self.paths[node]
            stack.pop()
        return memo[v, r]


def _clamped(lo: float, hi: float, ref_score: float):
    if ref_score <= lo:
        return 0.0
    if ref_score >= hi:
        return 1.0
    return None


def reference_rank(g: WordGraph, v: int, ref_score: float, prefix: PrefixScores | None = None) -> float:
    """Share of start-to-v paths whose weight does not exceed ``ref_score``.

    Returns exactly 0 when ``ref_score`` is at or below the vertex's minimum
    prefix score and exactly 1 at or above its maximum.
    """
    if not 0 <= v < g.n_vertices:
        raise GraphError(f"unknown vertex {v}")
    prefix = prefix or prefix_scores(g)
    clamp = _clamped(prefix.min_score[v], prefix.max_score[v], ref_score)
    if clamp is not None:
        return clamp
    return _PathFraction(g, prefix)(int(v), float(ref_score))


def reference_ranks(g: WordGraph, ref_score: float, prefix: PrefixScores | None = None) -> VertexScores:
    prefix = prefix or prefix_scores(g)
    frac = None
    out = np.empty(g.n_vertices)
    for v in range(g.n_vertices):
        clamp = _clamped(prefix.min_score[v], prefix.max_score[v], ref_score)
        if clamp is None:
            frac = frac or _PathFraction(g, prefix)
            clamp = frac(v, float(ref_score))
        out[v] = clamp
    return VertexScores(out)


def hits(
    g: WordGraph, params: IterationParams = IterationParams(), backend: str | None = None
) -> tuple[VertexScores, VertexScores]:
    """Authority and hub scores, each L2-normalised after every sweep."""
    auth, hub, iterations, converged = _backend(backend).hits(
        g.n_vertices, g.src, g.tgt, float(params.tolerance), int(params.max_iterations)
    )
    return VertexScores(auth, bool(converged), int(iterations)), VertexScores(hub, bool(converged), int(iterations))


def hits_rank(auth: VertexScores, hub: VertexScores, variant: str) -> VertexScores:
    if len(auth) != len(hub):
        raise ValueError("authority and hub scores cover different vertex sets")
    variant = variant.lower()
    if variant == "r1":
        values = auth.values
    elif variant == "r2":
        values = hub.values
    elif variant == "r3":
        values = 0.5 * (auth.values + hub.values)
    elif variant == "r4":
        values = np.maximum(auth.values, hub.values)
    else:
        raise ValueError(f"unknown HITS variant {variant!r}; expected one of {HITS_VARIANTS}")
    return VertexScores(values, auth.converged and hub.converged, auth.iterations)


def ppf(g: WordGraph, backend: str | None = None) -> VertexScores:
    """Positional power: over all start-to-v paths, the sum of ``w_i / i`` along each path.

    Computed by grouping paths by length, never by enumerating them.
    """
    return VertexScores(_backend(backend).ppf(g.n_vertices, g.start, g.src, g.tgt, g.weights))


def pagerank(g: WordGraph, params: IterationParams = IterationParams(), backend: str | None = None) -> VertexScores:
    """PageRank with the end vertex's (dangling) mass spread uniformly each sweep."""
    pr, iterations, converged, mass = _backend(backend).pagerank(
        g.n_vertices, g.src, g.tgt, float(params.damping), float(params.tolerance), int(params.max_iterations)
    )
    return VertexScores(pr, bool(converged), int(iterations), mass)


def attribute_scores_to_words(
    g: WordGraph, scores: VertexScores, aggregate: str = "sum", algorithm: str = "", converged: bool = True
) -> WordRanking:
    """Score each word by aggregating the scores of the vertices its edges lead into."""
    if aggregate not in AGGREGATES:
        raise ValueError(f"unknown aggregate {aggregate!r}; expected one of {AGGREGATES}")
    if len(scores) != g.n_vertices:
        raise ValueError("scores do not cover the graph's vertices")
    values = scores.values.tolist()
    collected: dict[str, list[float]] = {}
    for label, t in zip(g.labels, g.tgt.tolist()):
        collected.setdefault(label, []).append(values[t])
    if aggregate == "sum":
        word_scores = {w: sum(xs) for w, xs in collected.items()}
    elif aggregate == "max":
        word_scores = {w: max(xs) for w, xs in collected.items()}
    else:
        word_scores = {w: sum(xs) / len(xs) for w, xs in collected.items()}
    entries = tuple(sorted(word_scores.items(), key=lambda item: (-item[1], item[0])))
    return WordRanking(entries, algorithm, (g.n_vertices, g.n_edges), converged)


def _spread(prefix: PrefixScores) -> np.ndarray:
    spread = prefix.max_score - prefix.min_score
    low, high = spread.min(), spread.max()
    if high <= low:
        return np.zeros_like(spread)
    return (spread - low) / (high - low)


def vertex_scores(
    g: WordGraph,
    algorithm: str,
    params: IterationParams = IterationParams(),
    ref_score: float | Literal["auto"] = "auto",
    backend: str | None = None,
) -> VertexScores:
    if algorithm == "minmax":
        return VertexScores(_spread(prefix_scores(g, backend)))
    if algorithm == "refscore":
        prefix = prefix_scores(g, backend)
        if ref_score == "auto":
            ref_score = 0.5 * (prefix.min_score[g.end] + prefix.max_score[g.end])
        return reference_ranks(g, float(ref_score), prefix)
    if algorithm.startswith("hits-") and algorithm[5:] in HITS_VARIANTS:
        auth, hub = hits(g, params, backend)
        return hits_rank(auth, hub, algorithm[5:])
    if algorithm == "ppf":
        return ppf(g, backend)
    if algorithm == "pagerank":
        return pagerank(g, params, backend)
    raise ValueError(f"unknown algorithm {algorithm!r}; expected one of {', '.join(ALGORITHMS)}")


def rank_words(
    g: WordGraph,
    algorithm: str,
    params: IterationParams = IterationParams(),
    ref_score: float | Literal["auto"] = "auto",
    aggregate: str = "sum",
    backend: str | None = None,
) -> WordRanking:
    scores = vertex_scores(g, algorithm, params, ref_score, backend)
    return attribute_scores_to_words(g, scores, aggregate, algorithm, scores.converged)
