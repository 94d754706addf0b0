"""Word graphs: edge-labelled, edge-weighted DAGs with one start and one end vertex.

Vertices are dense integer ids ``0 .. n-1``.  Edges carry a word label and a
real weight; parallel edges are allowed.  Graphs are immutable: every
operation that changes structure returns a new graph, and every graph is
validated when it is constructed.
"""

from __future__ import annotations

import heapq
import math
from collections import Counter, deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .corpus import TokenizedDocument

DEFAULT_COUNT_CAP = 2**128
SENTENCE_START = "<s>"
SENTENCE_END = "</s>"
WEIGHTING_SCHEMES = ("bigram", "uniform", "logcount")


class GraphError(ValueError):
    pass


class CycleError(GraphError):
    pass


class MergeCycleError(CycleError):
    pass


class EmptyDocumentError(GraphError):
    pass


class PathCountOverflow(OverflowError):
    pass


class Edge(NamedTuple):
    src: int
    tgt: int
    label: str
    weight: float


@dataclass(frozen=True, eq=False)
class TopologicalOrder:
    order: np.ndarray
    # 1-based rank of each vertex in ``order``
    position: np.ndarray


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def _csr(n: int, keys: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Group edge ids by ``keys`` (stable, so parallel edges keep insertion order)."""
    edge_ids = np.argsort(keys, kind="stable").astype(np.int64)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(keys, minlength=n), out=indptr[1:])
    return _readonly(indptr), _readonly(edge_ids)


def _kahn(n: int, src: np.ndarray, tgt: np.ndarray) -> list[int]:
    # Kahn's algorithm; a min-heap makes ties resolve to the smallest vertex id.
    indeg = np.bincount(tgt, minlength=n).tolist()
    out_ptr, out_edges = _csr(n, src)
    out_ptr, out_edges, tgt_l = out_ptr.tolist(), out_edges.tolist(), tgt.tolist()
    heap = [v for v in range(n) if indeg[v] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        v = heapq.heappop(heap)
        order.append(v)
        for k in range(out_ptr[v], out_ptr[v + 1]):
            w = tgt_l[out_edges[k]]
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(heap, w)
    if len(order) < n:
        raise CycleError(f"graph has a directed cycle through {n - len(order)} vertices")
    return order


class WordGraph:
    """Directed acyclic multigraph with labelled, weighted edges."""

    def __init__(self, n_vertices: int, edges: Iterable[Edge | tuple], start: int, end: int):
        edges = [Edge(int(s), int(t), str(lab), float(w)) for s, t, lab, w in edges]
        self._n = int(n_vertices)
        self._start = int(start)
        self._end = int(end)
        self._src = _readonly(np.array([e.src for e in edges], dtype=np.int64))
        self._tgt = _readonly(np.array([e.tgt for e in edges], dtype=np.int64))
        self._weights = _readonly(np.array([e.weight for e in edges], dtype=np.float64))
        self._labels = tuple(e.label for e in edges)
        validate(self)

    n_vertices = property(lambda self: self._n)
    n_edges = property(lambda self: len(self._labels))
    start = property(lambda self: self._start)
    end = property(lambda self: self._end)
    src = property(lambda self: self._src)
    tgt = property(lambda self: self._tgt)
    weights = property(lambda self: self._weights)
    labels = property(lambda self: self._labels)

    @cached_property
    def edges(self) -> tuple[Edge, ...]:
        return tuple(
            Edge(s, t, lab, w)
            for s, t, lab, w in zip(self._src.tolist(), self._tgt.tolist(), self._labels, self._weights.tolist())
        )

    @cached_property
    def in_degrees(self) -> np.ndarray:
        return _readonly(np.bincount(self._tgt, minlength=self._n).astype(np.int64))

    @cached_property
    def out_degrees(self) -> np.ndarray:
        return _readonly(np.bincount(self._src, minlength=self._n).astype(np.int64))

    @cached_property
    def in_csr(self) -> tuple[np.ndarray, np.ndarray]:
        """``(indptr, edge_ids)``: edges entering ``v`` are ``edge_ids[indptr[v]:indptr[v+1]]``."""
        return _csr(self._n, self._tgt)

    @cached_property
    def out_csr(self) -> tuple[np.ndarray, np.ndarray]:
        return _csr(self._n, self._src)

    @cached_property
    def topological_order(self) -> TopologicalOrder:
        order = np.array(_kahn(self._n, self._src, self._tgt), dtype=np.int64)
        position = np.empty(self._n, dtype=np.int64)
        position[order] = np.arange(1, self._n + 1)
        return TopologicalOrder(_readonly(order), _readonly(position))

    def in_edges(self, v: int) -> np.ndarray:
        indptr, ids = self.in_csr
        return ids[indptr[v] : indptr[v + 1]]

    def out_edges(self, v: int) -> np.ndarray:
        indptr, ids = self.out_csr
        return ids[indptr[v] : indptr[v + 1]]

    def __repr__(self):
        return f"WordGraph(|V|={self._n}, |E|={self.n_edges}, start={self._start}, end={self._end})"


def validate(g: WordGraph) -> None:
    """Raise :class:`GraphError` unless ``g`` is a well-formed word graph.

    Checks endpoint ranges, self-loops, labels, finite weights, acyclicity,
    and that ``start``/``end`` are the only source/sink.  Given those, every
    vertex automatically lies on a start-to-end path.
    """
    n = g.n_vertices
    if n < 1:
        raise GraphError("a word graph needs at least one vertex")
    if not (0 <= g.start < n and 0 <= g.end < n):
        raise GraphError("start/end vertex out of range")
    src, tgt = g.src, g.tgt
    if len(src) and (src.min() < 0 or tgt.min() < 0 or src.max() >= n or tgt.max() >= n):
        raise GraphError("edge endpoint outside the vertex set")
    if np.any(src == tgt):
        raise CycleError("self-loop edge")
    if not all(g.labels):
        raise GraphError("edge with an empty label")
    if not np.all(np.isfinite(g.weights)):
        raise GraphError("non-finite edge weight")
    _ = g.topological_order  # raises CycleError
    sources = np.flatnonzero(g.in_degrees == 0)
    sinks = np.flatnonzero(g.out_degrees == 0)
    if sources.tolist() != [g.start]:
        raise GraphError(f"start {g.start} must be the unique in-degree-0 vertex, found {sources.tolist()}")
    if sinks.tolist() != [g.end]:
        raise GraphError(f"end {g.end} must be the unique out-degree-0 vertex, found {sinks.tolist()}")
    if n > 1 and g.start == g.end:
        raise GraphError("start and end coincide in a multi-vertex graph")


def _check_vertex(g: WordGraph, v: int) -> int:
    if not 0 <= v < g.n_vertices:
        raise GraphError(f"unknown vertex {v}")
    return int(v)


def in_degree(g: WordGraph, v: int) -> int:
    return int(g.in_degrees[_check_vertex(g, v)])


def out_degree(g: WordGraph, v: int) -> int:
    return int(g.out_degrees[_check_vertex(g, v)])


def topological_order(g: WordGraph) -> TopologicalOrder:
    return g.topological_order


def density(g: WordGraph) -> float:
    """Average number of edges spanning each topological position.

    The running count gains a vertex's out-degree as well as losing its
    in-degree; subtracting alone would drive it negative.
    """
    indeg, outdeg = g.in_degrees, g.out_degrees
    dens = 0
    total = 0
    for v in g.topological_order.order.tolist():
        dens += int(outdeg[v]) - int(indeg[v])
        total += dens
    return total / g.n_vertices


def _capped(value: int, cap: int, what: str) -> int:
    if value > cap:
        raise PathCountOverflow(f"{what} exceeds the configured cap {cap}")
    return value


def path_counts(g: WordGraph, cap: int = DEFAULT_COUNT_CAP) -> list[int]:
    """Number of start-to-v paths for every vertex (parallel edges count separately)."""
    paths = [0] * g.n_vertices
    src = g.src.tolist()
    indptr, ids = (a.tolist() for a in g.in_csr)
    for v in g.topological_order.order.tolist():
        if v == g.start:
            paths[v] = 1
            continue
        paths[v] = _capped(sum(paths[src[e]] for e in ids[indptr[v] : indptr[v + 1]]), cap, "path count")
    return paths


def count_paths(g: WordGraph, cap: int = DEFAULT_COUNT_CAP) -> int:
    return path_counts(g, cap)[g.end]


def parser_steps(g: WordGraph, start_only: bool = False, cap: int = DEFAULT_COUNT_CAP) -> int:
    """Total derivation steps of a chart parser that seeds every vertex.

    ``deriv_v[i]`` counts derivations of length ``i`` ending at ``v``;
    ``deriv_v[1]`` is 1 at every vertex, or only at the start vertex when
    ``start_only`` is set.  The total sums ``deriv_v[i]`` for ``i >= 2``.
    Lengths are bounded by ``|V|`` so arrays are kept only as long as the
    longest derivation that can reach each vertex.
    """
    n = g.n_vertices
    src = g.src.tolist()
    indptr, ids = (a.tolist() for a in g.in_csr)
    deriv: list[list[int]] = [[] for _ in range(n)]
    total = 0
    for v in g.topological_order.order.tolist():
        preds = [deriv[src[e]] for e in ids[indptr[v] : indptr[v + 1]]]
        length = min(n, max((len(p) for p in preds), default=1) + 1)
        # index 0 unused so that row[i] matches deriv_v[i]
        row = [0] * (length + 1)
        row[1] = 1 if (not start_only or v == g.start) else 0
        for i in range(2, length + 1):
            row[i] = sum(p[i - 1] for p in preds if i - 1 < len(p))
            total += row[i]
        deriv[v] = _trim(row)
        _capped(total, cap, "parser step count")
    return total


def _trim(row: list[int]) -> list[int]:
    while len(row) > 2 and row[-1] == 0:
        row.pop()
    return row


def reduce_to_unique_label_sequences(g: WordGraph) -> WordGraph:
    """Equivalent graph in which each start-to-end label sequence has exactly one path.

    Each new vertex stands for the set of old vertices reachable by one label
    prefix; identically labelled edges leaving such a set are fused.  Edges
    into the old end vertex keep going to a single end vertex, so sequences
    that stop and sequences that continue stay apart.  A fused edge takes the
    largest weight among the edges it replaces.
    """
    if g.n_vertices == 1:
        return g
    end_marker = -1
    start_state = frozenset([g.start])
    state_ids = {start_state: 0}
    queue = deque([start_state])
    new_edges: list[list] = []
    tgt, weights, labels = g.tgt.tolist(), g.weights.tolist(), g.labels
    while queue:
        state = queue.popleft()
        sid = state_ids[state]
        targets: dict[str, set[int]] = {}
        to_end: dict[str, float] = {}
        inner_w: dict[str, float] = {}
        for v in sorted(state):
            for e in g.out_edges(v).tolist():
                lab, w, t = labels[e], weights[e], tgt[e]
                if t == g.end:
                    to_end[lab] = max(to_end.get(lab, -math.inf), w)
                else:
                    targets.setdefault(lab, set()).add(t)
                    inner_w[lab] = max(inner_w.get(lab, -math.inf), w)
        for lab in sorted(targets.keys() | to_end.keys()):
            if lab in targets:
                nxt = frozenset(targets[lab])
                if nxt not in state_ids:
                    state_ids[nxt] = len(state_ids)
                    queue.append(nxt)
                new_edges.append([sid, state_ids[nxt], lab, inner_w[lab]])
            if lab in to_end:
                new_edges.append([sid, end_marker, lab, to_end[lab]])
    end_id = len(state_ids)
    for edge in new_edges:
        if edge[1] == end_marker:
            edge[1] = end_id
    return WordGraph(end_id + 1, new_edges, 0, end_id)


def _contract(g: WordGraph, rep: Sequence[int]) -> WordGraph:
    """Map every vertex ``v`` onto ``rep[v]`` and re-index densely.

    Edges between representatives survive as they are.  A redirected edge is
    dropped when an edge with the same source, label and target already
    exists.
    """
    kept, moved = [], []
    for e in g.edges:
        (kept if rep[e.src] == e.src and rep[e.tgt] == e.tgt else moved).append(e)
    seen = {(e.src, e.label, e.tgt) for e in kept}
    out = list(kept)
    for e in moved:
        s, t = rep[e.src], rep[e.tgt]
        if s == t:
            raise MergeCycleError(f"merge turns edge {e.src}->{e.tgt} into a self-loop")
        if (s, e.label, t) in seen:
            continue
        seen.add((s, e.label, t))
        out.append(Edge(s, t, e.label, e.weight))

    survivors = sorted({rep[v] for v in range(g.n_vertices)})
    new_id = {v: i for i, v in enumerate(survivors)}
    edges = [Edge(new_id[e.src], new_id[e.tgt], e.label, e.weight) for e in out]
    try:
        return WordGraph(len(survivors), edges, new_id[rep[g.start]], new_id[rep[g.end]])
    except CycleError as exc:
        raise MergeCycleError(f"merge would create a cycle: {exc}") from None


def merge_vertices(g: WordGraph, v1: int, v2: int) -> WordGraph:
    """Fold ``v2`` into ``v1``, skipping edges that would duplicate one of ``v1``'s."""
    v1, v2 = _check_vertex(g, v1), _check_vertex(g, v2)
    if v1 == v2:
        raise GraphError("cannot merge a vertex with itself")
    rep = list(range(g.n_vertices))
    rep[v2] = v1
    return _contract(g, rep)


def compress(g: WordGraph) -> WordGraph:
    """Reduce to unique label sequences, then merge vertices with identical continuations."""
    g = reduce_to_unique_label_sequences(g)
    cls: dict[int, int] = {}
    signatures: dict[tuple, int] = {}
    members: dict[int, list[int]] = {}
    tgt, labels = g.tgt.tolist(), g.labels
    for v in reversed(g.topological_order.order.tolist()):
        if v == g.end:
            sig: tuple = ("</end>",)
        else:
            sig = tuple(sorted({(labels[e], cls[tgt[e]]) for e in g.out_edges(v).tolist()}))
        c = signatures.setdefault(sig, len(signatures))
        cls[v] = c
        members.setdefault(c, []).append(v)
    rep = list(range(g.n_vertices))
    for group in members.values():
        head = min(group)
        for v in group:
            rep[v] = head
    return _contract(g, rep)


@dataclass(frozen=True)
class WeightingConfig:
    """How edge weights are derived from the document.

    ``bigram``: probability of the word given the previous word (sentence
    boundaries act as pseudo-words), estimated over the whole document, so
    it lies in (0, 1].  ``uniform``: 1.0.  ``logcount``: log(1 + bigram count).
    """

    scheme: str = "bigram"

    def __post_init__(self):
        if self.scheme not in WEIGHTING_SCHEMES:
            raise ValueError(f"unknown weighting {self.scheme!r}; expected one of {WEIGHTING_SCHEMES}")


def bigram_table(doc: TokenizedDocument) -> tuple[Counter, Counter]:
    pairs: Counter = Counter()
    context: Counter = Counter()
    for sentence in doc.sentences:
        words = [SENTENCE_START, *(t.stem for t in sentence), SENTENCE_END]
        for a, b in zip(words, words[1:]):
            pairs[a, b] += 1
            context[a] += 1
    return pairs, context


def build_word_graph(doc: TokenizedDocument, weighting: WeightingConfig = WeightingConfig()) -> WordGraph:
    """One chain per sentence between a shared start and end vertex; edges carry stems."""
    sentences = [s for s in doc.sentences if s]
    if not sentences:
        raise EmptyDocumentError("cannot build a word graph from an empty document")
    pairs, context = bigram_table(doc)

    def weight(prev: str, word: str) -> float:
        if weighting.scheme == "uniform":
            return 1.0
        if weighting.scheme == "logcount":
            return math.log1p(pairs[prev, word])
        return pairs[prev, word] / context[prev]

    n = 2 + sum(len(s) - 1 for s in sentences)
    start, end = 0, n - 1
    edges = []
    next_id = 1
    for sentence in sentences:
        here, prev_word = start, SENTENCE_START
        for i, tok in enumerate(sentence):
            if i == len(sentence) - 1:
                there = end
            else:
                there, next_id = next_id, next_id + 1
            edges.append(Edge(here, there, tok.stem, weight(prev_word, tok.stem)))
            here, prev_word = there, tok.stem
    return WordGraph(n, edges, start, end)


def graph_stats(g: WordGraph, cap: int = DEFAULT_COUNT_CAP) -> dict:
    def guarded(fn):
        try:
            return fn()
        except PathCountOverflow:
            return None

    order = g.topological_order
    topo_ok = bool(np.all(order.position[g.src] < order.position[g.tgt]))
    return {
        "vertices": g.n_vertices,
        "edges": g.n_edges,
        "density": density(g),
        "paths": guarded(lambda: count_paths(g, cap)),
        "parser_steps": guarded(lambda: parser_steps(g, cap=cap)),
        "topological_order_valid": topo_ok,
    }


def dump_graph(g: WordGraph) -> str:
    lines = [f"#vertices {g.n_vertices} start {g.start} end {g.end}"]
    lines += [f"{e.src}\t{e.tgt}\t{e.label}\t{e.weight:.6f}" for e in g.edges]
    return "\n".join(lines) + "\n"


def load_graph(text: str) -> WordGraph:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise GraphError("empty graph dump")
    head = lines[0].split()
    if len(head) != 6 or head[0] != "#vertices" or head[2] != "start" or head[4] != "end":
        raise GraphError(f"bad graph dump header: {lines[0]!r}")
    edges = []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split("\t")
        if len(parts) != 4:
            raise GraphError(f"line {lineno}: expected 4 tab-separated fields")
        edges.append(Edge(int(parts[0]), int(parts[1]), parts[2], float(parts[3])))
    return WordGraph(int(head[1]), edges, int(head[3]), int(head[5]))
