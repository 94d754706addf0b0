import numpy as np
import pytest

from wordrank.graph import GraphError, WordGraph, Edge, build_word_graph
from wordrank.ranking import (
    ALGORITHMS,
    IterationParams,
    VertexScores,
    attribute_scores_to_words,
    hits,
    hits_rank,
    pagerank,
    ppf,
    prefix_scores,
    rank_words,
    reference_rank,
    reference_ranks,
)

import oracles
from conftest import doc_of, make_graph

BACKENDS = ["numpy", "numba"]
SINGLE = [(0, 1, "a", 1.0)]


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


def random_graphs(rng, count, **kw):
    for _ in range(count):
        n, edges = oracles.random_dag(rng, **kw)
        yield n, edges, make_graph(n, edges)


# prefix scores


def test_prefix_chain(backend):
    p = prefix_scores(make_graph(3, [(0, 1, "a", 1.0), (1, 2, "b", 2.0)]), backend)
    assert p.min_score[2] == p.max_score[2] == 3.0
    assert p.min_score[0] == p.max_score[0] == 0.0


def test_prefix_lattice(lattice, backend):
    p = prefix_scores(lattice, backend)
    assert (p.min_score[5], p.max_score[5]) == (-1.125, 1.125)


def test_prefix_matches_enumeration(rng, backend):
    for n, edges, g in random_graphs(rng, 80):
        p = prefix_scores(g, backend)
        by_vertex = oracles.paths_to(n, edges, 0)
        for v in range(n):
            sums = [oracles.path_weight(edges, path) for path in by_vertex[v]]
            assert p.min_score[v] == pytest.approx(min(sums), abs=1e-9)
            assert p.max_score[v] == pytest.approx(max(sums), abs=1e-9)
            assert p.min_score[v] <= p.max_score[v]


def test_prefix_max_below_zero():
    # every path is negative, so the maximum must be negative too
    p = prefix_scores(make_graph(3, [(0, 1, "a", -1.0), (1, 2, "b", -0.5)]))
    assert p.max_score[2] == -1.5


# reference-score rank


def test_reference_rank_clamps():
    g = make_graph(2, [(0, 1, "a", 0.0), (0, 1, "b", 1.0)])
    assert reference_rank(g, 1, -0.1) == 0.0
    assert reference_rank(g, 1, 0.0) == 0.0
    assert reference_rank(g, 1, 1.0) == 1.0
    assert reference_rank(g, 1, 7.0) == 1.0


def test_reference_rank_two_parallel_edges():
    g = make_graph(2, [(0, 1, "a", 0.0), (0, 1, "b", 1.0)])
    assert reference_rank(g, 1, 0.5) == 0.5


def test_reference_rank_unknown_vertex():
    with pytest.raises(GraphError):
        reference_rank(make_graph(2, SINGLE), 2, 0.0)


def test_reference_rank_matches_enumeration(rng):
    for n, edges, g in random_graphs(rng, 60):
        by_vertex = oracles.paths_to(n, edges, 0)
        prefix = prefix_scores(g)
        for v in range(n):
            sums = [oracles.path_weight(edges, p) for p in by_vertex[v]]
            for ref in rng.uniform(min(sums) - 0.2, max(sums) + 0.2, size=4):
                assert reference_rank(g, v, ref, prefix) == pytest.approx(oracles.reference_fraction(sums, ref), abs=1e-9)


def test_reference_rank_is_monotone(rng):
    for n, edges, g in random_graphs(rng, 20):
        refs = np.linspace(-3, 3, 25)
        values = [reference_rank(g, n - 1, r) for r in refs]
        assert all(a <= b for a, b in zip(values, values[1:]))


def test_reference_ranks_all_vertices(lattice):
    scores = reference_ranks(lattice, 0.0)
    assert scores[0] == 0.0
    assert scores[5] == pytest.approx(reference_rank(lattice, 5, 0.0))


# HITS


def test_hits_single_edge(backend):
    auth, hub = hits(make_graph(2, SINGLE), backend=backend)
    assert auth.values.tolist() == [0.0, 1.0]
    assert hub.values.tolist() == [1.0, 0.0]
    assert auth.converged


def test_hits_star(backend):
    g = make_graph(5, [(0, 1, "a", 0), (0, 2, "b", 0), (0, 3, "c", 0), (1, 4, "d", 0), (2, 4, "d", 0), (3, 4, "d", 0)])
    # not a bare star (word graphs need a sink), but the first layer is symmetric
    auth, hub = hits(g, backend=backend)
    assert auth[1] == pytest.approx(auth[2]) == pytest.approx(auth[3])


def test_hits_bare_star_fragment(backend):
    # the star s->{a,b,c} on its own, evaluated with the kernel directly
    from wordrank import kernels

    k = kernels.get_backend(backend)
    src = np.array([0, 0, 0])
    tgt = np.array([1, 2, 3])
    auth, hub, _, converged = k.hits(4, src, tgt, 1e-12, 100)
    assert auth[1:] == pytest.approx([3**-0.5] * 3)
    assert hub[0] == pytest.approx(1.0)
    assert converged


def test_hits_unit_norm_and_oracle(rng, backend):
    params = IterationParams(tolerance=1e-12, max_iterations=5000)
    for n, edges, g in random_graphs(rng, 40):
        auth, hub = hits(g, params, backend)
        assert np.linalg.norm(auth.values) == pytest.approx(1.0)
        assert np.linalg.norm(hub.values) == pytest.approx(1.0)
        expected = oracles.hits_authority_oracle(n, edges)
        assert float(auth.values @ expected) >= 1 - 1e-6


def test_hits_non_convergence_is_flagged():
    g = make_graph(3, [(0, 1, "a", 0), (0, 2, "b", 0), (1, 2, "c", 0)])
    auth, _ = hits(g, IterationParams(tolerance=1e-15, max_iterations=1))
    assert not auth.converged and auth.iterations == 1


def test_hits_rank_variants():
    auth = VertexScores(np.array([0.6]))
    hub = VertexScores(np.array([0.2]))
    assert hits_rank(auth, hub, "r1").values is auth.values
    assert hits_rank(auth, hub, "R2").values[0] == 0.2
    assert hits_rank(auth, hub, "r3").values[0] == pytest.approx(0.4)
    assert hits_rank(auth, hub, "r4").values[0] == 0.6
    with pytest.raises(ValueError):
        hits_rank(auth, hub, "r5")
    with pytest.raises(ValueError):
        hits_rank(auth, VertexScores(np.zeros(2)), "r1")


# PPF


def test_ppf_examples(backend):
    assert ppf(make_graph(2, SINGLE), backend)[1] == 1.0
    assert ppf(make_graph(3, [(0, 1, "a", 1.0), (1, 2, "b", 2.0)]), backend)[2] == pytest.approx(2.0)


def test_ppf_matches_enumeration(rng, backend):
    for n, edges, g in random_graphs(rng, 80, max_paths=200):
        assert ppf(g, backend).values == pytest.approx(oracles.ppf_bruteforce(n, edges, 0), abs=1e-9)


# PageRank


def test_pagerank_single_vertex(backend):
    assert pagerank(make_graph(1, [], 0, 0), backend=backend).values.tolist() == [1.0]


def test_pagerank_two_vertices(backend):
    # stationary system: PR(s) = 0.075 + 0.425 PR(e), PR(s) + PR(e) = 1  ->  PR(s) = 0.5 / 1.425
    pr = pagerank(make_graph(2, SINGLE), backend=backend)
    assert pr.values == pytest.approx([0.5 / 1.425, 0.925 / 1.425], abs=1e-8)
    assert pr.values == pytest.approx([0.3509, 0.6491], abs=5e-5)


def test_pagerank_matches_stationary_solve(rng, backend):
    for n, edges, g in random_graphs(rng, 60):
        pr = pagerank(g, backend=backend)
        assert pr.values == pytest.approx(oracles.pagerank_oracle(n, edges, 0.85), abs=1e-6)
        assert np.all(pr.values > 0)
        assert np.all(np.abs(pr.mass_history - 1.0) <= 1e-9)
        assert pr.values.sum() == pytest.approx(1.0, abs=1e-9)


def test_pagerank_ignores_labels(rng):
    for n, edges, g in random_graphs(rng, 10):
        renamed = make_graph(n, [(s, t, lab.upper(), w) for s, t, lab, w in edges])
        assert np.array_equal(pagerank(renamed).values, pagerank(g).values)


def test_iteration_params_validation():
    for bad in (dict(damping=0.0), dict(damping=1.0), dict(tolerance=0.0), dict(max_iterations=0)):
        with pytest.raises(ValueError):
            IterationParams(**bad)


# attribution and dispatch


def test_attribution_aggregates():
    g = make_graph(4, [(0, 1, "a", 0), (1, 2, "a", 0), (2, 3, "b", 0)])
    scores = VertexScores(np.array([0.0, 0.2, 0.3, 0.1]))
    assert attribute_scores_to_words(g, scores, "sum").entries == (("a", pytest.approx(0.5)), ("b", 0.1))
    assert attribute_scores_to_words(g, scores, "max").entries == (("a", 0.3), ("b", 0.1))
    assert attribute_scores_to_words(g, scores, "mean").entries[0][1] == pytest.approx(0.25)
    with pytest.raises(ValueError):
        attribute_scores_to_words(g, scores, "median")


def test_attribution_single_edge():
    g = make_graph(2, SINGLE)
    assert attribute_scores_to_words(g, VertexScores(np.array([0.0, 0.7]))).entries == (("a", 0.7),)


def test_ranking_sorted_with_codepoint_ties(rng):
    for n, edges, g in random_graphs(rng, 20, labels="abcdef"):
        ranking = rank_words(g, "pagerank")
        assert len(ranking) == len({lab for _, _, lab, _ in edges})
        keys = [(-s, w) for w, s in ranking.entries]
        assert keys == sorted(keys)


def test_rank_words_hits_single_edge():
    ranking = rank_words(make_graph(2, SINGLE), "hits-r1")
    assert ranking.entries == (("a", 1.0),)


def test_rank_words_accepts_exactly_the_algorithm_ids():
    g = build_word_graph(doc_of("a b c", "a c", "b"))
    for algorithm in ALGORITHMS:
        ranking = rank_words(g, algorithm)
        assert ranking.algorithm == algorithm
        assert ranking.words()
    with pytest.raises(ValueError):
        rank_words(g, "nosuch")
    with pytest.raises(ValueError):
        rank_words(g, "hits")


def test_rank_words_is_deterministic(rng):
    n, edges = oracles.random_dag(rng)
    for algorithm in ALGORITHMS:
        first = rank_words(make_graph(n, edges), algorithm)
        second = rank_words(make_graph(n, edges), algorithm)
        assert first == second


def test_minmax_scores_in_unit_interval(lattice):
    ranking = rank_words(lattice, "minmax")
    assert all(0.0 <= s <= 1.0 for _, s in ranking.entries)
    # only the edges into the end vertex see the widest spread
    assert ranking.entries[0][1] == 1.0


def test_refscore_fixed_value(lattice):
    auto = rank_words(lattice, "refscore")
    fixed = rank_words(lattice, "refscore", ref_score=0.0)
    # the auto midpoint of (-1.125, 1.125) is 0.0
    assert auto == fixed


def test_ranking_permutation_equivariance(rng):
    for n, edges, g in random_graphs(rng, 15, n_min=3):
        perm = np.concatenate([[0], rng.permutation(np.arange(1, n - 1)), [n - 1]])
        relabelled = WordGraph(n, [Edge(int(perm[s]), int(perm[t]), lab, w) for s, t, lab, w in edges], 0, n - 1)
        for algorithm in ("minmax", "refscore", "ppf", "pagerank", "hits-r3"):
            a = rank_words(g, algorithm, IterationParams(tolerance=1e-13, max_iterations=2000))
            b = rank_words(relabelled, algorithm, IterationParams(tolerance=1e-13, max_iterations=2000))
            assert dict(a.entries) == pytest.approx(dict(b.entries), abs=1e-9)
