"""Time the numba kernels against the numpy fallback on a synthetic corpus graph.

    python benchmarks/bench_kernels.py --sentences 20000 --repeat 5
"""

import argparse
import time

import numpy as np

from wordrank import kernels
from wordrank.corpus import Token, TokenizedDocument
from wordrank.graph import build_word_graph


def synthetic_graph(n_sentences: int, vocab_size: int, seed: int):
    rng = np.random.default_rng(seed)
    p = 1.0 / np.arange(1, vocab_size + 1)
    p /= p.sum()
    sentences = []
    for _ in range(n_sentences):
        ids = rng.choice(vocab_size, size=int(rng.integers(4, 20)), p=p)
        sentences.append(tuple(Token(f"w{i}") for i in ids))
    return build_word_graph(TokenizedDocument(tuple(sentences)))


def kernel_calls(g):
    order = g.topological_order.order
    in_ptr, in_edges = g.in_csr
    return {
        "prefix_scores": lambda k: k.prefix_scores(g.n_vertices, g.start, order, in_ptr, in_edges, g.src, g.tgt, g.weights),
        "ppf": lambda k: k.ppf(g.n_vertices, g.start, g.src, g.tgt, g.weights),
        "hits": lambda k: k.hits(g.n_vertices, g.src, g.tgt, 1e-8, 100),
        "pagerank": lambda k: k.pagerank(g.n_vertices, g.src, g.tgt, 0.85, 1e-8, 100),
    }


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None) -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sentences", type=int, default=20000)
    parser.add_argument("--vocab", type=int, default=8000)
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    g = synthetic_graph(args.sentences, args.vocab, args.seed)
    print(f"graph: {g.n_vertices} vertices, {g.n_edges} edges")
    backends = {name: kernels.get_backend(name) for name in ("numpy", "numba")}
    print(f"{'kernel':<15}{'numpy s':>12}{'numba s':>12}{'speedup':>10}")
    for name, call in kernel_calls(g).items():
        call(backends["numba"])  # compile outside the timed region
        t_np = best_of(lambda: call(backends["numpy"]), args.repeat)
        t_nb = best_of(lambda: call(backends["numba"]), args.repeat)
        print(f"{name:<15}{t_np:>12.4f}{t_nb:>12.4f}{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
