"""Command line entry point: ``wordrank rank | eval | graph-stats``.

Exit codes: 0 success, 2 configuration or input-file error, 3 empty corpus
or empty gold set, 4 non-convergence under ``--strict``.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from pathlib import Path

from . import kernels
from .corpus import (
    CorpusError,
    EmptyCorpusError,
    PreprocessConfig,
    bundled_word_list,
    parse_pos_file,
    preprocess,
    read_word_list,
)
from .evaluation import DEFAULT_GOLD_TAGS, EmptyGoldError, compare_algorithms, derive_gold_from_pos, parse_gold_file
from .graph import (
    WEIGHTING_SCHEMES,
    EmptyDocumentError,
    GraphError,
    WeightingConfig,
    build_word_graph,
    compress,
    count_paths,
    density,
    graph_stats,
    load_graph,
    PathCountOverflow,
)
from .ranking import AGGREGATES, ALGORITHMS, HITS_VARIANTS, IterationParams, WordRanking, rank_words

log = logging.getLogger("wordrank")

EXIT_OK, EXIT_CONFIG, EXIT_EMPTY, EXIT_NOT_CONVERGED = 0, 2, 3, 4


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_CONFIG):
        super().__init__(message)
        self.code = code


def _auto_or(kind):
    def parse(text: str):
        if text == "auto":
            return "auto"
        try:
            value = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected 'auto' or a {kind.__name__}, got {text!r}") from None
        if kind is int and value < 1:
            raise argparse.ArgumentTypeError("must be positive")
        return value

    return parse


def build_parser() -> argparse.ArgumentParser:
    inputs = argparse.ArgumentParser(add_help=False)
    grp = inputs.add_argument_group("input")
    src = grp.add_mutually_exclusive_group()
    src.add_argument("--corpus", type=Path, help="POS-tagged corpus (one sentence per line, surface/TAG tokens)")
    src.add_argument("--graph", type=Path, help="graph dump instead of a corpus")
    grp.add_argument("--stopwords", type=Path, help="stop-word list, one per line")
    grp.add_argument("--stem-rules", type=Path, help="suffix list, one per line")
    grp.add_argument("--bundled-lists", action="store_true", help="use the shipped Bangla stop words and suffixes")
    grp.add_argument("--min-stem-length", type=int, default=2)
    grp.add_argument("--lowercase", action="store_true", help="case-fold before stemming")
    grp.add_argument("--weighting", choices=WEIGHTING_SCHEMES, default="bigram")
    grp.add_argument("--compress", action="store_true", help="reduce to unique label sequences and merge equivalent vertices")

    algo = argparse.ArgumentParser(add_help=False)
    grp = algo.add_argument_group("ranking")
    grp.add_argument("--damping", type=float, default=0.85)
    grp.add_argument("--tol", type=float, default=1e-8)
    grp.add_argument("--max-iter", type=int, default=100)
    grp.add_argument("--ref-score", type=_auto_or(float), default="auto")
    grp.add_argument("--aggregate", choices=AGGREGATES, default="sum")
    grp.add_argument("--strict", action="store_true", help="fail with exit code 4 if an iteration does not converge")
    grp.add_argument("--format", choices=("tsv", "json"), default="tsv")
    grp.add_argument("-o", "--output", type=Path, help="output file (default: stdout)")

    parser = argparse.ArgumentParser(prog="wordrank", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rank", parents=[inputs, algo], help="rank the words of a corpus")
    p.add_argument("--algorithm", choices=ALGORITHMS, default="pagerank")

    p = sub.add_parser("eval", parents=[inputs, algo], help="compare all algorithm families against a gold set")
    p.add_argument("--gold", type=Path, help="gold word list; overrides --gold-tags")
    p.add_argument("--gold-tags", default=",".join(sorted(DEFAULT_GOLD_TAGS)), help="POS tags marking relevant words")
    p.add_argument("--top-k", type=_auto_or(int), default="auto")
    p.add_argument("--hits-variant", choices=HITS_VARIANTS, default="r1")
    p.add_argument("--out-dir", type=Path, help="write report.tsv and report.json here")
    p.add_argument("--plot-csv", type=Path, help="grouped-bar data: algorithm, precision, recall, f1")

    p = sub.add_parser("graph-stats", parents=[inputs], help="structural statistics of the word graph")
    p.add_argument("-o", "--output", type=Path, help="output file (default: stdout)")
    return parser


def _check_files(args) -> None:
    for name in ("corpus", "graph", "stopwords", "stem_rules", "gold"):
        path = getattr(args, name, None)
        if path is not None and not path.is_file():
            raise CliError(f"--{name.replace('_', '-')}: no such file: {path}")
    if args.corpus is None and args.graph is None:
        raise CliError("one of --corpus or --graph is required")


def _preprocess_config(args) -> PreprocessConfig:
    rules, stops = [], []
    if args.bundled_lists:
        rules += bundled_word_list("bangla_suffixes.txt")
        stops += bundled_word_list("bangla_stopwords.txt")
    if args.stem_rules:
        rules += read_word_list(args.stem_rules)
    if args.stopwords:
        stops += read_word_list(args.stopwords)
    try:
        return PreprocessConfig(tuple(rules), args.min_stem_length, frozenset(stops), args.lowercase)
    except ValueError as exc:
        raise CliError(str(exc)) from None


def _load(args):
    """Return ``(document or None, graph)``."""
    if args.graph is not None:
        try:
            g = load_graph(args.graph.read_text(encoding="utf-8"))
        except (GraphError, ValueError) as exc:
            raise CliError(f"{args.graph}: {exc}") from None
        doc = None
    else:
        try:
            doc = parse_pos_file(args.corpus.read_bytes(), source_id=str(args.corpus))
        except EmptyCorpusError as exc:
            raise CliError(str(exc), EXIT_EMPTY) from None
        except CorpusError as exc:
            raise CliError(f"{args.corpus}: {exc}") from None
        doc = preprocess(doc, _preprocess_config(args))
        if doc.dropped_sentences:
            log.info("preprocessing dropped %d empty sentences", doc.dropped_sentences)
        try:
            g = build_word_graph(doc, WeightingConfig(args.weighting))
        except EmptyDocumentError as exc:
            raise CliError(str(exc), EXIT_EMPTY) from None
    if args.compress:
        g = compress(g)
    return doc, g


def _params(args) -> IterationParams:
    try:
        return IterationParams(args.damping, args.tol, args.max_iter)
    except ValueError as exc:
        raise CliError(str(exc)) from None


def _emit(text: str, path: Path | None) -> None:
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def format_ranking(ranking: WordRanking, fmt: str) -> str:
    if fmt == "json":
        payload = {
            "algorithm": ranking.algorithm,
            "vertices": ranking.graph_stats[0],
            "edges": ranking.graph_stats[1],
            "converged": ranking.converged,
            "entries": [{"word": w, "score": s} for w, s in ranking.entries],
        }
        return json.dumps(payload, ensure_ascii=False, indent=2) + "\n"
    lines = ["word\tscore"] + [f"{w}\t{s:.6f}" for w, s in ranking.entries]
    return "\n".join(lines) + "\n"


def _check_converged(args, what: str, converged: bool) -> None:
    if converged:
        return
    if args.strict:
        raise CliError(f"{what} did not converge within {args.max_iter} iterations", EXIT_NOT_CONVERGED)
    log.warning("warning: %s did not converge within %d iterations", what, args.max_iter)


def _log_graph(g) -> None:
    try:
        paths = count_paths(g)
    except PathCountOverflow:
        paths = "overflow"
    log.info("graph: |V|=%d |E|=%d density=%.4f paths=%s", g.n_vertices, g.n_edges, density(g), paths)


def cmd_rank(args) -> int:
    params = _params(args)
    _, g = _load(args)
    _log_graph(g)
    ranking = rank_words(g, args.algorithm, params, ref_score=args.ref_score, aggregate=args.aggregate)
    _check_converged(args, args.algorithm, ranking.converged)
    _emit(format_ranking(ranking, args.format), args.output)
    return EXIT_OK


def cmd_eval(args) -> int:
    params = _params(args)
    doc, g = _load(args)
    _log_graph(g)
    try:
        if args.gold is not None:
            gold = parse_gold_file(args.gold.read_bytes())
        elif doc is not None:
            tags = {t.strip() for t in args.gold_tags.split(",") if t.strip()}
            gold = derive_gold_from_pos(doc, tags)
        else:
            raise CliError("--gold is required when ranking a graph dump")
    except EmptyGoldError as exc:
        raise CliError(str(exc), EXIT_EMPTY) from None
    top_k = None if args.top_k == "auto" else args.top_k
    rankings: dict = {}
    report = compare_algorithms(
        g, gold, params, top_k,
        hits_variant=args.hits_variant, ref_score=args.ref_score, aggregate=args.aggregate, rankings=rankings,
    )
    for name, ranking in rankings.items():
        _check_converged(args, name, ranking.converged)
    log.info("gold set: %d words, top_k=%d", len(gold), report.top_k)
    if args.out_dir is not None:
        args.out_dir.mkdir(parents=True, exist_ok=True)
        _emit(report.to_tsv(), args.out_dir / "report.tsv")
        _emit(report.to_json(), args.out_dir / "report.json")
    if args.plot_csv is not None:
        _emit(report.to_plot_csv(), args.plot_csv)
    _emit(report.to_json() if args.format == "json" else report.to_tsv(), args.output)
    return EXIT_OK


def cmd_graph_stats(args) -> int:
    _, g = _load(args)
    _emit(json.dumps(graph_stats(g), indent=2) + "\n", args.output)
    return EXIT_OK


COMMANDS = {"rank": cmd_rank, "eval": cmd_eval, "graph-stats": cmd_graph_stats}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(stream=sys.stderr, format="%(message)s", level=logging.DEBUG if args.verbose else logging.INFO)
    log.debug("kernel backend: %s", kernels.BACKEND)
    started = time.perf_counter()
    try:
        _check_files(args)
        code = COMMANDS[args.command](args)
    except CliError as exc:
        print(f"wordrank: error: {exc}", file=sys.stderr)
        return exc.code
    log.debug("done in %.2fs", time.perf_counter() - started)
    return code


if __name__ == "__main__":
    sys.exit(main())
