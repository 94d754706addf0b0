"""Precision / recall / F1 of word rankings against a gold set of relevant words."""

from __future__ import annotations

import csv
import io
import json
import warnings
from dataclasses import dataclass, asdict

from .corpus import TokenizedDocument, parse_word_list
from .graph import WordGraph
from .ranking import IterationParams, WordRanking, rank_words

# Table-1 row order; the HITS row uses whichever variant the caller picks
FAMILIES = ("minmax", "refscore", "hits", "ppf", "pagerank")
DEFAULT_GOLD_TAGS = frozenset({"NN", "NNC", "NNP", "NNPC"})


class EmptyGoldError(ValueError):
    pass


@dataclass(frozen=True)
class GoldSet:
    relevant: frozenset[str]

    def __len__(self):
        return len(self.relevant)


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    fn: int
    tn: int


@dataclass(frozen=True)
class EvalRow:
    algorithm: str
    words: int
    precision: float
    recall: float
    f1: float


@dataclass(frozen=True)
class EvalReport:
    rows: tuple[EvalRow, ...]
    top_k: int

    def to_tsv(self) -> str:
        lines = ["algorithm\twords\tprecision\trecall\tf1"]
        for r in self.rows:
            lines.append(f"{r.algorithm}\t{r.words}\t{r.precision:.2f}\t{r.recall:.2f}\t{r.f1:.2f}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps({"top_k": self.top_k, "rows": [asdict(r) for r in self.rows]}, ensure_ascii=False, indent=2) + "\n"

    def to_plot_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["algorithm", "precision", "recall", "f1", "top_k"])
        for r in self.rows:
            writer.writerow([r.algorithm, repr(r.precision), repr(r.recall), repr(r.f1), self.top_k])
        return buf.getvalue()


def gold_from_words(words) -> GoldSet:
    gold = GoldSet(frozenset(words))
    if not gold.relevant:
        raise EmptyGoldError("gold set is empty")
    return gold


def parse_gold_file(data: bytes) -> GoldSet:
    return gold_from_words(parse_word_list(data))


def derive_gold_from_pos(doc: TokenizedDocument, relevant_tags=DEFAULT_GOLD_TAGS) -> GoldSet:
    """Stems of every token whose POS tag is in ``relevant_tags``."""
    tags = frozenset(relevant_tags)
    if not tags:
        raise EmptyGoldError("no relevant POS tags given")
    return gold_from_words(t.stem for t in doc.tokens() if t.pos_tag in tags)


def confusion(ranking: WordRanking, gold: GoldSet, top_k: int) -> ConfusionCounts:
    """Treat the ``top_k`` best-ranked words as predicted relevant."""
    if top_k < 1:
        raise ValueError("top_k must be positive")
    vocab = ranking.words()
    if top_k > len(vocab):
        warnings.warn(f"top_k={top_k} exceeds the ranked vocabulary ({len(vocab)}); clamping", stacklevel=2)
        top_k = len(vocab)
    predicted = set(vocab[:top_k])
    relevant = gold.relevant & set(vocab)
    tp = len(predicted & relevant)
    fp = len(predicted) - tp
    fn = len(relevant) - tp
    return ConfusionCounts(tp, fp, fn, len(vocab) - tp - fp - fn)


def precision(c: ConfusionCounts) -> float:
    return c.tp / (c.tp + c.fp) if c.tp + c.fp else 0.0


def recall(c: ConfusionCounts) -> float:
    return c.tp / (c.tp + c.fn) if c.tp + c.fn else 0.0


def f1_from(p: float, r: float) -> float:
    return 2 * p * r / (p + r) if p + r > 0 else 0.0


def f1(c: ConfusionCounts) -> float:
    return f1_from(precision(c), recall(c))


def evaluate_ranking(ranking: WordRanking, gold: GoldSet, top_k: int) -> EvalRow:
    c = confusion(ranking, gold, top_k)
    return EvalRow(ranking.algorithm, len(ranking), precision(c), recall(c), f1(c))


def compare_algorithms(
    g: WordGraph,
    gold: GoldSet,
    params: IterationParams = IterationParams(),
    top_k: int | None = None,
    *,
    hits_variant: str = "r1",
    ref_score="auto",
    aggregate: str = "sum",
    rankings: dict | None = None,
) -> EvalReport:
    """Rank with each algorithm family and score every ranking at the same ``top_k``.

    ``top_k`` defaults to the gold-set size, capped at the vocabulary size.
    Pass a dict as ``rankings`` to get the individual rankings back.
    """
    rows = []
    k = None
    for family in FAMILIES:
        algorithm = f"hits-{hits_variant}" if family == "hits" else family
        ranking = rank_words(g, algorithm, params, ref_score=ref_score, aggregate=aggregate)
        if rankings is not None:
            rankings[algorithm] = ranking
        if k is None:
            k = top_k if top_k is not None else min(len(gold), len(ranking))
        rows.append(evaluate_ranking(ranking, gold, k))
    return EvalReport(tuple(rows), k)
