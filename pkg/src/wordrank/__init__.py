"""Word-graph construction and graph-based word ranking for POS-tagged corpora."""

from .corpus import PreprocessConfig, Token, TokenizedDocument, parse_pos_file, preprocess, read_pos_file
from .evaluation import GoldSet, compare_algorithms, derive_gold_from_pos
from .graph import Edge, WeightingConfig, WordGraph, build_word_graph, compress, count_paths, density
from .ranking import ALGORITHMS, IterationParams, WordRanking, rank_words

__all__ = [
    "ALGORITHMS",
    "Edge",
    "GoldSet",
    "IterationParams",
    "PreprocessConfig",
    "Token",
    "TokenizedDocument",
    "WeightingConfig",
    "WordGraph",
    "WordRanking",
    "build_word_graph",
    "compare_algorithms",
    "compress",
    "count_paths",
    "density",
    "derive_gold_from_pos",
    "parse_pos_file",
    "preprocess",
    "rank_words",
    "read_pos_file",
]
