"""Reading POS-tagged corpora and the tokenize / stem / stop-word pipeline.

Corpus files hold one sentence per line, tokens separated by spaces, each
token written as ``surface/TAG``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from importlib import resources
from typing import Iterable


class CorpusError(ValueError):
    """Base class for corpus parsing problems."""


class CorpusDecodeError(CorpusError):
    def __init__(self, offset: int, reason: str):
        super().__init__(f"invalid UTF-8 at byte offset {offset}: {reason}")
        self.offset = offset


class EmptyCorpusError(CorpusError):
    pass


@dataclass(frozen=True)
class Token:
    surface: str
    pos_tag: str = ""
    stem: str = ""

    def __post_init__(self):
        if not self.surface or any(c.isspace() for c in self.surface):
            raise ValueError(f"bad token surface {self.surface!r}")
        if not self.stem:
            object.__setattr__(self, "stem", self.surface)


@dataclass(frozen=True)
class TokenizedDocument:
    sentences: tuple[tuple[Token, ...], ...]
    source_id: str = ""
    # sentences removed by preprocessing, cumulative over passes
    dropped_sentences: int = 0

    def __post_init__(self):
        object.__setattr__(self, "sentences", tuple(tuple(s) for s in self.sentences))

    def tokens(self) -> Iterable[Token]:
        for sentence in self.sentences:
            yield from sentence

    @property
    def n_tokens(self) -> int:
        return sum(len(s) for s in self.sentences)

    def vocabulary(self) -> set[str]:
        return {tok.stem for tok in self.tokens()}


@dataclass(frozen=True)
class PreprocessConfig:
    stem_rules: tuple[str, ...] = ()
    min_stem_length: int = 2
    stop_words: frozenset[str] = field(default_factory=frozenset)
    lowercase_fold: bool = False

    def __post_init__(self):
        if self.min_stem_length < 1:
            raise ValueError("min_stem_length must be >= 1")
        rules = set(self.stem_rules)
        if "" in rules:
            raise ValueError("empty suffix in stem rules")
        # longest first; equal lengths in code-point order so the result is stable
        object.__setattr__(self, "stem_rules", tuple(sorted(rules, key=lambda r: (-len(r), r))))
        object.__setattr__(self, "stop_words", frozenset(self.stop_words))


def parse_pos_file(data: bytes, source_id: str = "") -> TokenizedDocument:
    """Parse corpus bytes into a document, one sentence per non-blank line.

    Each item splits on its last ``/``; items without a slash get an empty tag.
    """
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise CorpusDecodeError(exc.start, exc.reason) from None

    sentences = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        items = line.split()
        if not items:
            continue
        sentence = []
        for item in items:
            surface, slash, tag = item.rpartition("/")
            if not slash:
                surface, tag = item, ""
            if not surface:
                raise CorpusError(f"line {lineno}: token {item!r} has an empty surface")
            sentence.append(Token(surface, tag))
        sentences.append(tuple(sentence))

    if not sentences:
        raise EmptyCorpusError(f"no sentences in {source_id or 'corpus'}")
    return TokenizedDocument(tuple(sentences), source_id)


def read_pos_file(path: str | os.PathLike) -> TokenizedDocument:
    with open(path, "rb") as fh:
        return parse_pos_file(fh.read(), source_id=os.fspath(path))


def serialize_document(doc: TokenizedDocument) -> bytes:
    lines = []
    for sentence in doc.sentences:
        lines.append(" ".join(f"{t.surface}/{t.pos_tag}" if t.pos_tag else t.surface for t in sentence))
    return "".join(line + "\n" for line in lines).encode("utf-8")


def parse_word_list(data: bytes) -> list[str]:
    """One entry per line; blank lines and ``#`` comments are skipped."""
    words = []
    for line in data.decode("utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.append(line)
    return words


def read_word_list(path: str | os.PathLike) -> list[str]:
    with open(path, "rb") as fh:
        return parse_word_list(fh.read())


def bundled_word_list(name: str) -> list[str]:
    """Load one of the lists shipped in ``wordrank/data`` (e.g. ``bangla_stopwords.txt``)."""
    return parse_word_list(resources.files("wordrank.data").joinpath(name).read_bytes())


def bangla_config(min_stem_length: int = 2) -> PreprocessConfig:
    return PreprocessConfig(
        stem_rules=tuple(bundled_word_list("bangla_suffixes.txt")),
        min_stem_length=min_stem_length,
        stop_words=frozenset(bundled_word_list("bangla_stopwords.txt")),
    )


def stem(word: str, config: PreprocessConfig) -> str:
    """Strip the longest matching suffix that leaves at least ``min_stem_length`` code points."""
    for suffix in config.stem_rules:
        if word.endswith(suffix) and len(word) - len(suffix) >= config.min_stem_length:
            return word[: -len(suffix)]
    return word


def remove_stop_words(doc: TokenizedDocument, config: PreprocessConfig) -> TokenizedDocument:
    if not config.stop_words:
        return doc
    kept = []
    dropped = 0
    for sentence in doc.sentences:
        remaining = tuple(t for t in sentence if t.stem not in config.stop_words)
        if remaining:
            kept.append(remaining)
        else:
            dropped += 1
    return replace(doc, sentences=tuple(kept), dropped_sentences=doc.dropped_sentences + dropped)


def preprocess(doc: TokenizedDocument, config: PreprocessConfig) -> TokenizedDocument:
    """Case-fold (optionally), stem and remove stop words.

    Stems are always recomputed from the surface form, which keeps the
    operation idempotent.
    """
    sentences = []
    for sentence in doc.sentences:
        out = []
        for tok in sentence:
            base = tok.surface.casefold() if config.lowercase_fold else tok.surface
            out.append(Token(tok.surface, tok.pos_tag, stem(base, config)))
        sentences.append(tuple(out))
    return remove_stop_words(replace(doc, sentences=tuple(sentences)), config)
