"""Scoring and ranking.

A document's score against a query is the sum, over distinct query words, of
the word's learned weight times that word's per-section score (section weight
times occurrence count, gated by the per-query section flags). Results are
sorted by score descending with doc_id as the deterministic tie-break; ties
rely on scores being bit-equal for structurally equal formulas, which the
fixed evaluation order guarantees.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from retune import scoring
from retune.corpus import SECTIONS, Section
from retune.errors import EmptyQueryError, NoEnabledSectionsError
from retune.index import InvertedIndex


@dataclass(frozen=True)
class SectionWeights:
    """Per-section score multipliers; defaults are the stock configuration."""

    folder: float = 15.0
    name: float = 10.0
    body: float = 1.0

    def __post_init__(self):
        values = self.as_tuple()
        if any(v < 0 for v in values):
            raise ValueError("section weights must be non-negative")
        if not any(v > 0 for v in values):
            raise ValueError("at least one section weight must be positive")

    def as_tuple(self) -> tuple[float, float, float]:
        return (float(self.folder), float(self.name), float(self.body))

    def get(self, section: Section) -> float:
        return self.as_tuple()[SECTIONS.index(section)]


@dataclass(frozen=True)
class SectionFlags:
    """Per-query choice of which sections participate in scoring."""

    folder: bool = True
    name: bool = True
    body: bool = True

    def as_tuple(self) -> tuple[bool, bool, bool]:
        return (self.folder, self.name, self.body)

    def any_enabled(self) -> bool:
        return any(self.as_tuple())

    def get(self, section: Section) -> bool:
        return self.as_tuple()[SECTIONS.index(section)]


class RetrievalMode(enum.Enum):
    UNION = "union"
    INTERSECTION = "intersection"


@dataclass(frozen=True)
class Query:
    """A deduplicated, stop-filtered query. query_id is set once logged."""

    words: frozenset[str]
    flags: SectionFlags = field(default_factory=SectionFlags)
    mode: RetrievalMode = RetrievalMode.UNION
    query_id: int | None = None

    def sorted_words(self) -> list[str]:
        return sorted(self.words)


@dataclass(frozen=True)
class RankedResult:
    doc_id: int
    score: float
    position: int


def section_score(
    idx: InvertedIndex, word: str, doc_id: int, section: Section, weights: SectionWeights
) -> float:
    """Section weight times the word's occurrence count in that section."""
    return weights.get(section) * idx.occurrences(word, doc_id, section)


def word_score(
    idx: InvertedIndex, word: str, doc_id: int, flags: SectionFlags, weights: SectionWeights
) -> float:
    """Sum of section scores over the enabled sections."""
    total = 0.0
    for section in SECTIONS:
        if flags.get(section):
            total += weights.get(section) * idx.occurrences(word, doc_id, section)
    return total


def doc_score(idx: InvertedIndex, query: Query, doc_id: int, weights: SectionWeights, vocab) -> float:
    """Weighted sum of word scores over the query's distinct words.

    vocab is anything with weight(word) -> float; unseen words weigh 1.
    Words are folded in sorted order so repeated computations are bit-equal.
    """
    total = 0.0
    for word in query.sorted_words():
        total += vocab.weight(word) * word_score(idx, word, doc_id, query.flags, weights)
    return total


def _flatten_postings(idx: InvertedIndex, words: list[str]):
    segments_ord = []
    segments_cnt = []
    offsets = np.zeros(len(words) * 3 + 1, dtype=np.int64)
    pos = 0
    for j, word in enumerate(words):
        for t, section in enumerate(SECTIONS):
            ords, counts = idx.postings_arrays(word, section)
            segments_ord.append(ords)
            segments_cnt.append(counts)
            pos += len(ords)
            offsets[j * 3 + t + 1] = pos
    ordinals = np.concatenate(segments_ord) if segments_ord else np.empty(0, dtype=np.int64)
    counts = np.concatenate(segments_cnt) if segments_cnt else np.empty(0, dtype=np.float64)
    return offsets, ordinals, counts


def search(
    idx: InvertedIndex,
    query: Query,
    weights: SectionWeights,
    vocab,
    kernel=None,
) -> list[RankedResult]:
    """Rank all matching documents for a query against a vocabulary snapshot.

    Union mode keeps every document with a positive score; intersection mode
    additionally requires each query word to appear in at least one enabled
    section. Positions are 1-based in sorted order.
    """
    if not query.words:
        raise EmptyQueryError("query has no effective words")
    if not query.flags.any_enabled():
        raise NoEnabledSectionsError("all section flags are disabled")
    if kernel is None:
        kernel = scoring.score_postings

    words = query.sorted_words()
    word_weights = np.asarray([vocab.weight(w) for w in words], dtype=np.float64)
    flags = query.flags.as_tuple()
    section_factors = np.asarray(
        [float(flag) * s for flag, s in zip(flags, weights.as_tuple())], dtype=np.float64
    )
    section_enabled = np.asarray([int(flag) for flag in flags], dtype=np.int64)
    offsets, ordinals, counts = _flatten_postings(idx, words)

    scores, hits = kernel(
        idx.n_docs, word_weights, section_factors, section_enabled, offsets, ordinals, counts
    )

    if query.mode is RetrievalMode.INTERSECTION:
        candidates = np.flatnonzero((scores > 0.0) & (hits == len(words)))
    else:
        candidates = np.flatnonzero(scores > 0.0)

    # score descending, then ordinal ascending; ordinals ascend with doc_id,
    # so the ordinal doubles as the tie-break key
    order = candidates[np.lexsort((candidates, -scores[candidates]))]
    return [
        RankedResult(doc_id=idx.doc_id_at(o), score=float(scores[o]), position=pos)
        for pos, o in enumerate(order.tolist(), start=1)
    ]
