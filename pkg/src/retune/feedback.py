"""Explicit-feedback learning: a "useful" evaluation raises the weights of
every query word the document contains by alpha * competence * sqrt(position).

Single-word queries are never evaluable: with one word, every result's score
scales by the same factor and the ordering cannot change, so there is no
signal to learn from.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Iterable

from retune import ranker
from retune.errors import (
    EvaluationRejectedError,
    NoSharedWordsError,
    NotFoundError,
    StaleEvaluationError,
)
from retune.index import InvertedIndex
from retune.ranker import Query, SectionWeights


@dataclass(frozen=True)
class User:
    user_id: str
    competence: float = 1.0

    def __post_init__(self):
        if not self.competence > 0:
            raise ValueError("competence must be positive")


class UserTable:
    """Known users plus a default competence for everyone else."""

    def __init__(self, users: Iterable[User] = (), default_competence: float = 1.0):
        if not default_competence > 0:
            raise ValueError("default competence must be positive")
        self._users = {u.user_id: u for u in users}
        self.default_competence = default_competence

    def get(self, user_id: str) -> User:
        user = self._users.get(user_id)
        if user is None:
            return User(user_id=user_id, competence=self.default_competence)
        return user

    def add(self, user: User) -> None:
        self._users[user.user_id] = user


@dataclass(frozen=True)
class FeedbackParams:
    """alpha scales every update; zero freezes learning (test use only)."""

    alpha: float = 1.0

    def __post_init__(self):
        if self.alpha < 0 or not math.isfinite(self.alpha):
            raise ValueError("alpha must be non-negative and finite")


@dataclass(frozen=True)
class EvaluationRequest:
    """What the client submits: the identifiers carried on the result link."""

    query_id: int
    doc_id: int
    position: int
    user_id: str

    def __post_init__(self):
        if self.position < 1:
            raise ValueError("position must be >= 1")


@dataclass(frozen=True)
class EvaluationRecord:
    evaluation_id: int
    query_id: int
    doc_id: int
    position: int
    user_id: str
    updated_words: dict[str, tuple[float, float]]  # word -> (old, new)
    p_before: int
    p_after: int
    delta: int
    timestamp: float = field(default_factory=time.time)


def eligible(query: Query) -> bool:
    """A query can be evaluated only with two or more distinct effective words."""
    return len(query.words) >= 2


def words_to_update(query: Query, doc_id: int, idx: InvertedIndex) -> set[str]:
    """The query words the document contains (in any section)."""
    shared = set(query.words) & idx.document_words(doc_id)
    if not shared:
        raise NoSharedWordsError(
            f"document {doc_id} contains none of the query words; nothing to update"
        )
    return shared


def updated_weight(weight: float, alpha: float, competence: float, position: int) -> float:
    """The raised weight: w + alpha * competence * sqrt(position)."""
    if position < 1:
        raise ValueError("position must be >= 1")
    return weight + alpha * competence * math.sqrt(position)


def apply_evaluation(
    req: EvaluationRequest,
    idx: InvertedIndex,
    vocab,
    params: FeedbackParams,
    users: UserTable,
    store,
    weights: SectionWeights,
) -> EvaluationRecord:
    """Apply one evaluation: update weights, re-search, persist the record.

    The caller serializes invocations (see SearchEngine); within one call the
    read-update-rerank sequence operates on the single vocabulary instance.
    Every updated word uses the same position: the one recorded on the link
    the user clicked.
    """
    entry = store.get_query(req.query_id)
    if entry is None:
        raise NotFoundError(f"unknown query_id {req.query_id}")
    if req.doc_id not in idx:
        raise NotFoundError(f"unknown doc_id {req.doc_id}")

    query = Query(
        words=frozenset(entry.words),
        flags=entry.flags,
        mode=entry.mode,
        query_id=entry.query_id,
    )
    if not eligible(query):
        raise EvaluationRejectedError(
            "single-word queries cannot be evaluated: the whole ranking would shift uniformly"
        )

    snapshot = entry.result_at(req.position)
    if snapshot is None or snapshot.doc_id != req.doc_id:
        raise StaleEvaluationError(
            f"document {req.doc_id} was not at position {req.position} of query {req.query_id}"
        )

    user = users.get(req.user_id)
    shared = words_to_update(query, req.doc_id, idx)

    changes: dict[str, tuple[float, float]] = {}
    updates: dict[str, float] = {}
    for word in sorted(shared):
        old = vocab.weight(word)
        new = updated_weight(old, params.alpha, user.competence, req.position)
        changes[word] = (old, new)
        updates[word] = new
    vocab.apply_updates(updates)

    rerun = ranker.search(idx, query, weights, vocab.snapshot())
    p_after = next(
        (r.position for r in rerun if r.doc_id == req.doc_id),
        len(entry.results) + 1,  # defensive: cannot happen while updates only raise weights
    )

    record = EvaluationRecord(
        evaluation_id=0,  # assigned by the store
        query_id=req.query_id,
        doc_id=req.doc_id,
        position=req.position,
        user_id=req.user_id,
        updated_words=changes,
        p_before=req.position,
        p_after=p_after,
        delta=p_after - req.position,
    )
    return store.log_evaluation(record)
