"""Persistence: the learned weight vocabulary, the query log and the evaluation log.

The vocabulary is stored sparsely (only weights differing from the default 1)
as a TSV with a version header; both logs are append-only JSON Lines. Floats
are serialized via repr/JSON, which round-trips doubles exactly, so replaying
the evaluation log rebuilds bit-equal weights.
"""

from __future__ import annotations

import json
import math
import threading
import time
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from retune.errors import NotFoundError, ReplayError, StoreError
from retune.feedback import EvaluationRecord
from retune.ranker import RetrievalMode, SectionFlags

DEFAULT_WEIGHT = 1.0

VOCAB_FILE = "vocab.tsv"
QUERIES_FILE = "queries.jsonl"
EVALUATIONS_FILE = "evaluations.jsonl"


class VocabularySnapshot:
    """Immutable word-weight view frozen at one version."""

    __slots__ = ("_weights", "version")

    def __init__(self, weights: Mapping[str, float], version: int):
        self._weights = dict(weights)
        self.version = version

    def weight(self, word: str) -> float:
        return self._weights.get(word, DEFAULT_WEIGHT)


class WeightVocabulary:
    """Mutable word -> weight association; unseen words weigh 1.

    The version counter advances by exactly one per applied evaluation
    (one apply_updates call), which ties log entries to vocabulary states.
    """

    def __init__(self, weights: Mapping[str, float] | None = None, version: int = 0):
        self._weights: dict[str, float] = {}
        if weights:
            for word, value in weights.items():
                self._store(word, float(value))
        self.version = version

    def _store(self, word: str, value: float) -> None:
        if not math.isfinite(value) or value <= 0:
            raise ValueError(f"weight for {word!r} must be a positive finite number")
        if value == DEFAULT_WEIGHT:
            self._weights.pop(word, None)
        else:
            self._weights[word] = value

    def weight(self, word: str) -> float:
        return self._weights.get(word, DEFAULT_WEIGHT)

    def apply_updates(self, updates: Mapping[str, float]) -> None:
        """Set new weights for a batch of words and advance the version once."""
        for word, value in updates.items():
            self._store(word, float(value))
        self.version += 1

    def items(self) -> list[tuple[str, float]]:
        """Non-default entries, sorted by word."""
        return sorted(self._weights.items())

    def snapshot(self) -> VocabularySnapshot:
        return VocabularySnapshot(self._weights, self.version)


@dataclass(frozen=True)
class ResultSnapshot:
    doc_id: int
    score: float
    position: int


@dataclass(frozen=True)
class QueryLogEntry:
    query_id: int
    raw_query: str
    words: tuple[str, ...]
    flags: SectionFlags
    mode: RetrievalMode
    user_id: str
    timestamp: float
    vocab_version: int
    results: tuple[ResultSnapshot, ...]

    def result_at(self, position: int) -> ResultSnapshot | None:
        if 1 <= position <= len(self.results):
            return self.results[position - 1]
        return None


def _entry_to_dict(entry: QueryLogEntry) -> dict:
    return {
        "query_id": entry.query_id,
        "raw_query": entry.raw_query,
        "words": list(entry.words),
        "flags": {
            "folder": entry.flags.folder,
            "name": entry.flags.name,
            "body": entry.flags.body,
        },
        "mode": entry.mode.value,
        "user": entry.user_id,
        "timestamp": entry.timestamp,
        "vocab_version": entry.vocab_version,
        "results": [
            {"doc_id": r.doc_id, "score": r.score, "position": r.position}
            for r in entry.results
        ],
    }


def _entry_from_dict(data: dict) -> QueryLogEntry:
    return QueryLogEntry(
        query_id=int(data["query_id"]),
        raw_query=data["raw_query"],
        words=tuple(data["words"]),
        flags=SectionFlags(**data["flags"]),
        mode=RetrievalMode(data["mode"]),
        user_id=data["user"],
        timestamp=float(data["timestamp"]),
        vocab_version=int(data["vocab_version"]),
        results=tuple(
            ResultSnapshot(int(r["doc_id"]), float(r["score"]), int(r["position"]))
            for r in data["results"]
        ),
    )


def _record_to_dict(record: EvaluationRecord) -> dict:
    return {
        "evaluation_id": record.evaluation_id,
        "query_id": record.query_id,
        "doc_id": record.doc_id,
        "position": record.position,
        "user": record.user_id,
        "updated_words": {w: [old, new] for w, (old, new) in sorted(record.updated_words.items())},
        "p_before": record.p_before,
        "p_after": record.p_after,
        "delta": record.delta,
        "timestamp": record.timestamp,
    }


def _record_from_dict(data: dict) -> EvaluationRecord:
    return EvaluationRecord(
        evaluation_id=int(data["evaluation_id"]),
        query_id=int(data["query_id"]),
        doc_id=int(data["doc_id"]),
        position=int(data["position"]),
        user_id=data["user"],
        updated_words={w: (float(p[0]), float(p[1])) for w, p in data["updated_words"].items()},
        p_before=int(data["p_before"]),
        p_after=int(data["p_after"]),
        delta=int(data["delta"]),
        timestamp=float(data["timestamp"]),
    )


class Store:
    """File-backed store: single serialized writer, snapshot-reading consumers."""

    def __init__(
        self,
        root: Path,
        vocabulary: WeightVocabulary,
        queries: list[QueryLogEntry],
        evaluations: list[EvaluationRecord],
    ):
        self.root = root
        self.vocabulary = vocabulary
        self._queries: dict[int, QueryLogEntry] = {q.query_id: q for q in queries}
        self._evaluations: list[EvaluationRecord] = list(evaluations)
        self._next_query_id = max(self._queries, default=0) + 1
        self._next_evaluation_id = max((r.evaluation_id for r in self._evaluations), default=0) + 1
        self._lock = threading.RLock()

    @classmethod
    def initialize(cls, root: str | Path) -> "Store":
        """Create a fresh store directory with an all-default vocabulary."""
        root = Path(root)
        root.mkdir(parents=True, exist_ok=True)
        for name in (QUERIES_FILE, EVALUATIONS_FILE):
            target = root / name
            if target.exists():
                raise StoreError(f"refusing to initialize over existing {target}")
            target.touch()
        store = cls(root, WeightVocabulary(), [], [])
        store.save_vocabulary()
        return store

    @classmethod
    def open(cls, root: str | Path) -> "Store":
        """Load an existing store; missing or corrupt files are errors, never defaults."""
        root = Path(root)
        vocab = _load_vocabulary(root / VOCAB_FILE)
        queries = [
            _entry_from_dict(data) for data in _read_jsonl(root / QUERIES_FILE)
        ]
        evaluations = [
            _record_from_dict(data) for data in _read_jsonl(root / EVALUATIONS_FILE)
        ]
        return cls(root, vocab, queries, evaluations)

    # -- query log ---------------------------------------------------------

    def log_query(
        self,
        raw_query: str,
        words: Sequence[str],
        flags: SectionFlags,
        mode: RetrievalMode,
        user_id: str,
        vocab_version: int,
        results: Sequence[ResultSnapshot],
        timestamp: float | None = None,
    ) -> QueryLogEntry:
        with self._lock:
            entry = QueryLogEntry(
                query_id=self._next_query_id,
                raw_query=raw_query,
                words=tuple(words),
                flags=flags,
                mode=mode,
                user_id=user_id,
                timestamp=time.time() if timestamp is None else timestamp,
                vocab_version=vocab_version,
                results=tuple(results),
            )
            self._append(QUERIES_FILE, _entry_to_dict(entry))
            self._queries[entry.query_id] = entry
            self._next_query_id += 1
            return entry

    def get_query(self, query_id: int) -> QueryLogEntry | None:
        return self._queries.get(query_id)

    def queries(self) -> list[QueryLogEntry]:
        return [self._queries[qid] for qid in sorted(self._queries)]

    # -- evaluation log ----------------------------------------------------

    def log_evaluation(self, record: EvaluationRecord) -> EvaluationRecord:
        with self._lock:
            if record.query_id not in self._queries:
                raise NotFoundError(f"evaluation references unknown query_id {record.query_id}")
            record = replace(record, evaluation_id=self._next_evaluation_id)
            self._append(EVALUATIONS_FILE, _record_to_dict(record))
            self._evaluations.append(record)
            self._next_evaluation_id += 1
            return record

    def evaluations(self) -> list[EvaluationRecord]:
        return list(self._evaluations)

    # -- persistence -------------------------------------------------------

    def save_vocabulary(self) -> None:
        """Rewrite the vocabulary TSV atomically."""
        path = self.root / VOCAB_FILE
        tmp = path.with_suffix(".tsv.tmp")
        with self._lock:
            lines = [f"version\t{self.vocabulary.version}"]
            lines += [f"{word}\t{weight!r}" for word, weight in self.vocabulary.items()]
            tmp.write_text("\n".join(lines) + "\n", encoding="utf-8")
            tmp.replace(path)

    def _append(self, name: str, payload: dict) -> None:
        try:
            with open(self.root / name, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(payload, ensure_ascii=False) + "\n")
                fh.flush()
        except OSError as exc:
            raise StoreError(f"cannot append to {self.root / name}: {exc}") from exc


def _read_jsonl(path: Path) -> list[dict]:
    if not path.exists():
        raise StoreError(f"missing store file {path}")
    rows = []
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            rows.append(json.loads(line))
        except json.JSONDecodeError as exc:
            raise StoreError(f"{path}: line {lineno}: corrupt JSON ({exc.msg})") from exc
    return rows


def _load_vocabulary(path: Path) -> WeightVocabulary:
    if not path.exists():
        raise StoreError(f"missing store file {path}")
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines or not lines[0].startswith("version\t"):
        raise StoreError(f"{path}: missing version header")
    try:
        version = int(lines[0].split("\t", 1)[1])
    except ValueError as exc:
        raise StoreError(f"{path}: bad version header") from exc
    weights: dict[str, float] = {}
    for lineno, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise StoreError(f"{path}: line {lineno}: expected word<TAB>weight")
        try:
            weights[parts[0]] = float(parts[1])
        except ValueError as exc:
            raise StoreError(f"{path}: line {lineno}: bad weight {parts[1]!r}") from exc
    return WeightVocabulary(weights, version=version)


def replay_vocabulary(records: Iterable[EvaluationRecord]) -> WeightVocabulary:
    """Rebuild the vocabulary by replaying the evaluation log from all-ones.

    Each record's stored old weight must match the replayed state; a mismatch
    means the log and vocabulary drifted apart and raises ReplayError.
    """
    vocab = WeightVocabulary()
    for record in records:
        updates = {}
        for word, (old, new) in sorted(record.updated_words.items()):
            current = vocab.weight(word)
            if current != old:
                raise ReplayError(
                    f"evaluation {record.evaluation_id}: expected weight {old!r} "
                    f"for {word!r} but replay produced {current!r}"
                )
            updates[word] = new
        vocab.apply_updates(updates)
    return vocab
