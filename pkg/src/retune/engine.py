"""The engine: one object owning corpus, index, vocabulary, logs and config.

Concurrency contract: searches may run concurrently and each binds one
vocabulary snapshot; evaluations are serialized by a single lock, and their
read-update-rerank-persist sequence is atomic with respect to snapshots.
"""

from __future__ import annotations

import threading
from pathlib import Path
from typing import Sequence

from retune import corpus as corpus_mod
from retune import feedback, metrics, ranker
from retune.config import EngineConfig
from retune.corpus import Document, filter_stopwords, tokenize
from retune.errors import EmptyQueryError, NotFoundError, StoreError
from retune.feedback import EvaluationRecord, EvaluationRequest, FeedbackParams, User, UserTable
from retune.index import InvertedIndex, build_index
from retune.ranker import Query, RetrievalMode, SectionFlags
from retune.store import QueryLogEntry, ResultSnapshot, Store

CORPUS_FILE = "corpus.jsonl"
STOPWORDS_FILE = "stopwords.txt"
CONFIG_FILE = "config.json"


class SearchEngine:
    def __init__(
        self,
        documents: Sequence[Document],
        stopwords: frozenset[str],
        store: Store,
        config: EngineConfig,
    ):
        self.documents: dict[int, Document] = {d.doc_id: d for d in documents}
        self.index: InvertedIndex = build_index(documents)
        self.stopwords = stopwords
        self.store = store
        self.config = config
        self.users = UserTable(
            (User(uid, competence) for uid, competence in config.users.items()),
            default_competence=config.default_competence,
        )
        self._eval_lock = threading.RLock()

    # -- lifecycle -----------------------------------------------------------

    @classmethod
    def create(
        cls,
        corpus_source: str | Path,
        store_dir: str | Path,
        stopwords_path: str | Path | None = None,
        config: EngineConfig | None = None,
    ) -> "SearchEngine":
        """Ingest a corpus and initialize a store directory around it."""
        config = config or EngineConfig()
        documents = corpus_mod.ingest(corpus_source)
        stopwords = (
            corpus_mod.load_stopwords(stopwords_path) if stopwords_path else frozenset()
        )
        store_dir = Path(store_dir)
        store = Store.initialize(store_dir)
        corpus_mod.write_corpus_jsonl(documents, store_dir / CORPUS_FILE)
        (store_dir / STOPWORDS_FILE).write_text(
            "".join(f"{w}\n" for w in sorted(stopwords)), encoding="utf-8"
        )
        config.save(store_dir / CONFIG_FILE)
        return cls(documents, stopwords, store, config)

    @classmethod
    def open(cls, store_dir: str | Path) -> "SearchEngine":
        """Reopen a store directory created by create()."""
        store_dir = Path(store_dir)
        corpus_path = store_dir / CORPUS_FILE
        if not corpus_path.exists():
            raise StoreError(f"missing store file {corpus_path}")
        documents = corpus_mod.ingest_jsonl(corpus_path)
        stopwords_path = store_dir / STOPWORDS_FILE
        stopwords = (
            corpus_mod.load_stopwords(stopwords_path) if stopwords_path.exists() else frozenset()
        )
        config_path = store_dir / CONFIG_FILE
        config = EngineConfig.load(config_path) if config_path.exists() else EngineConfig()
        store = Store.open(store_dir)
        return cls(documents, stopwords, store, config)

    # -- search --------------------------------------------------------------

    def effective_words(self, raw_query: str) -> tuple[str, ...]:
        """Tokenize, stop-filter and deduplicate a raw query string."""
        return tuple(sorted(set(filter_stopwords(tokenize(raw_query), self.stopwords))))

    def search(
        self,
        raw_query: str,
        flags: SectionFlags | None = None,
        user_id: str = "anonymous",
        mode: RetrievalMode | None = None,
    ) -> QueryLogEntry:
        """Run and log one search; the returned entry carries the result snapshot."""
        words = self.effective_words(raw_query)
        if not words:
            raise EmptyQueryError(f"no effective words in query {raw_query!r}")
        query = Query(
            words=frozenset(words),
            flags=flags if flags is not None else SectionFlags(),
            mode=mode if mode is not None else self.config.default_mode,
        )
        with self._eval_lock:
            snapshot = self.store.vocabulary.snapshot()
        results = ranker.search(self.index, query, self.config.weights, snapshot)
        return self.store.log_query(
            raw_query=raw_query,
            words=words,
            flags=query.flags,
            mode=query.mode,
            user_id=user_id,
            vocab_version=snapshot.version,
            results=[ResultSnapshot(r.doc_id, r.score, r.position) for r in results],
        )

    def query_eligible(self, entry: QueryLogEntry) -> bool:
        return feedback.eligible(Query(words=frozenset(entry.words)))

    def document(self, doc_id: int) -> Document:
        doc = self.documents.get(doc_id)
        if doc is None:
            raise NotFoundError(f"unknown doc_id {doc_id}")
        return doc

    def can_evaluate(self, query_id: int | None, doc_id: int, position: int | None) -> bool:
        """Whether an evaluation affordance is valid for this (query, doc, position)."""
        if query_id is None or position is None:
            return False
        entry = self.store.get_query(query_id)
        if entry is None or not self.query_eligible(entry):
            return False
        snapshot = entry.result_at(position)
        return snapshot is not None and snapshot.doc_id == doc_id

    # -- feedback --------------------------------------------------------------

    def evaluate(self, req: EvaluationRequest) -> EvaluationRecord:
        """Apply one evaluation atomically and persist the updated vocabulary."""
        with self._eval_lock:
            record = feedback.apply_evaluation(
                req,
                self.index,
                self.store.vocabulary,
                FeedbackParams(alpha=self.config.alpha),
                self.users,
                self.store,
                self.config.weights,
            )
            self.store.save_vocabulary()
            return record

    def report(self) -> metrics.SessionReport:
        return metrics.session_report(self.store.evaluations())
