"""Immutable per-section inverted index with occurrence counts.

Two views of the same postings are kept: dict postings for exact count
lookups and per-token numpy arrays (document ordinal, count) feeding the
scoring kernels. Ordinals are ranks in ascending doc_id order, so array
order doubles as the ranker's tie-break order.
"""

from __future__ import annotations

import json
from collections import Counter
from pathlib import Path
from typing import Iterable

import numpy as np

from retune.corpus import SECTIONS, Document, Section, tokenize
from retune.errors import StoreError, UnknownDocumentError

_EMPTY_ORDINALS = np.empty(0, dtype=np.int64)
_EMPTY_COUNTS = np.empty(0, dtype=np.float64)

Postings = dict[str, dict[int, int]]


class InvertedIndex:
    """Read-only index over a corpus; safe for concurrent readers."""

    def __init__(self, corpus: Iterable[Document]):
        docs = list(corpus)
        ids = [d.doc_id for d in docs]
        if len(ids) != len(set(ids)):
            raise ValueError("corpus doc_ids must be unique")

        self._doc_ids: list[int] = sorted(ids)
        self._ordinal: dict[int, int] = {d: o for o, d in enumerate(self._doc_ids)}
        self._counts: dict[Section, Postings] = {s: {} for s in SECTIONS}
        for doc in docs:
            for section in SECTIONS:
                for token, n in Counter(tokenize(doc.section_text(section))).items():
                    self._counts[section].setdefault(token, {})[doc.doc_id] = n
        self._doc_words: dict[int, frozenset[str]] = self._collect_doc_words()
        self._arrays = self._build_arrays()

    def _collect_doc_words(self) -> dict[int, frozenset[str]]:
        words: dict[int, set[str]] = {d: set() for d in self._doc_ids}
        for postings in self._counts.values():
            for token, per_doc in postings.items():
                for doc_id in per_doc:
                    words[doc_id].add(token)
        return {d: frozenset(w) for d, w in words.items()}

    def _build_arrays(self):
        arrays: dict[Section, dict[str, tuple[np.ndarray, np.ndarray]]] = {}
        for section, postings in self._counts.items():
            per_section = {}
            for token, per_doc in postings.items():
                ords = sorted(self._ordinal[d] for d in per_doc)
                counts = [float(per_doc[self._doc_ids[o]]) for o in ords]
                per_section[token] = (
                    np.asarray(ords, dtype=np.int64),
                    np.asarray(counts, dtype=np.float64),
                )
            arrays[section] = per_section
        return arrays

    @property
    def n_docs(self) -> int:
        return len(self._doc_ids)

    @property
    def doc_ids(self) -> list[int]:
        return list(self._doc_ids)

    def __contains__(self, doc_id: int) -> bool:
        return doc_id in self._ordinal

    def doc_id_at(self, ordinal: int) -> int:
        return self._doc_ids[ordinal]

    def _check_doc(self, doc_id: int) -> None:
        if doc_id not in self._ordinal:
            raise UnknownDocumentError(f"unknown doc_id {doc_id}")

    def occurrences(self, word: str, doc_id: int, section: Section) -> int:
        """Exact occurrence count of a normalized word in one section; 0 when absent."""
        self._check_doc(doc_id)
        return self._counts[section].get(word, {}).get(doc_id, 0)

    def document_words(self, doc_id: int) -> frozenset[str]:
        """All tokens of a document across the three sections."""
        self._check_doc(doc_id)
        return self._doc_words[doc_id]

    def postings_arrays(self, word: str, section: Section) -> tuple[np.ndarray, np.ndarray]:
        """(ordinals, counts) arrays for the scoring kernels; empty when absent."""
        entry = self._arrays[section].get(word)
        if entry is None:
            return _EMPTY_ORDINALS, _EMPTY_COUNTS
        return entry

    def save(self, path: str | Path) -> None:
        """Snapshot the postings to disk; load() answers identically."""
        payload = {
            "doc_ids": self._doc_ids,
            "postings": {
                section.value: {
                    token: sorted(per_doc.items())
                    for token, per_doc in sorted(self._counts[section].items())
                }
                for section in SECTIONS
            },
        }
        Path(path).write_text(json.dumps(payload, ensure_ascii=False), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "InvertedIndex":
        try:
            payload = json.loads(Path(path).read_text(encoding="utf-8"))
            doc_ids = payload["doc_ids"]
            raw = payload["postings"]
        except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
            raise StoreError(f"cannot load index snapshot from {path}: {exc}") from exc
        idx = cls.__new__(cls)
        idx._doc_ids = sorted(int(d) for d in doc_ids)
        idx._ordinal = {d: o for o, d in enumerate(idx._doc_ids)}
        idx._counts = {
            section: {
                token: {int(d): int(n) for d, n in per_doc}
                for token, per_doc in raw[section.value].items()
            }
            for section in SECTIONS
        }
        idx._doc_words = idx._collect_doc_words()
        idx._arrays = idx._build_arrays()
        return idx


def build_index(corpus: Iterable[Document]) -> InvertedIndex:
    """Construct the index for a corpus; counts mirror tokenize exactly."""
    return InvertedIndex(corpus)
