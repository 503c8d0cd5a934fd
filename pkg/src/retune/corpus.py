"""Document model, ingestion, tokenization and stop-word handling.

Documents carry three searchable sections: the folder (container) name, the
document name and the full text body. Tokenization is script-agnostic so
Cyrillic and Latin corpora behave identically.
"""

from __future__ import annotations

import enum
import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from retune.errors import MalformedRecordError

# Maximal runs of Unicode letters/digits. \w minus the underscore.
_WORD_RE = re.compile(r"[^\W_]+")


class Section(enum.Enum):
    """The three searchable document sections."""

    FOLDER = "folder"
    NAME = "name"
    BODY = "body"


#: Fixed section order used for iteration and scoring everywhere.
SECTIONS = (Section.FOLDER, Section.NAME, Section.BODY)


@dataclass(frozen=True)
class Document:
    doc_id: int
    folder_name: str
    doc_name: str
    body: str

    def __post_init__(self):
        if not isinstance(self.doc_id, int) or isinstance(self.doc_id, bool) or self.doc_id < 1:
            raise ValueError(f"doc_id must be a positive integer, got {self.doc_id!r}")
        if not self.doc_name:
            raise ValueError("doc_name must be non-empty")

    def section_text(self, section: Section) -> str:
        if section is Section.FOLDER:
            return self.folder_name
        if section is Section.NAME:
            return self.doc_name
        return self.body


def tokenize(text: str) -> list[str]:
    """Split text into normalized tokens.

    Case folding happens before run extraction so that tokenize is a fixed
    point on its own output (expanding case folds like U+0130 cannot smuggle
    combining marks into a token).
    """
    return _WORD_RE.findall(text.casefold())


def filter_stopwords(tokens: Iterable[str], stopwords: frozenset[str] | set[str]) -> list[str]:
    """Drop stop-words from a token stream, preserving order.

    Applied to queries only; document content is never filtered.
    """
    return [t for t in tokens if t not in stopwords]


def load_stopwords(path: str | Path) -> frozenset[str]:
    """Read a stop-word file: one word per line, '#' comments, blanks ignored.

    Lines are normalized via tokenize, so every member is its own
    normalization fixed point.
    """
    words: set[str] = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        words.update(tokenize(line))
    return frozenset(words)


def ingest(source: str | Path) -> list[Document]:
    """Build a corpus from a JSON Lines file or a directory tree."""
    path = Path(source)
    if path.is_dir():
        return ingest_directory(path)
    return ingest_jsonl(path)


def ingest_jsonl(path: str | Path) -> list[Document]:
    """Parse a JSON Lines corpus: {"doc_id": int?, "folder": str, "name": str, "body": str}.

    Explicit doc_ids are honored (duplicates rejected); records without one
    get the smallest unused positive ids in line order, so re-ingesting the
    same file assigns the same ids.
    """
    raw: list[tuple[int, dict]] = []
    explicit: set[int] = set()
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise MalformedRecordError(f"{path}: line {lineno}: invalid JSON ({exc.msg})") from exc
        if not isinstance(record, dict):
            raise MalformedRecordError(f"{path}: line {lineno}: record must be a JSON object")
        doc_id = record.get("doc_id")
        if doc_id is not None:
            if not isinstance(doc_id, int) or isinstance(doc_id, bool) or doc_id < 1:
                raise MalformedRecordError(
                    f"{path}: line {lineno}: doc_id must be a positive integer"
                )
            if doc_id in explicit:
                raise MalformedRecordError(f"{path}: line {lineno}: duplicate doc_id {doc_id}")
            explicit.add(doc_id)
        raw.append((lineno, record))

    docs: list[Document] = []
    next_auto = 1
    for lineno, record in raw:
        doc_id = record.get("doc_id")
        if doc_id is None:
            while next_auto in explicit:
                next_auto += 1
            doc_id = next_auto
            explicit.add(doc_id)
        name = record.get("name")
        if not isinstance(name, str) or not name:
            raise MalformedRecordError(f"{path}: line {lineno}: missing or empty 'name'")
        folder = record.get("folder", "")
        body = record.get("body", "")
        if not isinstance(folder, str) or not isinstance(body, str):
            raise MalformedRecordError(f"{path}: line {lineno}: 'folder' and 'body' must be strings")
        docs.append(Document(doc_id=doc_id, folder_name=folder, doc_name=name, body=body))
    return docs


def ingest_directory(root: str | Path) -> list[Document]:
    """Map a directory tree to documents.

    Each regular file becomes one document: immediate parent directory name
    -> folder, file name without extension -> name, UTF-8 contents -> body.
    Files are ordered by relative path and numbered from 1, so re-ingestion
    of the same tree assigns the same ids.
    """
    root = Path(root)
    if not root.is_dir():
        raise MalformedRecordError(f"{root}: not a directory")
    files = sorted(
        (p for p in root.rglob("*") if p.is_file()),
        key=lambda p: p.relative_to(root).as_posix(),
    )
    docs: list[Document] = []
    for doc_id, file in enumerate(files, start=1):
        rel = file.relative_to(root)
        folder = "" if rel.parent == Path(".") else rel.parent.name
        try:
            body = file.read_text(encoding="utf-8")
        except UnicodeDecodeError as exc:
            raise MalformedRecordError(f"{file}: not valid UTF-8") from exc
        docs.append(Document(doc_id=doc_id, folder_name=folder, doc_name=rel.stem, body=body))
    return docs


def write_corpus_jsonl(docs: Iterable[Document], path: str | Path) -> None:
    """Persist a corpus with explicit ids (round-trips through ingest_jsonl)."""
    with open(path, "w", encoding="utf-8") as fh:
        for doc in docs:
            fh.write(
                json.dumps(
                    {
                        "doc_id": doc.doc_id,
                        "folder": doc.folder_name,
                        "name": doc.doc_name,
                        "body": doc.body,
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )
