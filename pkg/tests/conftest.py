import json

import pytest

from retune.config import EngineConfig
from retune.corpus import Document
from retune.engine import SearchEngine

FIXTURE_RECORDS = [
    {"folder": "TaxLaw", "name": "Tax Code", "body": "tax rates and tax brackets"},
    {"folder": "TaxLaw", "name": "VAT Rules", "body": "value added tax code details code code code code"},
    {"folder": "Courts", "name": "Federal Courts", "body": "court structure in russia"},
    {"folder": "", "name": "Misc", "body": "unrelated text entirely"},
    {"folder": "TaxLaw", "name": "Income Tax", "body": "personal income tax code"},
]

FIXTURE_STOPWORDS = ["the", "in", "and", "of", "и", "в"]


@pytest.fixture
def fixture_docs():
    return [
        Document(
            doc_id=i,
            folder_name=r["folder"],
            doc_name=r["name"],
            body=r["body"],
        )
        for i, r in enumerate(FIXTURE_RECORDS, start=1)
    ]


@pytest.fixture
def fixture_corpus_path(tmp_path):
    path = tmp_path / "fixture.jsonl"
    path.write_text("".join(json.dumps(r) + "\n" for r in FIXTURE_RECORDS), encoding="utf-8")
    return path


@pytest.fixture
def fixture_stopwords_path(tmp_path):
    path = tmp_path / "stopwords.txt"
    path.write_text("".join(f"{w}\n" for w in FIXTURE_STOPWORDS), encoding="utf-8")
    return path


@pytest.fixture
def engine(tmp_path, fixture_corpus_path, fixture_stopwords_path):
    return SearchEngine.create(
        corpus_source=fixture_corpus_path,
        store_dir=tmp_path / "store",
        stopwords_path=fixture_stopwords_path,
        config=EngineConfig(),
    )
