"""retune: sectioned full-text search whose ranking is tuned online by
explicit usefulness feedback from the people using it."""

__version__ = "0.1.0"

from retune.corpus import Document, Section, filter_stopwords, tokenize
from retune.engine import SearchEngine
from retune.feedback import EvaluationRequest, updated_weight
from retune.index import InvertedIndex, build_index
from retune.ranker import (
    Query,
    RankedResult,
    RetrievalMode,
    SectionFlags,
    SectionWeights,
    search,
)
from retune.store import WeightVocabulary

__all__ = [
    "Document",
    "EvaluationRequest",
    "InvertedIndex",
    "Query",
    "RankedResult",
    "RetrievalMode",
    "SearchEngine",
    "Section",
    "SectionFlags",
    "SectionWeights",
    "WeightVocabulary",
    "build_index",
    "filter_stopwords",
    "search",
    "tokenize",
    "updated_weight",
]
