import json
import math

import pytest

from retune import feedback
from retune.config import EngineConfig
from retune.corpus import Document
from retune.engine import SearchEngine
from retune.errors import (
    EvaluationRejectedError,
    NoSharedWordsError,
    NotFoundError,
    StaleEvaluationError,
)
from retune.feedback import (
    EvaluationRequest,
    FeedbackParams,
    User,
    UserTable,
    eligible,
    updated_weight,
    words_to_update,
)
from retune.index import build_index
from retune.ranker import Query

from oracle import brute_force_search

# A corpus where the top results share no words with the useful document:
# boosting the useful document's words lifts it past them.
SPAM_RECORDS = [
    {"name": "Alpha", "body": "levy levy levy levy"},
    {"name": "Beta", "body": "levy levy levy"},
    {"name": "Gamma", "body": "tax code"},
    {"name": "Delta", "body": "unrelated words"},
]


@pytest.fixture
def spam_engine(tmp_path):
    corpus = tmp_path / "spam.jsonl"
    corpus.write_text("".join(json.dumps(r) + "\n" for r in SPAM_RECORDS), encoding="utf-8")
    return SearchEngine.create(corpus, tmp_path / "store", config=EngineConfig())


class TestEligibility:
    def test_two_words(self):
        assert eligible(Query(words=frozenset({"tax", "code"}))) is True

    def test_single_word(self):
        assert eligible(Query(words=frozenset({"tax"}))) is False

    def test_repeated_word_deduplicates_to_one(self, engine):
        words = engine.effective_words("tax tax")
        assert words == ("tax",)
        assert eligible(Query(words=frozenset(words))) is False


class TestWordsToUpdate:
    IDX = build_index(
        [
            Document(doc_id=1, folder_name="", doc_name="x", body="tax rates"),
            Document(doc_id=2, folder_name="", doc_name="y", body="tax code"),
            Document(doc_id=3, folder_name="", doc_name="z", body="nothing shared"),
        ]
    )
    QUERY = Query(words=frozenset({"tax", "code"}))

    def test_partial_overlap(self):
        assert words_to_update(self.QUERY, 1, self.IDX) == {"tax"}

    def test_full_overlap(self):
        assert words_to_update(self.QUERY, 2, self.IDX) == {"tax", "code"}

    def test_no_overlap_is_an_error(self):
        with pytest.raises(NoSharedWordsError):
            words_to_update(self.QUERY, 3, self.IDX)


class TestUpdatedWeight:
    def test_unit_everything(self):
        assert updated_weight(1.0, 1.0, 1.0, 1) == 2.0

    def test_square_root_of_position(self):
        assert updated_weight(1.0, 1.0, 1.0, 4) == 3.0

    def test_zero_learning_rate(self):
        assert updated_weight(5.0, 0.0, 1.0, 9) == 5.0

    def test_position_must_be_positive(self):
        with pytest.raises(ValueError):
            updated_weight(1.0, 1.0, 1.0, 0)

    def test_strictly_monotone_in_position(self):
        increments = [updated_weight(1.0, 1.0, 1.0, p) for p in range(1, 51)]
        assert all(b > a for a, b in zip(increments, increments[1:]))

    def test_scales_with_competence(self):
        assert updated_weight(1.0, 1.0, 2.5, 4) == 1.0 + 2.5 * 2.0


class TestUserTable:
    def test_known_user(self):
        table = UserTable([User("expert", competence=3.0)])
        assert table.get("expert").competence == 3.0

    def test_unknown_user_gets_default(self):
        table = UserTable([], default_competence=1.0)
        assert table.get("someone").competence == 1.0

    def test_competence_must_be_positive(self):
        with pytest.raises(ValueError):
            User("bad", competence=0.0)


class TestApplyEvaluation:
    def test_useful_document_overtakes_spam(self, spam_engine):
        entry = spam_engine.search("tax code levy")
        assert [(r.doc_id, r.position) for r in entry.results] == [(1, 1), (2, 2), (3, 3)]

        record = spam_engine.evaluate(
            EvaluationRequest(query_id=entry.query_id, doc_id=3, position=3, user_id="u")
        )
        boosted = 1.0 + math.sqrt(3)
        assert record.updated_words == {"code": (1.0, boosted), "tax": (1.0, boosted)}
        assert (record.p_before, record.p_after, record.delta) == (3, 1, -2)

    def test_delta_matches_brute_force_rerank(self, spam_engine):
        entry = spam_engine.search("tax code levy")
        record = spam_engine.evaluate(
            EvaluationRequest(query_id=entry.query_id, doc_id=3, position=3, user_id="u")
        )
        query = Query(words=frozenset(entry.words), flags=entry.flags, mode=entry.mode)
        docs = list(spam_engine.documents.values())
        reranked = brute_force_search(
            docs, query, spam_engine.config.weights, spam_engine.store.vocabulary.snapshot().weight
        )
        oracle_p_after = next(p for d, _, p in reranked if d == 3)
        assert record.p_after == oracle_p_after
        assert record.delta == oracle_p_after - 3

    def test_untouched_documents_keep_bit_identical_scores(self, spam_engine):
        entry = spam_engine.search("tax code levy")
        before = {r.doc_id: r.score for r in entry.results}
        spam_engine.evaluate(
            EvaluationRequest(query_id=entry.query_id, doc_id=3, position=3, user_id="u")
        )
        after = {r.doc_id: r.score for r in spam_engine.search("tax code levy").results}
        # docs 1 and 2 contain neither updated word
        assert after[1] == before[1]
        assert after[2] == before[2]
        assert after[3] > before[3]

    def test_sole_leader_stays_in_place(self, engine):
        # only one document matches both words after heavy stop-filtering
        entry = engine.search("russia court")
        assert [(r.doc_id, r.position) for r in entry.results] == [(3, 1)]
        record = engine.evaluate(
            EvaluationRequest(query_id=entry.query_id, doc_id=3, position=1, user_id="u")
        )
        assert (record.p_after, record.delta) == (1, 0)

    def test_stale_position_rejected(self, engine):
        entry = engine.search("tax code")
        with pytest.raises(StaleEvaluationError):
            engine.evaluate(
                EvaluationRequest(query_id=entry.query_id, doc_id=entry.results[0].doc_id, position=2, user_id="u")
            )

    def test_unknown_query_rejected(self, engine):
        with pytest.raises(NotFoundError):
            engine.evaluate(EvaluationRequest(query_id=999, doc_id=1, position=1, user_id="u"))

    def test_unknown_doc_rejected(self, engine):
        entry = engine.search("tax code")
        with pytest.raises(NotFoundError):
            engine.evaluate(EvaluationRequest(query_id=entry.query_id, doc_id=999, position=1, user_id="u"))

    def test_single_word_query_rejected(self, engine):
        entry = engine.search("tax")
        with pytest.raises(EvaluationRejectedError):
            engine.evaluate(
                EvaluationRequest(query_id=entry.query_id, doc_id=entry.results[0].doc_id, position=1, user_id="u")
            )

    def test_repeat_evaluation_applies_again(self, spam_engine):
        entry = spam_engine.search("tax code levy")
        first = spam_engine.evaluate(
            EvaluationRequest(query_id=entry.query_id, doc_id=3, position=3, user_id="u")
        )
        second = spam_engine.evaluate(
            EvaluationRequest(query_id=entry.query_id, doc_id=3, position=3, user_id="u")
        )
        w1 = first.updated_words["tax"][1]
        assert second.updated_words["tax"] == (w1, w1 + math.sqrt(3))

    def test_weights_never_decrease(self, spam_engine):
        entry = spam_engine.search("tax code levy")
        for position in (3, 2, 1):
            doc_id = entry.results[position - 1].doc_id
            try:
                record = spam_engine.evaluate(
                    EvaluationRequest(query_id=entry.query_id, doc_id=doc_id, position=position, user_id="u")
                )
            except NoSharedWordsError:
                continue
            for old, new in record.updated_words.values():
                assert new > old

    def test_zero_alpha_changes_nothing(self, spam_engine):
        entry = spam_engine.search("tax code levy")
        record = feedback.apply_evaluation(
            EvaluationRequest(query_id=entry.query_id, doc_id=3, position=3, user_id="u"),
            spam_engine.index,
            spam_engine.store.vocabulary,
            FeedbackParams(alpha=0.0),
            spam_engine.users,
            spam_engine.store,
            spam_engine.config.weights,
        )
        assert record.delta == 0
        assert all(old == new for old, new in record.updated_words.values())
        assert spam_engine.store.vocabulary.items() == []

    def test_competence_scales_update(self, tmp_path, fixture_corpus_path):
        config = EngineConfig(users={"pro": 4.0})
        engine = SearchEngine.create(
            fixture_corpus_path, tmp_path / "store2", config=config
        )
        entry = engine.search("tax code")
        record = engine.evaluate(
            EvaluationRequest(query_id=entry.query_id, doc_id=entry.results[0].doc_id, position=1, user_id="pro")
        )
        for old, new in record.updated_words.values():
            assert new == old + 4.0 * 1.0  # alpha * U * sqrt(1)
