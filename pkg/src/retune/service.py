"""HTTP JSON API for the search/read/evaluate loop.

Every result link's identification data (query_id, doc_id, position) travels
as explicit JSON fields; the evaluate endpoint needs exactly those back, so
a well-behaved client can only submit what a prior search response handed it.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from retune.engine import SearchEngine
from retune.feedback import EvaluationRequest
from retune.errors import (
    EmptyQueryError,
    EvaluationRejectedError,
    NoEnabledSectionsError,
    NoSharedWordsError,
    NotFoundError,
    RetuneError,
    StaleEvaluationError,
    UnknownDocumentError,
)
from retune.ranker import SectionFlags

_STATUS_BY_ERROR = (
    (EmptyQueryError, 400),
    (NoEnabledSectionsError, 400),
    (NotFoundError, 404),
    (UnknownDocumentError, 404),
    (StaleEvaluationError, 409),
    (EvaluationRejectedError, 422),
    (NoSharedWordsError, 422),
)


def _status_for(exc: RetuneError) -> int:
    for err_type, status in _STATUS_BY_ERROR:
        if isinstance(exc, err_type):
            return status
    return 500


class SectionsBody(BaseModel):
    folder: bool = True
    name: bool = True
    body: bool = True


class SearchBody(BaseModel):
    q: str
    sections: SectionsBody = Field(default_factory=SectionsBody)
    user: str = "anonymous"


class EvaluateBody(BaseModel):
    query_id: int
    doc_id: int
    position: int = Field(ge=1)
    user: str = "anonymous"


def create_app(engine: SearchEngine, ui_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="retune", version="0.1.0")

    @app.exception_handler(RetuneError)
    def _handle_retune_error(request: Request, exc: RetuneError):
        return JSONResponse(status_code=_status_for(exc), content={"detail": str(exc)})

    @app.post("/api/search")
    def search(body: SearchBody):
        flags = SectionFlags(
            folder=body.sections.folder, name=body.sections.name, body=body.sections.body
        )
        entry = engine.search(body.q, flags=flags, user_id=body.user)
        return {
            "query_id": entry.query_id,
            "eligible_for_evaluation": engine.query_eligible(entry),
            "results": [
                {
                    "doc_id": r.doc_id,
                    "folder": engine.documents[r.doc_id].folder_name,
                    "name": engine.documents[r.doc_id].doc_name,
                    "position": r.position,
                    "score": r.score,
                }
                for r in entry.results
            ],
        }

    @app.get("/api/doc/{doc_id}")
    def document(doc_id: int, query_id: int | None = None, position: int | None = None):
        doc = engine.document(doc_id)
        return {
            "doc_id": doc.doc_id,
            "folder": doc.folder_name,
            "name": doc.doc_name,
            "body": doc.body,
            "evaluation_context": {
                "query_id": query_id,
                "position": position,
                "can_evaluate": engine.can_evaluate(query_id, doc_id, position),
            },
        }

    @app.post("/api/evaluate")
    def evaluate(body: EvaluateBody):
        record = engine.evaluate(
            EvaluationRequest(
                query_id=body.query_id,
                doc_id=body.doc_id,
                position=body.position,
                user_id=body.user,
            )
        )
        return {
            "evaluation_id": record.evaluation_id,
            "updated_words": [
                {"word": word, "old_weight": old, "new_weight": new}
                for word, (old, new) in sorted(record.updated_words.items())
            ],
            "p_before": record.p_before,
            "p_after": record.p_after,
            "delta": record.delta,
        }

    @app.get("/api/report")
    def report():
        session = engine.report()
        return {
            "rows": [
                {"evaluation_id": d.evaluation_id, "p_before": d.p_before, "delta": d.delta}
                for d in session.deltas
            ],
            "aggregate": {
                "total_delta": session.total,
                "count": session.count,
                "mean_improvement": session.mean_improvement,
            },
        }

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
