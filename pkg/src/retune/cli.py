"""Command-line driver: ingest, search, simulate, report, serve.

Exit codes: 0 success, 1 I/O or configuration error, 2 query error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from retune import metrics
from retune.config import LISTEN_ENV_VAR, EngineConfig
from retune.corpus import tokenize
from retune.engine import SearchEngine
from retune.errors import (
    EmptyQueryError,
    MalformedRecordError,
    NoEnabledSectionsError,
    RetuneError,
    StoreError,
)
from retune.feedback import EvaluationRequest
from retune.ranker import RetrievalMode, SectionFlags

EXIT_OK = 0
EXIT_IO = 1
EXIT_QUERY = 2


def _parse_sections(raw: str) -> SectionFlags:
    chosen = {part.strip() for part in raw.split(",") if part.strip()}
    unknown = chosen - {"folder", "name", "body"}
    if unknown:
        raise ValueError(f"unknown sections: {', '.join(sorted(unknown))}")
    return SectionFlags(
        folder="folder" in chosen, name="name" in chosen, body="body" in chosen
    )


def cmd_ingest(args) -> int:
    config = EngineConfig.load(args.config) if args.config else EngineConfig()
    try:
        engine = SearchEngine.create(
            corpus_source=args.corpus,
            store_dir=args.store,
            stopwords_path=args.stopwords,
            config=config,
        )
    except (MalformedRecordError, StoreError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    total_tokens = 0
    distinct: set[str] = set()
    for doc in engine.documents.values():
        for text in (doc.folder_name, doc.doc_name, doc.body):
            tokens = tokenize(text)
            total_tokens += len(tokens)
            distinct.update(tokens)
    print(f"{len(engine.documents)} documents")
    print(f"{total_tokens} tokens, {len(distinct)} distinct")
    return EXIT_OK


def cmd_search(args) -> int:
    engine = SearchEngine.open(args.store)
    try:
        flags = _parse_sections(args.sections)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_QUERY
    try:
        entry = engine.search(
            args.query,
            flags=flags,
            user_id=args.user,
            mode=RetrievalMode(args.mode) if args.mode else None,
        )
    except (EmptyQueryError, NoEnabledSectionsError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_QUERY
    for r in entry.results:
        name = engine.documents[r.doc_id].doc_name
        print(f"{r.position}\t{r.doc_id}\t{r.score!r}\t{name}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    engine = SearchEngine.open(args.store)
    try:
        lines = Path(args.script).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO

    labels = {}
    failed = False

    def row_error(message: str) -> bool:
        nonlocal failed
        failed = True
        print(f"error: {message}")
        return args.strict

    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            action = json.loads(line)
        except json.JSONDecodeError as exc:
            print(f"error: line {lineno}: invalid JSON ({exc.msg})", file=sys.stderr)
            return EXIT_IO
        kind = action.get("action")
        if kind == "search":
            flags = SectionFlags(**action.get("sections", {}))
            try:
                entry = engine.search(
                    action["q"], flags=flags, user_id=action.get("user", "anonymous")
                )
            except RetuneError as exc:
                if row_error(f"line {lineno}: search failed: {exc}"):
                    return EXIT_IO
                continue
            label = action.get("label")
            if label is not None:
                labels[label] = entry
            print(f"search {label or '-'}: query_id={entry.query_id} results={len(entry.results)}")
        elif kind == "evaluate":
            label = action.get("label")
            entry = labels.get(label)
            if entry is None:
                if row_error(f"line {lineno}: no prior search labelled {label!r}"):
                    return EXIT_IO
                continue
            position = int(action["position"])
            snapshot = entry.result_at(position)
            if snapshot is None:
                if row_error(f"line {lineno}: query {entry.query_id} has no position {position}"):
                    return EXIT_IO
                continue
            req = EvaluationRequest(
                query_id=entry.query_id,
                doc_id=snapshot.doc_id,
                position=position,
                user_id=action.get("user", "anonymous"),
            )
            try:
                record = engine.evaluate(req)
            except RetuneError as exc:
                if row_error(f"line {lineno}: evaluation rejected: {exc}"):
                    return EXIT_IO
                continue
            print(
                f"evaluate {label}: doc_id={record.doc_id} p_before={record.p_before} "
                f"p_after={record.p_after} delta={record.delta}"
            )
        else:
            print(f"error: line {lineno}: unknown action {kind!r}", file=sys.stderr)
            return EXIT_IO

    session = engine.report()
    print(
        f"total_delta={session.total} evaluated={session.count} "
        f"mean_improvement={session.mean_improvement!r}"
    )
    return EXIT_IO if (failed and args.strict) else EXIT_OK


def cmd_report(args) -> int:
    engine = SearchEngine.open(args.store)
    try:
        metrics.export_report(engine.store.evaluations(), args.out)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    session = engine.report()
    print(f"wrote {session.count} evaluations to {args.out}")
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from retune.service import create_app

    engine = SearchEngine.open(args.store)
    listen = os.environ.get(LISTEN_ENV_VAR) or args.listen or engine.config.listen
    host, _, port = listen.rpartition(":")
    if not host or not port.isdigit():
        print(f"error: bad listen address {listen!r} (expected HOST:PORT)", file=sys.stderr)
        return EXIT_IO
    app = create_app(engine, ui_dir=args.ui)
    uvicorn.run(app, host=host, port=int(port))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="retune")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="ingest a corpus and initialize a store")
    p.add_argument("--corpus", required=True, help="JSON Lines file or document directory")
    p.add_argument("--stopwords", help="stop-word file, one word per line")
    p.add_argument("--store", required=True, help="store directory to create")
    p.add_argument("--config", help="JSON configuration file")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("search", help="run one query against a store")
    p.add_argument("query")
    p.add_argument("--store", required=True)
    p.add_argument("--sections", default="folder,name,body")
    p.add_argument("--mode", choices=[m.value for m in RetrievalMode])
    p.add_argument("--user", default="anonymous")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("simulate", help="replay a JSON Lines search/evaluate script")
    p.add_argument("--store", required=True)
    p.add_argument("--script", required=True)
    p.add_argument("--strict", action="store_true", help="abort on the first failed row")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("report", help="export the evaluation report CSV")
    p.add_argument("--store", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("serve", help="run the HTTP API")
    p.add_argument("--store", required=True)
    p.add_argument("--listen", help="HOST:PORT (env RETUNE_LISTEN overrides)")
    p.add_argument("--ui", help="static frontend directory to serve at /")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (StoreError, MalformedRecordError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
