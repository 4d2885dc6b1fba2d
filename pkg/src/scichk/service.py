"""HTTP service exposing claim checks over a preloaded corpus.

The service is stateless between requests: every check recomputes retrieval,
extraction and aggregation, and nothing is cached.  Errors come back as JSON
objects {"error": <type>, "detail": <message>} with a 4xx status for client
mistakes and 5xx when a scorer backend misbehaves.
"""

from __future__ import annotations

import io
import json

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware

from . import __version__
from .claims import ClaimParseError, ClaimQuery, ClaimVerb, NoVerbMatch, parse_claim
from .config import EngineConfig
from .corpus import Corpus, load_jsonl
from .pipeline import check_claim, report_to_json
from .remote import BackendError, RemoteBqaClassifier, RemoteEqaScorer
from .scoring import BqaClassifier, EqaScorer, LexicalEqaScorer, RuleBqaClassifier


def build_scorers(config: EngineConfig) -> tuple[EqaScorer, BqaClassifier]:
    if config.backend == "remote":
        return (
            RemoteEqaScorer(
                config.eqa_endpoint,
                timeout=config.remote_timeout,
                retries=config.remote_retries,
                concurrency=config.remote_concurrency,
            ),
            RemoteBqaClassifier(
                config.bqa_endpoint,
                timeout=config.remote_timeout,
                retries=config.remote_retries,
                concurrency=config.remote_concurrency,
            ),
        )
    return LexicalEqaScorer(), RuleBqaClassifier()


def _error(status: int, error: str, detail: str) -> Response:
    return Response(
        content=json.dumps({"error": error, "detail": detail}),
        status_code=status,
        media_type="application/json",
    )


def create_app(config: EngineConfig, corpus: Corpus | None = None) -> FastAPI:
    """Assemble the app.  Pass ``corpus`` to skip loading ``config.corpus``."""
    if corpus is None:
        if not config.corpus:
            raise ValueError("no corpus configured")
        corpus, _ = load_jsonl(config.corpus)
    eqa, bqa = build_scorers(config)

    app = FastAPI(title="scichk", version=__version__)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=[config.cors_origin] if config.cors_origin != "*" else ["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.get("/v1/health")
    def health() -> dict:
        return {"status": "ok", "documents": len(corpus), "backend": config.backend}

    @app.get("/v1/articles/{doc_id}")
    def article(doc_id: str) -> Response:
        doc = corpus.get(doc_id)
        if doc is None:
            return _error(404, "UnknownArticle", f"no document with id {doc_id!r}")
        return Response(
            content=json.dumps(
                {
                    "id": doc.id,
                    "title": doc.title,
                    "abstract": doc.abstract_text,
                    "url": doc.source_url,
                    "year": doc.year,
                },
                ensure_ascii=False,
            ),
            media_type="application/json",
        )

    @app.post("/v1/check")
    async def check(request: Request) -> Response:
        try:
            body = await request.json()
        except ValueError:
            return _error(400, "BadRequest", "body must be a JSON object")
        if not isinstance(body, dict):
            return _error(400, "BadRequest", "body must be a JSON object")
        try:
            query = _parse_check_body(body)
        except ClaimParseError as exc:
            return _error(400, type(exc).__name__, str(exc))
        except ValueError as exc:
            return _error(400, "BadRequest", str(exc))
        try:
            report = check_claim(
                query,
                corpus,
                eqa,
                bqa,
                window_config=config.window_config(),
                balanced_margin=config.balanced_margin,
                retrieval_limit=config.retrieval_limit,
                workers=config.workers,
            )
        except BackendError as exc:
            return _error(502, type(exc).__name__, str(exc))
        return Response(content=report_to_json(report), media_type="application/json")

    @app.post("/v1/ingest")
    async def ingest(request: Request) -> Response:
        if not config.allow_ingest:
            return _error(403, "IngestDisabled", "enable allow_ingest to ingest at runtime")
        payload = (await request.body()).decode("utf-8")
        added, skipped = 0, []
        for line_no, line in enumerate(io.StringIO(payload), start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                if not isinstance(record, dict):
                    raise ValueError("line is not a JSON object")
                corpus.ingest(record)
                added += 1
            except ValueError as exc:
                skipped.append({"line": line_no, "reason": str(exc)})
        return Response(
            content=json.dumps(
                {"ingested": added, "skipped": skipped, "documents": len(corpus)}
            ),
            media_type="application/json",
        )

    return app


def _parse_check_body(body: dict) -> ClaimQuery:
    if "question" in body:
        return parse_claim(str(body["question"]))
    missing = [key for key in ("agent", "verb", "disease") if not body.get(key)]
    if missing:
        raise ValueError(f"missing field(s): {', '.join(missing)} (or pass 'question')")
    verb = ClaimVerb.from_word(str(body["verb"]))
    if verb is None:
        raise NoVerbMatch(f"unsupported verb {body['verb']!r}")
    return ClaimQuery(agent=str(body["agent"]).strip(), verb=verb, disease=str(body["disease"]).strip())
