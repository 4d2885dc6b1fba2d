"""Demo scorer backend speaking the remote wire protocol.

Serves /v1/eqa and /v1/bqa so the engine's remote mode can be exercised
without any model weights:

    python scripts/stub_backend.py --port 9099
    scichk check "Does zinc prevent influenza?" --corpus corpus.jsonl \
        --backend remote \
        --eqa-endpoint http://127.0.0.1:9099/v1/eqa \
        --bqa-endpoint http://127.0.0.1:9099/v1/bqa

The extractive side is a crude term-overlap spotter (not the library
baseline: it only sees the flat token list the protocol carries); the
boolean side reuses the rule classifier.
"""

import argparse

import uvicorn
from fastapi import FastAPI
from pydantic import BaseModel

from scichk.corpus import normalize_term
from scichk.scoring import QUESTION_STOPWORDS, RuleBqaClassifier

MAX_SPAN_TOKENS = 100


class EqaRequest(BaseModel):
    question: str
    tokens: list[str]
    window_index: int
    doc_id: str


class BqaRequest(BaseModel):
    question: str
    context: str


def build_app() -> FastAPI:
    app = FastAPI(title="scichk stub backend")
    classifier = RuleBqaClassifier()

    @app.post("/v1/eqa")
    def eqa(request: EqaRequest) -> dict:
        terms = {
            normalize_term(tok)
            for tok in request.question.split()
            if normalize_term(tok) and normalize_term(tok) not in QUESTION_STOPWORDS
        }
        hits = [
            i for i, tok in enumerate(request.tokens) if normalize_term(tok) in terms
        ]
        found = {normalize_term(request.tokens[i]) for i in hits}
        if len(found) < 2 or not terms:
            return {"answerable": False, "score": 0.0}
        start = hits[0]
        end = min(hits[-1], start + MAX_SPAN_TOKENS - 1)
        return {
            "answerable": True,
            "start": start,
            "end": end,
            "score": len(found) / len(terms),
        }

    @app.post("/v1/bqa")
    def bqa(request: BqaRequest) -> dict:
        dist = classifier.classify(request.question, request.context)
        return {"yes": dist.yes, "no": dist.no, "neutral": dist.neutral}

    return app


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=9099)
    args = parser.parse_args()
    uvicorn.run(build_app(), host=args.host, port=args.port)


if __name__ == "__main__":
    main()
