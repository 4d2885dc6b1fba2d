"""Command line interface: ingest, check, eval, serve.

Exit codes: 0 success, 1 usage error, 2 runtime or backend error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .claims import ClaimParseError, parse_claim
from .config import ConfigError, EngineConfig, load_config
from .corpus import Corpus, load_jsonl
from .metrics import evaluate_bqa, evaluate_eqa, load_bool_dataset, load_eqa_dataset
from .pipeline import ConsensusReport, check_claim, report_to_json
from .remote import BackendError
from .service import build_scorers

UNDERLINE_ON = "\x1b[4m"
UNDERLINE_OFF = "\x1b[24m"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


def build_parser() -> _Parser:
    parser = _Parser(prog="scichk", description="Check scientific claims against an abstract corpus")
    sub = parser.add_subparsers(dest="command", required=True)

    p_ingest = sub.add_parser("ingest", help="validate a JSONL file into a corpus file")
    p_ingest.add_argument("--corpus", required=True, help="corpus JSONL to create or extend")
    p_ingest.add_argument("--input", required=True, help="JSONL records to ingest")

    p_check = sub.add_parser("check", help="check one claim question against a corpus")
    p_check.add_argument("question", help='e.g. "Does hydroxychloroquine cure covid-19?"')
    p_check.add_argument("--corpus", required=True)
    mode = p_check.add_mutually_exclusive_group()
    mode.add_argument("--json", action="store_true", help="print the canonical JSON report")
    mode.add_argument("--text", action="store_true", help="print a readable report (default)")
    p_check.add_argument("--t", type=int, default=None, help="sentences per window")
    p_check.add_argument("--p", type=int, default=None, help="sentence overlap between windows")
    p_check.add_argument("--margin", type=float, default=None, help="balanced consensus margin")
    p_check.add_argument("--limit", type=int, default=None, help="retrieval candidate limit")
    p_check.add_argument("--backend", choices=("baseline", "remote"), default=None)
    p_check.add_argument("--eqa-endpoint", default=None)
    p_check.add_argument("--bqa-endpoint", default=None)
    p_check.add_argument("--config", default=None, help="config file (flat key=value)")

    p_eval = sub.add_parser("eval", help="run the metric harness on a dataset")
    p_eval.add_argument("task", choices=("eqa", "bqa"))
    p_eval.add_argument("--dataset", required=True)
    p_eval.add_argument("--backend", choices=("baseline", "remote"), default=None)
    p_eval.add_argument("--eqa-endpoint", default=None)
    p_eval.add_argument("--bqa-endpoint", default=None)
    p_eval.add_argument("--config", default=None)
    p_eval.add_argument("--per-example", default=None, help="write per-example scores as TSV")

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--config", required=True)
    return parser


def _load_engine_config(args: argparse.Namespace) -> EngineConfig:
    config = load_config(getattr(args, "config", None))
    overrides = {
        "window_t": getattr(args, "t", None),
        "window_p": getattr(args, "p", None),
        "balanced_margin": getattr(args, "margin", None),
        "retrieval_limit": getattr(args, "limit", None),
        "backend": getattr(args, "backend", None),
        "eqa_endpoint": getattr(args, "eqa_endpoint", None),
        "bqa_endpoint": getattr(args, "bqa_endpoint", None),
    }
    for name, value in overrides.items():
        if value is not None:
            setattr(config, name, value)
    config.__post_init__()  # re-validate after CLI overrides
    return config


def cmd_ingest(args: argparse.Namespace) -> int:
    corpus = Corpus()
    if os.path.exists(args.corpus):
        corpus, _ = load_jsonl(args.corpus)
    accepted: list[str] = []
    skipped: list[tuple[int, str]] = []
    with open(args.input, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                if not isinstance(record, dict):
                    raise ValueError("line is not a JSON object")
                corpus.ingest(record)
            except ValueError as exc:
                skipped.append((line_no, str(exc)))
            else:
                accepted.append(line.rstrip("\n"))
    with open(args.corpus, "a", encoding="utf-8") as out:
        for line in accepted:
            out.write(line + "\n")
    for line_no, reason in skipped:
        print(f"skipped line {line_no}: {reason}", file=sys.stderr)
    print(f"ingested {len(accepted)} document(s), skipped {len(skipped)}, corpus now {len(corpus)}")
    return 0


def cmd_check(args: argparse.Namespace) -> int:
    query = parse_claim(args.question)
    config = _load_engine_config(args)
    corpus, _ = load_jsonl(args.corpus)
    eqa, bqa = build_scorers(config)
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
    if args.json:
        print(report_to_json(report))
    else:
        print(render_text_report(report, corpus))
    return 0


def render_text_report(report: ConsensusReport, corpus: Corpus) -> str:
    """Readable rendering with evidence spans underlined in their abstract."""
    lines = [
        f"Claim: {report.claim.question_text}",
        f"Consensus: {report.label.value} "
        f"(yes={report.n_yes} no={report.n_no} neutral={report.n_neutral})",
    ]
    for article in report.articles:
        doc = corpus.get(article.doc_id)
        title = doc.title if doc and doc.title else article.doc_id
        lines.append("")
        lines.append(f"[{article.label}] {article.doc_id} {title}".rstrip())
        if doc is None:
            continue
        text = doc.abstract_text
        if article.evidence.highlights:
            rendered = []
            cursor = 0
            for h in article.evidence.highlights:
                rendered.append(text[cursor : h.char_start])
                rendered.append(UNDERLINE_ON + text[h.char_start : h.char_end] + UNDERLINE_OFF)
                cursor = h.char_end
            rendered.append(text[cursor:])
            lines.append("".join(rendered))
        else:
            lines.append(text)
    return "\n".join(lines)


def cmd_eval(args: argparse.Namespace) -> int:
    config = _load_engine_config(args)
    eqa, bqa = build_scorers(config)
    if args.task == "eqa":
        report = evaluate_eqa(load_eqa_dataset(args.dataset), eqa, config.window_config())
    else:
        report = evaluate_bqa(load_bool_dataset(args.dataset), bqa)
    print(report.to_json())
    if args.per_example:
        report.write_tsv(args.per_example)
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    config = load_config(args.config)
    app = create_app(config)
    uvicorn.run(app, host=config.host, port=config.port)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 1
    try:
        if args.command == "ingest":
            return cmd_ingest(args)
        if args.command == "check":
            return cmd_check(args)
        if args.command == "eval":
            return cmd_eval(args)
        if args.command == "serve":
            return cmd_serve(args)
        raise AssertionError(f"unhandled command {args.command!r}")
    except ClaimParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ConfigError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except BackendError as exc:
        print(f"backend error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
