"""End-to-end claim checking: evidence extraction, stance, consensus.

check_claim drives the whole loop: retrieve candidate abstracts, window each
one, let the extractive scorer pick evidence spans per window, merge the
spans, classify the merged evidence, then aggregate per-article stances into
one corpus-level consensus.  The report serialization here is the byte-exact
form shared by the CLI and the HTTP service.
"""

from __future__ import annotations

import enum
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .claims import ClaimQuery
from .corpus import Corpus, Document
from .scoring import BooleanDistribution, BqaClassifier, EqaScorer
from .windows import Highlight, WindowConfig, make_windows, remap_to_document

DEFAULT_BALANCED_MARGIN = 0.2

NEUTRAL_DISTRIBUTION = BooleanDistribution(yes=0.0, no=0.0, neutral=1.0)


class MixedDocuments(ValueError):
    """Highlights from different documents cannot be merged."""


class ConsensusLabel(enum.Enum):
    AFFIRMATIVE = "Affirmative"
    NEGATIVE = "Negative"
    BALANCED = "Balanced"
    NEUTRAL = "Neutral"


@dataclass(frozen=True)
class EvidenceContext:
    """Merged, ordered highlights of one document plus their joined text."""

    doc_id: str
    highlights: tuple[Highlight, ...]
    text: str


@dataclass(frozen=True)
class ArticleVerdict:
    doc_id: str
    label: str
    distribution: BooleanDistribution
    evidence: EvidenceContext

    def __post_init__(self) -> None:
        if self.label != self.distribution.argmax_label():
            raise ValueError(
                f"label {self.label!r} disagrees with distribution argmax "
                f"{self.distribution.argmax_label()!r}"
            )


@dataclass(frozen=True)
class ConsensusReport:
    claim: ClaimQuery
    label: ConsensusLabel
    n_yes: int
    n_no: int
    n_neutral: int
    articles: tuple[ArticleVerdict, ...]


def merge_highlights(spans: list[Highlight], doc_id: str | None = None) -> EvidenceContext:
    """Merge overlapping or touching character ranges into their union.

    Result highlights are sorted, disjoint and carry the max score of their
    constituents; duplicates collapse.  All spans must share one document.
    """
    if doc_id is None:
        if not spans:
            raise ValueError("cannot infer doc_id from an empty span list")
        doc_id = spans[0].doc_id
    foreign = {s.doc_id for s in spans} - {doc_id}
    if foreign:
        raise MixedDocuments(f"highlights mix documents {sorted(foreign | {doc_id})}")

    merged: list[Highlight] = []
    for span in sorted(spans, key=lambda s: (s.char_start, s.char_end)):
        if merged and span.char_start <= merged[-1].char_end:
            last = merged[-1]
            if span.char_end > last.char_end:
                # Overlapping or touching ranges agree on their shared text, so
                # the union text is recoverable without the source document.
                extra = span.text[last.char_end - span.char_start :]
                merged[-1] = Highlight(
                    doc_id=doc_id,
                    char_start=last.char_start,
                    char_end=span.char_end,
                    text=last.text + extra,
                    score=max(last.score, span.score),
                )
            elif span.score > last.score:
                merged[-1] = Highlight(
                    doc_id=doc_id,
                    char_start=last.char_start,
                    char_end=last.char_end,
                    text=last.text,
                    score=span.score,
                )
        else:
            merged.append(span)
    return EvidenceContext(
        doc_id=doc_id,
        highlights=tuple(merged),
        text=" ".join(h.text for h in merged),
    )


def check_article(
    query: ClaimQuery,
    doc: Document,
    eqa: EqaScorer,
    bqa: BqaClassifier,
    window_config: WindowConfig | None = None,
) -> ArticleVerdict:
    """Score one document: window, extract, merge, classify.

    A document with no answerable window gets the fully neutral distribution
    without ever calling the boolean backend.
    """
    config = window_config if window_config is not None else WindowConfig()
    spans: list[Highlight] = []
    for window in make_windows(doc, config):
        answer = eqa.score(query.question_text, window)
        highlight = remap_to_document(doc, window, answer)
        if highlight is not None:
            spans.append(highlight)
    evidence = merge_highlights(spans, doc_id=doc.id)
    if not evidence.highlights:
        distribution = NEUTRAL_DISTRIBUTION
    else:
        distribution = bqa.classify(query.question_text, evidence.text)
    return ArticleVerdict(
        doc_id=doc.id,
        label=distribution.argmax_label(),
        distribution=distribution,
        evidence=evidence,
    )


def aggregate(
    verdicts: list[ArticleVerdict],
    balanced_margin: float = DEFAULT_BALANCED_MARGIN,
) -> tuple[ConsensusLabel, int, int, int]:
    """Corpus-level consensus over per-article stances.

    Neutral articles abstain.  With no votes at all the consensus is Neutral;
    a yes/no imbalance within ``balanced_margin`` (relative to the vote count)
    is Balanced; otherwise the majority side wins.  Returns the label with the
    three counts.
    """
    if not 0.0 <= balanced_margin <= 1.0:
        raise ValueError(f"balanced_margin must lie in [0, 1], got {balanced_margin}")
    n_yes = sum(1 for v in verdicts if v.label == "yes")
    n_no = sum(1 for v in verdicts if v.label == "no")
    n_neutral = sum(1 for v in verdicts if v.label == "neutral")
    votes = n_yes + n_no
    if votes == 0:
        label = ConsensusLabel.NEUTRAL
    elif abs(n_yes - n_no) / votes <= balanced_margin:
        label = ConsensusLabel.BALANCED
    elif n_yes > n_no:
        label = ConsensusLabel.AFFIRMATIVE
    else:
        label = ConsensusLabel.NEGATIVE
    return label, n_yes, n_no, n_neutral


def check_claim(
    query: ClaimQuery,
    corpus: Corpus,
    eqa: EqaScorer,
    bqa: BqaClassifier,
    window_config: WindowConfig | None = None,
    balanced_margin: float = DEFAULT_BALANCED_MARGIN,
    retrieval_limit: int = 100,
    workers: int = 1,
) -> ConsensusReport:
    """Retrieve, check and aggregate.  Articles appear in retrieval order
    regardless of how many workers score them concurrently."""
    candidates = corpus.retrieve_candidates(query, limit=retrieval_limit)

    def run(doc: Document) -> ArticleVerdict:
        return check_article(query, doc, eqa, bqa, window_config)

    if workers > 1 and len(candidates) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            verdicts = list(pool.map(run, candidates))
    else:
        verdicts = [run(doc) for doc in candidates]
    label, n_yes, n_no, n_neutral = aggregate(verdicts, balanced_margin=balanced_margin)
    return ConsensusReport(
        claim=query,
        label=label,
        n_yes=n_yes,
        n_no=n_no,
        n_neutral=n_neutral,
        articles=tuple(verdicts),
    )


def _fmt(value: float) -> str:
    return f"{value:.6f}"


def report_to_json(report: ConsensusReport) -> str:
    """Deterministic JSON rendering: fixed key order, floats at 6 decimals.

    The CLI and the HTTP service both emit exactly this string, so identical
    inputs produce byte-identical reports on every path.
    """
    out: list[str] = ["{"]
    out.append('"claim": {')
    out.append(f'"agent": {json.dumps(report.claim.agent, ensure_ascii=False)}, ')
    out.append(f'"verb": {json.dumps(report.claim.verb.value)}, ')
    out.append(f'"disease": {json.dumps(report.claim.disease, ensure_ascii=False)}, ')
    out.append(f'"question": {json.dumps(report.claim.question_text, ensure_ascii=False)}')
    out.append("}, ")
    out.append(f'"label": {json.dumps(report.label.value)}, ')
    out.append(
        '"counts": {'
        f'"yes": {report.n_yes}, "no": {report.n_no}, "neutral": {report.n_neutral}'
        "}, "
    )
    out.append('"articles": [')
    for i, article in enumerate(report.articles):
        if i:
            out.append(", ")
        out.append("{")
        out.append(f'"doc_id": {json.dumps(article.doc_id, ensure_ascii=False)}, ')
        out.append(f'"label": {json.dumps(article.label)}, ')
        d = article.distribution
        out.append(
            '"distribution": {'
            f'"yes": {_fmt(d.yes)}, "no": {_fmt(d.no)}, "neutral": {_fmt(d.neutral)}'
            "}, "
        )
        out.append('"highlights": [')
        for k, h in enumerate(article.evidence.highlights):
            if k:
                out.append(", ")
            out.append(
                "{"
                f'"start": {h.char_start}, "end": {h.char_end}, '
                f'"text": {json.dumps(h.text, ensure_ascii=False)}, '
                f'"score": {_fmt(h.score)}'
                "}"
            )
        out.append("]")
        out.append("}")
    out.append("]")
    out.append("}")
    return "".join(out)
