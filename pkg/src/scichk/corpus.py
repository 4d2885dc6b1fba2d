"""Abstract corpus: text segmentation, token offsets, inverted index, retrieval.

Documents are plain abstracts.  Segmentation and tokenization are offset
preserving: every sentence and token records the character range it was cut
from, so downstream highlights can always be mapped back onto the original
text.
"""

from __future__ import annotations

import json
import re
import string
import threading
from dataclasses import dataclass, field

from .claims import ClaimQuery

# Trailing terminator candidates.  A period only ends a sentence when followed
# by whitespace and an uppercase letter or digit, and not when it closes one of
# these abbreviations or sits inside an open parenthesis (numeric asides such
# as "(0.23% versus 0.25%)" must stay in one piece).
_TERMINATORS = ".?!"
_ABBREVIATIONS = ("et al.", "e.g.", "i.e.", "vs.", "fig.", "dr.")

_TOKEN_RE = re.compile(r"\S+")
_STRIP_CHARS = string.punctuation + "‘’“”"


class DuplicateId(ValueError):
    """A document with this id is already in the corpus."""


class EmptyAbstract(ValueError):
    """Record carries no abstract text."""


@dataclass(frozen=True)
class SentenceSpan:
    index: int
    char_start: int
    char_end: int
    text: str


@dataclass(frozen=True)
class TokenSpan:
    index: int
    char_start: int
    char_end: int
    text: str
    sentence_index: int


@dataclass(frozen=True)
class Document:
    id: str
    abstract_text: str
    title: str = ""
    source_url: str = ""
    year: int | None = None
    sentences: tuple[SentenceSpan, ...] = ()
    tokens: tuple[TokenSpan, ...] = ()


def segment_sentences(text: str) -> list[SentenceSpan]:
    """Split ``text`` into sentence spans covering every non-whitespace char."""
    breaks = []
    depth = 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth = max(0, depth - 1)
        elif ch in _TERMINATORS and depth == 0:
            nxt = _next_nonspace(text, i + 1)
            if nxt is None or nxt == i + 1:
                continue  # end of text, or no whitespace after the terminator
            if not (text[nxt].isupper() or text[nxt].isdigit()):
                continue
            if ch == "." and _ends_with_abbreviation(text, i):
                continue
            breaks.append(i + 1)

    spans: list[SentenceSpan] = []
    start = 0
    for brk in breaks + [len(text)]:
        segment = text[start:brk]
        lead = len(segment) - len(segment.lstrip())
        seg_start = start + lead
        seg_end = start + len(segment.rstrip())
        if seg_end > seg_start:
            spans.append(
                SentenceSpan(
                    index=len(spans),
                    char_start=seg_start,
                    char_end=seg_end,
                    text=text[seg_start:seg_end],
                )
            )
        start = brk
    return spans


def _next_nonspace(text: str, pos: int) -> int | None:
    for j in range(pos, len(text)):
        if not text[j].isspace():
            return j
    return None


def _ends_with_abbreviation(text: str, period_pos: int) -> bool:
    prefix = text[: period_pos + 1].lower()
    return prefix.endswith(_ABBREVIATIONS)


def tokenize(text: str, sentences: list[SentenceSpan]) -> list[TokenSpan]:
    """Whitespace tokens with character offsets, tagged by owning sentence."""
    tokens: list[TokenSpan] = []
    for sent in sentences:
        for match in _TOKEN_RE.finditer(text, sent.char_start, sent.char_end):
            tokens.append(
                TokenSpan(
                    index=len(tokens),
                    char_start=match.start(),
                    char_end=match.end(),
                    text=match.group(),
                    sentence_index=sent.index,
                )
            )
    return tokens


def normalize_term(token: str) -> str:
    """Lowercase and strip surrounding punctuation; internal hyphens survive,
    so "COVID-19." and "covid-19" normalize identically."""
    return token.lower().strip(_STRIP_CHARS)


def query_terms(expression: str) -> list[str]:
    """Normalized index terms of a multi-word query expression."""
    seen: list[str] = []
    for tok in expression.split():
        term = normalize_term(tok)
        if term and term not in seen:
            seen.append(term)
    return seen


def build_document(
    doc_id: str,
    abstract: str,
    title: str = "",
    source_url: str = "",
    year: int | None = None,
) -> Document:
    """Segment and tokenize an abstract into an immutable Document."""
    if not abstract.strip():
        raise EmptyAbstract(f"document {doc_id!r} has an empty abstract")
    sentences = segment_sentences(abstract)
    tokens = tokenize(abstract, sentences)
    return Document(
        id=doc_id,
        abstract_text=abstract,
        title=title,
        source_url=source_url,
        year=year,
        sentences=tuple(sentences),
        tokens=tuple(tokens),
    )


class Corpus:
    """In-memory document store with a term -> (doc id, tf) inverted index.

    Ingest is a single-writer phase; once it is done the corpus is immutable
    and safe for any number of concurrent readers.  A lock still guards both
    sides so a service that allows live ingest never exposes a half-indexed
    document.
    """

    def __init__(self) -> None:
        self.documents: dict[str, Document] = {}
        self.term_index: dict[str, dict[str, int]] = {}
        self._lock = threading.RLock()

    def __len__(self) -> int:
        return len(self.documents)

    def __contains__(self, doc_id: str) -> bool:
        return doc_id in self.documents

    def get(self, doc_id: str) -> Document | None:
        return self.documents.get(doc_id)

    def ingest(self, record: dict) -> Document:
        """Validate and index one raw record ({"id", "abstract", ...}).

        Unknown fields are ignored.  Raises DuplicateId, EmptyAbstract or
        ValueError on missing/mistyped required fields.
        """
        doc_id = record.get("id")
        abstract = record.get("abstract")
        if not isinstance(doc_id, str) or not doc_id.strip():
            raise ValueError("record is missing a string 'id'")
        if not isinstance(abstract, str):
            raise ValueError(f"record {doc_id!r} is missing a string 'abstract'")
        year = record.get("year")
        if year is not None and not isinstance(year, int):
            raise ValueError(f"record {doc_id!r} has a non-integer 'year'")
        doc = build_document(
            doc_id,
            abstract,
            title=str(record.get("title", "") or ""),
            source_url=str(record.get("url", "") or ""),
            year=year,
        )
        with self._lock:
            if doc_id in self.documents:
                raise DuplicateId(f"document id {doc_id!r} already ingested")
            self.documents[doc_id] = doc
            counts: dict[str, int] = {}
            for tok in doc.tokens:
                term = normalize_term(tok.text)
                if term:
                    counts[term] = counts.get(term, 0) + 1
            for term, tf in counts.items():
                self.term_index.setdefault(term, {})[doc_id] = tf
        return doc

    def retrieve_candidates(self, query: ClaimQuery, limit: int = 100) -> list[Document]:
        """Documents mentioning at least one agent term AND one disease term.

        Ranked by descending combined term frequency over all query terms,
        ties broken by ascending document id.
        """
        if limit < 1:
            raise ValueError(f"limit must be positive, got {limit}")
        agent_terms = query_terms(query.agent)
        disease_terms = query_terms(query.disease)
        with self._lock:
            agent_hits = self._postings_union(agent_terms)
            disease_hits = self._postings_union(disease_terms)
            matched = sorted(
                (doc_id for doc_id in agent_hits if doc_id in disease_hits),
                key=lambda doc_id: (-(agent_hits[doc_id] + disease_hits[doc_id]), doc_id),
            )
            return [self.documents[doc_id] for doc_id in matched[:limit]]

    def _postings_union(self, terms: list[str]) -> dict[str, int]:
        combined: dict[str, int] = {}
        for term in terms:
            for doc_id, tf in self.term_index.get(term, {}).items():
                combined[doc_id] = combined.get(doc_id, 0) + tf
        return combined


@dataclass
class IngestReport:
    """Outcome of a bulk JSONL load."""

    ingested: int = 0
    skipped: list[tuple[int, str]] = field(default_factory=list)

    @property
    def skipped_count(self) -> int:
        return len(self.skipped)


def load_jsonl(path: str, corpus: Corpus | None = None) -> tuple[Corpus, IngestReport]:
    """Load a UTF-8 JSONL corpus file, skipping malformed lines.

    Every skipped line is reported with its 1-based line number and a reason;
    valid lines are never lost to a bad neighbour.
    """
    corpus = corpus if corpus is not None else Corpus()
    report = IngestReport()
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                if not isinstance(record, dict):
                    raise ValueError("line is not a JSON object")
                corpus.ingest(record)
            except (json.JSONDecodeError, ValueError) as exc:
                report.skipped.append((line_no, str(exc)))
            else:
                report.ingested += 1
    return corpus, report
