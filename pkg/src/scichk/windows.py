"""Sliding sentence windows over an abstract, and span remapping back to it.

A window holds ``t`` consecutive sentences; consecutive windows share ``p``
sentences, so window ``j`` starts at sentence ``(t - p) * j``.  Window token
slices respect a fixed word-token budget: longer slices keep their prefix and
are flagged truncated, shorter ones record how much virtual padding a
fixed-size consumer would add.  Answer spans are window-local token indexes
and are remapped here to character offsets on the source abstract.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .corpus import Document, TokenSpan

DEFAULT_SENTENCES_PER_WINDOW = 7
DEFAULT_WINDOW_OVERLAP = 0
DEFAULT_TOKEN_BUDGET = 350


class EmptyDocument(ValueError):
    """Document has no sentences to window."""


class SpanOutOfWindow(ValueError):
    """Answer span points outside the window's real (unpadded) tokens."""


@dataclass(frozen=True)
class WindowConfig:
    sentences_per_window: int = DEFAULT_SENTENCES_PER_WINDOW
    overlap: int = DEFAULT_WINDOW_OVERLAP
    token_budget: int = DEFAULT_TOKEN_BUDGET

    def __post_init__(self) -> None:
        if self.sentences_per_window < 1:
            raise ValueError(f"sentences_per_window must be >= 1, got {self.sentences_per_window}")
        if not 0 <= self.overlap <= self.sentences_per_window - 1:
            raise ValueError(
                f"overlap must lie in [0, {self.sentences_per_window - 1}], got {self.overlap}"
            )
        if self.token_budget < 1:
            raise ValueError(f"token_budget must be >= 1, got {self.token_budget}")

    @property
    def stride(self) -> int:
        return self.sentences_per_window - self.overlap


@dataclass(frozen=True)
class Window:
    doc_id: str
    index: int
    sentence_first: int
    sentence_last: int
    token_slice: tuple[TokenSpan, ...]
    pad_count: int
    truncated: bool


@dataclass(frozen=True)
class WindowSpanAnswer:
    """Outcome of scoring one window. ``local_start``/``local_end`` index into
    the window's token slice and are set exactly when ``answerable``."""

    window_index: int
    answerable: bool
    score: float
    local_start: int | None = None
    local_end: int | None = None

    def __post_init__(self) -> None:
        if self.answerable:
            if self.local_start is None or self.local_end is None:
                raise ValueError("answerable span needs local_start and local_end")
            if not 0 <= self.local_start <= self.local_end:
                raise ValueError(
                    f"bad span order ({self.local_start}, {self.local_end})"
                )
        elif self.local_start is not None or self.local_end is not None:
            raise ValueError("unanswerable result must not carry span indexes")


@dataclass(frozen=True)
class Highlight:
    """A character range on a document's abstract, carrying its exact text."""

    doc_id: str
    char_start: int
    char_end: int
    text: str
    score: float


def window_count(sentence_count: int, config: WindowConfig) -> int:
    """Number of windows over ``sentence_count`` sentences."""
    if sentence_count < 1:
        raise EmptyDocument("cannot window zero sentences")
    t, d = config.sentences_per_window, config.stride
    if sentence_count <= t:
        return 1
    return math.ceil((sentence_count - t) / d) + 1


def make_windows(doc: Document, config: WindowConfig) -> list[Window]:
    """Cut ``doc`` into overlapping sentence windows under the token budget."""
    n_sent = len(doc.sentences)
    if n_sent == 0:
        raise EmptyDocument(f"document {doc.id!r} has no sentences")
    t, d = config.sentences_per_window, config.stride
    windows: list[Window] = []
    for j in range(window_count(n_sent, config)):
        first = d * j
        last = min(first + t - 1, n_sent - 1)
        slice_tokens = tuple(tok for tok in doc.tokens if first <= tok.sentence_index <= last)
        truncated = len(slice_tokens) > config.token_budget
        if truncated:
            slice_tokens = slice_tokens[: config.token_budget]
        windows.append(
            Window(
                doc_id=doc.id,
                index=j,
                sentence_first=first,
                sentence_last=last,
                token_slice=slice_tokens,
                pad_count=config.token_budget - len(slice_tokens),
                truncated=truncated,
            )
        )
    return windows


def remap_to_document(doc: Document, window: Window, answer: WindowSpanAnswer) -> Highlight | None:
    """Convert a window-local answer span to a document highlight.

    Returns None for unanswerable results.  Raises SpanOutOfWindow when the
    span escapes the real token slice (padding positions included).
    """
    if window.doc_id != doc.id:
        raise ValueError(f"window belongs to {window.doc_id!r}, not {doc.id!r}")
    if answer.window_index != window.index:
        raise ValueError(
            f"answer is for window {answer.window_index}, got window {window.index}"
        )
    if not answer.answerable:
        return None
    assert answer.local_start is not None and answer.local_end is not None
    if answer.local_end >= len(window.token_slice):
        raise SpanOutOfWindow(
            f"span ({answer.local_start}, {answer.local_end}) exceeds "
            f"{len(window.token_slice)} real tokens of window {window.index}"
        )
    first_tok = window.token_slice[answer.local_start]
    last_tok = window.token_slice[answer.local_end]
    return Highlight(
        doc_id=doc.id,
        char_start=first_tok.char_start,
        char_end=last_tok.char_end,
        text=doc.abstract_text[first_tok.char_start : last_tok.char_end],
        score=answer.score,
    )
