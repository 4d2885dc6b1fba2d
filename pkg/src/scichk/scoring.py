"""Span decoding and the deterministic extractive / boolean baselines.

Both baselines exist so the whole pipeline runs and is testable without any
model server: the extractive one scores sentences by term overlap with the
question, the boolean one counts cue phrases from editable lexicon files.
Real model backends implement the same two call signatures over HTTP (see
``scichk.remote``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from typing import Protocol

import numpy as np

from .corpus import normalize_term
from .windows import Window, WindowSpanAnswer

DEFAULT_NA_THRESHOLD = 0.25
DEFAULT_MAX_SPAN_LEN = 100
NEUTRAL_EPSILON = 0.05

# Interrogative scaffolding of the claim template; kept out of the question
# term set so overlap measures content words only.
QUESTION_STOPWORDS = frozenset({"does", "do", "a", "an", "the"})

# A positive cue is discarded when one of these occurs shortly before it
# ("raise doubts regarding the protective role of ..." is not an endorsement).
NEGATION_WORDS = frozenset(
    {"no", "not", "never", "without", "doubt", "doubts", "lack", "lacks",
     "lacking", "fail", "fails", "failed", "unlikely"}
)
_NEGATION_LOOKBEHIND = 40


class EmptyMatrix(ValueError):
    """Span probabilities over zero tokens cannot be decoded."""


@dataclass(frozen=True)
class SpanProbabilities:
    """Per-token start/end probabilities for one window, plus a no-answer score.

    ``matrix`` has shape (token count, 2): column 0 start, column 1 end.
    """

    matrix: np.ndarray
    na_score: float

    def __post_init__(self) -> None:
        if self.matrix.ndim != 2 or self.matrix.shape[1] != 2:
            raise ValueError(f"expected shape (N, 2), got {self.matrix.shape}")
        if self.matrix.size and (self.matrix.min() < 0.0 or self.matrix.max() > 1.0):
            raise ValueError("probabilities must lie in [0, 1]")
        if not 0.0 <= self.na_score <= 1.0:
            raise ValueError(f"na_score must lie in [0, 1], got {self.na_score}")

    @property
    def start(self) -> np.ndarray:
        return self.matrix[:, 0]

    @property
    def end(self) -> np.ndarray:
        return self.matrix[:, 1]


@dataclass(frozen=True)
class BooleanDistribution:
    """Probability simplex over the three stances."""

    yes: float
    no: float
    neutral: float

    _TOLERANCE = 1e-6

    def __post_init__(self) -> None:
        for name, value in (("yes", self.yes), ("no", self.no), ("neutral", self.neutral)):
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} probability {value} outside [0, 1]")
        total = self.yes + self.no + self.neutral
        if abs(total - 1.0) > self._TOLERANCE:
            raise ValueError(f"distribution sums to {total}, not 1")

    def argmax_label(self) -> str:
        """Highest-probability stance; exact ties resolve yes > no > neutral."""
        best = max(self.yes, self.no, self.neutral)
        if self.yes == best:
            return "yes"
        if self.no == best:
            return "no"
        return "neutral"


class EqaScorer(Protocol):
    """Extractive scorer: one window in, one window-local answer out."""

    def score(self, question: str, window: Window) -> WindowSpanAnswer: ...


class BqaClassifier(Protocol):
    """Boolean stance classifier over an evidence context string."""

    def classify(self, question: str, context: str) -> BooleanDistribution: ...


def decode_span(
    probs: SpanProbabilities,
    na_threshold: float = DEFAULT_NA_THRESHOLD,
    max_span_len: int = DEFAULT_MAX_SPAN_LEN,
    window_index: int = 0,
) -> WindowSpanAnswer:
    """Pick the (start, end) pair maximizing start[m] * end[M].

    Constraints: m <= M and M - m <= max_span_len.  Ties resolve to the
    lexicographically smallest (m, M).  The result is unanswerable when the
    no-answer score beats the best joint score or the best joint score falls
    below ``na_threshold``; the best joint score is reported either way.
    """
    n = probs.matrix.shape[0]
    if n == 0:
        raise EmptyMatrix("cannot decode a span over zero tokens")
    start, end = probs.start, probs.end
    best_m = best_end = 0
    best_joint = -1.0
    for m in range(n):
        stop = min(m + max_span_len, n - 1)
        # argmax over the products, not over end alone: when start[m] == 0
        # every joint ties at zero and the smallest M must win
        joints = start[m] * end[m : stop + 1]
        rel = int(np.argmax(joints))  # first max, so smallest M wins ties
        joint = float(joints[rel])
        if joint > best_joint:
            best_joint = joint
            best_m, best_end = m, m + rel
    if probs.na_score > best_joint or best_joint < na_threshold:
        return WindowSpanAnswer(window_index=window_index, answerable=False, score=best_joint)
    return WindowSpanAnswer(
        window_index=window_index,
        answerable=True,
        score=best_joint,
        local_start=best_m,
        local_end=best_end,
    )


class LexicalEqaScorer:
    """Term-overlap extractive baseline.

    For every sentence that fits completely inside the window's token slice,
    overlap = |question terms ∩ sentence terms| / |question terms| over
    normalized terms.  The best sentence (ties: earliest) puts start/end peaks
    at its first/last token with probability equal to its overlap; the
    no-answer score is 1 - best overlap.  Decoding then runs as usual.
    """

    def __init__(
        self,
        na_threshold: float = DEFAULT_NA_THRESHOLD,
        max_span_len: int = DEFAULT_MAX_SPAN_LEN,
        stopwords: frozenset[str] = QUESTION_STOPWORDS,
    ) -> None:
        self.na_threshold = na_threshold
        self.max_span_len = max_span_len
        self.stopwords = stopwords

    def question_terms(self, question: str) -> set[str]:
        terms = {normalize_term(tok) for tok in question.split()}
        return {t for t in terms if t and t not in self.stopwords}

    def score(self, question: str, window: Window) -> WindowSpanAnswer:
        q_terms = self.question_terms(question)
        n = len(window.token_slice)
        matrix = np.zeros((n, 2))
        best_overlap = 0.0
        if q_terms and n:
            by_sentence: dict[int, list[int]] = {}
            for local, tok in enumerate(window.token_slice):
                by_sentence.setdefault(tok.sentence_index, []).append(local)
            # Truncation cuts the token slice mid-window, so its final sentence
            # may be incomplete; skip it rather than score a partial sentence.
            if window.truncated:
                by_sentence.pop(window.token_slice[-1].sentence_index, None)
            best_span: tuple[int, int] | None = None
            for sent_index in sorted(by_sentence):
                locals_ = by_sentence[sent_index]
                terms = {normalize_term(window.token_slice[i].text) for i in locals_}
                overlap = len(q_terms & terms) / len(q_terms)
                if overlap > best_overlap:
                    best_overlap = overlap
                    best_span = (locals_[0], locals_[-1])
            if best_span is not None:
                matrix[best_span[0], 0] = best_overlap
                matrix[best_span[1], 1] = best_overlap
        probs = SpanProbabilities(matrix=matrix, na_score=1.0 - best_overlap)
        return decode_span(
            probs,
            na_threshold=self.na_threshold,
            max_span_len=self.max_span_len,
            window_index=window.index,
        )


def lexical_eqa_score(question: str, window: Window) -> WindowSpanAnswer:
    """Module-level convenience wrapper with default settings."""
    return LexicalEqaScorer().score(question, window)


def _load_lexicon(filename: str) -> tuple[str, ...]:
    text = resources.files("scichk.data").joinpath(filename).read_text(encoding="utf-8")
    cues = []
    for line in text.splitlines():
        line = line.strip().lower()
        if line and not line.startswith("#"):
            cues.append(line)
    return tuple(cues)


class RuleBqaClassifier:
    """Cue-phrase boolean baseline.

    Counts negative and positive cue occurrences in the context (case
    insensitive substring match; positive cues are suppressed when a negation
    word occurs just before them).  With no cue hits at all the stance is
    fully neutral; otherwise the yes/no mass splits proportionally to the cue
    counts with a fixed epsilon reserved for neutral.
    """

    def __init__(
        self,
        negative_cues: tuple[str, ...] | None = None,
        positive_cues: tuple[str, ...] | None = None,
        epsilon: float = NEUTRAL_EPSILON,
    ) -> None:
        self.negative_cues = negative_cues if negative_cues is not None else _load_lexicon("negative_cues.txt")
        self.positive_cues = positive_cues if positive_cues is not None else _load_lexicon("positive_cues.txt")
        self.epsilon = epsilon

    def classify(self, question: str, context: str) -> BooleanDistribution:
        text = context.lower()
        n_neg = sum(text.count(cue) for cue in self.negative_cues)
        n_pos = sum(
            1
            for cue in self.positive_cues
            for pos in _find_all(text, cue)
            if not self._negated(text, pos)
        )
        total = n_neg + n_pos
        if total == 0:
            return BooleanDistribution(yes=0.0, no=0.0, neutral=1.0)
        p_yes = (n_pos / total) * (1.0 - self.epsilon)
        p_no = (1.0 - self.epsilon) - p_yes
        return BooleanDistribution(yes=p_yes, no=p_no, neutral=self.epsilon)

    @staticmethod
    def _negated(text: str, cue_pos: int) -> bool:
        preceding = text[max(0, cue_pos - _NEGATION_LOOKBEHIND) : cue_pos]
        return any(word in NEGATION_WORDS for word in re.findall(r"[a-z']+", preceding))


def _find_all(text: str, needle: str) -> list[int]:
    positions = []
    pos = text.find(needle)
    while pos != -1:
        positions.append(pos)
        pos = text.find(needle, pos + 1)
    return positions


def rule_bqa_classify(question: str, context: str) -> BooleanDistribution:
    """Module-level convenience wrapper with the shipped lexicons."""
    return RuleBqaClassifier().classify(question, context)
