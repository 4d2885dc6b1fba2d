"""Evaluation harness: span metrics, ROUGE, stance classification scores.

Answer normalization and the EM/F1 pair follow the standard extractive-QA
evaluation convention (lowercase, strip punctuation, drop articles, collapse
whitespace, token multiset overlap, max over gold answers).  F1-style scores
are computed as 2 * overlap / (len_a + len_b), which equals 2PR / (P + R)
algebraically but avoids an intermediate division.
"""

from __future__ import annotations

import json
import re
import string
from collections import Counter
from dataclasses import dataclass, field

from .corpus import build_document
from .scoring import BqaClassifier, EqaScorer
from .windows import WindowConfig, make_windows, remap_to_document
from . import pipeline

BOOL_LABELS = ("yes", "no", "neutral")

_ARTICLE_RE = re.compile(r"\b(a|an|the)\b")
_ROUGE_TOKEN_RE = re.compile(r"[a-z0-9]+")


class LengthMismatch(ValueError):
    """Prediction and gold sequences differ in length."""


class DatasetFormatError(ValueError):
    """A dataset file or example does not match its schema."""


def normalize_answer(text: str) -> str:
    """Lowercase, drop punctuation, drop articles, collapse whitespace."""
    text = text.lower()
    text = "".join(ch for ch in text if ch not in string.punctuation)
    text = _ARTICLE_RE.sub(" ", text)
    return " ".join(text.split())


def _answer_tokens(text: str) -> list[str]:
    return normalize_answer(text).split()


def exact_match(prediction: str, golds: list[str]) -> float:
    """1.0 iff the normalized prediction equals some normalized gold.

    An empty gold list stands for an unanswerable example and scores 1.0
    exactly when the prediction normalizes to empty.
    """
    golds = golds or [""]
    pred = normalize_answer(prediction)
    return float(any(pred == normalize_answer(g) for g in golds))


def _f1_recall(prediction: str, gold: str) -> tuple[float, float]:
    pred_toks = _answer_tokens(prediction)
    gold_toks = _answer_tokens(gold)
    if not pred_toks or not gold_toks:
        exact = float(pred_toks == gold_toks)
        return exact, exact
    overlap = sum((Counter(pred_toks) & Counter(gold_toks)).values())
    if overlap == 0:
        return 0.0, 0.0
    return 2 * overlap / (len(pred_toks) + len(gold_toks)), overlap / len(gold_toks)


def token_f1(prediction: str, golds: list[str]) -> float:
    """Best token-multiset F1 over the gold answers."""
    golds = golds or [""]
    return max(_f1_recall(prediction, g)[0] for g in golds)


def span_recall(prediction: str, golds: list[str]) -> float:
    """Recall component of the gold that maximizes F1 (first on ties)."""
    golds = golds or [""]
    best_f1 = -1.0
    best_recall = 0.0
    for gold in golds:
        f1, recall = _f1_recall(prediction, gold)
        if f1 > best_f1:
            best_f1, best_recall = f1, recall
    return best_recall


def _rouge_tokens(text: str) -> list[str]:
    return _ROUGE_TOKEN_RE.findall(text.lower())


def rouge_n(prediction: str, reference: str, n: int) -> float:
    """N-gram multiset overlap F1; 0.0 when either side has no n-grams."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    pred = _rouge_tokens(prediction)
    ref = _rouge_tokens(reference)
    pred_grams = Counter(tuple(pred[i : i + n]) for i in range(len(pred) - n + 1))
    ref_grams = Counter(tuple(ref[i : i + n]) for i in range(len(ref) - n + 1))
    if not pred_grams or not ref_grams:
        return 0.0
    overlap = sum((pred_grams & ref_grams).values())
    return 2 * overlap / (sum(pred_grams.values()) + sum(ref_grams.values()))


def _lcs_length(a: list[str], b: list[str]) -> int:
    if not a or not b:
        return 0
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b, start=1):
            cur.append(prev[j - 1] + 1 if x == y else max(prev[j], cur[j - 1]))
        prev = cur
    return prev[-1]


def rouge_l(prediction: str, reference: str) -> float:
    """Longest-common-subsequence F1 over tokens."""
    pred = _rouge_tokens(prediction)
    ref = _rouge_tokens(reference)
    if not pred or not ref:
        return 0.0
    lcs = _lcs_length(pred, ref)
    return 2 * lcs / (len(pred) + len(ref))


def classification_scores(
    predictions: list[str], golds: list[str]
) -> tuple[float, float]:
    """(accuracy, macro F1) over the fixed yes/no/neutral label set.

    Macro F1 averages the three per-class F1 values unweighted; a class with
    undefined precision or recall contributes 0.
    """
    if len(predictions) != len(golds):
        raise LengthMismatch(f"{len(predictions)} predictions vs {len(golds)} golds")
    if not predictions:
        raise ValueError("cannot score an empty prediction list")
    for label in predictions + golds:
        if label not in BOOL_LABELS:
            raise ValueError(f"unknown label {label!r}")
    accuracy = sum(p == g for p, g in zip(predictions, golds)) / len(golds)
    f1_sum = 0.0
    for label in BOOL_LABELS:
        tp = sum(1 for p, g in zip(predictions, golds) if p == label and g == label)
        fp = sum(1 for p, g in zip(predictions, golds) if p == label and g != label)
        fn = sum(1 for p, g in zip(predictions, golds) if p != label and g == label)
        if tp:
            f1_sum += 2 * tp / (2 * tp + fp + fn)
    return accuracy, f1_sum / len(BOOL_LABELS)


@dataclass(frozen=True)
class EqaExample:
    id: str
    question: str
    context: str
    gold_answers: tuple[str, ...]
    is_impossible: bool

    def __post_init__(self) -> None:
        if self.is_impossible != (len(self.gold_answers) == 0):
            raise DatasetFormatError(
                f"example {self.id!r}: is_impossible must match empty gold answers"
            )


@dataclass(frozen=True)
class BoolExample:
    id: str
    question: str
    passage: str
    answer: str

    def __post_init__(self) -> None:
        if self.answer not in BOOL_LABELS:
            raise DatasetFormatError(
                f"example {self.id!r}: answer must be one of {BOOL_LABELS}, got {self.answer!r}"
            )


def load_eqa_dataset(path: str) -> list[EqaExample]:
    """Read an extractive dataset in the nested SQuAD v2 JSON layout."""
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    examples: list[EqaExample] = []
    try:
        for article in raw["data"]:
            for paragraph in article["paragraphs"]:
                context = paragraph["context"]
                for qa in paragraph["qas"]:
                    impossible = bool(qa.get("is_impossible", False))
                    answers = () if impossible else tuple(a["text"] for a in qa["answers"])
                    examples.append(
                        EqaExample(
                            id=str(qa["id"]),
                            question=qa["question"],
                            context=context,
                            gold_answers=answers,
                            is_impossible=impossible,
                        )
                    )
    except (KeyError, TypeError) as exc:
        raise DatasetFormatError(f"{path}: malformed extractive dataset ({exc})") from exc
    return examples


def load_bool_dataset(path: str) -> list[BoolExample]:
    """Read a boolean dataset as JSONL: {"id", "question", "passage", "answer"}."""
    examples: list[BoolExample] = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                examples.append(
                    BoolExample(
                        id=str(record["id"]),
                        question=record["question"],
                        passage=record["passage"],
                        answer=str(record["answer"]).lower(),
                    )
                )
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise DatasetFormatError(f"{path}:{line_no}: {exc}") from exc
    return examples


@dataclass
class MetricReport:
    """Aggregate scores plus the per-example rows they are the mean of."""

    task: str
    n: int
    aggregates: dict[str, float]
    per_example: list[dict] = field(default_factory=list)

    def to_json(self) -> str:
        payload = {
            "task": self.task,
            "n": self.n,
            "aggregates": {k: round(v, 6) for k, v in sorted(self.aggregates.items())},
        }
        return json.dumps(payload, sort_keys=False)

    def write_tsv(self, path: str) -> None:
        if not self.per_example:
            raise ValueError("no per-example rows to write")
        columns = [k for k in self.per_example[0] if k != "id"]
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("\t".join(["id"] + columns) + "\n")
            for row in self.per_example:
                cells = [str(row["id"])]
                for col in columns:
                    value = row[col]
                    cells.append(f"{value:.6f}" if isinstance(value, float) else str(value))
                fh.write("\t".join(cells) + "\n")


def evaluate_eqa(
    dataset: list[EqaExample],
    scorer: EqaScorer,
    window_config: WindowConfig | None = None,
) -> MetricReport:
    """Run the window/extract/merge pipeline per example and score the merged
    evidence text as the prediction."""
    config = window_config if window_config is not None else WindowConfig()
    rows: list[dict] = []
    for example in dataset:
        doc = build_document(example.id, example.context)
        spans = []
        for window in make_windows(doc, config):
            answer = scorer.score(example.question, window)
            highlight = remap_to_document(doc, window, answer)
            if highlight is not None:
                spans.append(highlight)
        prediction = pipeline.merge_highlights(spans, doc_id=doc.id).text
        golds = list(example.gold_answers)
        best_gold = max(golds, key=lambda g: _f1_recall(prediction, g)[0]) if golds else ""
        rows.append(
            {
                "id": example.id,
                "em": exact_match(prediction, golds),
                "f1": token_f1(prediction, golds),
                "recall": span_recall(prediction, golds),
                "rouge1": rouge_n(prediction, best_gold, 1),
                "rouge2": rouge_n(prediction, best_gold, 2),
                "rougeL": rouge_l(prediction, best_gold),
                "prediction": prediction,
            }
        )
    if not rows:
        raise ValueError("empty dataset")
    keys = ("em", "f1", "recall", "rouge1", "rouge2", "rougeL")
    aggregates = {k: sum(r[k] for r in rows) / len(rows) for k in keys}
    return MetricReport(task="eqa", n=len(rows), aggregates=aggregates, per_example=rows)


def evaluate_bqa(dataset: list[BoolExample], classifier: BqaClassifier) -> MetricReport:
    """Classify each passage and report accuracy and macro F1."""
    if not dataset:
        raise ValueError("empty dataset")
    rows: list[dict] = []
    predictions: list[str] = []
    for example in dataset:
        label = classifier.classify(example.question, example.passage).argmax_label()
        predictions.append(label)
        rows.append(
            {
                "id": example.id,
                "prediction": label,
                "gold": example.answer,
                "correct": float(label == example.answer),
            }
        )
    accuracy, macro_f1 = classification_scores(predictions, [e.answer for e in dataset])
    return MetricReport(
        task="bqa",
        n=len(rows),
        aggregates={"accuracy": accuracy, "macro_f1": macro_f1},
        per_example=rows,
    )
