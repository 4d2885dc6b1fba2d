"""Shared fixtures: the six-document corpus, the demo claim, baseline scorers."""

from __future__ import annotations

import os

import pytest

from scichk.claims import parse_claim
from scichk.corpus import Corpus, load_jsonl
from scichk.metrics import normalize_answer
from scichk.scoring import LexicalEqaScorer, RuleBqaClassifier
from scichk.windows import Window, WindowSpanAnswer

DATA_DIR = os.path.join(os.path.dirname(__file__), "data")

# Underlined evidence sentences of the two flagship abstracts; end-to-end
# checks assert these show up verbatim inside the extracted evidence.
UNDERLINED = {
    "pmc-0001": [
        "No significant difference was found in terms of rates of usage of "
        "hydroxychloroquine or colchicine between those who were found positive "
        "for SARS-CoV-2 and those who were found negative",
        "These findings raise doubts regarding the protective role of these "
        "medications in the battle against SARS-CoV-2 infection.",
    ],
    "pmc-0002": [
        "Hydroxychloroquine has received worldwide attention as a potential "
        "treatment for covid-19 because of positive results from small studies.",
        "this study do not support its use in patients admitted to hospital "
        "with covid-19 who require oxygen.",
    ],
}


def data_path(name: str) -> str:
    return os.path.join(DATA_DIR, name)


@pytest.fixture(scope="session")
def fixture_corpus() -> Corpus:
    corpus, report = load_jsonl(data_path("fixture_corpus.jsonl"))
    assert report.skipped == []
    assert len(corpus) == 6
    return corpus


@pytest.fixture(scope="session")
def demo_claim():
    return parse_claim("Does hydroxychloroquine cure covid-19?")


@pytest.fixture()
def lexical_scorer() -> LexicalEqaScorer:
    return LexicalEqaScorer()


@pytest.fixture()
def rule_classifier() -> RuleBqaClassifier:
    return RuleBqaClassifier()


class GoldSpanScorer:
    """Test oracle: extracts the gold answer wherever its normalized token run
    appears inside a window, and abstains everywhere else."""

    def __init__(self, gold_by_question: dict[str, str]) -> None:
        self.gold_by_question = gold_by_question

    def score(self, question: str, window: Window) -> WindowSpanAnswer:
        gold = self.gold_by_question.get(question, "")
        # articles normalize to ""; keep empties so positions stay aligned
        gold_norm = [normalize_answer(tok) for tok in gold.split()]
        tokens = [normalize_answer(tok.text) for tok in window.token_slice]
        if gold_norm and any(gold_norm):
            for m in range(len(tokens) - len(gold_norm) + 1):
                if tokens[m : m + len(gold_norm)] == gold_norm:
                    return WindowSpanAnswer(
                        window_index=window.index,
                        answerable=True,
                        score=1.0,
                        local_start=m,
                        local_end=m + len(gold_norm) - 1,
                    )
        return WindowSpanAnswer(window_index=window.index, answerable=False, score=0.0)
