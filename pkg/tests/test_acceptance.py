"""End-to-end acceptance gate.

Each test covers one release criterion and prints a single PASS/FAIL line
(run with ``pytest tests/test_acceptance.py -v -s`` to see them).  The
criteria exercise the full pipeline against independent oracles, the pinned
golden report, and the wire protocol; they are intentionally heavier than
the unit suites.
"""

import contextlib
import math
import random
import time

import httpx
import numpy as np
import pytest
from fastapi.testclient import TestClient

from scichk.claims import parse_claim
from scichk.cli import main
from scichk.config import EngineConfig
from scichk.corpus import Corpus, load_jsonl
from scichk.metrics import exact_match, rouge_l, rouge_n, span_recall, token_f1
from scichk.pipeline import (
    ArticleVerdict,
    ConsensusLabel,
    EvidenceContext,
    aggregate,
    check_claim,
    report_to_json,
)
from scichk.remote import (
    BackendProtocol,
    BackendTimeout,
    BackendUnreachable,
    RemoteBqaClassifier,
    RemoteEqaScorer,
)
from scichk.scoring import (
    BooleanDistribution,
    LexicalEqaScorer,
    RuleBqaClassifier,
    SpanProbabilities,
    decode_span,
)
from scichk.service import create_app
from scichk.windows import WindowConfig, make_windows, window_count

from conftest import UNDERLINED, data_path
from test_metrics import FIXTURE_50, brute_force_lcs, ref_em, ref_f1, ref_recall
from test_scoring import brute_force_decode
from test_windows import brute_force_slider, doc_with_sentences


@contextlib.contextmanager
def criterion(number: int, name: str):
    note: dict = {}
    try:
        yield note
    except BaseException:
        print(f"\n[acceptance] criterion {number} ({name}): FAIL")
        raise
    detail = f" [{note['detail']}]" if "detail" in note else ""
    print(f"\n[acceptance] criterion {number} ({name}): PASS{detail}")


def test_criterion_1_window_arithmetic():
    with criterion(1, "window arithmetic vs brute-force slider") as note:
        rng = random.Random(20240601)
        started = time.perf_counter()
        for _ in range(1000):
            n = rng.randint(1, 60)
            t = rng.randint(1, 10)
            p = rng.randint(0, t - 1)
            config = WindowConfig(sentences_per_window=t, overlap=p, token_budget=10_000)
            doc = doc_with_sentences(n)
            windows = make_windows(doc, config)
            expected = brute_force_slider(n, t, p)
            assert [(w.sentence_first, w.sentence_last) for w in windows] == expected
            d = t - p
            formula = 1 if n <= t else math.ceil((n - t) / d) + 1
            assert len(windows) == formula == window_count(n, config)
            covered = set()
            for w in windows:
                covered.update(range(w.sentence_first, w.sentence_last + 1))
            assert covered == set(range(n))
        elapsed = time.perf_counter() - started
        assert elapsed < 5.0, f"window sweep took {elapsed:.2f}s"
        note["detail"] = f"1000 cases in {elapsed:.2f}s"


def test_criterion_2_documented_window_cases():
    with criterion(2, "fixed window examples"):
        # default config caps any abstract of up to 14 sentences at 2 windows
        default = WindowConfig()
        for n in range(1, 15):
            windows = make_windows(doc_with_sentences(n), default)
            assert len(windows) <= 2
        assert window_count(14, default) == 2
        assert window_count(7, default) == 1
        # overlapping pattern: 5 sentences, t=3, p=1
        config = WindowConfig(sentences_per_window=3, overlap=1, token_budget=10_000)
        windows = make_windows(doc_with_sentences(5), config)
        assert [(w.sentence_first, w.sentence_last) for w in windows] == [(0, 2), (2, 4)]


def test_criterion_3_span_decoding():
    with criterion(3, "span decoding vs quadratic maximizer") as note:
        rng = np.random.default_rng(20240601)
        mismatches = 0
        for case in range(500):
            n = int(rng.integers(1, 65))
            # quantized probabilities make exact ties common
            matrix = rng.integers(0, 11, size=(n, 2)).astype(np.float64) / 10.0
            if case % 5 == 0:
                matrix[rng.integers(0, n), :] = 0.0  # force zero rows into the pool
            na_score = float(rng.integers(0, 11)) / 10.0
            na_threshold = float(rng.integers(0, 11)) / 10.0
            max_span_len = int(rng.integers(1, 80))
            probs = SpanProbabilities(matrix=matrix, na_score=na_score)
            got = decode_span(probs, na_threshold=na_threshold, max_span_len=max_span_len)
            answerable, best, joint = brute_force_decode(matrix, na_score, na_threshold, max_span_len)
            ok = got.answerable == answerable and got.score == joint
            if ok and answerable:
                ok = (got.local_start, got.local_end) == best
            mismatches += 0 if ok else 1
        assert mismatches == 0
        note["detail"] = "500 matrices, zero mismatches"


def test_criterion_4_metric_oracles():
    with criterion(4, "metric oracles") as note:
        for pred, golds in FIXTURE_50:
            assert abs(exact_match(pred, golds) - ref_em(pred, golds)) < 1e-9
            assert abs(token_f1(pred, golds) - ref_f1(pred, golds)) < 1e-9
            assert abs(span_recall(pred, golds) - ref_recall(pred, golds)) < 1e-9
        vocabulary = ["alpha", "beta", "gamma", "delta", "epsilon"]
        rng = random.Random(20240601)
        for _ in range(200):
            a = rng.choices(vocabulary, k=rng.randint(1, 10))
            b = rng.choices(vocabulary, k=rng.randint(1, 10))
            lcs = brute_force_lcs(a, b)
            assert rouge_l(" ".join(a), " ".join(b)) == 2 * lcs / (len(a) + len(b))
        # worked examples: three tokens a side with overlap two, and the
        # classic 0.8 ROUGE pairs
        assert token_f1("b c d", ["c d e"]) == 2 / 3
        assert rouge_n("the cat sat", "the cat", 1) == 0.8
        assert rouge_l("the cat sat on mat", "the cat on the mat") == 0.8
        note["detail"] = "50-example fixture + 200 LCS enumerations"


def test_criterion_5_end_to_end_golden_report(capsys, fixture_corpus):
    with criterion(5, "end-to-end golden report"):
        question = "Does hydroxychloroquine cure covid-19?"
        with open(data_path("golden_consensus.json"), encoding="utf-8") as fh:
            golden = fh.read()
        assert golden.endswith("\n")
        golden_body = golden[:-1]

        def run_library():
            corpus, ingest = load_jsonl(data_path("fixture_corpus.jsonl"))
            assert ingest.skipped == []
            return check_claim(
                parse_claim(question), corpus, LexicalEqaScorer(), RuleBqaClassifier()
            )

        first, second = run_library(), run_library()
        assert report_to_json(first) == report_to_json(second) == golden_body

        # flagship abstracts: both refute the claim, evidence shows the
        # underlined sentences
        by_id = {a.doc_id: a for a in first.articles}
        for doc_id, fragments in UNDERLINED.items():
            article = by_id[doc_id]
            assert article.label == "no"
            assert any(fragment in article.evidence.text for fragment in fragments)

        # CLI path
        code = main(["check", question, "--corpus", data_path("fixture_corpus.jsonl"), "--json"])
        out = capsys.readouterr().out
        assert code == 0 and out == golden

        # service path
        app = create_app(EngineConfig(), corpus=fixture_corpus)
        with TestClient(app) as client:
            response = client.post("/v1/check", json={"question": question})
        assert response.status_code == 200
        assert response.content == golden_body.encode("utf-8")


_CANONICAL_VERDICT = {
    "yes": ArticleVerdict(
        doc_id="d",
        label="yes",
        distribution=BooleanDistribution(yes=1.0, no=0.0, neutral=0.0),
        evidence=EvidenceContext(doc_id="d", highlights=(), text=""),
    ),
    "no": ArticleVerdict(
        doc_id="d",
        label="no",
        distribution=BooleanDistribution(yes=0.0, no=1.0, neutral=0.0),
        evidence=EvidenceContext(doc_id="d", highlights=(), text=""),
    ),
    "neutral": ArticleVerdict(
        doc_id="d",
        label="neutral",
        distribution=BooleanDistribution(yes=0.0, no=0.0, neutral=1.0),
        evidence=EvidenceContext(doc_id="d", highlights=(), text=""),
    ),
}


def test_criterion_6_aggregation_laws():
    with criterion(6, "aggregation laws") as note:
        rng = random.Random(20240601)
        labels = ("yes", "no", "neutral")
        for _ in range(10_000):
            votes = [rng.choice(labels) for _ in range(rng.randint(0, 30))]
            margin = rng.choice([0.0, 0.1, 0.2, 0.5, 1.0])
            verdicts = [_CANONICAL_VERDICT[v] for v in votes]
            outcome = aggregate(verdicts, balanced_margin=margin)
            label, n_yes, n_no, n_neutral = outcome
            assert (n_yes, n_no, n_neutral) == (
                votes.count("yes"), votes.count("no"), votes.count("neutral")
            )
            # permutation invariance
            shuffled = verdicts[:]
            rng.shuffle(shuffled)
            assert aggregate(shuffled, balanced_margin=margin) == outcome
            # inserting neutral voters never changes the outcome label
            padded = verdicts + [_CANONICAL_VERDICT["neutral"]] * rng.randint(1, 5)
            padded_label = aggregate(padded, balanced_margin=margin)[0]
            assert padded_label == label
            # degenerate and tied electorates
            if n_yes + n_no == 0:
                assert label is ConsensusLabel.NEUTRAL
            elif n_yes == n_no:
                assert label is ConsensusLabel.BALANCED
        note["detail"] = "10000 vote multisets"


def test_criterion_7_wire_protocol_conformance(fixture_corpus):
    with criterion(7, "wire protocol conformance"):
        question = parse_claim("Does hydroxychloroquine cure covid-19?")
        doc = fixture_corpus.get("pmc-0002")
        window = make_windows(doc, WindowConfig())[0]

        def stub(payload=None, status=200, exception=None):
            def handler(request):
                if exception is not None:
                    raise exception(request=request)
                return httpx.Response(status, json=payload)

            return httpx.MockTransport(handler)

        # simplex violation
        bqa = RemoteBqaClassifier(
            "http://stub/v1/bqa", transport=stub({"yes": 0.7, "no": 0.5, "neutral": 0.0})
        )
        with pytest.raises(BackendProtocol):
            bqa.classify("q", "c")

        # out-of-range span
        n = len(window.token_slice)
        eqa = RemoteEqaScorer(
            "http://stub/v1/eqa",
            transport=stub({"answerable": True, "start": 0, "end": n, "score": 0.9}),
        )
        with pytest.raises(BackendProtocol):
            eqa.score(question.question_text, window)

        # non-200
        eqa = RemoteEqaScorer("http://stub/v1/eqa", transport=stub({}, status=503))
        with pytest.raises(BackendProtocol):
            eqa.score(question.question_text, window)

        # transport failures map to their own classes
        class _Refuse(httpx.ConnectError):
            def __init__(self, request):
                super().__init__("refused", request=request)

        class _Stall(httpx.ReadTimeout):
            def __init__(self, request):
                super().__init__("stalled", request=request)

        eqa = RemoteEqaScorer("http://stub/v1/eqa", transport=stub(exception=_Refuse), retries=0)
        with pytest.raises(BackendUnreachable):
            eqa.score(question.question_text, window)
        eqa = RemoteEqaScorer("http://stub/v1/eqa", transport=stub(exception=_Stall), retries=0)
        with pytest.raises(BackendTimeout):
            eqa.score(question.question_text, window)

        # a malformed backend must fail the whole check, not corrupt a report
        bad_eqa = RemoteEqaScorer(
            "http://stub/v1/eqa",
            transport=stub({"answerable": True, "start": 0, "end": 10_000, "score": 0.9}),
        )
        good_bqa = RuleBqaClassifier()
        with pytest.raises(BackendProtocol):
            check_claim(question, fixture_corpus, bad_eqa, good_bqa)


def _synthetic_corpus(n_docs: int) -> Corpus:
    rng = random.Random(20240601)
    fillers = [
        "The cohort enrolled adults across twelve clinical sites.",
        "Participants were followed for twenty weeks after randomization.",
        "Baseline characteristics were balanced between the study arms.",
        "Adverse events were mild and resolved without intervention.",
    ]
    outcomes = [
        "Zinc supplementation significantly reduced influenza incidence in this arm.",
        "Zinc lozenges did not reduce influenza duration compared with placebo.",
        "Zinc intake showed no association either way with influenza in this cohort.",
    ]
    corpus = Corpus()
    for i in range(n_docs):
        sentences = rng.sample(fillers, k=rng.randint(1, 3))
        sentences.insert(rng.randint(0, len(sentences)), rng.choice(outcomes))
        corpus.ingest({"id": f"syn-{i:04d}", "abstract": " ".join(sentences)})
    return corpus


def test_criterion_8_throughput():
    with criterion(8, "baseline throughput") as note:
        corpus = _synthetic_corpus(1000)
        query = parse_claim("Does zinc prevent influenza?")
        started = time.perf_counter()
        report = check_claim(
            query,
            corpus,
            LexicalEqaScorer(),
            RuleBqaClassifier(),
            retrieval_limit=1000,
            workers=4,
        )
        elapsed = time.perf_counter() - started
        assert len(report.articles) == 1000
        assert report.n_yes + report.n_no + report.n_neutral == 1000
        assert elapsed < 10.0, f"1000 abstracts took {elapsed:.2f}s"
        note["detail"] = f"1000 abstracts in {elapsed:.2f}s"
