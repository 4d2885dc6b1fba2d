import json

import httpx
import pytest

from scichk.corpus import build_document
from scichk.remote import (
    BackendProtocol,
    BackendTimeout,
    BackendUnreachable,
    RemoteBqaClassifier,
    RemoteEqaScorer,
)
from scichk.windows import WindowConfig, make_windows

EQA_URL = "http://backend.test/v1/eqa"
BQA_URL = "http://backend.test/v1/bqa"


@pytest.fixture()
def window():
    doc = build_document("pmc-9", "Aspirin reduced fevers. The placebo group did not improve.")
    return make_windows(doc, WindowConfig())[0]


@pytest.fixture(autouse=True)
def no_backoff_sleep(monkeypatch):
    naps = []
    monkeypatch.setattr("scichk.remote.time.sleep", naps.append)
    return naps


def json_transport(payload, status=200, requests_seen=None):
    def handler(request):
        if requests_seen is not None:
            requests_seen.append(json.loads(request.content))
        return httpx.Response(status, json=payload)

    return httpx.MockTransport(handler)


def test_eqa_round_trip(window):
    seen = []
    scorer = RemoteEqaScorer(
        EQA_URL,
        transport=json_transport({"answerable": True, "start": 1, "end": 3, "score": 0.5}, requests_seen=seen),
    )
    answer = scorer.score("Does aspirin reduce fever?", window)
    assert answer.answerable and (answer.local_start, answer.local_end) == (1, 3)
    assert answer.score == 0.5
    assert answer.window_index == window.index
    request = seen[0]
    assert request["question"] == "Does aspirin reduce fever?"
    assert request["tokens"] == [tok.text for tok in window.token_slice]
    assert request["window_index"] == window.index
    assert request["doc_id"] == "pmc-9"
    scorer.close()


def test_eqa_unanswerable_round_trip(window):
    scorer = RemoteEqaScorer(EQA_URL, transport=json_transport({"answerable": False, "score": 0.1}))
    answer = scorer.score("q", window)
    assert not answer.answerable
    assert answer.score == 0.1
    assert answer.local_start is None and answer.local_end is None


@pytest.mark.parametrize(
    "payload",
    [
        {"answerable": True, "score": 0.5},  # span missing
        {"answerable": True, "start": 0, "score": 0.5},  # end missing
        {"answerable": True, "start": "0", "end": 1, "score": 0.5},  # stringly typed
        {"answerable": True, "start": 3, "end": 1, "score": 0.5},  # inverted
        {"answerable": True, "start": -1, "end": 1, "score": 0.5},  # negative
        {"answerable": "yes", "start": 0, "end": 1, "score": 0.5},  # non-bool flag
        {"answerable": True, "start": 0, "end": 1, "score": True},  # bool score
        {"answerable": False},  # score missing
    ],
)
def test_eqa_malformed_payloads(window, payload):
    scorer = RemoteEqaScorer(EQA_URL, transport=json_transport(payload))
    with pytest.raises(BackendProtocol):
        scorer.score("q", window)


def test_eqa_span_past_window_edge(window):
    n = len(window.token_slice)
    payload = {"answerable": True, "start": 0, "end": n, "score": 0.5}
    scorer = RemoteEqaScorer(EQA_URL, transport=json_transport(payload))
    with pytest.raises(BackendProtocol) as err:
        scorer.score("q", window)
    assert str(n) in str(err.value)
    # last valid token is fine
    scorer = RemoteEqaScorer(
        EQA_URL, transport=json_transport({"answerable": True, "start": n - 1, "end": n - 1, "score": 0.5})
    )
    assert scorer.score("q", window).local_end == n - 1


def test_bqa_round_trip():
    seen = []
    classifier = RemoteBqaClassifier(
        BQA_URL, transport=json_transport({"yes": 0.7, "no": 0.25, "neutral": 0.05}, requests_seen=seen)
    )
    dist = classifier.classify("Does X cure Y?", "X cured Y in mice.")
    assert (dist.yes, dist.no, dist.neutral) == (0.7, 0.25, 0.05)
    assert seen[0] == {"question": "Does X cure Y?", "context": "X cured Y in mice."}


def test_bqa_tolerates_tiny_sum_error():
    payload = {"yes": 0.5, "no": 0.3, "neutral": 0.2 + 5e-7}
    classifier = RemoteBqaClassifier(BQA_URL, transport=json_transport(payload))
    dist = classifier.classify("q", "c")
    assert dist.argmax_label() == "yes"


@pytest.mark.parametrize(
    "payload",
    [
        {"yes": 0.5, "no": 0.5, "neutral": 0.2},  # sums to 1.2
        {"yes": 0.5, "no": 0.5},  # neutral missing
        {"yes": "0.5", "no": 0.3, "neutral": 0.2},  # stringly typed
        {"yes": -0.1, "no": 0.9, "neutral": 0.2},  # negative mass
        {"yes": True, "no": 0.0, "neutral": 0.0},  # bool masquerading
    ],
)
def test_bqa_malformed_payloads(payload):
    classifier = RemoteBqaClassifier(BQA_URL, transport=json_transport(payload))
    with pytest.raises(BackendProtocol):
        classifier.classify("q", "c")


@pytest.mark.parametrize("status", [204, 404, 500, 503])
def test_non_200_is_protocol_error_without_retry(window, status):
    calls = []
    transport = json_transport({"irrelevant": 1}, status=status, requests_seen=calls)
    scorer = RemoteEqaScorer(EQA_URL, transport=transport, retries=3)
    with pytest.raises(BackendProtocol) as err:
        scorer.score("q", window)
    assert str(status) in str(err.value)
    assert len(calls) == 1  # schema/status errors are not transient, no retry


def test_non_json_body_is_protocol_error(window):
    transport = httpx.MockTransport(lambda request: httpx.Response(200, text="<html>oops</html>"))
    scorer = RemoteEqaScorer(EQA_URL, transport=transport)
    with pytest.raises(BackendProtocol):
        scorer.score("q", window)


def test_json_array_body_is_protocol_error(window):
    transport = httpx.MockTransport(lambda request: httpx.Response(200, json=[1, 2, 3]))
    scorer = RemoteEqaScorer(EQA_URL, transport=transport)
    with pytest.raises(BackendProtocol):
        scorer.score("q", window)


def test_unreachable_after_retries(window, no_backoff_sleep):
    attempts = []

    def handler(request):
        attempts.append(1)
        raise httpx.ConnectError("connection refused", request=request)

    scorer = RemoteEqaScorer(EQA_URL, transport=httpx.MockTransport(handler), retries=2)
    with pytest.raises(BackendUnreachable):
        scorer.score("q", window)
    assert len(attempts) == 3  # initial try plus two retries
    assert no_backoff_sleep == [0.1, 0.2]  # capped exponential backoff


def test_timeout_after_retries(no_backoff_sleep):
    attempts = []

    def handler(request):
        attempts.append(1)
        raise httpx.ReadTimeout("too slow", request=request)

    classifier = RemoteBqaClassifier(BQA_URL, transport=httpx.MockTransport(handler), retries=1)
    with pytest.raises(BackendTimeout):
        classifier.classify("q", "c")
    assert len(attempts) == 2
    assert no_backoff_sleep == [0.1]


def test_backoff_cap(no_backoff_sleep):
    def handler(request):
        raise httpx.ConnectError("down", request=request)

    classifier = RemoteBqaClassifier(BQA_URL, transport=httpx.MockTransport(handler), retries=6)
    with pytest.raises(BackendUnreachable):
        classifier.classify("q", "c")
    assert no_backoff_sleep == [0.1, 0.2, 0.4, 0.8, 1.0, 1.0]


def test_retry_recovers_from_flaky_transport(window):
    state = {"calls": 0}

    def handler(request):
        state["calls"] += 1
        if state["calls"] == 1:
            raise httpx.ConnectError("first try drops", request=request)
        return httpx.Response(200, json={"answerable": False, "score": 0.0})

    scorer = RemoteEqaScorer(EQA_URL, transport=httpx.MockTransport(handler), retries=2)
    answer = scorer.score("q", window)
    assert not answer.answerable
    assert state["calls"] == 2


def test_zero_retries_fails_fast(window, no_backoff_sleep):
    attempts = []

    def handler(request):
        attempts.append(1)
        raise httpx.ConnectError("down", request=request)

    scorer = RemoteEqaScorer(EQA_URL, transport=httpx.MockTransport(handler), retries=0)
    with pytest.raises(BackendUnreachable):
        scorer.score("q", window)
    assert len(attempts) == 1
    assert no_backoff_sleep == []
