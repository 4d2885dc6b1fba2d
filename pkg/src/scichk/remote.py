"""HTTP client for remote extractive/boolean scorer backends.

Wire protocol (JSON over POST):

  /v1/eqa  {"question": str, "tokens": [str], "window_index": int, "doc_id": str}
        -> {"answerable": bool, "start": int, "end": int, "score": float}
           (start/end present exactly when answerable; word-token indexes)

  /v1/bqa  {"question": str, "context": str}
        -> {"yes": float, "no": float, "neutral": float}   (sums to 1 +/- 1e-6)

Any transport failure is retried; any non-200 status or schema violation is a
typed error and never a silently partial result.
"""

from __future__ import annotations

import time

import httpx

from .scoring import BooleanDistribution
from .windows import Window, WindowSpanAnswer

DEFAULT_TIMEOUT = 30.0
DEFAULT_RETRIES = 2
DEFAULT_CONCURRENCY = 8


class BackendError(RuntimeError):
    """Base class for remote scorer failures."""


class BackendUnreachable(BackendError):
    """Transport-level failure that survived all retries."""


class BackendTimeout(BackendError):
    """The backend did not answer within the configured timeout."""


class BackendProtocol(BackendError):
    """Non-200 response or a payload violating the wire schema."""


class _RemoteBase:
    """Shared POST/retry/validation plumbing for both remote scorers."""

    def __init__(
        self,
        endpoint: str,
        timeout: float = DEFAULT_TIMEOUT,
        retries: int = DEFAULT_RETRIES,
        concurrency: int = DEFAULT_CONCURRENCY,
        transport: httpx.BaseTransport | None = None,
    ) -> None:
        self.endpoint = endpoint
        self.retries = retries
        self._client = httpx.Client(
            timeout=timeout,
            limits=httpx.Limits(max_connections=concurrency),
            transport=transport,
        )

    def close(self) -> None:
        self._client.close()

    def _post(self, payload: dict) -> dict:
        last_exc: Exception | None = None
        for attempt in range(self.retries + 1):
            try:
                response = self._client.post(self.endpoint, json=payload)
            except httpx.TimeoutException as exc:
                last_exc = BackendTimeout(f"{self.endpoint}: {exc}")
            except httpx.TransportError as exc:
                last_exc = BackendUnreachable(f"{self.endpoint}: {exc}")
            else:
                if response.status_code != 200:
                    raise BackendProtocol(
                        f"{self.endpoint}: HTTP {response.status_code}: {response.text[:200]}"
                    )
                try:
                    body = response.json()
                except ValueError as exc:
                    raise BackendProtocol(f"{self.endpoint}: non-JSON body ({exc})") from exc
                if not isinstance(body, dict):
                    raise BackendProtocol(f"{self.endpoint}: expected JSON object, got {body!r}")
                return body
            if attempt < self.retries:
                time.sleep(min(0.1 * 2**attempt, 1.0))
        assert last_exc is not None
        raise last_exc


class RemoteEqaScorer(_RemoteBase):
    """EqaScorer over the /v1/eqa wire protocol."""

    def score(self, question: str, window: Window) -> WindowSpanAnswer:
        tokens = [tok.text for tok in window.token_slice]
        body = self._post(
            {
                "question": question,
                "tokens": tokens,
                "window_index": window.index,
                "doc_id": window.doc_id,
            }
        )
        answerable = body.get("answerable")
        score = body.get("score")
        if not isinstance(answerable, bool) or not isinstance(score, (int, float)) or isinstance(score, bool):
            raise BackendProtocol(f"{self.endpoint}: malformed eqa response {body!r}")
        if not answerable:
            return WindowSpanAnswer(window_index=window.index, answerable=False, score=float(score))
        start, end = body.get("start"), body.get("end")
        if not isinstance(start, int) or not isinstance(end, int) or isinstance(start, bool) or isinstance(end, bool):
            raise BackendProtocol(f"{self.endpoint}: answerable eqa response without span {body!r}")
        if not 0 <= start <= end < len(tokens):
            raise BackendProtocol(
                f"{self.endpoint}: span ({start}, {end}) outside window of {len(tokens)} tokens"
            )
        return WindowSpanAnswer(
            window_index=window.index,
            answerable=True,
            score=float(score),
            local_start=start,
            local_end=end,
        )


class RemoteBqaClassifier(_RemoteBase):
    """BqaClassifier over the /v1/bqa wire protocol."""

    def classify(self, question: str, context: str) -> BooleanDistribution:
        body = self._post({"question": question, "context": context})
        values = []
        for key in ("yes", "no", "neutral"):
            value = body.get(key)
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise BackendProtocol(f"{self.endpoint}: malformed bqa response {body!r}")
            values.append(float(value))
        try:
            return BooleanDistribution(yes=values[0], no=values[1], neutral=values[2])
        except ValueError as exc:
            raise BackendProtocol(f"{self.endpoint}: {exc}: {body!r}") from exc
