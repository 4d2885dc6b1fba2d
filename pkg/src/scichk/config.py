"""Engine configuration: flat key=value file with SCICHK_ env overrides."""

from __future__ import annotations

import os
from dataclasses import dataclass, fields

from .pipeline import DEFAULT_BALANCED_MARGIN
from .remote import DEFAULT_CONCURRENCY, DEFAULT_RETRIES, DEFAULT_TIMEOUT
from .windows import (
    DEFAULT_SENTENCES_PER_WINDOW,
    DEFAULT_TOKEN_BUDGET,
    DEFAULT_WINDOW_OVERLAP,
    WindowConfig,
)

ENV_PREFIX = "SCICHK_"

_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


class ConfigError(ValueError):
    """Bad key, bad value, or an inconsistent combination."""


@dataclass
class EngineConfig:
    corpus: str = ""
    window_t: int = DEFAULT_SENTENCES_PER_WINDOW
    window_p: int = DEFAULT_WINDOW_OVERLAP
    token_budget: int = DEFAULT_TOKEN_BUDGET
    balanced_margin: float = DEFAULT_BALANCED_MARGIN
    retrieval_limit: int = 100
    backend: str = "baseline"
    eqa_endpoint: str = ""
    bqa_endpoint: str = ""
    workers: int = os.cpu_count() or 1
    remote_concurrency: int = DEFAULT_CONCURRENCY
    remote_timeout: float = DEFAULT_TIMEOUT
    remote_retries: int = DEFAULT_RETRIES
    host: str = "127.0.0.1"
    port: int = 8000
    cors_origin: str = "*"
    allow_ingest: bool = False

    def __post_init__(self) -> None:
        self.window_config()  # validates t/p/budget together
        if self.backend not in ("baseline", "remote"):
            raise ConfigError(f"backend must be 'baseline' or 'remote', got {self.backend!r}")
        if self.backend == "remote" and not (self.eqa_endpoint and self.bqa_endpoint):
            raise ConfigError("remote backend requires eqa_endpoint and bqa_endpoint")
        if not 0.0 <= self.balanced_margin <= 1.0:
            raise ConfigError(f"balanced_margin must lie in [0, 1], got {self.balanced_margin}")
        if self.retrieval_limit < 1:
            raise ConfigError(f"retrieval_limit must be >= 1, got {self.retrieval_limit}")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")
        if not 1 <= self.port <= 65535:
            raise ConfigError(f"port must lie in [1, 65535], got {self.port}")

    def window_config(self) -> WindowConfig:
        try:
            return WindowConfig(
                sentences_per_window=self.window_t,
                overlap=self.window_p,
                token_budget=self.token_budget,
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc


def _parse_value(name: str, raw: str, target_type: type) -> object:
    raw = raw.strip()
    try:
        if target_type is bool:
            lowered = raw.lower()
            if lowered in _TRUE:
                return True
            if lowered in _FALSE:
                return False
            raise ValueError(f"not a boolean: {raw!r}")
        if target_type is int:
            return int(raw)
        if target_type is float:
            return float(raw)
        return raw
    except ValueError as exc:
        raise ConfigError(f"bad value for {name}: {exc}") from exc


def read_config_file(path: str) -> dict[str, str]:
    """Parse `key = value` lines; '#' starts a comment, blank lines ignored."""
    values: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{line_no}: expected key=value, got {line!r}")
            key, _, value = line.partition("=")
            values[key.strip().lower()] = value.strip()
    return values


def load_config(path: str | None = None, env: dict[str, str] | None = None) -> EngineConfig:
    """Build an EngineConfig from defaults, an optional file, and env vars.

    Precedence: SCICHK_* environment variables > file values > defaults.
    """
    env = env if env is not None else dict(os.environ)
    defaults = EngineConfig()
    types = {f.name: type(getattr(defaults, f.name)) for f in fields(EngineConfig)}
    raw: dict[str, str] = {}
    if path:
        for key, value in read_config_file(path).items():
            if key not in types:
                raise ConfigError(f"unknown config key {key!r}")
            raw[key] = value
    for key in types:
        env_name = ENV_PREFIX + key.upper()
        if env_name in env:
            raw[key] = env[env_name]
    kwargs = {key: _parse_value(key, value, types[key]) for key, value in raw.items()}
    return EngineConfig(**kwargs)
