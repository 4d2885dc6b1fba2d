"""Parsing and rendering of the fixed claim template "Does X <verb> Y?"."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field


class ClaimVerb(enum.Enum):
    """The four causal relations the engine understands."""

    PREVENT = "prevent"
    CURE = "cure"
    CAUSE = "cause"
    INCREASE = "increase"

    @classmethod
    def from_word(cls, word: str) -> "ClaimVerb | None":
        try:
            return cls(word.lower())
        except ValueError:
            return None


VERB_WORDS = frozenset(v.value for v in ClaimVerb)


class ClaimParseError(ValueError):
    """Base class for template violations."""


class NotAQuestion(ClaimParseError):
    """Input does not start with 'Does'."""


class NoVerbMatch(ClaimParseError):
    """None of the supported verbs occurs in the input."""


class EmptySlot(ClaimParseError):
    """Agent or disease slot is empty."""


def render_claim(agent: str, verb: ClaimVerb, disease: str) -> str:
    """Canonical question text for the given slots."""
    return f"Does {agent} {verb.value} {disease}?"


@dataclass(frozen=True)
class ClaimQuery:
    """A parsed claim. ``question_text`` is always the canonical rendering."""

    agent: str
    verb: ClaimVerb
    disease: str
    question_text: str = field(default="")

    def __post_init__(self) -> None:
        if not self.agent.strip() or not self.disease.strip():
            raise EmptySlot("agent and disease must be nonempty")
        if self.agent != self.agent.strip() or self.disease != self.disease.strip():
            raise ValueError("agent and disease must not carry surrounding whitespace")
        canonical = render_claim(self.agent, self.verb, self.disease)
        if not self.question_text:
            object.__setattr__(self, "question_text", canonical)
        elif self.question_text != canonical:
            raise ValueError(f"question_text {self.question_text!r} != {canonical!r}")


def parse_claim(text: str) -> ClaimQuery:
    """Parse free text of the shape "Does <agent> <verb> <disease> ?".

    Matching is case-insensitive and whitespace is canonicalized to single
    spaces; a trailing question mark is optional.  The split happens at the
    first token that is one of the supported verbs.

    Raises NotAQuestion, NoVerbMatch or EmptySlot.
    """
    stripped = text.strip()
    if stripped.endswith("?"):
        stripped = stripped[:-1].rstrip()
    tokens = stripped.split()
    if not tokens or tokens[0].lower() != "does":
        raise NotAQuestion(f"expected a 'Does ...' question, got {text!r}")
    rest = tokens[1:]
    verb_pos = next((i for i, tok in enumerate(rest) if tok.lower() in VERB_WORDS), None)
    if verb_pos is None:
        raise NoVerbMatch(f"no supported verb ({', '.join(sorted(VERB_WORDS))}) in {text!r}")
    agent = " ".join(rest[:verb_pos])
    disease = " ".join(rest[verb_pos + 1 :])
    if not agent or not disease:
        raise EmptySlot(f"empty {'agent' if not agent else 'disease'} slot in {text!r}")
    verb = ClaimVerb.from_word(rest[verb_pos])
    assert verb is not None
    return ClaimQuery(agent=agent, verb=verb, disease=disease)
