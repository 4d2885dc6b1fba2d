"""scichk: extractive-boolean question answering over scientific abstracts."""

__version__ = "0.1.0"

from .claims import ClaimQuery, ClaimVerb, parse_claim, render_claim
from .corpus import Corpus, Document, build_document, load_jsonl
from .pipeline import (
    ArticleVerdict,
    ConsensusLabel,
    ConsensusReport,
    aggregate,
    check_article,
    check_claim,
    merge_highlights,
    report_to_json,
)
from .scoring import (
    BooleanDistribution,
    LexicalEqaScorer,
    RuleBqaClassifier,
    SpanProbabilities,
    decode_span,
)
from .windows import Highlight, Window, WindowConfig, WindowSpanAnswer, make_windows

__all__ = [
    "ArticleVerdict",
    "BooleanDistribution",
    "ClaimQuery",
    "ClaimVerb",
    "ConsensusLabel",
    "ConsensusReport",
    "Corpus",
    "Document",
    "Highlight",
    "LexicalEqaScorer",
    "RuleBqaClassifier",
    "SpanProbabilities",
    "Window",
    "WindowConfig",
    "WindowSpanAnswer",
    "aggregate",
    "build_document",
    "check_article",
    "check_claim",
    "decode_span",
    "load_jsonl",
    "make_windows",
    "merge_highlights",
    "parse_claim",
    "render_claim",
    "report_to_json",
    "__version__",
]
