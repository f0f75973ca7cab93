"""Per-language prompt templates: storage, selection, rendering, propagation."""

from polyeval.promptlib.templates import (
    MissingBinding,
    NoEnglishBaseline,
    PromptLibrary,
    PromptStrategy,
    PromptTemplate,
    UnknownPlaceholder,
    parse_placeholders,
    render_prompt,
    select_template,
)
from polyeval.promptlib.propagate import (
    HttpTranslationClient,
    IdentityTranslator,
    PlaceholderLost,
    SentinelDroppingTranslator,
    TargetUnsupported,
    TranslationClient,
    TranslatorUnavailable,
    propagate_template,
)

__all__ = [
    "PromptTemplate",
    "PromptStrategy",
    "PromptLibrary",
    "parse_placeholders",
    "select_template",
    "render_prompt",
    "MissingBinding",
    "UnknownPlaceholder",
    "NoEnglishBaseline",
    "propagate_template",
    "TranslationClient",
    "HttpTranslationClient",
    "IdentityTranslator",
    "SentinelDroppingTranslator",
    "TranslatorUnavailable",
    "PlaceholderLost",
    "TargetUnsupported",
]
