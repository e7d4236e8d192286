"""Shared error vocabulary.

Every rejection anywhere in the engine raises :class:`EngineError` with a
stable machine-readable ``code``. The HTTP layer passes codes through
verbatim, so clients and tests share one vocabulary.
"""

from __future__ import annotations

from typing import Any

# Complete set of error codes the engine can emit. Kept sorted so the list
# diffs cleanly and downstream copies (e.g. a UI message map) can be checked
# for exhaustiveness.
ERROR_CODES: tuple[str, ...] = (
    "bad-branch-point",
    "corrupt-log",
    "duplicate-definition",
    "duplicate-label",
    "empty-decision-text",
    "empty-text",
    "invalid-config",
    "invalid-payload",
    "io-error",
    "malformed-response",
    "no-active-criteria",
    "provider-failure",
    "seq-gap",
    "too-many-criteria",
    "unassigned-tiers",
    "unknown-criterion",
    "unknown-definition",
    "unknown-option",
    "unknown-session",
    "unsupported-version",
    "wrong-count",
    "wrong-keep-count",
    "wrong-phase",
)


class EngineError(Exception):
    """An operation rejected by the engine.

    Attributes:
        code: one of :data:`ERROR_CODES`.
        details: structured context (e.g. ``actual``/``target`` for
            ``wrong-keep-count``), safe to serialize into an API body.
    """

    def __init__(self, code: str, message: str, **details: Any):
        if code not in ERROR_CODES:
            raise ValueError(f"unknown error code: {code}")
        super().__init__(message)
        self.code = code
        self.message = message
        self.details = details

    def to_dict(self) -> dict[str, Any]:
        return {"code": self.code, "message": self.message, **self.details}


class GenerationError(EngineError):
    """Raised when the provider layer cannot deliver usable content."""


def wrong_phase(expected: str, actual: str) -> EngineError:
    return EngineError(
        "wrong-phase",
        f"command requires phase {expected}, session is in {actual}",
        expected=expected,
        actual=actual,
    )
