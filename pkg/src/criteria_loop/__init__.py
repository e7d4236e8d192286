"""Iterative prototyping of decision criteria.

Instead of asking someone to state their criteria up front, the engine
runs a loop: generate concrete option provocations, let the user keep a
few, infer the criteria their keeps imply, have them prioritize into
must/should/could tiers, then pin down what each criterion means by
choosing among generated definitions. Each round feeds the next. The
whole session is an append-only event log, so any state can be replayed,
branched, or summarized.
"""

from .errors import ERROR_CODES, EngineError, GenerationError
from .events import EventKind, Lineage, SessionEvent
from .model import (
    Criterion,
    CriterionOrigin,
    DecisionFraming,
    DecisionSession,
    Definition,
    DefinitionFlavor,
    OptionCard,
    OptionOrigin,
    OptionStatus,
    Phase,
    PhaseKind,
    ProviderKind,
    SessionConfig,
    Strategy,
    Tier,
)

__all__ = [
    "ERROR_CODES",
    "Criterion",
    "CriterionOrigin",
    "DecisionFraming",
    "DecisionSession",
    "Definition",
    "DefinitionFlavor",
    "EngineError",
    "EventKind",
    "GenerationError",
    "Lineage",
    "OptionCard",
    "OptionOrigin",
    "OptionStatus",
    "Phase",
    "PhaseKind",
    "ProviderKind",
    "SessionConfig",
    "SessionEvent",
    "Strategy",
    "Tier",
]

__version__ = "0.1.0"
