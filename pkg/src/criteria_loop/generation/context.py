"""Projection of a session into the inputs generation needs.

The context is what closes the feedback loop: kept and removed cards,
current criteria with their chosen definitions, and previously rejected
definitions all flow back into the next batch of provocations. It is a
pure function of the session and carries no provider-specific syntax.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Any, Mapping

from ..model import (
    DecisionFraming,
    DecisionSession,
    DefinitionFlavor,
    OptionStatus,
    Strategy,
    Tier,
)


@dataclass(frozen=True)
class OptionSignal:
    """A judged card from an earlier narrowing: text plus how it provoked."""

    round: int
    text: str
    strategy: Strategy

    def to_dict(self) -> dict[str, Any]:
        return {"round": self.round, "text": self.text, "strategy": self.strategy.value}


@dataclass(frozen=True)
class CriterionSignal:
    label: str
    tier: Tier
    introduced_round: int
    selected_definitions: tuple[str, ...] = ()

    def to_dict(self) -> dict[str, Any]:
        return {
            "label": self.label,
            "tier": self.tier.value,
            "introduced_round": self.introduced_round,
            "selected_definitions": list(self.selected_definitions),
        }


@dataclass(frozen=True)
class GenerationContext:
    framing: DecisionFraming
    round: int
    kept_options: tuple[OptionSignal, ...] = ()
    removed_options: tuple[OptionSignal, ...] = ()
    active_criteria: tuple[CriterionSignal, ...] = ()
    removed_criteria: tuple[str, ...] = ()
    # label -> definition texts offered earlier and left unselected
    prior_definition_rejections: Mapping[str, tuple[str, ...]] = field(default_factory=dict)
    options_per_round: int = 8
    keep_target: int = 3
    max_inferred_criteria: int = 6
    definitions_per_criterion: int = 8
    seed: int = 0

    def to_dict(self) -> dict[str, Any]:
        return {
            "framing": self.framing.to_dict(),
            "round": self.round,
            "kept_options": [o.to_dict() for o in self.kept_options],
            "removed_options": [o.to_dict() for o in self.removed_options],
            "active_criteria": [c.to_dict() for c in self.active_criteria],
            "removed_criteria": list(self.removed_criteria),
            "prior_definition_rejections": {
                k: list(v) for k, v in sorted(self.prior_definition_rejections.items())
            },
            "options_per_round": self.options_per_round,
            "keep_target": self.keep_target,
            "max_inferred_criteria": self.max_inferred_criteria,
            "definitions_per_criterion": self.definitions_per_criterion,
            "seed": self.seed,
        }

    def fingerprint(self) -> str:
        """Stable digest of the context; seeds deterministic planning."""
        blob = json.dumps(self.to_dict(), sort_keys=True, ensure_ascii=False)
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def build_context(session: DecisionSession) -> GenerationContext:
    kept: list[OptionSignal] = []
    removed: list[OptionSignal] = []
    for rnd in sorted(session.options):
        for card in session.options[rnd]:
            if card.status == OptionStatus.KEPT:
                kept.append(OptionSignal(rnd, card.text, card.strategy))
            elif card.status == OptionStatus.REMOVED:
                removed.append(OptionSignal(rnd, card.text, card.strategy))

    active = tuple(
        CriterionSignal(
            label=c.label,
            tier=c.tier,
            introduced_round=c.introduced_round,
            selected_definitions=tuple(d.text for d in c.selected_definitions()),
        )
        for c in session.active_criteria()
    )
    removed_labels = tuple(c.label for c in session.criteria if not c.active)

    # Definitions offered in a completed redefinition and not picked count as
    # rejections; a criterion introduced this round has not been through one.
    rejections: dict[str, tuple[str, ...]] = {}
    for c in session.active_criteria():
        if c.introduced_round >= session.phase.round:
            continue
        unpicked = tuple(
            d.text
            for d in c.definitions
            if not d.selected and d.flavor != DefinitionFlavor.USER_AUTHORED
        )
        if unpicked:
            rejections[c.label] = unpicked

    return GenerationContext(
        framing=session.framing,
        round=session.phase.round,
        kept_options=tuple(kept),
        removed_options=tuple(removed),
        active_criteria=active,
        removed_criteria=removed_labels,
        prior_definition_rejections=rejections,
        options_per_round=session.config.options_per_round,
        keep_target=session.config.keep_target,
        max_inferred_criteria=session.config.max_inferred_criteria,
        definitions_per_criterion=session.config.definitions_per_criterion,
        seed=session.config.seed,
    )
