"""Scripted oracle users driving the loop against the stub provider.

Each oracle holds a hidden preference profile: weighted keywords plus
tier thresholds. It keeps the highest-scoring cards, tiers criteria by
matched keyword weight, and selects definitions that mention a keyword.
Convergence is measured as keyword recovery: the fraction of hidden
keywords that surface in active criterion labels or selected
definitions. Because the profile is a keyword list, recovery is exactly
checkable without a second model; it is a proxy for, not a measure of,
semantic quality.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from typing import Any, Mapping

from . import session as ops
from .errors import EngineError
from .generation import (
    StubProvider,
    build_context,
    generate_definitions,
    generate_options,
    infer_criteria,
    plan_strategies,
)
from .model import (
    DecisionSession,
    OptionCard,
    OptionStatus,
    PhaseKind,
    ProviderKind,
    SessionConfig,
    Tier,
    normalize,
)

# Deliberately free of phrase-bank nouns so the oracle's keywords can only
# enter the loop through generated content, never through the framing.
NEUTRAL_DECISION_TEXT = "Choosing the next opportunity to commit to for the coming years."
NEUTRAL_IDEAL_TEXT = "Something that fits what I care about day to day."


@dataclass(frozen=True)
class PreferenceProfile:
    """Hidden ground truth: (keyword, weight) pairs plus tier cut points."""

    keywords: tuple[tuple[str, float], ...]
    tier_thresholds: tuple[float, float] = (0.3, 0.7)

    def __post_init__(self) -> None:
        for keyword, weight in self.keywords:
            if not keyword.strip():
                raise EngineError("invalid-config", "profile keywords must be nonempty")
            if not 0.0 <= weight <= 1.0:
                raise EngineError(
                    "invalid-config", f"keyword weight must be in [0,1], got {weight}"
                )
        low, high = self.tier_thresholds
        if not low < high:
            raise EngineError(
                "invalid-config", f"tier thresholds must be strictly ordered, got {low}, {high}"
            )
        # Keep reporting order stable: heaviest keyword first.
        ordered = tuple(sorted(self.keywords, key=lambda kw: (-kw[1], kw[0])))
        object.__setattr__(self, "keywords", ordered)

    def to_dict(self) -> dict[str, Any]:
        return {
            "keywords": [{"keyword": k, "weight": w} for k, w in self.keywords],
            "tier_thresholds": list(self.tier_thresholds),
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "PreferenceProfile":
        try:
            keywords = tuple(
                (str(item["keyword"]), float(item["weight"])) for item in data["keywords"]
            )
            thresholds = tuple(float(t) for t in data.get("tier_thresholds", (0.3, 0.7)))
        except (KeyError, TypeError, ValueError) as exc:
            raise EngineError("invalid-config", f"bad profile: {exc}") from exc
        if len(thresholds) != 2:
            raise EngineError("invalid-config", "tier_thresholds must be two numbers")
        return cls(keywords=keywords, tier_thresholds=(thresholds[0], thresholds[1]))


@dataclass(frozen=True)
class SimulationReport:
    rounds_run: int
    recovery: float
    trajectory: tuple[float, ...]
    seed: int
    config: SessionConfig

    def to_dict(self) -> dict[str, Any]:
        return {
            "rounds_run": self.rounds_run,
            "recovery": self.recovery,
            "trajectory": list(self.trajectory),
            "seed": self.seed,
            "config": self.config.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "SimulationReport":
        return cls(
            rounds_run=data["rounds_run"],
            recovery=data["recovery"],
            trajectory=tuple(data["trajectory"]),
            seed=data["seed"],
            config=SessionConfig.from_dict(data["config"]),
        )


def score_option(profile: PreferenceProfile, card: OptionCard) -> float:
    text = normalize(card.text)
    return sum(weight for keyword, weight in profile.keywords if normalize(keyword) in text)


def _keyword_recovery(profile: PreferenceProfile, session: DecisionSession) -> float:
    if not profile.keywords:
        return 0.0
    haystacks = []
    for criterion in session.active_criteria():
        haystacks.append(normalize(criterion.label))
        haystacks.extend(normalize(d.text) for d in criterion.selected_definitions())
    matched = sum(
        1 for keyword, _ in profile.keywords if any(normalize(keyword) in h for h in haystacks)
    )
    return matched / len(profile.keywords)


def _criterion_weight(profile: PreferenceProfile, criterion) -> float:
    texts = [normalize(criterion.label)]
    texts.extend(normalize(d.text) for d in criterion.selected_definitions())
    return sum(
        weight
        for keyword, weight in profile.keywords
        if any(normalize(keyword) in t for t in texts)
    )


def run_simulation(
    profile: PreferenceProfile,
    config: SessionConfig | None = None,
    rounds: int = 3,
    seed: int = 0,
    assertive: bool = False,
) -> SimulationReport:
    """Run one oracle session; deterministic for (profile, config, rounds, seed)."""
    if rounds < 1:
        raise EngineError("invalid-config", f"rounds must be >= 1, got {rounds}")
    config = replace(config or SessionConfig(), provider=ProviderKind.STUB, seed=seed)
    config.validate()
    provider = StubProvider(seed)

    session = ops.create_session(config, session_id="simulation")
    session = ops.submit_framing(session, NEUTRAL_DECISION_TEXT, NEUTRAL_IDEAL_TEXT)

    low, high = profile.tier_thresholds
    trajectory: list[float] = []
    for round_number in range(1, rounds + 1):
        # Options arrive; keep the top keep_target by hidden score.
        context = build_context(session)
        cards = generate_options(provider, context, plan_strategies(context))
        session = ops.install_options(session, cards)
        ranked = sorted(cards, key=lambda c: (-score_option(profile, c), c.id))
        for i, card in enumerate(ranked):
            status = OptionStatus.KEPT if i < config.keep_target else OptionStatus.REMOVED
            session = ops.toggle_option(session, card.id, status)
        session = ops.confirm_narrowing(session)

        # Criteria are inferred from the keeps; the oracle only tiers them.
        inferred = infer_criteria(provider, build_context(session))
        session = ops.install_criteria(session, inferred)
        if assertive:
            keyword = (
                profile.keywords[(round_number - 1) % len(profile.keywords)][0]
                if profile.keywords
                else f"round {round_number} instinct"
            )
            session = ops.add_criterion(session, f"{keyword} instinct {round_number}")
        for criterion in session.active_criteria():
            weight = _criterion_weight(profile, criterion)
            tier = (
                Tier.MUST_HAVE if weight >= high else Tier.SHOULD_HAVE if weight >= low else Tier.COULD_HAVE
            )
            if criterion.tier != tier:
                session = ops.set_tier(session, criterion.id, tier)
        session = ops.confirm_prioritization(session)

        # Definitions for criteria that lack them; select keyword matches.
        freshly_defined: list[str] = []
        while session.phase.kind == PhaseKind.AWAITING_DEFINITIONS:
            criterion = next(c for c in session.active_criteria() if not c.definitions)
            defs = generate_definitions(provider, build_context(session), criterion)
            session = ops.install_definitions(session, criterion.id, defs)
            freshly_defined.append(criterion.id)
        for criterion_id in freshly_defined:
            criterion = session.find_criterion(criterion_id)
            assert criterion is not None
            picks = [
                d.id
                for d in criterion.definitions
                if any(normalize(k) in normalize(d.text) for k, _ in profile.keywords)
            ]
            if picks:
                session = ops.select_definitions(session, criterion_id, picks)

        trajectory.append(_keyword_recovery(profile, session))
        session = ops.confirm_redefinition(session, finish=round_number == rounds)

    return SimulationReport(
        rounds_run=rounds,
        recovery=trajectory[-1],
        trajectory=tuple(trajectory),
        seed=seed,
        config=config,
    )


def load_profile(path: str) -> PreferenceProfile:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as exc:
        raise EngineError("io-error", f"cannot read profile {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise EngineError("invalid-config", f"profile {path} is not valid JSON: {exc}") from exc
    return PreferenceProfile.from_dict(data)
