"""Per-round strategy planning for option provocations.

Round 1 probes the framing itself: every card tests an implicit
assumption. From round 2 the plan guarantees at least one card that leans
into the criteria, one that pushes against them, and one edge case that
stresses a pair of criteria pulling in different directions. Targets are
spread so each card hits a distinct criterion (or pair) until the pool is
exhausted, then cycle.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations, cycle
from typing import Any, Iterator

from ..model import Strategy, Tier, normalize
from .context import CriterionSignal, GenerationContext

_TIER_RANK = {Tier.MUST_HAVE: 0, Tier.SHOULD_HAVE: 1, Tier.COULD_HAVE: 2, Tier.UNASSIGNED: 3}


@dataclass(frozen=True)
class StrategySlot:
    strategy: Strategy
    # Empty for assumption_test; one label for align/challenge; the pair
    # being crossed for edge_case.
    target_labels: tuple[str, ...] = ()

    def to_dict(self) -> dict[str, Any]:
        return {"strategy": self.strategy.value, "target_labels": list(self.target_labels)}


@dataclass(frozen=True)
class StrategyPlan:
    round: int
    slots: tuple[StrategySlot, ...]

    def strategies(self) -> tuple[Strategy, ...]:
        return tuple(slot.strategy for slot in self.slots)

    def to_dict(self) -> dict[str, Any]:
        return {"round": self.round, "slots": [s.to_dict() for s in self.slots]}


def _ordered_criteria(context: GenerationContext) -> list[CriterionSignal]:
    return sorted(
        context.active_criteria,
        key=lambda c: (_TIER_RANK[c.tier], c.introduced_round, normalize(c.label)),
    )


def _edge_pairs(ordered: list[CriterionSignal]) -> list[tuple[str, ...]]:
    """Criterion pairs for edge cases, widest tier gap first."""
    if len(ordered) < 2:
        return [(ordered[0].label,)] if ordered else []
    scored = []
    for i, j in combinations(range(len(ordered)), 2):
        gap = abs(_TIER_RANK[ordered[i].tier] - _TIER_RANK[ordered[j].tier])
        scored.append((-gap, i, j))
    scored.sort()
    return [(ordered[i].label, ordered[j].label) for _, i, j in scored]


def plan_strategies(context: GenerationContext) -> StrategyPlan:
    """Deterministic plan for (context, seed); seed travels in the context."""
    count = context.options_per_round
    if context.round == 1:
        slots = tuple(StrategySlot(Strategy.ASSUMPTION_TEST) for _ in range(count))
        return StrategyPlan(round=1, slots=slots)

    rng = random.Random(int(context.fingerprint()[:16], 16))
    mix = [Strategy.ALIGN, Strategy.CHALLENGE, Strategy.EDGE_CASE]
    strategies = list(mix)
    rotation = rng.randrange(3)
    fill = cycle(mix[rotation:] + mix[:rotation])
    while len(strategies) < count:
        strategies.append(next(fill))
    rng.shuffle(strategies)

    ordered = _ordered_criteria(context)
    singles: Iterator[tuple[str, ...]] = cycle([(c.label,) for c in ordered] or [()])
    pairs: Iterator[tuple[str, ...]] = cycle(_edge_pairs(ordered) or [()])

    slots = tuple(
        StrategySlot(s, next(pairs) if s == Strategy.EDGE_CASE else next(singles))
        for s in strategies
    )
    return StrategyPlan(round=context.round, slots=slots)
