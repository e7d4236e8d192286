"""Generation tasks: render a prompt, call the provider, parse, retry.

Each task asks for a numbered plain-text list (robust to parse even when
a model rambles), deduplicates under normalization, and re-requests any
shortfall. The budget is two re-requests on top of the initial call;
after that the failure surfaces as malformed-response (unusable text) or
provider-failure (transport), never as a silently short round.
"""

from __future__ import annotations

import hashlib
import re
from functools import lru_cache
from importlib import resources
from string import Template
from typing import Callable, Sequence

from ..errors import EngineError, GenerationError
from ..model import (
    Criterion,
    CriterionOrigin,
    Definition,
    DefinitionFlavor,
    OptionCard,
    OptionOrigin,
    OptionStatus,
    Tier,
    normalize,
)
from .context import GenerationContext
from .planning import StrategyPlan
from .provider import Provider, ProviderRequest, TaskKind

MAX_ATTEMPTS = 3  # one initial request plus two re-requests

_NUMBERED_RE = re.compile(r"^\s*\d{1,9}\s*[.):\-]\s+(.*?)\s*$")
_BULLET_RE = re.compile(r"^\s*[-*•]\s+(.*?)\s*$")


def parse_numbered_list(text: str) -> list[str]:
    """Extract list items from raw provider text. Never raises.

    Numbered lines win; if there are none at all, bulleted lines are
    accepted as a fallback. Anything else is ignored.
    """
    numbered: list[str] = []
    bulleted: list[str] = []
    for line in text.splitlines():
        match = _NUMBERED_RE.match(line)
        if match:
            if match.group(1):
                numbered.append(match.group(1))
            continue
        match = _BULLET_RE.match(line)
        if match and match.group(1):
            bulleted.append(match.group(1))
    return numbered if numbered else bulleted


# ---------------------------------------------------------------------------
# Prompt rendering
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _template(name: str) -> Template:
    text = resources.files(__package__).joinpath("prompts", name).read_text(encoding="utf-8")
    return Template(text)


def _block(lines: Sequence[str]) -> str:
    return "\n".join(f"- {line}" for line in lines) if lines else "- none yet"


def _option_lines(signals) -> list[str]:
    return [f"(round {s.round}, {s.strategy.value}) {s.text}" for s in signals]


def _criteria_lines(context: GenerationContext) -> list[str]:
    lines = []
    for c in context.active_criteria:
        line = f"{c.label} [{c.tier.value}]"
        if c.selected_definitions:
            line += " = " + "; ".join(c.selected_definitions)
        lines.append(line)
    return lines


def _rejection_lines(context: GenerationContext) -> list[str]:
    return [
        f"{label}: {text}"
        for label, texts in sorted(context.prior_definition_rejections.items())
        for text in texts
    ]


def _plan_lines(plan: StrategyPlan) -> list[str]:
    lines = []
    for i, slot in enumerate(plan.slots, start=1):
        line = f"{i}. strategy={slot.strategy.value}"
        if slot.target_labels:
            line += " targets=" + " + ".join(f"'{t}'" for t in slot.target_labels)
        lines.append(line)
    return lines


def render_options_prompt(context: GenerationContext, plan: StrategyPlan) -> str:
    return _template("options.txt").substitute(
        decision_text=context.framing.decision_text,
        ideal_qualities_text=context.framing.ideal_qualities_text or "(not stated)",
        round=context.round,
        kept_block=_block(_option_lines(context.kept_options)),
        removed_block=_block(_option_lines(context.removed_options)),
        criteria_block=_block(_criteria_lines(context)),
        removed_criteria_block=_block(list(context.removed_criteria)),
        rejections_block=_block(_rejection_lines(context)),
        plan_block="\n".join(_plan_lines(plan)),
        count=context.options_per_round,
    )


def render_criteria_prompt(context: GenerationContext) -> str:
    return _template("criteria.txt").substitute(
        decision_text=context.framing.decision_text,
        ideal_qualities_text=context.framing.ideal_qualities_text or "(not stated)",
        round=context.round,
        kept_block=_block(_option_lines(context.kept_options)),
        removed_block=_block(_option_lines(context.removed_options)),
        existing_block=_block(_criteria_lines(context)),
        removed_criteria_block=_block(list(context.removed_criteria)),
        count=context.max_inferred_criteria,
    )


def render_definitions_prompt(context: GenerationContext, criterion: Criterion) -> str:
    count = context.definitions_per_criterion
    common_count = (count + 1) // 2
    selected = [d.text for d in criterion.selected_definitions()]
    rejected = list(context.prior_definition_rejections.get(criterion.label, ()))
    return _template("definitions.txt").substitute(
        decision_text=context.framing.decision_text,
        ideal_qualities_text=context.framing.ideal_qualities_text or "(not stated)",
        round=context.round,
        label=criterion.label,
        tier=criterion.tier.value,
        selected_block=_block(selected),
        rejected_block=_block(rejected),
        count=count,
        common_count=common_count,
        provocative_count=count - common_count,
    )


# ---------------------------------------------------------------------------
# Collection with retry
# ---------------------------------------------------------------------------


def _collect(
    provider: Provider,
    kind: TaskKind,
    base_instructions: str,
    expected: int,
    exact: bool,
) -> list[str]:
    """Accumulate deduplicated items across up to MAX_ATTEMPTS requests."""
    collected: list[str] = []
    seen: set[str] = set()
    failure: GenerationError | None = None
    for _ in range(MAX_ATTEMPTS):
        instructions = base_instructions
        if collected:
            instructions += "\n\nAlready provided (write different ones):\n" + "\n".join(
                f"- {item}" for item in collected
            )
        request = ProviderRequest(kind=kind, instructions=instructions, expected_count=expected)
        try:
            response = provider.complete(request)
        except GenerationError as exc:
            failure = exc
            continue
        for item in parse_numbered_list(response.text):
            norm = normalize(item)
            if norm and norm not in seen:
                seen.add(norm)
                collected.append(item.strip())
        if exact and len(collected) >= expected:
            return collected[:expected]
        if not exact and collected:
            return collected[:expected]
        failure = GenerationError(
            "malformed-response",
            f"{kind.value} request yielded {len(collected)} usable items, needed "
            f"{'exactly' if exact else 'at least 1 of up to'} {expected}",
            collected=len(collected),
            expected=expected,
        )
    assert failure is not None
    raise failure


def _content_id(*parts: object) -> str:
    blob = ":".join(str(p) for p in parts)
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:12]


# ---------------------------------------------------------------------------
# Public tasks
# ---------------------------------------------------------------------------


def generate_options(
    provider: Provider, context: GenerationContext, plan: StrategyPlan
) -> list[OptionCard]:
    if plan.round != context.round or len(plan.slots) != context.options_per_round:
        raise EngineError(
            "invalid-payload",
            f"plan does not fit context: round {plan.round} vs {context.round}, "
            f"{len(plan.slots)} slots vs {context.options_per_round}",
        )
    texts = _collect(
        provider,
        TaskKind.OPTIONS,
        render_options_prompt(context, plan),
        expected=context.options_per_round,
        exact=True,
    )
    return [
        OptionCard(
            id=_content_id("option", context.round, i, text),
            text=text,
            origin=OptionOrigin.GENERATED,
            round=context.round,
            status=OptionStatus.UNDECIDED,
            strategy=plan.slots[i].strategy,
        )
        for i, text in enumerate(texts)
    ]


def infer_criteria(provider: Provider, context: GenerationContext) -> list[Criterion]:
    labels = _collect(
        provider,
        TaskKind.CRITERIA,
        render_criteria_prompt(context),
        expected=context.max_inferred_criteria,
        exact=False,
    )
    blocked = {normalize(c.label) for c in context.active_criteria}
    blocked |= {normalize(label) for label in context.removed_criteria}
    fresh = [label for label in labels if normalize(label) not in blocked]
    return [
        Criterion(
            id=_content_id("criterion", context.round, i, label),
            label=label,
            origin=CriterionOrigin.INFERRED,
            tier=Tier.UNASSIGNED,
            introduced_round=context.round,
        )
        for i, label in enumerate(fresh)
    ]


def generate_definitions(
    provider: Provider, context: GenerationContext, criterion: Criterion
) -> list[Definition]:
    count = context.definitions_per_criterion
    texts = _collect(
        provider,
        TaskKind.DEFINITIONS,
        render_definitions_prompt(context, criterion),
        expected=count,
        exact=True,
    )
    common_count = (count + 1) // 2
    return [
        Definition(
            id=_content_id("definition", criterion.id, i, text),
            text=text,
            flavor=DefinitionFlavor.COMMON if i < common_count else DefinitionFlavor.PROVOCATIVE,
            selected=False,
        )
        for i, text in enumerate(texts)
    ]
