"""Export the current criteria as a shareable document.

Exports contain no ids and no timestamps, so two sessions that went
through the same choices produce byte-identical documents. Draft exports
(mid-loop) are allowed and flagged.
"""

from __future__ import annotations

import json
from typing import Any

from .errors import EngineError
from .model import DecisionSession, PhaseKind, Tier, normalize

_TIER_ORDER = {Tier.MUST_HAVE: 0, Tier.SHOULD_HAVE: 1, Tier.COULD_HAVE: 2, Tier.UNASSIGNED: 3}

_TIER_HEADINGS = (
    (Tier.MUST_HAVE, "Must-haves"),
    (Tier.SHOULD_HAVE, "Should-haves"),
    (Tier.COULD_HAVE, "Could-haves"),
)

EXPORT_FORMATS = ("json", "markdown")


def build_export(session: DecisionSession) -> dict[str, Any]:
    """The export as plain data; the json format is exactly this, canonical."""
    ordered = sorted(
        session.active_criteria(),
        key=lambda c: (_TIER_ORDER[c.tier], c.introduced_round, normalize(c.label)),
    )
    return {
        "decision_text": session.framing.decision_text,
        "ideal_qualities_text": session.framing.ideal_qualities_text,
        "finished": session.phase.kind == PhaseKind.FINISHED,
        "round": session.phase.round,
        "criteria": [
            {
                "label": c.label,
                "tier": c.tier.value,
                "origin": c.origin.value,
                "introduced_round": c.introduced_round,
                "selected_definitions": [d.text for d in c.selected_definitions()],
            }
            for c in ordered
        ],
    }


def export_criteria(session: DecisionSession, format: str = "json") -> str:
    if format == "json":
        return json.dumps(build_export(session), sort_keys=True, ensure_ascii=False, indent=2) + "\n"
    if format == "markdown":
        return _render_markdown(session)
    raise EngineError(
        "invalid-payload",
        f"unknown export format {format!r}; expected one of {EXPORT_FORMATS}",
        format=format,
    )


def _render_markdown(session: DecisionSession) -> str:
    data = build_export(session)
    lines = ["# Decision criteria", ""]
    lines.append(f"Decision: {data['decision_text'] or '(not described yet)'}")
    if data["ideal_qualities_text"]:
        lines.append(f"Ideal qualities: {data['ideal_qualities_text']}")
    status = (
        f"finished after round {data['round']}"
        if data["finished"]
        else f"draft (round {data['round']})"
    )
    lines.append(f"Status: {status}")

    by_tier: dict[str, list[dict[str, Any]]] = {}
    for item in data["criteria"]:
        by_tier.setdefault(item["tier"], []).append(item)

    for tier, heading in _TIER_HEADINGS:
        lines += ["", f"## {heading}", ""]
        for item in by_tier.get(tier.value, ()):
            lines.append(f"- {item['label']}")
            for text in item["selected_definitions"]:
                lines.append(f"  - {text}")
    unassigned = by_tier.get(Tier.UNASSIGNED.value, ())
    if unassigned:
        lines += ["", "## Unassigned", ""]
        for item in unassigned:
            lines.append(f"- {item['label']}")
            for text in item["selected_definitions"]:
                lines.append(f"  - {text}")
    return "\n".join(lines).rstrip("\n") + "\n"
