"""Phrase bank backing the deterministic stub provider.

The stub fills templates with nouns drawn from a fixed pool, keyed by
tokens it lifts from the request text. Keeping the pool and the templates
in one module makes the token-propagation behavior easy to audit: a noun
can only reach a criterion label if it appears here or in a kept card.
"""

from __future__ import annotations

import re
import string

# Noun pool the stub writes option cards about. The simulation harness
# defines its hidden preference keywords over this same pool.
DOMAIN_NOUNS: tuple[str, ...] = (
    "autonomy",
    "benefits",
    "budget",
    "collaboration",
    "communication",
    "community",
    "craftsmanship",
    "creativity",
    "culture",
    "curiosity",
    "equity",
    "flexibility",
    "growth",
    "impact",
    "leadership",
    "learning",
    "location",
    "mentorship",
    "novelty",
    "ownership",
    "portfolio",
    "programming",
    "quality",
    "reliability",
    "reputation",
    "research",
    "rigor",
    "safety",
    "salary",
    "scale",
    "speed",
    "stability",
    "storytelling",
    "sustainability",
    "teaching",
    "travel",
)

CRITERION_SUFFIXES: tuple[str, ...] = (
    "depth",
    "fit",
    "alignment",
    "potential",
    "track record",
    "mindset",
    "readiness",
    "strength",
)

# $a / $b are nouns; $t1 / $t2 are targeted criterion labels.
OPTION_TEMPLATES: dict[str, tuple[str, ...]] = {
    "assumption_test": (
        "Pick the path that doubles down on $a even if it means giving up most of the $b.",
        "Choose whatever scores highest on $a, trusting that $b will sort itself out later.",
        "Favor an option with unproven $a over one with a safe record of $b.",
        "Commit early to the option promising $a before anyone can verify its $b.",
        "Take the option everyone praises for $a despite quiet doubts about its $b.",
        "Bet on raw $a now and plan to buy back $b once things settle.",
    ),
    "align": (
        "Take the option that most embodies $t1, backed up by solid $a.",
        "Go all in on the choice built around $t1, letting $a carry the rest.",
        "Select the option whose whole story is $t1, with $a as a bonus.",
    ),
    "challenge": (
        "Deliberately pick an option weak on $t1 but rich in $a, to test whether $t1 really matters.",
        "Accept an option that fails $t1 outright whenever its $a is exceptional.",
        "Drop $t1 for one round and rank everything by $a instead.",
    ),
    "edge_case": (
        "Face an option that satisfies $t1 brilliantly while actively undermining $t2.",
        "Weigh an option where $t1 and $t2 pull in opposite directions and only one can win.",
        "Consider an option that trades every bit of $t2 for a spectacular showing of $t1.",
    ),
}

# $head is the criterion label's leading token; $noun varies per fill.
DEFINITION_COMMON_TEMPLATES: tuple[str, ...] = (
    "demonstrated $head in past work",
    "a consistent record of $head that others can verify",
    "breadth of $head across different settings, including $noun",
    "formal training that builds $head step by step",
    "$head recognized by peers who have seen it up close",
    "day-to-day habits of $head, visible even around $noun",
)

DEFINITION_PROVOCATIVE_TEMPLATES: tuple[str, ...] = (
    "$head only when it survives pressure from $noun",
    "$head measured by what was sacrificed to keep it",
    "the willingness to trade $noun away to protect $head",
    "$head that shows up precisely when $noun runs out",
    "$head defined by outsiders rather than the person themselves",
    "raw $noun mistaken for $head, included to argue about",
)

_WORD_RE = re.compile(r"[a-z][a-z\-]{3,}")

# Scaffold vocabulary that must never be mistaken for content: generic
# English plus every non-placeholder word the templates themselves use.
_BASE_STOPWORDS = {
    "about",
    "align",
    "already",
    "also",
    "assumption",
    "avoid",
    "case",
    "cards",
    "challenge",
    "criteria",
    "criterion",
    "decision",
    "definitions",
    "each",
    "edge",
    "exactly",
    "form",
    "from",
    "have",
    "ideal",
    "include",
    "kept",
    "label",
    "line",
    "list",
    "none",
    "numbered",
    "option",
    "options",
    "provided",
    "provocative",
    "qualities",
    "common",
    "removed",
    "round",
    "rounds",
    "selected",
    "strategy",
    "targets",
    "test",
    "that",
    "this",
    "tier",
    "what",
    "which",
    "with",
    "write",
    "yet",
    "your",
}


def _template_scaffold_words() -> set[str]:
    words: set[str] = set()
    sources = [
        *(t for group in OPTION_TEMPLATES.values() for t in group),
        *DEFINITION_COMMON_TEMPLATES,
        *DEFINITION_PROVOCATIVE_TEMPLATES,
    ]
    for template in sources:
        stripped = string.Template(template).safe_substitute(
            a="", b="", t1="", t2="", head="", noun=""
        )
        words.update(_WORD_RE.findall(stripped.lower()))
    return words


STOPWORDS: frozenset[str] = frozenset(_BASE_STOPWORDS | _template_scaffold_words())


def salient_tokens(lines: list[str]) -> list[str]:
    """Content tokens of *lines*, most frequent first, ties by first seen."""
    counts: dict[str, int] = {}
    first_seen: dict[str, int] = {}
    position = 0
    for line in lines:
        for token in _WORD_RE.findall(line.lower()):
            if token in STOPWORDS:
                continue
            counts[token] = counts.get(token, 0) + 1
            if token not in first_seen:
                first_seen[token] = position
                position += 1
    return sorted(counts, key=lambda t: (-counts[t], first_seen[t]))
