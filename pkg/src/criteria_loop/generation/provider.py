"""Content providers: a deterministic stub and an HTTP-backed external one.

The stub is a pure function of (request, seed). It reads the same prompt
text a real model would receive, lifts salient tokens out of the labeled
sections, and fills phrase-bank templates with them. That token lift is
what makes the feedback loop observable in tests: keep cards about
"research" and the next criteria batch will say "research" somewhere.
"""

from __future__ import annotations

import hashlib
import os
import random
import re
from dataclasses import dataclass
from enum import Enum
from string import Template
from typing import Any, Iterator, Protocol

import httpx

from ..errors import GenerationError
from .phrasebank import (
    CRITERION_SUFFIXES,
    DEFINITION_COMMON_TEMPLATES,
    DEFINITION_PROVOCATIVE_TEMPLATES,
    DOMAIN_NOUNS,
    OPTION_TEMPLATES,
    STOPWORDS,
    salient_tokens,
)

DEFAULT_TIMEOUT_SECONDS = 30.0


class TaskKind(str, Enum):
    OPTIONS = "options"
    CRITERIA = "criteria"
    DEFINITIONS = "definitions"


@dataclass(frozen=True)
class ProviderRequest:
    kind: TaskKind
    instructions: str
    expected_count: int
    response_format: str = "numbered-list"


@dataclass(frozen=True)
class ProviderResponse:
    text: str
    # Filled by the task layer after parsing; None means not yet parsed.
    items: tuple[str, ...] | None = None


class Provider(Protocol):
    def complete(self, request: ProviderRequest) -> ProviderResponse: ...


# ---------------------------------------------------------------------------
# Stub provider
# ---------------------------------------------------------------------------

_PLAN_LINE_RE = re.compile(r"^strategy=([a-z_]+)(?:\s+targets=(.*))?$")
_QUOTED_RE = re.compile(r"'([^']*)'")
_LIST_ITEM_RE = re.compile(r"^(?:-\s+|\d+[.)]\s+)(.*)$")


def _section_lines(text: str, header: str) -> list[str]:
    """List items directly under a ``Header:`` line of the prompt."""
    lines = text.splitlines()
    collected: list[str] = []
    for idx, line in enumerate(lines):
        if line.strip() != header:
            continue
        for follower in lines[idx + 1 :]:
            match = _LIST_ITEM_RE.match(follower.strip())
            if not match:
                break
            collected.append(match.group(1))
        break
    return collected


def _header_value(text: str, header: str) -> str:
    match = re.search(rf"^{re.escape(header)}\s*(.*)$", text, flags=re.MULTILINE)
    return match.group(1).strip() if match else ""


class _NounDeck:
    """Deals nouns without replacement, reshuffling when exhausted."""

    def __init__(self, rng: random.Random):
        self._rng = rng
        self._deck: list[str] = []

    def draw(self) -> str:
        if not self._deck:
            self._deck = list(DOMAIN_NOUNS)
            self._rng.shuffle(self._deck)
        return self._deck.pop()


class StubProvider:
    """Deterministic template-filling provider for tests and offline use."""

    def __init__(self, seed: int = 0):
        self.seed = seed

    def complete(self, request: ProviderRequest) -> ProviderResponse:
        rng = random.Random(self._digest(request))
        if request.kind == TaskKind.OPTIONS:
            items = self._option_items(request, rng)
        elif request.kind == TaskKind.CRITERIA:
            items = self._criterion_items(request, rng)
        else:
            items = self._definition_items(request, rng)
        text = "\n".join(f"{i}. {item}" for i, item in enumerate(items, start=1))
        return ProviderResponse(text=text)

    def _digest(self, request: ProviderRequest) -> int:
        blob = f"{self.seed}:{request.kind.value}:{request.expected_count}:{request.instructions}"
        return int(hashlib.sha256(blob.encode("utf-8")).hexdigest()[:16], 16)

    def _option_items(self, request: ProviderRequest, rng: random.Random) -> list[str]:
        plan: dict[int, tuple[str, list[str]]] = {}
        # Section lines arrive with their "N. " prefix already stripped, so
        # the card number is the line's position.
        for position, line in enumerate(_section_lines(request.instructions, "Card plan:"), start=1):
            match = _PLAN_LINE_RE.match(line)
            if match:
                targets = _QUOTED_RE.findall(match.group(2) or "")
                plan[position] = (match.group(1), targets)

        deck = _NounDeck(rng)
        items = []
        for i in range(1, request.expected_count + 1):
            strategy, targets = plan.get(i, ("assumption_test", []))
            templates = OPTION_TEMPLATES.get(strategy, OPTION_TEMPLATES["assumption_test"])
            template = rng.choice(templates)
            fills = {
                "a": deck.draw(),
                "b": deck.draw(),
                "t1": targets[0] if targets else deck.draw(),
                "t2": targets[1] if len(targets) > 1 else deck.draw(),
            }
            items.append(Template(template).safe_substitute(fills))
        return items

    def _criterion_items(self, request: ProviderRequest, rng: random.Random) -> list[str]:
        kept = _section_lines(request.instructions, "Kept options:")
        ideal = _header_value(request.instructions, "Ideal qualities:")
        tokens = salient_tokens(kept + ([ideal] if ideal else []))

        taken = {
            label.split("[", 1)[0].strip().casefold()
            for label in _section_lines(request.instructions, "Existing criteria:")
        }
        deck = _NounDeck(rng)
        heads: list[str] = []
        seen_heads: set[str] = set()
        source: Iterator[str] = iter(tokens)
        attempts = 0
        while len(heads) < request.expected_count:
            attempts += 1
            head = next(source, None)
            if head is None:
                # Noun pool exhausted relative to the ask: synthesize.
                head = deck.draw() if attempts < 200 else f"aspect-{attempts}"
            if head in seen_heads or head in STOPWORDS:
                continue
            seen_heads.add(head)
            heads.append(head)

        items = []
        for head in heads:
            suffixes = list(CRITERION_SUFFIXES)
            rng.shuffle(suffixes)
            for suffix in suffixes:
                label = f"{head} {suffix}"
                if label.casefold() not in taken:
                    taken.add(label.casefold())
                    items.append(label)
                    break
        return items

    def _definition_items(self, request: ProviderRequest, rng: random.Random) -> list[str]:
        label = _header_value(request.instructions, "Criterion:")
        head = next(
            (t for t in label.casefold().split() if len(t) > 3 and t not in STOPWORDS),
            label.split()[0] if label.split() else "quality",
        )
        avoid = {
            line.casefold()
            for line in _section_lines(request.instructions, "Selected definitions:")
            + _section_lines(request.instructions, "Rejected definitions:")
        }

        count = request.expected_count
        common_count = (count + 1) // 2
        deck = _NounDeck(rng)
        items: list[str] = []
        for i in range(count):
            bank = DEFINITION_COMMON_TEMPLATES if i < common_count else DEFINITION_PROVOCATIVE_TEMPLATES
            index = i if i < common_count else i - common_count
            template = bank[index % len(bank)]
            text = ""
            for _ in range(4):  # re-fill on collision with avoided texts
                text = Template(template).safe_substitute(head=head, noun=deck.draw())
                if text.casefold() not in avoid:
                    break
            avoid.add(text.casefold())
            items.append(text)
        return items


# ---------------------------------------------------------------------------
# External provider
# ---------------------------------------------------------------------------


class ExternalProvider:
    """Chat-completion-style HTTP provider.

    Endpoint and credential come from PROVIDER_URL / PROVIDER_KEY unless
    given explicitly; PROVIDER_MODEL optionally names the model.
    """

    def __init__(
        self,
        url: str | None = None,
        key: str | None = None,
        model: str | None = None,
        timeout: float = DEFAULT_TIMEOUT_SECONDS,
        client: httpx.Client | None = None,
    ):
        self.url = url or os.environ.get("PROVIDER_URL", "")
        self.key = key or os.environ.get("PROVIDER_KEY", "")
        self.model = model or os.environ.get("PROVIDER_MODEL", "")
        self.timeout = timeout
        self._client = client

    def complete(self, request: ProviderRequest) -> ProviderResponse:
        if not self.url:
            raise GenerationError("provider-failure", "PROVIDER_URL is not configured")
        payload: dict[str, Any] = {
            "messages": [{"role": "user", "content": request.instructions}],
        }
        if self.model:
            payload["model"] = self.model
        headers = {}
        if self.key:
            headers["Authorization"] = f"Bearer {self.key}"
        try:
            if self._client is not None:
                response = self._client.post(
                    self.url, json=payload, headers=headers, timeout=self.timeout
                )
            else:
                response = httpx.post(self.url, json=payload, headers=headers, timeout=self.timeout)
            response.raise_for_status()
            data = response.json()
            text = data["choices"][0]["message"]["content"]
        except (httpx.HTTPError, KeyError, IndexError, TypeError, ValueError) as exc:
            raise GenerationError("provider-failure", f"provider call failed: {exc}") from exc
        return ProviderResponse(text=str(text))
