"""Provocation generation: strategy planning, prompting, and providers."""

from .context import CriterionSignal, GenerationContext, OptionSignal, build_context
from .planning import StrategyPlan, StrategySlot, plan_strategies
from .provider import (
    ExternalProvider,
    Provider,
    ProviderRequest,
    ProviderResponse,
    StubProvider,
    TaskKind,
)
from .tasks import generate_definitions, generate_options, infer_criteria, parse_numbered_list

__all__ = [
    "CriterionSignal",
    "ExternalProvider",
    "GenerationContext",
    "OptionSignal",
    "Provider",
    "ProviderRequest",
    "ProviderResponse",
    "StrategyPlan",
    "StrategySlot",
    "StubProvider",
    "TaskKind",
    "build_context",
    "generate_definitions",
    "generate_options",
    "infer_criteria",
    "parse_numbered_list",
]
