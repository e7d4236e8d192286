from __future__ import annotations

import pytest

from criteria_loop.generation import StubProvider
from criteria_loop.model import SessionConfig


@pytest.fixture
def config() -> SessionConfig:
    return SessionConfig(seed=7)


@pytest.fixture
def provider(config: SessionConfig) -> StubProvider:
    return StubProvider(config.seed)
