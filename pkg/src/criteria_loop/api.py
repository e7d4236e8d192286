"""HTTP/JSON adapter over the session service, mounted under /api/v1.

The adapter is deliberately thin: request bodies are validated shapes,
every engine rejection passes through with its error code verbatim, and
mutation responses carry the full state envelope the UI renders. When a
mutation parks the session in an awaiting_* phase, generation is
scheduled as a background task and clients poll the phase.
"""

from __future__ import annotations

from typing import Any

from fastapi import BackgroundTasks, FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .errors import ERROR_CODES, EngineError
from .service import SessionService

_NOT_FOUND_CODES = {
    "unknown-session",
    "unknown-option",
    "unknown-criterion",
    "unknown-definition",
    "bad-branch-point",
}
_BAD_REQUEST_CODES = {"invalid-payload"}
_PROVIDER_CODES = {"provider-failure", "malformed-response"}
_INTERNAL_CODES = {"corrupt-log", "io-error", "unsupported-version"}


def status_for(code: str) -> int:
    if code in _NOT_FOUND_CODES:
        return 404
    if code in _BAD_REQUEST_CODES:
        return 422
    if code in _PROVIDER_CODES:
        return 502
    if code in _INTERNAL_CODES:
        return 500
    return 409  # state-machine and count-rule violations


class CreateSessionBody(BaseModel):
    config: dict[str, Any] = Field(default_factory=dict)


class FramingBody(BaseModel):
    decision_text: str
    ideal_qualities_text: str = ""


class OptionStatusBody(BaseModel):
    status: str


class CustomOptionBody(BaseModel):
    text: str


class AddCriterionBody(BaseModel):
    label: str


class TierBody(BaseModel):
    tier: str


class SelectDefinitionsBody(BaseModel):
    selected_ids: list[str] = Field(default_factory=list)
    custom_texts: list[str] = Field(default_factory=list)


class RedefinitionBody(BaseModel):
    finish: bool = False


class BranchBody(BaseModel):
    at_seq: int


def create_app(service: SessionService) -> FastAPI:
    app = FastAPI(title="criteria-loop", docs_url=None, redoc_url=None)
    # The web client may be served from a different local port; the API is a
    # local single-user tool, so any origin may call it.
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(EngineError)
    async def engine_error_handler(_request: Request, exc: EngineError) -> JSONResponse:
        return JSONResponse(status_code=status_for(exc.code), content=exc.to_dict())

    def respond(envelope: dict[str, Any], background: BackgroundTasks, status: int = 200) -> JSONResponse:
        if envelope["pending_generation"]:
            background.add_task(service.drive_quietly, envelope["session"]["id"])
        return JSONResponse(status_code=status, content=envelope)

    @app.post("/api/v1/sessions", status_code=201)
    def create_session(body: CreateSessionBody, background: BackgroundTasks) -> Response:
        return respond(service.create_session(body.config), background, status=201)

    @app.get("/api/v1/sessions/{session_id}")
    def get_session(session_id: str, background: BackgroundTasks) -> Response:
        return respond(service.state(session_id), background)

    @app.post("/api/v1/sessions/{session_id}/framing")
    def submit_framing(session_id: str, body: FramingBody, background: BackgroundTasks) -> Response:
        return respond(
            service.submit_framing(session_id, body.decision_text, body.ideal_qualities_text),
            background,
        )

    @app.post("/api/v1/sessions/{session_id}/options/{option_id}/status")
    def set_option_status(
        session_id: str, option_id: str, body: OptionStatusBody, background: BackgroundTasks
    ) -> Response:
        return respond(service.set_option_status(session_id, option_id, body.status), background)

    @app.post("/api/v1/sessions/{session_id}/options")
    def add_custom_option(
        session_id: str, body: CustomOptionBody, background: BackgroundTasks
    ) -> Response:
        return respond(service.add_custom_option(session_id, body.text), background)

    @app.post("/api/v1/sessions/{session_id}/narrowing/confirm")
    def confirm_narrowing(session_id: str, background: BackgroundTasks) -> Response:
        return respond(service.confirm_narrowing(session_id), background)

    @app.post("/api/v1/sessions/{session_id}/criteria")
    def add_criterion(
        session_id: str, body: AddCriterionBody, background: BackgroundTasks
    ) -> Response:
        return respond(service.add_criterion(session_id, body.label), background)

    @app.post("/api/v1/sessions/{session_id}/criteria/{criterion_id}/tier")
    def set_tier(
        session_id: str, criterion_id: str, body: TierBody, background: BackgroundTasks
    ) -> Response:
        return respond(service.set_tier(session_id, criterion_id, body.tier), background)

    @app.post("/api/v1/sessions/{session_id}/criteria/{criterion_id}/remove")
    def remove_criterion(
        session_id: str, criterion_id: str, background: BackgroundTasks
    ) -> Response:
        return respond(service.remove_criterion(session_id, criterion_id), background)

    @app.post("/api/v1/sessions/{session_id}/prioritization/confirm")
    def confirm_prioritization(session_id: str, background: BackgroundTasks) -> Response:
        return respond(service.confirm_prioritization(session_id), background)

    @app.post("/api/v1/sessions/{session_id}/criteria/{criterion_id}/definitions")
    def select_definitions(
        session_id: str, criterion_id: str, body: SelectDefinitionsBody, background: BackgroundTasks
    ) -> Response:
        return respond(
            service.select_definitions(session_id, criterion_id, body.selected_ids, body.custom_texts),
            background,
        )

    @app.post("/api/v1/sessions/{session_id}/redefinition/confirm")
    def confirm_redefinition(
        session_id: str, body: RedefinitionBody, background: BackgroundTasks
    ) -> Response:
        return respond(service.confirm_redefinition(session_id, body.finish), background)

    @app.post("/api/v1/sessions/{session_id}/generation")
    def run_generation(session_id: str, background: BackgroundTasks) -> Response:
        # Inline (blocking) retry: provider failures surface here as 502.
        return respond(service.drive(session_id), background)

    @app.get("/api/v1/sessions/{session_id}/events")
    def get_events(session_id: str) -> dict[str, Any]:
        return {"session_id": session_id, "events": service.events(session_id)}

    @app.get("/api/v1/sessions/{session_id}/summary")
    def get_summary(session_id: str) -> dict[str, Any]:
        return service.summary(session_id).to_dict()

    @app.post("/api/v1/sessions/{session_id}/branch", status_code=201)
    def branch_session(session_id: str, body: BranchBody, background: BackgroundTasks) -> Response:
        return respond(service.branch_session(session_id, body.at_seq), background, status=201)

    @app.get("/api/v1/sessions/{session_id}/export")
    def export_session(session_id: str, format: str = "json") -> Response:
        document = service.export(session_id, format)
        media = "application/json" if format == "json" else "text/markdown"
        return Response(content=document, media_type=media)

    @app.get("/api/v1/meta/error-codes")
    def error_codes() -> dict[str, Any]:
        return {"codes": list(ERROR_CODES)}

    return app
