"""HTTP adapter over the core modules.

Every handler is thin: parse, authorize, call core functions, serialize via
documents.py. Responses are built with the same builders tests can call
directly, which keeps the API bit-identical to core composition.

State: the bank snapshot lives in memory and is re-persisted on each
mutation under a single writer lock; sessions are in-memory and ephemeral;
profiles and the run log go through the document store.
"""
from __future__ import annotations

import secrets as _secrets
import threading
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Callable, Mapping

from fastapi import FastAPI, Request, Response

from . import documents
from .auth import GUEST_IDENTITY, Identity, Role, mint_token, parse_token, verify_password
from .bank import TopicNode
from .bankio import question_from_document
from .errors import (
    AssessmentError,
    DuplicateId,
    MissingProfile,
    OutOfRange,
    ParseError,
    SessionNotFinal,
    ShapeMismatch,
    UnknownQuestion,
    UnknownTopic,
    ValidationError,
)
from .grading import aggregate_topics, grade_session, overall_percent, validate_answer_payload
from .profiles import LearnerProfile, SessionRecord, update_profile, weakness_report
from .selection import (
    LearnerContext,
    SelectionCriteria,
    criteria_from_document,
    criteria_to_document,
    select,
)
from .store import DocumentStore
from .types import (
    DEFAULT_EDUCATION_LABELS,
    Difficulty,
    KnowledgeLevel,
    Relation,
    validate_education_rank,
)

API_PREFIX = "/api/v1"
DEFAULT_EDUCATION_RANK = 3


class SessionState(str, Enum):
    CREATED = "created"
    IN_PROGRESS = "in_progress"
    SUBMITTED = "submitted"
    FINALIZED = "finalized"


@dataclass
class Session:
    session_id: str
    identity: Identity
    criteria: SelectionCriteria
    question_ids: tuple
    clusters: tuple
    education_level: int | None
    created_at: str
    state: SessionState = SessionState.CREATED
    answers: dict = field(default_factory=dict)


class HttpError(Exception):
    def __init__(self, status: int, code: str, message: str, details=None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.details = details


# fallback mapping for core errors a handler does not translate itself
def _status_for(exc: AssessmentError) -> int:
    if isinstance(exc, (UnknownTopic, UnknownQuestion)):
        return 404
    if isinstance(exc, MissingProfile):
        return 403
    if isinstance(exc, (DuplicateId, SessionNotFinal)):
        return 409
    if isinstance(exc, (ShapeMismatch, OutOfRange, ParseError)):
        return 400
    return 422


def _details_for(exc: AssessmentError):
    if isinstance(exc, ValidationError):
        return list(exc.problems)
    if isinstance(exc, ParseError) and exc.line is not None:
        return {"line": exc.line}
    return None


class ServiceState:
    def __init__(
        self,
        store: DocumentStore,
        secret: bytes,
        clock: Callable[[], float],
        id_factory: Callable[[], str],
    ):
        self.store = store
        self.secret = secret
        self.clock = clock
        self.id_factory = id_factory
        self.lock = threading.Lock()
        self.bank = store.load_bank()
        self.sessions: dict[str, Session] = {}

    def now_iso(self) -> str:
        return datetime.fromtimestamp(self.clock(), tz=timezone.utc).isoformat()


def _json(doc, status: int = 200) -> Response:
    return Response(
        content=documents.to_json_bytes(doc),
        status_code=status,
        media_type="application/json",
    )


def create_app(
    store: DocumentStore | str | Path,
    *,
    secret: str | bytes,
    clock: Callable[[], float] = time.time,
    id_factory: Callable[[], str] | None = None,
) -> FastAPI:
    """Build the service; clock and id_factory are injectable for tests."""
    if not isinstance(store, DocumentStore):
        store = DocumentStore(store)
    secret_bytes = secret.encode() if isinstance(secret, str) else secret
    if id_factory is None:
        id_factory = lambda: _secrets.token_urlsafe(12)
    state = ServiceState(store, secret_bytes, clock, id_factory)

    app = FastAPI(openapi_url=None, docs_url=None, redoc_url=None)
    app.state.service = state

    @app.exception_handler(HttpError)
    async def _http_error(request: Request, exc: HttpError) -> Response:
        return _json(documents.error_document(exc.code, exc.message, exc.details), exc.status)

    @app.exception_handler(AssessmentError)
    async def _core_error(request: Request, exc: AssessmentError) -> Response:
        return _json(
            documents.error_document(exc.code, str(exc), _details_for(exc)),
            _status_for(exc),
        )

    def identity_of(request: Request) -> Identity:
        header = request.headers.get("authorization")
        if not header:
            return GUEST_IDENTITY
        scheme, _, token = header.partition(" ")
        if scheme.lower() != "bearer" or not token.strip():
            raise HttpError(401, "unauthenticated", "authorization header must be Bearer <token>")
        identity = parse_token(state.secret, token.strip(), state.clock())
        if identity is None:
            raise HttpError(401, "unauthenticated", "invalid or expired token")
        return identity

    def require(identity: Identity, *allowed: Role) -> None:
        if any(identity.role.covers(role) for role in allowed):
            return
        if identity.role is Role.GUEST:
            raise HttpError(401, "unauthenticated", "authentication required")
        raise HttpError(403, "forbidden", f"role {identity.role.value} may not do this")

    async def body_of(request: Request) -> dict:
        try:
            doc = await request.json()
        except Exception:
            raise HttpError(400, "parse_error", "request body must be valid JSON")
        if not isinstance(doc, Mapping):
            raise HttpError(400, "parse_error", "request body must be a JSON object")
        return dict(doc)

    def session_of(session_id: str, identity: Identity) -> Session:
        session = state.sessions.get(session_id)
        if session is None:
            raise HttpError(404, "unknown_session", f"no session {session_id!r}")
        if session.identity != identity:
            raise HttpError(403, "forbidden", "session belongs to a different identity")
        return session

    # --- open endpoints -------------------------------------------------

    @app.get(f"{API_PREFIX}/health")
    async def health() -> Response:
        return _json(
            {
                "status": "ok",
                "bank_version": state.bank.version,
                "questions": len(state.bank.questions),
            }
        )

    @app.get(f"{API_PREFIX}/meta")
    async def meta() -> Response:
        return _json(
            {
                "rule_kinds": ["by_difficulty", "by_knowledge", "by_education", "auto"],
                "relations": [r.value for r in Relation],
                "difficulties": [d.label for d in Difficulty],
                "knowledge_levels": [k.label for k in KnowledgeLevel],
                "education_levels": [
                    {"rank": rank, "label": label}
                    for rank, label in sorted(DEFAULT_EDUCATION_LABELS.items())
                ],
            }
        )

    @app.post(f"{API_PREFIX}/login")
    async def login(request: Request) -> Response:
        body = await body_of(request)
        username, password = body.get("username"), body.get("password")
        if not isinstance(username, str) or not isinstance(password, str):
            raise HttpError(400, "parse_error", "username and password are required")
        record = state.store.load_users().get(username)
        if record is None or not verify_password(password, record["credentials"]):
            raise HttpError(401, "unauthenticated", "unknown user or wrong password")
        role = Role(record["role"])
        token = mint_token(state.secret, username, role, state.clock())
        return _json({"token": token, "username": username, "role": role.value})

    # --- topics ----------------------------------------------------------

    @app.get(f"{API_PREFIX}/topics")
    async def list_topics() -> Response:
        return _json(documents.topics_document(state.bank.topics))

    @app.post(f"{API_PREFIX}/topics")
    async def add_topic(request: Request) -> Response:
        identity = identity_of(request)
        require(identity, Role.EDUCATOR)
        body = await body_of(request)
        tid, name, parent = body.get("id"), body.get("name"), body.get("parent")
        if not isinstance(tid, str) or not tid or not isinstance(name, str) or not name:
            raise HttpError(422, "validation", "topic id and name are required strings")
        if parent is not None and not isinstance(parent, str):
            raise HttpError(422, "validation", "parent must be a topic id")
        with state.lock:
            state.bank = state.bank.add_topic(TopicNode(id=tid, name=name, parent=parent))
            state.store.save_bank(state.bank)
            return _json(
                {
                    "topic": documents.topic_document(state.bank.topics.get(tid)),
                    "bank_version": state.bank.version,
                },
                201,
            )

    @app.delete(f"{API_PREFIX}/topics/{{topic_id}}")
    async def remove_topic(topic_id: str, request: Request) -> Response:
        identity = identity_of(request)
        require(identity, Role.EDUCATOR)
        with state.lock:
            state.bank = state.bank.remove_topic(topic_id)
            state.store.save_bank(state.bank)
            return _json({"removed": topic_id, "bank_version": state.bank.version})

    # --- questions (authoring; responses include keys) --------------------

    @app.get(f"{API_PREFIX}/questions")
    async def list_questions(request: Request) -> Response:
        identity = identity_of(request)
        require(identity, Role.EDUCATOR)
        docs = [
            documents.question_authoring_document(state.bank.get(qid))
            for qid in sorted(state.bank.questions)
        ]
        return _json({"questions": docs, "bank_version": state.bank.version})

    @app.get(f"{API_PREFIX}/questions/{{question_id}}")
    async def get_question(question_id: str, request: Request) -> Response:
        identity = identity_of(request)
        require(identity, Role.EDUCATOR)
        return _json(
            {"question": documents.question_authoring_document(state.bank.get(question_id))}
        )

    @app.post(f"{API_PREFIX}/questions")
    async def add_question(request: Request) -> Response:
        identity = identity_of(request)
        require(identity, Role.EDUCATOR)
        body = await body_of(request)
        with state.lock:
            question = question_from_document(body, state.bank.topics)
            state.bank = state.bank.add_question(question)
            state.store.save_bank(state.bank)
            return _json(
                {
                    "question": documents.question_authoring_document(question),
                    "bank_version": state.bank.version,
                },
                201,
            )

    @app.put(f"{API_PREFIX}/questions/{{question_id}}")
    async def update_question(question_id: str, request: Request) -> Response:
        identity = identity_of(request)
        require(identity, Role.EDUCATOR)
        body = await body_of(request)
        if body.get("id") != question_id:
            raise HttpError(400, "parse_error", "body id must match the path id")
        with state.lock:
            question = question_from_document(body, state.bank.topics)
            state.bank = state.bank.update_question(question)
            state.store.save_bank(state.bank)
            return _json(
                {
                    "question": documents.question_authoring_document(question),
                    "bank_version": state.bank.version,
                }
            )

    @app.delete(f"{API_PREFIX}/questions/{{question_id}}")
    async def remove_question(question_id: str, request: Request) -> Response:
        identity = identity_of(request)
        require(identity, Role.EDUCATOR)
        with state.lock:
            state.bank = state.bank.remove_question(question_id)
            state.store.save_bank(state.bank)
            return _json({"removed": question_id, "bank_version": state.bank.version})

    # --- profiles ---------------------------------------------------------

    @app.get(f"{API_PREFIX}/profile")
    async def get_profile(request: Request) -> Response:
        identity = identity_of(request)
        require(identity, Role.STUDENT)
        profile = state.store.load_profile(identity.username)
        if profile is None:
            raise HttpError(404, "missing_profile", "no profile recorded yet")
        return _json(documents.profile_document(profile))

    @app.get(f"{API_PREFIX}/history")
    async def get_history(request: Request) -> Response:
        identity = identity_of(request)
        require(identity, Role.STUDENT)
        profile = state.store.load_profile(identity.username)
        records = profile.history if profile is not None else ()
        return _json(documents.history_document(records))

    # --- sessions -----------------------------------------------------------

    @app.post(f"{API_PREFIX}/sessions")
    async def create_session(request: Request) -> Response:
        identity = identity_of(request)
        require(identity, Role.STUDENT, Role.GUEST)
        body = await body_of(request)

        try:
            criteria = criteria_from_document(body.get("criteria"))
        except ValidationError as exc:
            raise HttpError(400, "validation", str(exc), list(exc.problems))

        education = body.get("education_level")
        if education is not None:
            try:
                education = validate_education_rank(education)
            except OutOfRange as exc:
                raise HttpError(400, "out_of_range", str(exc))

        profile = state.store.load_profile(identity.username) if identity.registered else None
        context = LearnerContext(education_level=education, profile=profile)
        try:
            result = select(state.bank, criteria, context)
        except (UnknownTopic, OutOfRange, ValidationError) as exc:
            raise HttpError(400, exc.code, str(exc), _details_for(exc))

        if not result.questions:
            raise HttpError(
                422,
                "empty_selection",
                result.diagnostic or "no questions satisfy the criteria",
                {"criteria": criteria_to_document(criteria)},
            )

        session = Session(
            session_id=state.id_factory(),
            identity=identity,
            criteria=criteria,
            question_ids=tuple(q.id for q in result.questions),
            clusters=result.clusters,
            education_level=education,
            created_at=state.now_iso(),
        )
        state.sessions[session.session_id] = session
        taker = identity.username or f"guest:{session.session_id}"
        state.store.append_run(taker, session.created_at, session.session_id)
        return _json(documents.session_created_document(session.session_id, criteria, result), 201)

    @app.get(f"{API_PREFIX}/sessions/{{session_id}}")
    async def get_session(session_id: str, request: Request) -> Response:
        identity = identity_of(request)
        session = session_of(session_id, identity)
        questions = [
            documents.question_public_document(state.bank.get(qid))
            for qid in session.question_ids
        ]
        return _json(
            {
                "session_id": session.session_id,
                "state": session.state.value,
                "criteria": criteria_to_document(session.criteria),
                "questions": questions,
                "clusters": [
                    {"topic_id": c.topic_id, "question_ids": list(c.question_ids)}
                    for c in session.clusters
                ],
                "answered": sorted(session.answers),
            }
        )

    @app.post(f"{API_PREFIX}/sessions/{{session_id}}/answers")
    async def post_answers(session_id: str, request: Request) -> Response:
        identity = identity_of(request)
        session = session_of(session_id, identity)
        if session.state not in (SessionState.CREATED, SessionState.IN_PROGRESS):
            raise HttpError(409, "conflict", f"session already {session.state.value}")
        body = await body_of(request)
        answers = body.get("answers")
        if not isinstance(answers, Mapping):
            raise HttpError(400, "parse_error", "answers must map question ids to payloads")
        for qid, payload in answers.items():
            if qid not in session.question_ids:
                raise HttpError(400, "unknown_question", f"question {qid!r} is not in this session")
            if payload is not None:
                try:
                    validate_answer_payload(state.bank.get(qid), payload)
                except ShapeMismatch as exc:
                    raise HttpError(400, "shape_mismatch", str(exc), {"question_id": qid})
        session.answers.update({qid: payload for qid, payload in answers.items()})
        session.state = SessionState.IN_PROGRESS
        return _json(
            {
                "session_id": session.session_id,
                "state": session.state.value,
                "answered": sorted(session.answers),
            }
        )

    @app.post(f"{API_PREFIX}/sessions/{{session_id}}/submit")
    async def submit_session(session_id: str, request: Request) -> Response:
        identity = identity_of(request)
        session = session_of(session_id, identity)
        if session.state in (SessionState.SUBMITTED, SessionState.FINALIZED):
            raise HttpError(409, "conflict", "session was already submitted")
        session.state = SessionState.SUBMITTED

        scores = grade_session(state.bank, session.question_ids, session.answers)
        topic_results = aggregate_topics(state.bank, scores, session.criteria.topics)
        weakness = weakness_report(topic_results, scores, state.bank)
        overall = overall_percent(state.bank, scores)

        if identity.registered and identity.role is Role.STUDENT:
            with state.lock:
                profile = state.store.load_profile(identity.username)
                if profile is None:
                    profile = LearnerProfile(
                        learner_id=identity.username,
                        education_level=session.education_level or DEFAULT_EDUCATION_RANK,
                    )
                record = SessionRecord(
                    session_id=session.session_id,
                    timestamp=state.now_iso(),
                    criteria=criteria_to_document(session.criteria),
                    topic_results=tuple(topic_results),
                    levels={r.topic_id: r.inferred_level.label for r in topic_results},
                )
                state.store.save_profile(update_profile(profile, record))

        session.state = SessionState.FINALIZED
        return _json(
            documents.submit_result_document(
                session.session_id, state.bank, scores, topic_results, weakness, overall
            )
        )

    return app


def run_server(app: FastAPI, host: str, port: int) -> None:
    import uvicorn

    uvicorn.run(app, host=host, port=port, log_level="warning")
