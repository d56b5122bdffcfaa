"""HTTP API over project storage, influence inspection, and solving.

Projects live in an in-memory store keyed by opaque tokens, with optional
write-through to a document directory. Solves run against a snapshot taken
under the project lock, so concurrent requests on the same project all see
a consistent instance and return identical reports. The what-if endpoint is
a solve that never persists its overrides.
"""

from __future__ import annotations

import json
import secrets
import threading
from dataclasses import replace
from decimal import Decimal
from pathlib import Path

import numpy as np
from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import Response

from .catalog import default_value_types
from .document import (
    DocumentError,
    ParseError,
    ValidationFailure,
    machine_json,
    parse_project,
    serialize_project,
)
from .model import Project, validate_project
from .planner import (
    INFEASIBLE,
    SolveReport,
    TIMEOUT_NO_INCUMBENT,
    project_influences,
    solve_exact,
)

API_SOLVE_TIMEOUT = 10.0


class UnknownProject(KeyError):
    pass


class _Entry:
    def __init__(self, project: Project):
        self.project = project
        self.influences: np.ndarray | None = None
        self.lock = threading.Lock()


class ProjectStore:
    """Thread-safe project map with per-project influence caches.

    Mutations are serialized per project id and atomically drop the cached
    influence matrices. With a data directory, every stored version is also
    written through as its canonical document.
    """

    def __init__(self, data_dir: str | Path | None = None):
        self._entries: dict[str, _Entry] = {}
        self._lock = threading.Lock()
        self._data_dir = Path(data_dir) if data_dir is not None else None
        if self._data_dir is not None:
            self._data_dir.mkdir(parents=True, exist_ok=True)
            for path in sorted(self._data_dir.glob("*.json")):
                self._entries[path.stem] = _Entry(
                    parse_project(path.read_text())
                )

    def _write_through(self, project_id: str, project: Project) -> None:
        if self._data_dir is not None:
            path = self._data_dir / f"{project_id}.json"
            path.write_text(serialize_project(project))

    def create(self, project: Project) -> str:
        project_id = secrets.token_hex(8)
        with self._lock:
            self._entries[project_id] = _Entry(project)
        self._write_through(project_id, project)
        return project_id

    def _entry(self, project_id: str) -> _Entry:
        with self._lock:
            try:
                return self._entries[project_id]
            except KeyError:
                raise UnknownProject(project_id) from None

    def get(self, project_id: str) -> Project:
        return self._entry(project_id).project

    def replace(self, project_id: str, project: Project) -> None:
        entry = self._entry(project_id)
        with entry.lock:
            entry.project = project
            entry.influences = None
        self._write_through(project_id, project)

    def snapshot(self, project_id: str) -> tuple[Project, np.ndarray]:
        """Project plus its influence matrices, computed once per version."""
        entry = self._entry(project_id)
        with entry.lock:
            if entry.influences is None:
                entry.influences = project_influences(entry.project)
            return entry.project, entry.influences

    def ids(self) -> list[str]:
        with self._lock:
            return list(self._entries)


def report_payload(report: SolveReport, project: Project) -> dict:
    """The machine-readable solve report: exactly selection, objective,
    delivered per type, per-requirement penalties, and status."""
    plan = report.plan
    if plan is None:
        return {
            "status": report.status,
            "objective": None,
            "selection": [],
            "delivered": None,
            "penalties": None,
        }
    return {
        "status": report.status,
        "objective": plan.objective,
        "selection": list(plan.selected_ids()),
        "delivered": {
            str(t + 1): float(v) for t, v in enumerate(plan.delivered)
        },
        "penalties": {
            str(req.id): {
                str(t + 1): float(plan.penalties[req.id - 1, t])
                for t in range(project.type_count)
            }
            for req in project.requirements
        },
    }


def influence_payload(influences: np.ndarray, value_type: int) -> dict:
    return {
        "type": value_type,
        "values": [
            [float(v) for v in row] for row in influences[value_type - 1]
        ],
    }


def _machine(payload, status_code: int = 200) -> Response:
    return Response(
        machine_json(payload),
        status_code=status_code,
        media_type="application/json",
    )


def _error(status_code: int, detail: str, **extra) -> Response:
    return _machine({"detail": detail, **extra}, status_code)


def _violations_payload(violations) -> list[dict]:
    return [
        {"field": v.field, "rule": v.rule, "ids": list(v.ids),
         "message": v.message}
        for v in violations
    ]


def create_app(
    store: ProjectStore | None = None,
    *,
    data_dir: str | Path | None = None,
    solve_timeout: float = API_SOLVE_TIMEOUT,
) -> FastAPI:
    """Build the service; CORS is open so the browser UI can call it."""
    app = FastAPI(title="valueplan", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.store = store if store is not None else ProjectStore(data_dir)

    def _parse_body(text: str) -> Project:
        return parse_project(text)

    @app.exception_handler(UnknownProject)
    async def _unknown(request, exc):
        return _error(404, "unknown project id")

    @app.exception_handler(ValidationFailure)
    async def _invalid(request, exc):
        return _error(400, str(exc),
                      violations=_violations_payload(exc.violations))

    @app.exception_handler(ParseError)
    async def _unparseable(request, exc):
        return _error(422, str(exc))

    @app.post("/api/projects")
    async def create_project(request: Request):
        project = _parse_body((await request.body()).decode())
        project_id = app.state.store.create(project)
        return _machine({"id": project_id}, 201)

    @app.get("/api/projects/{project_id}")
    def get_project(project_id: str):
        project = app.state.store.get(project_id)
        return Response(serialize_project(project),
                        media_type="application/json")

    @app.put("/api/projects/{project_id}")
    async def replace_project(project_id: str, request: Request):
        project = _parse_body((await request.body()).decode())
        app.state.store.get(project_id)
        app.state.store.replace(project_id, project)
        return _machine({"id": project_id})

    @app.get("/api/projects/{project_id}/influence")
    def influence(project_id: str, type: int = 1):
        project, influences = app.state.store.snapshot(project_id)
        if not 1 <= type <= project.type_count:
            return _error(
                400, f"value type {type} is out of range 1..{project.type_count}"
            )
        return _machine(influence_payload(influences, type))

    def _parse_overrides(text: str) -> dict:
        if not text.strip():
            return {}
        try:
            raw = json.loads(text, parse_float=Decimal)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, exc.lineno, exc.colno) from exc
        if not isinstance(raw, dict):
            raise ParseError("solve body must be a JSON object")
        unknown = set(raw) - {"budget", "betas", "timeout"}
        if unknown:
            raise ParseError(
                f"solve body has unknown field(s): {', '.join(sorted(unknown))}"
            )
        return raw

    def _apply_overrides(project: Project, overrides: dict) -> Project:
        changes = {}
        if "budget" in overrides:
            value = overrides["budget"]
            if not isinstance(value, (int, Decimal)) or isinstance(value, bool):
                raise ParseError("budget override must be a number")
            changes["budget"] = Decimal(value)
        if "betas" in overrides:
            raw = overrides["betas"]
            if not isinstance(raw, dict):
                raise ParseError("betas override must be an object")
            betas = {}
            for key, value in raw.items():
                try:
                    t = int(key)
                except (TypeError, ValueError):
                    raise ParseError(f"betas key {key!r} is not a type index")
                if not isinstance(value, (int, Decimal)) or isinstance(value, bool):
                    raise ParseError(f"beta for type {key} must be a number")
                betas[t] = Decimal(value)
            changes["betas"] = betas
        if not changes:
            return project
        candidate = replace(project, **changes)
        violations = validate_project(candidate)
        if violations:
            raise ValidationFailure(violations)
        return candidate

    def _run_solve(project_id: str, body_text: str, persist: bool) -> Response:
        overrides = _parse_overrides(body_text)
        timeout = solve_timeout
        if "timeout" in overrides:
            value = overrides["timeout"]
            if not isinstance(value, (int, Decimal)) or isinstance(value, bool):
                raise ParseError("timeout override must be a number")
            timeout = float(value)
        project, influences = app.state.store.snapshot(project_id)
        effective = _apply_overrides(project, overrides)
        if persist and effective is not project:
            app.state.store.replace(project_id, effective)
        report = solve_exact(effective, influences, timeout=timeout)
        payload = report_payload(report, effective)
        status_code = 200
        if report.status in (INFEASIBLE, TIMEOUT_NO_INCUMBENT):
            status_code = 409
        return _machine(payload, status_code)

    @app.post("/api/projects/{project_id}/solve")
    async def solve(project_id: str, request: Request):
        return _run_solve(project_id, (await request.body()).decode(),
                          persist=True)

    @app.post("/api/projects/{project_id}/whatif")
    async def whatif(project_id: str, request: Request):
        return _run_solve(project_id, (await request.body()).decode(),
                          persist=False)

    @app.get("/api/value-types")
    def value_types():
        return _machine([
            {"index": vt.index, "name": vt.name}
            for vt in default_value_types()
        ])

    return app
