"""HTTP service for collecting human corrections of automatic alignments.

Annotators see each meeting's pre-alignment, fix entries one at a time
under optimistic concurrency (every write carries the revision it was based
on), and submit when done.  State lives in plain alignment JSON files plus
a small sessions index, so an annotated corpus is just a directory tree.
"""

from __future__ import annotations

import json
import statistics
import threading
from dataclasses import dataclass, replace
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .config import AlignConfig
from .corpus_model import (
    AlignmentEntry,
    MeetingBundle,
    SegmentAlignment,
    alignment_to_dict,
    atomic_write_text,
    load_alignment,
    load_meeting_dir,
    report_to_dict,
    transcription_to_dict,
    write_alignment,
)
from .errors import AlignsumError, ConflictError, NotFoundError, ValidationError
from .metrics import annotator_score
from .pipeline import align_meeting, diagonal_alignment, resolve_embeddings

STATUS_OPEN = "open"
STATUS_SUBMITTED = "submitted"


class EntryUpdate(BaseModel):
    r_seg: int
    irrelevant: bool = False
    expected_revision: int


class _ApiError(Exception):
    """Error carrying the wire shape {code, message, details}."""

    def __init__(self, status: int, code: str, message: str, details: dict | None = None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.details = details or {}

    @classmethod
    def from_alignsum(cls, exc: AlignsumError) -> _ApiError:
        if isinstance(exc, NotFoundError):
            return cls(404, "not_found", str(exc))
        if isinstance(exc, ConflictError):
            return cls(409, "conflict", str(exc))
        return cls(400, "validation", str(exc))

    def response(self) -> JSONResponse:
        return JSONResponse(
            status_code=self.status,
            content={"code": self.code, "message": self.message, "details": self.details},
        )


@dataclass
class _Session:
    bundle: MeetingBundle
    pre: SegmentAlignment
    working: SegmentAlignment
    status: str
    lock: threading.Lock


class AnnotationStore:
    """All meeting sessions under one data directory."""

    def __init__(self, data_dir: str | Path, config: AlignConfig | None = None):
        self.data_dir = Path(data_dir)
        self.config = config
        self._embeddings = resolve_embeddings(config) if config else None
        self._sessions: dict[str, _Session] = {}
        self._registry_lock = threading.Lock()
        self.meeting_ids = sorted(
            p.name
            for p in self.data_dir.iterdir()
            if (p / "transcription.json").exists() and (p / "report.json").exists()
        )
        self._statuses = self._load_statuses()

    # -- persistence ------------------------------------------------------

    def _sessions_path(self) -> Path:
        return self.data_dir / "sessions.json"

    def _load_statuses(self) -> dict[str, str]:
        path = self._sessions_path()
        if not path.exists():
            return {}
        data = json.loads(path.read_text(encoding="utf-8"))
        return {str(k): str(v) for k, v in data.items()}

    def _save_statuses(self) -> None:
        atomic_write_text(
            self._sessions_path(),
            json.dumps(self._statuses, indent=2, sort_keys=True) + "\n",
        )

    def _meeting_dir(self, meeting_id: str) -> Path:
        if meeting_id not in self.meeting_ids:
            raise NotFoundError(f"unknown meeting {meeting_id!r}")
        return self.data_dir / meeting_id

    # -- sessions ---------------------------------------------------------

    def session(self, meeting_id: str) -> _Session:
        with self._registry_lock:
            if meeting_id in self._sessions:
                return self._sessions[meeting_id]
            meeting_dir = self._meeting_dir(meeting_id)
            bundle = load_meeting_dir(meeting_dir, meeting_id=meeting_id)
            pre_path = meeting_dir / "pre_alignment.json"
            if pre_path.exists():
                pre = load_alignment(pre_path)
            else:
                if self.config is not None:
                    pre = align_meeting(bundle, self.config, self._embeddings)
                else:
                    pre = diagonal_alignment(bundle)
                write_alignment(pre, pre_path)
            working_path = meeting_dir / "alignment.json"
            if working_path.exists():
                working = load_alignment(working_path)
                working.validate_against(bundle)
            else:
                working = replace_entries(pre, list(pre.entries))
                write_alignment(working, working_path)
            session = _Session(
                bundle=bundle,
                pre=pre,
                working=working,
                status=self._statuses.get(meeting_id, STATUS_OPEN),
                lock=threading.Lock(),
            )
            self._sessions[meeting_id] = session
            return session

    def listing(self) -> list[dict]:
        rows = []
        for meeting_id in self.meeting_ids:
            session = self._sessions.get(meeting_id)
            if session is not None:
                revision = session.working.revision
                status = session.status
            else:
                working_path = self.data_dir / meeting_id / "alignment.json"
                revision = (
                    load_alignment(working_path).revision if working_path.exists() else 0
                )
                status = self._statuses.get(meeting_id, STATUS_OPEN)
            rows.append(
                {"meeting_id": meeting_id, "status": status, "revision": revision}
            )
        return rows

    def view(self, meeting_id: str) -> dict:
        session = self.session(meeting_id)
        return {
            "meeting_id": meeting_id,
            "status": session.status,
            "revision": session.working.revision,
            "transcription": transcription_to_dict(session.bundle.transcription),
            "report": report_to_dict(session.bundle.report),
            "pre_alignment": alignment_to_dict(session.pre),
            "working_alignment": alignment_to_dict(session.working),
        }

    def update_entry(self, meeting_id: str, t_seg: int, update: EntryUpdate) -> dict:
        session = self.session(meeting_id)
        with session.lock:
            if session.status != STATUS_OPEN:
                raise ConflictError(f"meeting {meeting_id!r} is already submitted")
            working = session.working
            if update.expected_revision != working.revision:
                raise _ApiError(
                    409,
                    "conflict",
                    "alignment changed since it was loaded",
                    {
                        "expected_revision": update.expected_revision,
                        "revision": working.revision,
                    },
                )
            if not 0 <= t_seg < len(working.entries):
                raise NotFoundError(f"no transcription segment {t_seg}")
            n = session.bundle.report.n_segments
            if not 0 <= update.r_seg < n:
                raise _ApiError(
                    400,
                    "validation",
                    f"r_seg must be in [0, {n})",
                    {"r_seg": update.r_seg, "n_report_segments": n},
                )
            self._check_monotone(working, t_seg, update.r_seg)
            entries = list(working.entries)
            entries[t_seg] = AlignmentEntry(
                t_seg=t_seg, r_seg=update.r_seg, irrelevant=update.irrelevant
            )
            candidate = replace_entries(working, entries)
            candidate.revision = working.revision + 1
            write_alignment(candidate, self._meeting_dir(meeting_id) / "alignment.json")
            session.working = candidate
            return {"meeting_id": meeting_id, "revision": candidate.revision}

    @staticmethod
    def _check_monotone(working: SegmentAlignment, t_seg: int, r_seg: int) -> None:
        entries = working.entries
        if t_seg > 0 and r_seg < entries[t_seg - 1].r_seg:
            neighbor = entries[t_seg - 1]
            raise _ApiError(
                400,
                "validation",
                f"segment {t_seg} cannot map before segment {neighbor.t_seg} "
                f"(r_seg {neighbor.r_seg})",
                {
                    "t_seg": t_seg,
                    "r_seg": r_seg,
                    "neighbor_t_seg": neighbor.t_seg,
                    "neighbor_r_seg": neighbor.r_seg,
                },
            )
        if t_seg + 1 < len(entries) and r_seg > entries[t_seg + 1].r_seg:
            neighbor = entries[t_seg + 1]
            raise _ApiError(
                400,
                "validation",
                f"segment {t_seg} cannot map past segment {neighbor.t_seg} "
                f"(r_seg {neighbor.r_seg})",
                {
                    "t_seg": t_seg,
                    "r_seg": r_seg,
                    "neighbor_t_seg": neighbor.t_seg,
                    "neighbor_r_seg": neighbor.r_seg,
                },
            )

    def submit(self, meeting_id: str) -> dict:
        session = self.session(meeting_id)
        with session.lock:
            if session.status != STATUS_OPEN:
                raise ConflictError(f"meeting {meeting_id!r} is already submitted")
            score = annotator_score(session.pre, session.working)
            gold = replace_entries(session.working, list(session.working.entries))
            gold.source = "gold"
            gold.revision = session.working.revision
            write_alignment(gold, self._meeting_dir(meeting_id) / "alignment.json")
            session.working = gold
            session.status = STATUS_SUBMITTED
            self._statuses[meeting_id] = STATUS_SUBMITTED
            self._save_statuses()
            return {
                "meeting_id": meeting_id,
                "status": STATUS_SUBMITTED,
                "annotator_score": score,
                "revision": gold.revision,
            }

    def progress(self) -> dict:
        per_meeting = []
        for meeting_id in self.meeting_ids:
            status = self._statuses.get(meeting_id, STATUS_OPEN)
            if status != STATUS_SUBMITTED:
                continue
            session = self.session(meeting_id)
            per_meeting.append(
                {
                    "meeting_id": meeting_id,
                    "annotator_score": annotator_score(session.pre, session.working),
                    "status": status,
                }
            )
        scores = [row["annotator_score"] for row in per_meeting]
        return {
            "per_meeting": per_meeting,
            "mean": statistics.fmean(scores) if scores else None,
            "median": statistics.median(scores) if scores else None,
        }


def replace_entries(
    alignment: SegmentAlignment, entries: list[AlignmentEntry]
) -> SegmentAlignment:
    """Copy an alignment with new entries, preserving the metadata."""
    return SegmentAlignment(
        meeting_id=alignment.meeting_id,
        source=alignment.source,
        entries=entries,
        config=alignment.config,
        revision=alignment.revision,
    )


def create_app(
    data_dir: str | Path,
    config: AlignConfig | None = None,
    static_dir: str | Path | None = None,
) -> FastAPI:
    """Build the annotation app over a meeting directory tree.

    With a config, pre-alignments come from the configured aligner; without
    one, from the diagonal baseline.  ``static_dir`` (the built UI bundle)
    is served at the root when given.
    """
    store = AnnotationStore(data_dir, config)
    app = FastAPI(title="alignsum annotation service")
    app.state.store = store

    @app.exception_handler(_ApiError)
    def handle_api_error(request: Request, exc: _ApiError) -> JSONResponse:
        return exc.response()

    @app.exception_handler(AlignsumError)
    def handle_alignsum_error(request: Request, exc: AlignsumError) -> JSONResponse:
        return _ApiError.from_alignsum(exc).response()

    @app.exception_handler(RequestValidationError)
    def handle_request_error(request: Request, exc: RequestValidationError) -> JSONResponse:
        return _ApiError(
            400, "validation", "malformed request", {"errors": exc.errors()}
        ).response()

    @app.get("/api/meetings")
    def list_meetings() -> list[dict]:
        return store.listing()

    @app.get("/api/meetings/{meeting_id}")
    def get_meeting(meeting_id: str) -> dict:
        return store.view(meeting_id)

    @app.put("/api/meetings/{meeting_id}/entries/{t_seg}")
    def put_entry(meeting_id: str, t_seg: int, update: EntryUpdate) -> dict:
        return store.update_entry(meeting_id, t_seg, update)

    @app.post("/api/meetings/{meeting_id}/submit")
    def submit(meeting_id: str) -> dict:
        return store.submit(meeting_id)

    @app.get("/api/progress")
    def progress() -> dict:
        return store.progress()

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app
