"""HTTP service for the moderation console.

The HTTP layer adds no moderation logic of its own: every state change
routes through ModerationEngine operations, so a serve-mode session and a
replay of the same inputs land in the same state.
"""

from __future__ import annotations

import json
import logging
from contextlib import asynccontextmanager
from datetime import timedelta
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .clients import GenderClient, ToxicityClient
from .config import AppConfig
from .engine import ModerationEngine
from .errors import AlreadyDecided, MalformedRecord, UnknownPrompt
from .gateway import ReplayGateway
from .model import iter_jsonl, parse_event, parse_profile
from .store import SCHEMA_VERSION, InteractionStore

log = logging.getLogger(__name__)

SNAPSHOT_FILENAME = "snapshot.modk"


def _error(status: int, code: str, detail: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": code, "detail": detail})


def build_engine(config: AppConfig, profiles_path: str | Path | None = None) -> ModerationEngine:
    """Construct the engine a serve session runs on, restoring any snapshot."""
    snapshot = None
    if config.store_dir:
        candidate = Path(config.store_dir) / SNAPSHOT_FILENAME
        if candidate.exists():
            snapshot = candidate
    if snapshot is not None:
        store = InteractionStore.load_snapshot(
            snapshot, abuse_toxicity_min=config.indicators.abuse_toxicity_min)
        log.info("restored snapshot %s (%d events)", snapshot, store.event_count())
    else:
        store = InteractionStore(abuse_toxicity_min=config.indicators.abuse_toxicity_min)
    gateway = ReplayGateway(
        profiles_path=profiles_path,
        actions_path=Path(config.store_dir) / "actions.jsonl" if config.store_dir else None)
    for profile in gateway.profiles():
        store.add_profile(profile)
    return ModerationEngine(
        store=store,
        gender_client=GenderClient(config.gender_client),
        toxicity_client=ToxicityClient(config.toxicity_client),
        indicator_config=config.indicators,
        monitored_targets=config.monitored_targets,
        gateway=gateway,
        prompt_ttl=config.prompt_ttl,
        include_unknown_originators=config.include_unknown_originators,
    )


def create_app(config: AppConfig, engine: ModerationEngine | None = None) -> FastAPI:
    engine = engine or build_engine(config)

    @asynccontextmanager
    async def lifespan(_: FastAPI):
        yield
        # Writes are serialized behind the engine lock, so once we get here
        # in-flight ingestion has drained; snapshot only on clean shutdown.
        if config.store_dir:
            path = Path(config.store_dir)
            path.mkdir(parents=True, exist_ok=True)
            engine.store.save_snapshot(path / SNAPSHOT_FILENAME)
            log.info("snapshot saved to %s", path / SNAPSHOT_FILENAME)

    app = FastAPI(title="modkit", lifespan=lifespan)
    app.state.engine = engine

    @app.get("/v1/health")
    def health():
        return {"status": "ok", "schema_version": SCHEMA_VERSION}

    @app.post("/v1/ingest")
    async def ingest(request: Request):
        body = (await request.body()).decode("utf-8")
        batch = []
        malformed = 0
        for position, line in iter_jsonl(body):
            try:
                batch.append(parse_event(line, position))
            except MalformedRecord as exc:
                malformed += 1
                log.warning("ingest: %s", exc)
        # Same order discipline as the replay adapter: stable created_at sort.
        batch.sort(key=lambda e: e.created_at)
        prompts_created = 0
        for event in batch:
            prompts_created += len(engine.ingest_event(event))
        return {"ingested": len(batch), "malformed": malformed,
                "prompts_created": prompts_created}

    @app.post("/v1/profiles")
    async def add_profiles(request: Request):
        """Register profile archives over HTTP (JSONL body), replay-adapter style."""
        body = (await request.body()).decode("utf-8")
        added = 0
        malformed = 0
        for position, line in iter_jsonl(body):
            try:
                engine.store.add_profile(parse_profile(line, position))
                added += 1
            except MalformedRecord as exc:
                malformed += 1
                log.warning("profiles: %s", exc)
        return {"added": added, "malformed": malformed}

    @app.get("/v1/prompts")
    def prompts(user: str, status: str = "pending"):
        if status != "pending":
            engine.decisions.expire_stale(engine.store.now())
            rows = [p for p in engine.store.prompts.values()
                    if p.target_id == user and (status == "all" or p.status == status)]
            rows.sort(key=lambda p: (p.created_at, p.prompt_id), reverse=True)
        else:
            rows = engine.pending_prompts(user)
        return {"prompts": [engine.prompt_view(p) for p in rows]}

    @app.post("/v1/decisions")
    async def decide(request: Request):
        try:
            payload = json.loads((await request.body()).decode("utf-8"))
        except json.JSONDecodeError:
            return _error(400, "BadRequest", "body must be a JSON object")
        prompt_id = payload.get("prompt_id")
        decision = payload.get("decision")
        if not isinstance(prompt_id, str) or decision not in ("accept", "dismiss"):
            return _error(400, "BadRequest",
                          "need prompt_id (string) and decision (accept|dismiss)")
        try:
            action = engine.decide(prompt_id, decision)
        except UnknownPrompt as exc:
            return _error(404, "UnknownPrompt", str(exc))
        except AlreadyDecided as exc:
            return _error(409, "AlreadyDecided", str(exc))
        prompt = engine.store.prompts[prompt_id]
        return {"prompt": engine.prompt_view(prompt),
                "action": None if action is None else action.to_json()}

    @app.get("/v1/pairs/{originator_id}/{target_id}")
    def pair(originator_id: str, target_id: str, lookback_days: float | None = None):
        if originator_id == target_id:
            return _error(400, "BadRequest", "originator and target must differ")
        lookback = timedelta(days=lookback_days) if lookback_days else None
        return engine.pair_view(originator_id, target_id, lookback)

    @app.get("/v1/users/{user_id}/indicators")
    def user_indicators(user_id: str, window_hours: float | None = None):
        window = timedelta(hours=window_hours) if window_hours else None
        return engine.user_indicator_view(user_id, window)

    return app
