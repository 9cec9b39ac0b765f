"""Platform boundary: event/profile sources and action execution.

Two adapters share one contract. The replay adapter reads local JSONL
archives, sorts events into created_at order, and records actions to an
append-only log with zero network activity. The live adapter is a
compile-complete stub: it validates calls, formats the wire requests it
would send, enforces its advertised rate limit, and reports every action
as failed (real write access is out of scope).
"""

from __future__ import annotations

import json
import logging
import threading
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path
from typing import Iterator

from .errors import (
    CapabilityUnsupported,
    MalformedRecord,
    RateLimited,
    SourceUnavailable,
    UnknownProfile,
)
from .model import (
    InteractionEvent,
    UserProfile,
    format_rfc3339,
    iter_jsonl,
    parse_event,
    parse_profile,
)

log = logging.getLogger(__name__)

ACTION_KINDS = ("block_account", "delete_incoming")


@dataclass(frozen=True)
class GatewayCapability:
    can_read_stream: bool
    can_block: bool
    can_suppress: bool
    rate_limit_per_15min: int


class ReplayGateway:
    """Deterministic offline adapter over archived events and profiles."""

    capabilities = GatewayCapability(
        can_read_stream=True, can_block=True, can_suppress=True,
        rate_limit_per_15min=1_000_000)

    def __init__(self, events_path: str | Path | None = None,
                 profiles_path: str | Path | None = None,
                 actions_path: str | Path | None = None):
        self.events_path = Path(events_path) if events_path else None
        self.actions_path = Path(actions_path) if actions_path else None
        self.skipped_records = 0
        self._profiles: dict[str, UserProfile] = {}
        self._executed: dict[str, str] = {}       # action_id -> result
        self.action_log: list[dict] = []
        self._lock = threading.Lock()
        if profiles_path is not None:
            self._load_profiles(Path(profiles_path))
        if self.actions_path is not None:
            # Fresh log per run keeps replays byte-identical.
            self.actions_path.parent.mkdir(parents=True, exist_ok=True)
            self.actions_path.write_text("", encoding="utf-8")

    def _load_profiles(self, path: Path) -> None:
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise SourceUnavailable(f"profiles archive {path}: {exc}") from None
        for position, line in iter_jsonl(text):
            try:
                profile = parse_profile(line, position)
            except MalformedRecord as exc:
                self.skipped_records += 1
                log.warning("skipping profile record: %s", exc)
                continue
            self._profiles[profile.user_id] = profile

    def stream_events(self) -> Iterator[InteractionEvent]:
        """Archived events in created_at order; malformed lines are skipped
        and counted, ties keep file order."""
        if self.events_path is None:
            raise SourceUnavailable("no events archive configured")
        try:
            text = self.events_path.read_text(encoding="utf-8")
        except OSError as exc:
            raise SourceUnavailable(f"events archive {self.events_path}: {exc}") from None
        events: list[InteractionEvent] = []
        for position, line in iter_jsonl(text):
            try:
                events.append(parse_event(line, position))
            except MalformedRecord as exc:
                self.skipped_records += 1
                log.warning("skipping event record: %s", exc)
        events.sort(key=lambda e: e.created_at)     # stable: ties keep file order
        yield from events

    def profiles(self) -> list[UserProfile]:
        return list(self._profiles.values())

    def fetch_profile(self, user_id: str) -> UserProfile:
        profile = self._profiles.get(user_id)
        if profile is None:
            raise UnknownProfile(f"no archived profile for {user_id!r}")
        return profile

    def execute(self, action_id: str, kind: str, subject: dict, issued_at: datetime) -> str:
        """Record one action; re-executing the same action_id is a no-op
        returning the prior result (exactly-once log)."""
        if kind not in ACTION_KINDS:
            raise CapabilityUnsupported(f"unknown action kind {kind!r}")
        if kind == "block_account" and not self.capabilities.can_block:
            raise CapabilityUnsupported("adapter cannot block accounts")
        if kind == "delete_incoming" and not self.capabilities.can_suppress:
            raise CapabilityUnsupported("adapter cannot suppress inbound events")
        with self._lock:
            prior = self._executed.get(action_id)
            if prior is not None:
                return prior
            result = "simulated"
            record = {
                "action_id": action_id,
                "kind": kind,
                "subject": subject,
                "issued_at": format_rfc3339(issued_at),
                "result": result,
            }
            self._executed[action_id] = result
            self.action_log.append(record)
            if self.actions_path is not None:
                with self.actions_path.open("a", encoding="utf-8") as fh:
                    fh.write(json.dumps(record, sort_keys=True, separators=(",", ":")) + "\n")
            return result


class NoCapabilityGateway(ReplayGateway):
    """Replay adapter with actions disabled; for capability-contract tests."""

    capabilities = GatewayCapability(
        can_read_stream=True, can_block=False, can_suppress=False,
        rate_limit_per_15min=1_000_000)


class LiveGatewayStub:
    """Live-API contract stub: validates, rate-limits, never writes.

    Formats the wire call each operation would make so the remote contract
    is pinned down, but returns failed/NotImplemented for all actions.
    """

    capabilities = GatewayCapability(
        can_read_stream=True, can_block=True, can_suppress=True,
        rate_limit_per_15min=900)

    def __init__(self, base_url: str = "https://api.example.invalid/2",
                 bearer_token: str | None = None):
        self.base_url = base_url.rstrip("/")
        self.bearer_token = bearer_token
        self.wire_log: list[dict] = []
        self._calls_in_interval = 0
        self._lock = threading.Lock()

    def _charge(self) -> None:
        with self._lock:
            self._calls_in_interval += 1
            if self._calls_in_interval > self.capabilities.rate_limit_per_15min:
                raise RateLimited(retry_after_s=900.0)

    def reset_interval(self) -> None:
        with self._lock:
            self._calls_in_interval = 0

    def stream_events(self) -> Iterator[InteractionEvent]:
        self._charge()
        raise SourceUnavailable("live streaming is not implemented in the stub")

    def fetch_profile(self, user_id: str) -> UserProfile:
        self._charge()
        self.wire_log.append({
            "method": "GET",
            "url": f"{self.base_url}/users/{user_id}",
        })
        raise UnknownProfile(f"live profile lookup not implemented for {user_id!r}")

    def execute(self, action_id: str, kind: str, subject: dict, issued_at: datetime) -> str:
        if kind not in ACTION_KINDS:
            raise CapabilityUnsupported(f"unknown action kind {kind!r}")
        self._charge()
        if kind == "block_account":
            wire = {"method": "POST",
                    "url": f"{self.base_url}/users/{subject['target_id']}/blocking",
                    "json": {"target_user_id": subject["originator_id"]}}
        else:
            wire = {"method": "POST",
                    "url": f"{self.base_url}/users/{subject['target_id']}/mutes/incoming",
                    "json": {"window_seconds": subject["window_seconds"]}}
        self.wire_log.append(wire)
        log.info("live gateway stub: NotImplemented for %s (%s)", kind, action_id)
        return "failed"
