"""Append-only interaction log with a directed-pair index and window queries.

This is the longitudinal memory of the engine: every public event is kept
forever, indexed by directed (originator, target) pair and by inbound
target, so the indicator computations can ask "how often before?" and
"how much right now vs. usually?" cheaply.

Single-writer / multi-reader: one ingestion thread appends, any number of
threads query. A coarse lock keeps readers from observing partial appends;
at desk scale contention is irrelevant.
"""

from __future__ import annotations

import bisect
import hashlib
import json
import struct
import threading
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from pathlib import Path

from .clients import ToxicityScore, ToxicityProvider
from .errors import CorruptSnapshot
from .model import (
    DirectedPairKey,
    InteractionEvent,
    UserProfile,
    encode_event,
    encode_profile,
    format_rfc3339,
    parse_event,
    parse_profile,
    parse_rfc3339,
)

SCHEMA_VERSION = 1
SNAPSHOT_MAGIC = b"MODK"

ABUSE_TOXICITY_MIN = 0.70          # toxicity at or above this counts as abusive
DEFAULT_LOOKBACK = timedelta(days=365)
SKEW_TOLERANCE = timedelta(minutes=5)

_EPOCH = datetime(1970, 1, 1, tzinfo=timezone.utc)


@dataclass(frozen=True)
class PairEvent:
    """One event as seen from a directed pair's history."""

    event_id: str
    created_at: datetime
    toxicity: float


@dataclass(frozen=True)
class PairHistory:
    """Time-ordered directed interaction record for one (originator, target)."""

    key: DirectedPairKey
    events: tuple[PairEvent, ...]
    abusive_count: int


@dataclass
class PromptState:
    """Persisted prompt-queue entry; owned by the decision engine."""

    prompt_id: str
    originator_id: str
    target_id: str
    kind: str
    message: str
    proposed_action: str
    event_id: str
    created_at: datetime
    status: str = "pending"
    decided_at: datetime | None = None
    indicators: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "prompt_id": self.prompt_id,
            "originator_id": self.originator_id,
            "target_id": self.target_id,
            "kind": self.kind,
            "message": self.message,
            "proposed_action": self.proposed_action,
            "event_id": self.event_id,
            "created_at": format_rfc3339(self.created_at),
            "status": self.status,
            "decided_at": None if self.decided_at is None else format_rfc3339(self.decided_at),
            "indicators": self.indicators,
        }

    @classmethod
    def from_json(cls, raw: dict) -> "PromptState":
        return cls(
            prompt_id=raw["prompt_id"],
            originator_id=raw["originator_id"],
            target_id=raw["target_id"],
            kind=raw["kind"],
            message=raw["message"],
            proposed_action=raw["proposed_action"],
            event_id=raw["event_id"],
            created_at=parse_rfc3339(raw["created_at"]),
            status=raw["status"],
            decided_at=None if raw.get("decided_at") is None else parse_rfc3339(raw["decided_at"]),
            indicators=raw.get("indicators", {}),
        )


class InteractionStore:
    """Event log + profile registry + decision/action/prompt records."""

    def __init__(self, abuse_toxicity_min: float = ABUSE_TOXICITY_MIN,
                 skew_tolerance: timedelta = SKEW_TOLERANCE):
        self.abuse_toxicity_min = abuse_toxicity_min
        self.skew_tolerance = skew_tolerance
        self._lock = threading.RLock()
        self._events: dict[str, InteractionEvent] = {}
        self._toxicity: dict[str, float] = {}
        # Directed pair -> sorted list of (created_at, event_id, toxicity).
        self._pairs: dict[DirectedPairKey, list[tuple[datetime, str, float]]] = {}
        # Target id -> sorted list of (created_at, event_id).
        self._inbound: dict[str, list[tuple[datetime, str]]] = {}
        self._profiles: dict[str, UserProfile] = {}
        self._handles: dict[str, str] = {}           # lowercased handle -> user_id
        self._latest: datetime | None = None
        self.skew_count = 0
        # Decision-engine state sharing the single-writer discipline.
        self.prompts: dict[str, PromptState] = {}
        self.decisions: list[dict] = []
        self.actions: list[dict] = []

    # -- profiles -----------------------------------------------------------

    def add_profile(self, profile: UserProfile) -> None:
        with self._lock:
            self._profiles[profile.user_id] = profile
            self._handles[profile.handle.lower()] = profile.user_id

    def profile(self, user_id: str) -> UserProfile | None:
        with self._lock:
            return self._profiles.get(user_id)

    def resolve_handle(self, handle: str) -> str:
        """Map a mention handle to a user id.

        Unknown handles get the synthetic id '@<handle>' (lowercased) so
        pair history still accrues deterministically for unseen accounts.
        """
        with self._lock:
            return self._handles.get(handle.lower(), "@" + handle.lower())

    def profiles(self) -> list[UserProfile]:
        with self._lock:
            return list(self._profiles.values())

    # -- events -------------------------------------------------------------

    def now(self) -> datetime:
        """Virtual clock: max created_at over all appended events."""
        with self._lock:
            return self._latest or _EPOCH

    def has_event(self, event_id: str) -> bool:
        with self._lock:
            return event_id in self._events

    def event(self, event_id: str) -> InteractionEvent | None:
        with self._lock:
            return self._events.get(event_id)

    def event_count(self) -> int:
        with self._lock:
            return len(self._events)

    def append_event(self, event: InteractionEvent, toxicity: ToxicityScore) -> list[DirectedPairKey]:
        """Record one event; returns the directed pairs it updated.

        Re-appending an already-stored event_id is a no-op returning [].
        Events older than the newest stored one by more than the skew
        tolerance are kept (replay files may be unsorted) and counted.
        """
        with self._lock:
            if event.event_id in self._events:
                return []
            if self._latest is not None and event.created_at < self._latest - self.skew_tolerance:
                self.skew_count += 1
            self._events[event.event_id] = event
            self._toxicity[event.event_id] = toxicity.value
            if self._latest is None or event.created_at > self._latest:
                self._latest = event.created_at
            updated: list[DirectedPairKey] = []
            for handle in event.mentions:
                target_id = self.resolve_handle(handle)
                if target_id == event.author_id:
                    continue
                key = DirectedPairKey(event.author_id, target_id)
                entry = (event.created_at, event.event_id, toxicity.value)
                bisect.insort(self._pairs.setdefault(key, []), entry)
                bisect.insort(self._inbound.setdefault(target_id, []),
                              (event.created_at, event.event_id))
                updated.append(key)
            return updated

    # -- queries ------------------------------------------------------------

    def pair_history(self, key: DirectedPairKey, lookback: timedelta = DEFAULT_LOOKBACK,
                     at: datetime | None = None) -> PairHistory:
        """Directed events within the closed interval [at - lookback, at]."""
        with self._lock:
            when = at or self.now()
            rows = self._pairs.get(key, [])
            lo = when - lookback
            picked = tuple(
                PairEvent(event_id, created_at, tox)
                for created_at, event_id, tox in rows
                if lo <= created_at <= when
            )
            abusive = sum(1 for e in picked if e.toxicity >= self.abuse_toxicity_min)
            return PairHistory(key=key, events=picked, abusive_count=abusive)

    def inbound_count(self, target_id: str, window: timedelta, at: datetime) -> int:
        """Events mentioning target with created_at in (at - window, at]."""
        if window <= timedelta(0):
            raise ValueError("window must be positive")
        with self._lock:
            rows = self._inbound.get(target_id, [])
            lo = bisect.bisect_right(rows, at - window, key=lambda r: r[0])
            hi = bisect.bisect_right(rows, at, key=lambda r: r[0])
            return hi - lo

    def inbound_baseline(self, target_id: str, window: timedelta,
                         trailing: timedelta, at: datetime) -> float:
        """Mean inbound count over the complete windows preceding the current one."""
        if trailing < window:
            raise ValueError("trailing must be at least one window")
        periods = int(trailing / window)
        total = 0
        for k in range(1, periods + 1):
            total += self.inbound_count(target_id, window, at - k * window)
        return total / periods

    # -- snapshot persistence -------------------------------------------------

    def save_snapshot(self, path: str | Path) -> None:
        """Write the whole store to one checksummed snapshot file."""
        with self._lock:
            events = sorted(self._events.values(), key=lambda e: (e.created_at, e.event_id))
            lines: list[str] = []
            for event in events:
                lines.append(json.dumps(
                    {"event": json.loads(encode_event(event)),
                     "toxicity": self._toxicity[event.event_id]},
                    sort_keys=True, separators=(",", ":")))
            profile_rows = sorted(self._profiles.values(), key=lambda p: p.user_id)
            for profile in profile_rows:
                lines.append(encode_profile(profile))
            for decision in self.decisions:
                lines.append(json.dumps(decision, sort_keys=True, separators=(",", ":")))
            for action in self.actions:
                lines.append(json.dumps(action, sort_keys=True, separators=(",", ":")))
            prompt_rows = sorted(self.prompts.values(), key=lambda p: (p.created_at, p.prompt_id))
            for prompt in prompt_rows:
                lines.append(json.dumps(prompt.to_json(), sort_keys=True, separators=(",", ":")))
            body = ("\n".join(lines) + ("\n" if lines else "")).encode("utf-8")
            header = json.dumps(
                {
                    "schema_version": SCHEMA_VERSION,
                    "checksum": "sha256:" + hashlib.sha256(body).hexdigest(),
                    "sections": {
                        "events": len(events),
                        "profiles": len(profile_rows),
                        "decisions": len(self.decisions),
                        "actions": len(self.actions),
                        "prompts": len(prompt_rows),
                    },
                    "skew_count": self.skew_count,
                },
                sort_keys=True, separators=(",", ":")).encode("utf-8")
            blob = SNAPSHOT_MAGIC + struct.pack(">I", len(header)) + header + body
        Path(path).write_bytes(blob)

    @classmethod
    def load_snapshot(cls, path: str | Path, abuse_toxicity_min: float = ABUSE_TOXICITY_MIN,
                      skew_tolerance: timedelta = SKEW_TOLERANCE) -> "InteractionStore":
        """Rebuild a store (and its indexes) from a snapshot file."""
        try:
            blob = Path(path).read_bytes()
        except OSError as exc:
            raise CorruptSnapshot(f"unreadable snapshot: {exc}") from None
        if len(blob) < 8 or blob[:4] != SNAPSHOT_MAGIC:
            raise CorruptSnapshot("missing MODK magic")
        header_len = struct.unpack(">I", blob[4:8])[0]
        if len(blob) < 8 + header_len:
            raise CorruptSnapshot("truncated header")
        try:
            header = json.loads(blob[8:8 + header_len])
        except json.JSONDecodeError:
            raise CorruptSnapshot("unparsable header") from None
        version = header.get("schema_version")
        if version != SCHEMA_VERSION:
            raise CorruptSnapshot(f"schema_version {version} != supported {SCHEMA_VERSION}")
        body = blob[8 + header_len:]
        expected = header.get("checksum", "")
        actual = "sha256:" + hashlib.sha256(body).hexdigest()
        if expected != actual:
            raise CorruptSnapshot(f"checksum mismatch: {expected} != {actual}")
        sections = header.get("sections", {})
        lines = body.decode("utf-8").splitlines()
        counts = [sections.get(name, 0) for name in
                  ("events", "profiles", "decisions", "actions", "prompts")]
        if sum(counts) != len(lines):
            raise CorruptSnapshot("section counts do not match body")

        store = cls(abuse_toxicity_min=abuse_toxicity_min, skew_tolerance=skew_tolerance)
        event_lines = lines[:counts[0]]
        cursor = counts[0]
        profile_lines = lines[cursor:cursor + counts[1]]
        cursor += counts[1]
        decision_lines = lines[cursor:cursor + counts[2]]
        cursor += counts[2]
        action_lines = lines[cursor:cursor + counts[3]]
        cursor += counts[3]
        prompt_lines = lines[cursor:cursor + counts[4]]

        for line in profile_lines:
            store.add_profile(parse_profile(line))
        for line in event_lines:
            raw = json.loads(line)
            event = parse_event(json.dumps(raw["event"]))
            store.append_event(event, ToxicityScore(raw["toxicity"], ToxicityProvider.OFFLINE_LEXICON))
        store.decisions = [json.loads(line) for line in decision_lines]
        store.actions = [json.loads(line) for line in action_lines]
        for line in prompt_lines:
            prompt = PromptState.from_json(json.loads(line))
            store.prompts[prompt.prompt_id] = prompt
        store.skew_count = header.get("skew_count", store.skew_count)
        return store
