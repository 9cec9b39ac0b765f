"""Deterministic end-to-end replay under the virtual clock.

Replays an archived event stream through the full detection cycle,
applies a scripted set of user decisions, and writes two artifacts: the
action log (streamed by the gateway as actions execute) and a transcript
of every prompt with its final status. Identical inputs produce
byte-identical outputs; this is the desk-scale verification surface.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .clients import GenderClient, ToxicityClient
from .config import AppConfig
from .engine import ModerationEngine
from .errors import AlreadyDecided, MalformedRecord
from .gateway import ReplayGateway
from .model import iter_jsonl
from .store import InteractionStore


@dataclass
class ScriptEntry:
    originator_id: str
    target_id: str
    kind: str
    decision: str
    after_event_id: str
    consumed: bool = False


@dataclass(frozen=True)
class ReplaySummary:
    events: int
    malformed: int
    prompts: int
    actions: int
    skew_flags: int

    def to_json(self) -> dict:
        return {"events": self.events, "malformed": self.malformed,
                "prompts": self.prompts, "actions": self.actions,
                "skew_flags": self.skew_flags}


def load_decision_script(path: str | Path) -> list[ScriptEntry]:
    """Decision script JSONL:
    {"prompt_selector": {"pair": [o, t], "kind": k},
     "decision": "accept"|"dismiss", "after_event_id": id}"""
    entries: list[ScriptEntry] = []
    text = Path(path).read_text(encoding="utf-8")
    for position, line in iter_jsonl(text):
        try:
            raw = json.loads(line)
            selector = raw["prompt_selector"]
            pair = selector["pair"]
            entries.append(ScriptEntry(
                originator_id=str(pair[0]),
                target_id=str(pair[1]),
                kind=str(selector["kind"]),
                decision=str(raw["decision"]),
                after_event_id=str(raw["after_event_id"]),
            ))
        except (KeyError, IndexError, TypeError, json.JSONDecodeError) as exc:
            raise MalformedRecord(f"bad decision script entry: {exc}", position) from None
    return entries


def run_replay(events_path: str | Path, profiles_path: str | Path,
               decisions_path: str | Path | None, actions_out: str | Path,
               transcript_out: str | Path,
               config: AppConfig | None = None) -> ReplaySummary:
    config = config or AppConfig()
    gateway = ReplayGateway(events_path, profiles_path, actions_path=actions_out)
    store = InteractionStore(abuse_toxicity_min=config.indicators.abuse_toxicity_min)
    for profile in gateway.profiles():
        store.add_profile(profile)
    engine = ModerationEngine(
        store=store,
        gender_client=GenderClient(config.gender_client),
        toxicity_client=ToxicityClient(config.toxicity_client),
        indicator_config=config.indicators,
        monitored_targets=config.monitored_targets,
        gateway=gateway,
        prompt_ttl=config.prompt_ttl,
        include_unknown_originators=config.include_unknown_originators,
    )

    script = load_decision_script(decisions_path) if decisions_path else []
    by_anchor: dict[str, list[ScriptEntry]] = {}
    for entry in script:
        by_anchor.setdefault(entry.after_event_id, []).append(entry)

    events = 0
    for event in gateway.stream_events():
        events += 1
        engine.ingest_event(event)
        for entry in by_anchor.get(event.event_id, []):
            if entry.consumed:
                continue
            _apply_entry(engine, entry)

    # Final TTL sweep so the transcript shows terminal statuses.
    engine.decisions.expire_stale(store.now())

    transcript_path = Path(transcript_out)
    transcript_path.parent.mkdir(parents=True, exist_ok=True)
    prompts = sorted(store.prompts.values(), key=lambda p: (p.created_at, p.prompt_id))
    with transcript_path.open("w", encoding="utf-8") as fh:
        for prompt in prompts:
            fh.write(json.dumps(prompt.to_json(), sort_keys=True,
                                separators=(",", ":"), ensure_ascii=False) + "\n")

    return ReplaySummary(
        events=events,
        malformed=gateway.skipped_records,
        prompts=len(prompts),
        actions=len(store.actions),
        skew_flags=store.skew_count,
    )


def _apply_entry(engine: ModerationEngine, entry: ScriptEntry) -> None:
    """Apply one scripted decision to the matching PENDING prompt, if any.

    No match is a silent no-op: on re-ingested duplicate streams the
    prompt is already decided, and exactly-once semantics must hold.
    """
    for prompt in engine.pending_prompts(entry.target_id):
        if prompt.kind == entry.kind and prompt.originator_id == entry.originator_id:
            try:
                engine.decide(prompt.prompt_id, entry.decision)
            except AlreadyDecided:
                return
            entry.consumed = True
            return
