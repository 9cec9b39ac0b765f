"""Batch preprocessing pipeline: raw archives -> enriched indicator records.

Reproduces the offline flow end to end: mention extraction, gender
labelling of originator and targets, scope filtering, indicator evaluation
per in-scope (event, target) pair, one enriched JSONL record each.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .clients import GenderClient, ToxicityClient
from .config import AppConfig
from .decisions import in_scope
from .gateway import ReplayGateway
from .indicators import evaluate, report_summary
from .model import UNRESOLVED_GENDER, GenderLabel, first_name_of, format_rfc3339
from .store import InteractionStore


@dataclass(frozen=True)
class PipelineSummary:
    read: int
    malformed: int
    out_of_scope: int
    emitted: int

    def to_json(self) -> dict:
        return {"read": self.read, "malformed": self.malformed,
                "out_of_scope": self.out_of_scope, "emitted": self.emitted}


def _gender_json(label: GenderLabel) -> dict:
    return {"value": label.value.value, "confidence": label.confidence,
            "source": label.source.value}


def run_pipeline(events_path: str | Path, profiles_path: str | Path,
                 out_path: str | Path, config: AppConfig | None = None) -> PipelineSummary:
    """Process the full archive; returns counts {read, malformed,
    out_of_scope, emitted}. The caller decides what zero emitted means
    (the CLI exits nonzero with a diagnostic)."""
    config = config or AppConfig()
    gateway = ReplayGateway(events_path, profiles_path)
    store = InteractionStore(abuse_toxicity_min=config.indicators.abuse_toxicity_min)
    for profile in gateway.profiles():
        store.add_profile(profile)

    gender_client = GenderClient(config.gender_client)
    toxicity_client = ToxicityClient(config.toxicity_client)

    def gender_of(user_id: str) -> GenderLabel:
        profile = store.profile(user_id)
        if profile is None:
            return UNRESOLVED_GENDER
        name = first_name_of(profile.display_name)
        return UNRESOLVED_GENDER if name is None else gender_client.infer(name)

    read = 0
    out_of_scope = 0
    emitted = 0
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    with out_path.open("w", encoding="utf-8") as out:
        for event in gateway.stream_events():
            read += 1
            toxicity = toxicity_client.score(event.text)
            updated = store.append_event(event, toxicity)
            originator_gender = gender_of(event.author_id)
            for pair in updated:
                target_gender = gender_of(pair.target_id)
                if not in_scope(originator_gender, target_gender,
                                config.include_unknown_originators):
                    out_of_scope += 1
                    continue
                report = evaluate(event, pair.target_id, store, toxicity_client,
                                  config.indicators)
                target_profile = store.profile(pair.target_id)
                record = {
                    "event_id": event.event_id,
                    "created_at": format_rfc3339(event.created_at),
                    "originator": {
                        "id": event.author_id,
                        "handle": event.author_handle,
                        "gender": _gender_json(originator_gender),
                    },
                    "target": {
                        "id": pair.target_id,
                        "handle": target_profile.handle if target_profile else pair.target_id,
                        "gender": _gender_json(target_gender),
                    },
                    "toxicity": toxicity.value,
                    "indicators": report_summary(report),
                    "triggered": report.triggered_kinds(),
                }
                out.write(json.dumps(record, sort_keys=True, separators=(",", ":"),
                                     ensure_ascii=False) + "\n")
                emitted += 1

    return PipelineSummary(read=read, malformed=gateway.skipped_records,
                           out_of_scope=out_of_scope, emitted=emitted)
