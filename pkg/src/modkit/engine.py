"""Composition of store, clients, indicators, and the decision cycle.

One ModerationEngine instance is THE write path: replay mode, pipeline
mode, and the HTTP service all drive the same ingest/decide operations,
which is what makes serve and replay produce identical results on
identical inputs.
"""

from __future__ import annotations

import threading
from datetime import datetime, timedelta

from .clients import GenderClient, ToxicityClient
from .decisions import ActionRecord, DecisionEngine, UserDecision, in_scope
from .indicators import IndicatorConfig, evaluate
from .model import (
    DirectedPairKey,
    GenderLabel,
    InteractionEvent,
    UNRESOLVED_GENDER,
    first_name_of,
    format_rfc3339,
)
from .store import InteractionStore, PromptState


class ModerationEngine:
    """Single-writer moderation core for a set of monitored targets."""

    def __init__(self, store: InteractionStore, gender_client: GenderClient,
                 toxicity_client: ToxicityClient, indicator_config: IndicatorConfig,
                 monitored_targets: list[str], gateway=None,
                 prompt_ttl: timedelta = timedelta(days=7),
                 include_unknown_originators: bool = True):
        self.store = store
        self.gender_client = gender_client
        self.toxicity_client = toxicity_client
        self.config = indicator_config
        self.monitored_targets = set(monitored_targets)
        self.include_unknown_originators = include_unknown_originators
        self.decisions = DecisionEngine(
            store, gateway=gateway, prompt_ttl=prompt_ttl,
            volume_window=indicator_config.volume_window)
        self._write_lock = threading.Lock()
        self.out_of_scope_pairs = 0

    # -- labels ---------------------------------------------------------------

    def gender_of(self, user_id: str) -> GenderLabel:
        profile = self.store.profile(user_id)
        if profile is None:
            return UNRESOLVED_GENDER
        name = first_name_of(profile.display_name)
        if name is None:
            return UNRESOLVED_GENDER
        return self.gender_client.infer(name)

    # -- write path -------------------------------------------------------------

    def ingest_event(self, event: InteractionEvent) -> list[PromptState]:
        """Store one event and run the detection cycle for monitored targets.

        Duplicate event ids are no-ops (idempotent re-ingestion), so a
        replayed or doubled feed never yields duplicate prompts.
        """
        with self._write_lock:
            toxicity = self.toxicity_client.score(event.text)
            updated = self.store.append_event(event, toxicity)
            prompts: list[PromptState] = []
            for pair in updated:
                if pair.target_id not in self.monitored_targets:
                    continue
                if not in_scope(self.gender_of(pair.originator_id),
                                self.gender_of(pair.target_id),
                                self.include_unknown_originators):
                    self.out_of_scope_pairs += 1
                    continue
                if self.decisions.is_blocked(pair):
                    continue
                if self.decisions.is_suppressed(pair.target_id, event.created_at):
                    continue
                report = evaluate(event, pair.target_id, self.store,
                                  self.toxicity_client, self.config)
                prompts.extend(self.decisions.prompts_for(report))
            return prompts

    def decide(self, prompt_id: str, decision: str,
               decided_at: datetime | None = None) -> ActionRecord | None:
        with self._write_lock:
            when = decided_at or self.store.now()
            return self.decisions.record_decision(
                UserDecision(prompt_id=prompt_id, decision=decision, decided_at=when))

    # -- read path ----------------------------------------------------------------

    def pending_prompts(self, target_id: str) -> list[PromptState]:
        return self.decisions.pending_prompts(target_id, now=self.store.now())

    def prompt_view(self, prompt: PromptState) -> dict:
        """Prompt JSON enriched with pair handles for display."""
        view = prompt.to_json()
        view["originator_handle"] = self._handle_of(prompt.originator_id)
        view["target_handle"] = self._handle_of(prompt.target_id)
        return view

    def _handle_of(self, user_id: str) -> str:
        profile = self.store.profile(user_id)
        return profile.handle if profile is not None else user_id

    def pair_view(self, originator_id: str, target_id: str,
                  lookback: timedelta | None = None) -> dict:
        """Timeline + per-direction counts for one pair, for the console."""
        lookback = lookback or self.config.lookback
        now = self.store.now()
        key = DirectedPairKey(originator_id, target_id)
        outbound = self.store.pair_history(key, lookback, at=now)
        inbound = self.store.pair_history(key.reversed(), lookback, at=now)
        total = len(outbound.events) + len(inbound.events)
        directionality = None if total == 0 else 100.0 * len(outbound.events) / total
        timeline = sorted(
            [{"event_id": e.event_id, "created_at": format_rfc3339(e.created_at),
              "toxicity": e.toxicity, "direction": "outbound"} for e in outbound.events]
            + [{"event_id": e.event_id, "created_at": format_rfc3339(e.created_at),
                "toxicity": e.toxicity, "direction": "inbound"} for e in inbound.events],
            key=lambda row: (row["created_at"], row["event_id"]))
        return {
            "originator_id": originator_id,
            "target_id": target_id,
            "originator_handle": self._handle_of(originator_id),
            "target_handle": self._handle_of(target_id),
            "outbound_count": len(outbound.events),
            "inbound_count": len(inbound.events),
            "directionality_pct": directionality,
            "abusive_count": outbound.abusive_count,
            "events": timeline,
        }

    def user_indicator_view(self, user_id: str, window: timedelta | None = None) -> dict:
        window = window or self.config.volume_window
        now = self.store.now()
        count = self.store.inbound_count(user_id, window, now)
        baseline = self.store.inbound_baseline(user_id, window,
                                               self.config.baseline_trailing, now)
        return {
            "user_id": user_id,
            "at": format_rfc3339(now),
            "window_seconds": int(window.total_seconds()),
            "inbound_count": count,
            "baseline": baseline,
        }
