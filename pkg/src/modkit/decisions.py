"""Human-in-the-loop prompt/decision/action cycle.

Triggered indicators become user-facing prompts (fixed wording, rendered
server-side); the user accepts or dismisses; accepted prompts become
exactly-once action records dispatched through the platform gateway.
Nothing in here acts without a user decision.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from datetime import datetime, timedelta

from .errors import AlreadyDecided, UnknownPrompt
from .indicators import IndicatorReport, report_summary
from .model import DirectedPairKey, Gender, GenderLabel, format_rfc3339, parse_rfc3339
from .store import InteractionStore, PromptState

DEFAULT_PROMPT_TTL = timedelta(days=7)

KIND_LONGITUDINAL = "longitudinal"
KIND_INFORMATIONAL = "informational"
KIND_VOLUMETRIC = "volumetric"

ACTION_BLOCK = "block_account"
ACTION_DELETE_INCOMING = "delete_incoming"

PROMPT_ACTIONS = {
    KIND_LONGITUDINAL: ACTION_BLOCK,
    KIND_INFORMATIONAL: ACTION_BLOCK,
    KIND_VOLUMETRIC: ACTION_DELETE_INCOMING,
}

LONGITUDINAL_TEMPLATE = (
    "This person has tweeted you {count} times before- would you like to block them?"
)
INFORMATIONAL_MESSAGE = (
    "This account has very little information on it- would you like to block them?"
)
VOLUMETRIC_MESSAGE = (
    "You are receiving an unusual volume of tweets for your profile. "
    "Would you like to delete all incoming tweets?"
)


@dataclass(frozen=True)
class UserDecision:
    prompt_id: str
    decision: str          # "accept" | "dismiss"
    decided_at: datetime


@dataclass(frozen=True)
class ActionRecord:
    action_id: str
    kind: str
    subject: dict
    issued_at: datetime
    gateway_result: str

    def to_json(self) -> dict:
        return {
            "action_id": self.action_id,
            "kind": self.kind,
            "subject": self.subject,
            "issued_at": format_rfc3339(self.issued_at),
            "result": self.gateway_result,
        }


def in_scope(originator_gender: GenderLabel, target_gender: GenderLabel,
             include_unknown_originators: bool = True) -> bool:
    """Gender scope filter: protect female targets, ignore male-male traffic.

    Unknown originator genders pass by default: the monitored user opted
    in, and an abuser's anonymity must not disable protection. Unknown
    targets are out of scope (the monitored user's own scope is explicit).
    """
    if originator_gender.value is Gender.UNKNOWN and not include_unknown_originators:
        return False
    male_male = (originator_gender.value is Gender.MALE
                 and target_gender.value is Gender.MALE)
    return target_gender.value is Gender.FEMALE and not male_male


def render_message(kind: str, report: IndicatorReport) -> str:
    if kind == KIND_LONGITUDINAL:
        return LONGITUDINAL_TEMPLATE.format(count=report.longitudinal.prior_abusive_count)
    if kind == KIND_INFORMATIONAL:
        return INFORMATIONAL_MESSAGE
    if kind == KIND_VOLUMETRIC:
        return VOLUMETRIC_MESSAGE
    raise ValueError(f"unknown prompt kind {kind!r}")


def _prompt_id(event_id: str, pair: DirectedPairKey, kind: str) -> str:
    material = f"{event_id}|{pair.originator_id}|{pair.target_id}|{kind}"
    return "p" + hashlib.sha1(material.encode("utf-8")).hexdigest()[:15]


def _action_id(prompt_id: str) -> str:
    return "a" + hashlib.sha1(f"{prompt_id}|action".encode("utf-8")).hexdigest()[:15]


class DecisionEngine:
    """Prompt queue + decision log over the shared store state.

    Writes go through the same single-writer discipline as ingestion; the
    caller (ModerationEngine / service layer) serializes them.
    """

    def __init__(self, store: InteractionStore, gateway=None,
                 prompt_ttl: timedelta = DEFAULT_PROMPT_TTL,
                 volume_window: timedelta = timedelta(hours=1)):
        self.store = store
        self.gateway = gateway
        self.prompt_ttl = prompt_ttl
        self.volume_window = volume_window
        self._blocked_pairs: set[tuple[str, str]] = set()
        self._suppressed_until: dict[str, datetime] = {}
        self._rebuild_action_state()

    def _rebuild_action_state(self) -> None:
        """Re-derive block/suppression state from persisted action records."""
        for action in self.store.actions:
            self._apply_action_effect(
                action["kind"], action["subject"],
                issued_at=action["issued_at"], result=action["result"])

    def _apply_action_effect(self, kind: str, subject: dict, issued_at, result: str) -> None:
        if result not in ("applied", "simulated"):
            return
        if kind == ACTION_BLOCK:
            self._blocked_pairs.add((subject["originator_id"], subject["target_id"]))
        elif kind == ACTION_DELETE_INCOMING:
            when = issued_at if isinstance(issued_at, datetime) else parse_rfc3339(issued_at)
            until = when + timedelta(seconds=subject["window_seconds"])
            prior = self._suppressed_until.get(subject["target_id"])
            if prior is None or until > prior:
                self._suppressed_until[subject["target_id"]] = until

    # -- prompt generation ----------------------------------------------------

    def is_blocked(self, pair: DirectedPairKey) -> bool:
        return (pair.originator_id, pair.target_id) in self._blocked_pairs

    def is_suppressed(self, target_id: str, at: datetime) -> bool:
        until = self._suppressed_until.get(target_id)
        return until is not None and at <= until

    def _has_pending(self, pair: DirectedPairKey, kind: str) -> bool:
        for prompt in self.store.prompts.values():
            if prompt.status != "pending" or prompt.kind != kind:
                continue
            if kind == KIND_VOLUMETRIC:
                # A pile-on arrives on many distinct pairs; one prompt per
                # target is the useful unit (the action is target-scoped).
                if prompt.target_id == pair.target_id:
                    return True
            elif prompt.originator_id == pair.originator_id and prompt.target_id == pair.target_id:
                return True
        return False

    def prompts_for(self, report: IndicatorReport) -> list[PromptState]:
        """One prompt per triggered indicator, deduplicated against the
        pending queue. Scope filtering has already happened upstream."""
        created: list[PromptState] = []
        for kind in report.triggered_kinds():
            if self._has_pending(report.pair, kind):
                continue
            prompt = PromptState(
                prompt_id=_prompt_id(report.event_id, report.pair, kind),
                originator_id=report.pair.originator_id,
                target_id=report.pair.target_id,
                kind=kind,
                message=render_message(kind, report),
                proposed_action=PROMPT_ACTIONS[kind],
                event_id=report.event_id,
                created_at=report.at,
                indicators=report_summary(report),
            )
            self.store.prompts[prompt.prompt_id] = prompt
            created.append(prompt)
        return created

    # -- decisions -------------------------------------------------------------

    def record_decision(self, decision: UserDecision) -> ActionRecord | None:
        """Apply one user decision; accepting dispatches exactly one action."""
        prompt = self.store.prompts.get(decision.prompt_id)
        if prompt is None:
            raise UnknownPrompt(f"no prompt {decision.prompt_id!r}")
        if prompt.status != "pending":
            raise AlreadyDecided(f"prompt {decision.prompt_id!r} is {prompt.status}")
        if decision.decision not in ("accept", "dismiss"):
            raise ValueError(f"decision must be accept or dismiss, got {decision.decision!r}")

        prompt.decided_at = decision.decided_at
        self.store.decisions.append({
            "prompt_id": decision.prompt_id,
            "decision": decision.decision,
            "decided_at": format_rfc3339(decision.decided_at),
        })
        if decision.decision == "dismiss":
            prompt.status = "dismissed"
            return None

        prompt.status = "accepted"
        if prompt.proposed_action == ACTION_BLOCK:
            subject = {"originator_id": prompt.originator_id, "target_id": prompt.target_id}
        else:
            subject = {"target_id": prompt.target_id,
                       "window_seconds": int(self.volume_window.total_seconds())}
        action_id = _action_id(prompt.prompt_id)
        if self.gateway is not None:
            result = self.gateway.execute(action_id, prompt.proposed_action, subject,
                                          decision.decided_at)
        else:
            result = "simulated"
        action = ActionRecord(action_id, prompt.proposed_action, subject,
                              decision.decided_at, result)
        self.store.actions.append(action.to_json())
        self._apply_action_effect(action.kind, action.subject,
                                  issued_at=action.issued_at, result=result)
        return action

    # -- queries ---------------------------------------------------------------

    def expire_stale(self, now: datetime) -> int:
        """Move pending prompts older than the TTL to expired."""
        expired = 0
        for prompt in self.store.prompts.values():
            if prompt.status == "pending" and prompt.created_at < now - self.prompt_ttl:
                prompt.status = "expired"
                expired += 1
        return expired

    def pending_prompts(self, target_id: str, now: datetime) -> list[PromptState]:
        """Pending prompts for the monitored target, newest first."""
        self.expire_stale(now)
        rows = [p for p in self.store.prompts.values()
                if p.target_id == target_id and p.status == "pending"]
        rows.sort(key=lambda p: (p.created_at, p.prompt_id), reverse=True)
        return rows
