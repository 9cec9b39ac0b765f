"""Canonical domain types, the mention parser, and the JSONL codecs.

Every other module works in terms of the value types defined here. All of
them are frozen dataclasses: safe to share between threads, hashable where
it matters, and round-trippable through the JSONL codecs bit-exactly.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from datetime import datetime, timezone
from enum import Enum
from typing import Iterator

from .errors import MalformedRecord

# Platform conventions: handles are 1..15 word characters; at most 5
# mentions are kept per message (observed maximum in the source corpus).
HANDLE_RE = re.compile(r"^[A-Za-z0-9_]{1,15}$")
MAX_MENTIONS = 5

_WORD_CHARS = frozenset("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_")

# A mention is '@' not immediately preceded by a word character (rules out
# email-like infixes), followed by a maximal word-character run of 1..15
# chars. Longer runs are not valid handles and yield no mention.
_MENTION_RE = re.compile(r"(?<![A-Za-z0-9_])@([A-Za-z0-9_]+)")


class Gender(str, Enum):
    FEMALE = "female"
    MALE = "male"
    UNKNOWN = "unknown"


class GenderSource(str, Enum):
    REMOTE_API = "remote_api"
    OFFLINE_TABLE = "offline_table"
    UNRESOLVED = "unresolved"


@dataclass(frozen=True)
class GenderLabel:
    """Inferred gender for a first name, with provider confidence."""

    value: Gender
    confidence: float
    source: GenderSource

    def __post_init__(self):
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"confidence out of range: {self.confidence}")


UNRESOLVED_GENDER = GenderLabel(Gender.UNKNOWN, 0.0, GenderSource.UNRESOLVED)


@dataclass(frozen=True)
class DirectedPairKey:
    """Ordered (originator, target) pair; direction matters."""

    originator_id: str
    target_id: str

    def __post_init__(self):
        if self.originator_id == self.target_id:
            raise ValueError("originator and target must differ")

    def reversed(self) -> "DirectedPairKey":
        return DirectedPairKey(self.target_id, self.originator_id)


@dataclass(frozen=True)
class InteractionEvent:
    """One public message with its extracted mention targets."""

    event_id: str
    author_id: str
    author_handle: str
    text: str
    created_at: datetime
    mentions: tuple[str, ...] = ()
    reply_to_event_id: str | None = None
    lang: str | None = None


@dataclass(frozen=True)
class UserProfile:
    """Public biographic features of one account snapshot."""

    user_id: str
    handle: str
    display_name: str
    bio: str
    urls: tuple[str, ...]
    has_image: bool
    location: str | None
    created_at: datetime
    followers_count: int
    tweet_count: int

    def __post_init__(self):
        if not self.handle:
            raise ValueError("handle must be nonempty")
        if self.followers_count < 0 or self.tweet_count < 0:
            raise ValueError("counts must be nonnegative")


# ---------------------------------------------------------------------------
# Timestamps

def parse_rfc3339(value: str) -> datetime:
    """Parse an RFC-3339 timestamp to a UTC datetime at second precision.

    Accepts 'Z' or numeric offsets and fractional seconds; the fractional
    part is discarded (domain timestamps are second-precision).
    """
    text = value.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    try:
        dt = datetime.fromisoformat(text)
    except ValueError as exc:
        raise ValueError(f"bad RFC-3339 timestamp {value!r}: {exc}") from None
    if dt.tzinfo is None:
        raise ValueError(f"timestamp {value!r} has no UTC offset")
    return dt.astimezone(timezone.utc).replace(microsecond=0)


def format_rfc3339(dt: datetime) -> str:
    """Canonical second-precision UTC form, always 'Z'-suffixed."""
    return dt.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


# ---------------------------------------------------------------------------
# Mention extraction

def extract_mentions(text: str, author_handle: str) -> list[str]:
    """Extract mention targets from message text, in text order.

    A mention is '@' followed by a maximal run of [A-Za-z0-9_] of length
    1..15; '@' directly preceded by a word character (as in an email
    address) does not start a mention. Case-insensitive duplicates collapse
    to the first occurrence, the author's own handle is dropped, and the
    result is capped at the first 5 handles.
    """
    seen: set[str] = set()
    author_key = author_handle.lower()
    out: list[str] = []
    for match in _MENTION_RE.finditer(text):
        handle = match.group(1)
        if len(handle) > 15:
            continue
        key = handle.lower()
        if key in seen or key == author_key:
            continue
        seen.add(key)
        out.append(handle)
        if len(out) == MAX_MENTIONS:
            break
    return out


def first_name_of(display_name: str) -> str | None:
    """First whitespace-delimited token, letters only, lowercased.

    Returns None when nothing letter-like survives ("💀💀💀", empty names).
    """
    tokens = display_name.split()
    if not tokens:
        return None
    letters = "".join(ch for ch in tokens[0] if ch.isalpha()).lower()
    return letters or None


# ---------------------------------------------------------------------------
# JSONL codecs

_EVENT_REQUIRED = ("event_id", "author_id", "author_handle", "text", "created_at")
_PROFILE_REQUIRED = (
    "user_id",
    "handle",
    "display_name",
    "bio",
    "urls",
    "has_image",
    "created_at",
    "followers_count",
    "tweet_count",
)


def parse_event(line: str, position: int | None = None) -> InteractionEvent:
    """Decode one JSONL event record; mentions are recomputed from text.

    Stored mention lists in the input are ignored by design: the parser is
    the single source of truth for targets.
    """
    try:
        raw = json.loads(line)
    except json.JSONDecodeError as exc:
        raise MalformedRecord(f"not valid JSON: {exc.msg}", position) from None
    if not isinstance(raw, dict):
        raise MalformedRecord("record is not a JSON object", position)
    for key in _EVENT_REQUIRED:
        if key not in raw or raw[key] is None:
            raise MalformedRecord(f"missing required field {key!r}", position)
    try:
        created_at = parse_rfc3339(str(raw["created_at"]))
    except ValueError as exc:
        raise MalformedRecord(str(exc), position) from None
    author_handle = str(raw["author_handle"]).lstrip("@")
    if not author_handle:
        raise MalformedRecord("author_handle is empty", position)
    text = str(raw["text"])
    return InteractionEvent(
        event_id=str(raw["event_id"]),
        author_id=str(raw["author_id"]),
        author_handle=author_handle,
        text=text,
        created_at=created_at,
        mentions=tuple(extract_mentions(text, author_handle)),
        reply_to_event_id=None if raw.get("reply_to_event_id") is None else str(raw["reply_to_event_id"]),
        lang=None if raw.get("lang") is None else str(raw["lang"]),
    )


def encode_event(event: InteractionEvent) -> str:
    """One canonical JSONL line; decode(encode(e)) == e field-for-field."""
    return json.dumps(
        {
            "event_id": event.event_id,
            "author_id": event.author_id,
            "author_handle": event.author_handle,
            "text": event.text,
            "created_at": format_rfc3339(event.created_at),
            "reply_to_event_id": event.reply_to_event_id,
            "lang": event.lang,
        },
        ensure_ascii=False,
        sort_keys=True,
        separators=(",", ":"),
    )


def parse_profile(line: str, position: int | None = None) -> UserProfile:
    """Decode one JSONL profile record."""
    try:
        raw = json.loads(line)
    except json.JSONDecodeError as exc:
        raise MalformedRecord(f"not valid JSON: {exc.msg}", position) from None
    if not isinstance(raw, dict):
        raise MalformedRecord("record is not a JSON object", position)
    for key in _PROFILE_REQUIRED:
        if key not in raw or raw[key] is None:
            raise MalformedRecord(f"missing required field {key!r}", position)
    try:
        created_at = parse_rfc3339(str(raw["created_at"]))
    except ValueError as exc:
        raise MalformedRecord(str(exc), position) from None
    try:
        return UserProfile(
            user_id=str(raw["user_id"]),
            handle=str(raw["handle"]).lstrip("@"),
            display_name=str(raw["display_name"]),
            bio=str(raw["bio"]),
            urls=tuple(str(u) for u in raw["urls"]),
            has_image=bool(raw["has_image"]),
            location=None if raw.get("location") is None else str(raw["location"]),
            created_at=created_at,
            followers_count=int(raw["followers_count"]),
            tweet_count=int(raw["tweet_count"]),
        )
    except (TypeError, ValueError) as exc:
        raise MalformedRecord(str(exc), position) from None


def encode_profile(profile: UserProfile) -> str:
    return json.dumps(
        {
            "user_id": profile.user_id,
            "handle": profile.handle,
            "display_name": profile.display_name,
            "bio": profile.bio,
            "urls": list(profile.urls),
            "has_image": profile.has_image,
            "location": profile.location,
            "created_at": format_rfc3339(profile.created_at),
            "followers_count": profile.followers_count,
            "tweet_count": profile.tweet_count,
        },
        ensure_ascii=False,
        sort_keys=True,
        separators=(",", ":"),
    )


def iter_jsonl(text: str) -> Iterator[tuple[int, str]]:
    """Yield (1-based line number, line) for nonblank lines of a JSONL blob."""
    for number, line in enumerate(text.splitlines(), start=1):
        if line.strip():
            yield number, line
