"""Clients for the two external scoring services: gender and toxicity.

Both clients speak a small remote HTTP contract and carry a deterministic
offline fallback (bundled name table / profanity lexicon) so the whole
engine runs and tests with zero network access. MODKIT_OFFLINE=1 forces
offline mode regardless of configuration.
"""

from __future__ import annotations

import json
import os
import re
import threading
from collections import OrderedDict
from dataclasses import dataclass
from enum import Enum
from importlib import resources

import requests

from .errors import ConfigInvalid, RemoteUnavailable
from .model import Gender, GenderLabel, GenderSource, UNRESOLVED_GENDER

GENDER_CONFIDENCE_MIN = 0.60

# Offline score saturates when a quarter of the tokens match the lexicon.
OFFLINE_TOXICITY_MULTIPLIER = 4

GENDER_API_KEY_ENV = "MODKIT_GENDER_API_KEY"
TOXICITY_API_KEY_ENV = "MODKIT_TOXICITY_API_KEY"
OFFLINE_ENV = "MODKIT_OFFLINE"

_TOKEN_RE = re.compile(r"[a-z0-9']+")


class ClientMode(str, Enum):
    OFFLINE = "offline"
    REMOTE = "remote"


class ToxicityProvider(str, Enum):
    REMOTE_API = "remote_api"
    OFFLINE_LEXICON = "offline_lexicon"


@dataclass(frozen=True)
class ToxicityScore:
    value: float
    provider: ToxicityProvider

    def __post_init__(self):
        if not 0.0 <= self.value <= 1.0:
            raise ValueError(f"toxicity out of range: {self.value}")


@dataclass(frozen=True)
class ClientConfig:
    mode: ClientMode = ClientMode.OFFLINE
    endpoint: str | None = None
    api_key: str | None = None
    timeout_ms: int = 3000
    cache_capacity: int = 4096

    def __post_init__(self):
        if self.cache_capacity <= 0:
            raise ConfigInvalid(["cache_capacity must be positive"])
        if self.mode is ClientMode.REMOTE and (not self.endpoint or not self.api_key):
            raise ConfigInvalid(["remote mode requires endpoint and api_key"])


class _LruCache:
    """Small capacity-bounded LRU map, safe under concurrent access."""

    def __init__(self, capacity: int):
        self._capacity = capacity
        self._data: OrderedDict = OrderedDict()
        self._lock = threading.Lock()

    def get(self, key):
        with self._lock:
            if key not in self._data:
                return None
            self._data.move_to_end(key)
            return self._data[key]

    def put(self, key, value):
        with self._lock:
            self._data[key] = value
            self._data.move_to_end(key)
            while len(self._data) > self._capacity:
                self._data.popitem(last=False)


def _forced_offline() -> bool:
    return os.environ.get(OFFLINE_ENV, "") == "1"


def _load_data_text(filename: str) -> str:
    return resources.files("modkit.data").joinpath(filename).read_text(encoding="utf-8")


def load_gender_table() -> dict[str, tuple[Gender, float]]:
    """Bundled first-name table: name -> (gender, confidence)."""
    raw = json.loads(_load_data_text("gender_names.json"))
    return {name: (Gender(entry[0]), float(entry[1])) for name, entry in raw.items()}


def load_toxicity_lexicon() -> frozenset[str]:
    """Bundled profanity/insult lexicon, one lowercase term per line."""
    terms = set()
    for line in _load_data_text("toxicity_lexicon.txt").splitlines():
        term = line.strip().lower()
        if term and not term.startswith("#"):
            terms.add(term)
    return frozenset(terms)


class GenderClient:
    """Infer a gender label for a first name, with caching.

    Remote contract: GET {endpoint}?name={first_name}&key={api_key}
    returning {"gender": "female"|"male"|null, "accuracy": int 0..100}.
    Remote failures fall back to the offline table.
    """

    def __init__(self, config: ClientConfig | None = None,
                 confidence_min: float = GENDER_CONFIDENCE_MIN):
        self.config = config or ClientConfig()
        self.confidence_min = confidence_min
        self._table = load_gender_table()
        self._cache = _LruCache(self.config.cache_capacity)
        self.remote_calls = 0

    def infer(self, first_name: str) -> GenderLabel:
        if not first_name:
            raise ValueError("first_name must be nonempty")
        name = first_name.lower()
        cached = self._cache.get(name)
        if cached is not None:
            return cached
        if self.config.mode is ClientMode.REMOTE and not _forced_offline():
            try:
                label = self._infer_remote(name)
            except RemoteUnavailable:
                label = self._infer_offline(name)
        else:
            label = self._infer_offline(name)
        self._cache.put(name, label)
        return label

    def _infer_offline(self, name: str) -> GenderLabel:
        entry = self._table.get(name)
        if entry is None:
            return UNRESOLVED_GENDER
        gender, confidence = entry
        value = gender if confidence >= self.confidence_min else Gender.UNKNOWN
        return GenderLabel(value, confidence, GenderSource.OFFLINE_TABLE)

    def _infer_remote(self, name: str) -> GenderLabel:
        self.remote_calls += 1
        try:
            response = requests.get(
                self.config.endpoint,
                params={"name": name, "key": self.config.api_key},
                timeout=self.config.timeout_ms / 1000.0,
            )
            response.raise_for_status()
            payload = response.json()
        except (requests.RequestException, ValueError) as exc:
            raise RemoteUnavailable(f"gender endpoint: {exc}") from None
        gender_raw = payload.get("gender")
        if gender_raw not in ("female", "male"):
            return UNRESOLVED_GENDER
        confidence = max(0.0, min(1.0, int(payload.get("accuracy", 0)) / 100.0))
        value = Gender(gender_raw) if confidence >= self.confidence_min else Gender.UNKNOWN
        return GenderLabel(value, confidence, GenderSource.REMOTE_API)


class ToxicityClient:
    """Score message toxicity in [0, 1].

    Remote contract: POST {endpoint} with {"text": str} returning
    {"toxicity": float}. Offline fallback is lexicon-based:
    min(1, matched_tokens / max(1, tokens) * 4) with case-insensitive
    whole-token matching, matches counted with multiplicity.
    """

    def __init__(self, config: ClientConfig | None = None):
        self.config = config or ClientConfig()
        self._lexicon = load_toxicity_lexicon()
        self._cache = _LruCache(self.config.cache_capacity)
        self.remote_calls = 0

    def score(self, text: str) -> ToxicityScore:
        cached = self._cache.get(text)
        if cached is not None:
            return cached
        if self.config.mode is ClientMode.REMOTE and not _forced_offline():
            try:
                result = self._score_remote(text)
            except RemoteUnavailable:
                result = self._score_offline(text)
        else:
            result = self._score_offline(text)
        self._cache.put(text, result)
        return result

    def _score_offline(self, text: str) -> ToxicityScore:
        tokens = _TOKEN_RE.findall(text.lower())
        matched = sum(1 for token in tokens if token in self._lexicon)
        value = min(1.0, matched / max(1, len(tokens)) * OFFLINE_TOXICITY_MULTIPLIER)
        return ToxicityScore(value, ToxicityProvider.OFFLINE_LEXICON)

    def _score_remote(self, text: str) -> ToxicityScore:
        self.remote_calls += 1
        try:
            response = requests.post(
                self.config.endpoint,
                json={"text": text},
                headers={"Authorization": f"Bearer {self.config.api_key}"},
                timeout=self.config.timeout_ms / 1000.0,
            )
            response.raise_for_status()
            payload = response.json()
            value = float(payload["toxicity"])
        except (requests.RequestException, ValueError, KeyError, TypeError) as exc:
            raise RemoteUnavailable(f"toxicity endpoint: {exc}") from None
        return ToxicityScore(max(0.0, min(1.0, value)), ToxicityProvider.REMOTE_API)
