"""Application configuration: JSON file -> validated AppConfig.

`modkit config --print-defaults` emits the full default document; any
subset may be supplied and is merged over the defaults. Validation
collects every violation before failing so a bad file reports all its
problems at once.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from datetime import timedelta
from pathlib import Path

from .clients import GENDER_API_KEY_ENV, TOXICITY_API_KEY_ENV, ClientConfig, ClientMode
from .errors import ConfigInvalid
from .indicators import IndicatorConfig

_CLIENT_KEY_ENV = {"gender": GENDER_API_KEY_ENV, "toxicity": TOXICITY_API_KEY_ENV}

DEFAULT_LISTEN = "127.0.0.1:8400"


@dataclass
class AppConfig:
    indicators: IndicatorConfig = field(default_factory=IndicatorConfig)
    gender_client: ClientConfig = field(default_factory=ClientConfig)
    toxicity_client: ClientConfig = field(default_factory=ClientConfig)
    monitored_targets: list[str] = field(default_factory=list)
    store_dir: str | None = None
    prompt_ttl_days: float = 7.0
    listen_address: str = DEFAULT_LISTEN
    include_unknown_originators: bool = True

    @property
    def prompt_ttl(self) -> timedelta:
        return timedelta(days=self.prompt_ttl_days)

    def listen_host_port(self) -> tuple[str, int]:
        host, _, port = self.listen_address.rpartition(":")
        return host, int(port)


def default_config_json() -> dict:
    cfg = AppConfig()
    ind = cfg.indicators
    return {
        "indicators": {
            "low_info_threshold": ind.low_info_threshold,
            "share_trigger_pct": ind.share_trigger_pct,
            "volume_window_hours": ind.volume_window_hours,
            "baseline_trailing_days": ind.baseline_trailing_days,
            "volume_abs_min": ind.volume_abs_min,
            "volume_multiplier": ind.volume_multiplier,
            "direction_trigger_pct": ind.direction_trigger_pct,
            "pair_events_min": ind.pair_events_min,
            "longitudinal_min": ind.longitudinal_min,
            "lookback_days": ind.lookback_days,
            "abuse_toxicity_min": ind.abuse_toxicity_min,
        },
        "clients": {
            "gender": _client_json(cfg.gender_client),
            "toxicity": _client_json(cfg.toxicity_client),
        },
        "monitored_targets": [],
        "store_dir": None,
        "prompt_ttl_days": cfg.prompt_ttl_days,
        "listen_address": cfg.listen_address,
        "scope": {"include_unknown_originators": True},
    }


def _client_json(client: ClientConfig) -> dict:
    return {
        "mode": client.mode.value,
        "endpoint": client.endpoint,
        "api_key": client.api_key,
        "timeout_ms": client.timeout_ms,
        "cache_capacity": client.cache_capacity,
    }


def _parse_client(raw: dict, label: str, violations: list[str]) -> ClientConfig:
    mode_raw = raw.get("mode", "offline")
    try:
        mode = ClientMode(mode_raw)
    except ValueError:
        violations.append(f"clients.{label}.mode must be offline or remote, got {mode_raw!r}")
        mode = ClientMode.OFFLINE
    timeout_ms = raw.get("timeout_ms", 3000)
    capacity = raw.get("cache_capacity", 4096)
    if not isinstance(timeout_ms, int) or timeout_ms <= 0:
        violations.append(f"clients.{label}.timeout_ms must be a positive integer")
        timeout_ms = 3000
    if not isinstance(capacity, int) or capacity <= 0:
        violations.append(f"clients.{label}.cache_capacity must be a positive integer")
        capacity = 4096
    endpoint = raw.get("endpoint")
    # Credentials may come from the environment instead of the config file.
    api_key = raw.get("api_key") or os.environ.get(_CLIENT_KEY_ENV[label])
    if mode is ClientMode.REMOTE and (not endpoint or not api_key):
        violations.append(f"clients.{label}: remote mode requires endpoint and api_key "
                          f"(or {_CLIENT_KEY_ENV[label]})")
        mode = ClientMode.OFFLINE
    return ClientConfig(mode=mode, endpoint=endpoint, api_key=api_key,
                        timeout_ms=timeout_ms, cache_capacity=capacity)


_INDICATOR_RANGES = {
    # name: (lo, hi, lo_inclusive) documented ranges
    "low_info_threshold": (0.0, 1.0),
    "share_trigger_pct": (0.0, 100.0),
    "direction_trigger_pct": (0.0, 100.0),
    "abuse_toxicity_min": (0.0, 1.0),
}


def parse_config(raw: dict) -> AppConfig:
    """Merge a raw JSON document over defaults and validate everything."""
    violations: list[str] = []
    defaults = IndicatorConfig()
    ind_raw = raw.get("indicators", {})
    if not isinstance(ind_raw, dict):
        violations.append("indicators must be an object")
        ind_raw = {}
    values = {}
    for name in ("low_info_threshold", "share_trigger_pct", "volume_window_hours",
                 "baseline_trailing_days", "volume_abs_min", "volume_multiplier",
                 "direction_trigger_pct", "pair_events_min", "longitudinal_min",
                 "lookback_days", "abuse_toxicity_min"):
        value = ind_raw.get(name, getattr(defaults, name))
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            violations.append(f"indicators.{name} must be numeric")
            value = getattr(defaults, name)
        values[name] = value
    for name, (lo, hi) in _INDICATOR_RANGES.items():
        if not lo <= values[name] <= hi:
            violations.append(f"indicators.{name} must be within [{lo}, {hi}]")
            values[name] = getattr(defaults, name)
    for name in ("volume_window_hours", "baseline_trailing_days", "lookback_days"):
        if values[name] <= 0:
            violations.append(f"indicators.{name} must be positive")
            values[name] = getattr(defaults, name)
    for name in ("volume_abs_min", "pair_events_min", "longitudinal_min"):
        if values[name] < 1 or int(values[name]) != values[name]:
            violations.append(f"indicators.{name} must be an integer >= 1")
            values[name] = getattr(defaults, name)
        values[name] = int(values[name])
    if values["volume_multiplier"] < 0:
        violations.append("indicators.volume_multiplier must be nonnegative")
        values["volume_multiplier"] = defaults.volume_multiplier
    if values["baseline_trailing_days"] * 24 < values["volume_window_hours"]:
        violations.append("indicators.baseline_trailing_days must cover at least one volume window")
        values["baseline_trailing_days"] = defaults.baseline_trailing_days

    clients_raw = raw.get("clients", {})
    if not isinstance(clients_raw, dict):
        violations.append("clients must be an object")
        clients_raw = {}
    gender_client = _parse_client(clients_raw.get("gender", {}), "gender", violations)
    toxicity_client = _parse_client(clients_raw.get("toxicity", {}), "toxicity", violations)

    targets = raw.get("monitored_targets", [])
    if not isinstance(targets, list) or not all(isinstance(t, str) for t in targets):
        violations.append("monitored_targets must be a list of user id strings")
        targets = []

    ttl = raw.get("prompt_ttl_days", 7.0)
    if not isinstance(ttl, (int, float)) or isinstance(ttl, bool) or ttl <= 0:
        violations.append("prompt_ttl_days must be a positive number")
        ttl = 7.0

    listen = raw.get("listen_address", DEFAULT_LISTEN)
    host, _, port = str(listen).rpartition(":")
    if not host or not port.isdigit() or not 0 < int(port) < 65536:
        violations.append(f"listen_address must be host:port, got {listen!r}")
        listen = DEFAULT_LISTEN

    store_dir = raw.get("store_dir")
    if store_dir is not None and not isinstance(store_dir, str):
        violations.append("store_dir must be a string path or null")
        store_dir = None

    scope = raw.get("scope", {})
    include_unknown = bool(scope.get("include_unknown_originators", True)) \
        if isinstance(scope, dict) else True

    if violations:
        raise ConfigInvalid(violations)

    return AppConfig(
        indicators=IndicatorConfig(**values),
        gender_client=gender_client,
        toxicity_client=toxicity_client,
        monitored_targets=list(targets),
        store_dir=store_dir,
        prompt_ttl_days=float(ttl),
        listen_address=str(listen),
        include_unknown_originators=include_unknown,
    )


def load_config(path: str | Path | None) -> AppConfig:
    if path is None:
        return AppConfig()
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigInvalid([f"cannot read config {path}: {exc}"]) from None
    except json.JSONDecodeError as exc:
        raise ConfigInvalid([f"config is not valid JSON: {exc}"]) from None
    if not isinstance(raw, dict):
        raise ConfigInvalid(["config root must be a JSON object"])
    return parse_config(raw)


def require_monitored_targets(config: AppConfig) -> None:
    """serve and replay modes need at least one monitored target."""
    if not config.monitored_targets:
        raise ConfigInvalid(["monitored_targets must be nonempty in serve/replay modes"])
