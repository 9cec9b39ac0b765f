"""The three multidimensional abuse indicators.

Each indicator is a pure function of (inputs, store state, config):

* longitudinal  - how many prior abusive events exist on this directed pair
* informational - how thin the originator's public profile is relative to
                  the target's
* volumetric    - inbound volume vs. the target's trailing baseline, and
                  the directional imbalance of the pair's traffic

`evaluate` composes all three plus a toxicity score into one report for a
single (event, target) at a point in time.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timedelta

from .clients import ToxicityClient, ToxicityScore
from .model import DirectedPairKey, InteractionEvent, UserProfile
from .store import InteractionStore

BIO_CHAR_NORM = 160      # platform bio length limit; a full bio scores 1.0
URL_COUNT_NORM = 3


@dataclass(frozen=True)
class IndicatorConfig:
    """Thresholds for the three indicators. Every default is configurable;
    the values are conservative desk-scale starting points."""

    low_info_threshold: float = 0.2
    share_trigger_pct: float = 65.0
    volume_window_hours: float = 1.0
    baseline_trailing_days: float = 7.0
    volume_abs_min: int = 10
    volume_multiplier: float = 3.0
    direction_trigger_pct: float = 90.0
    pair_events_min: int = 10
    longitudinal_min: int = 3
    lookback_days: float = 365.0
    abuse_toxicity_min: float = 0.70

    @property
    def volume_window(self) -> timedelta:
        return timedelta(hours=self.volume_window_hours)

    @property
    def baseline_trailing(self) -> timedelta:
        return timedelta(days=self.baseline_trailing_days)

    @property
    def lookback(self) -> timedelta:
        return timedelta(days=self.lookback_days)


@dataclass(frozen=True)
class LongitudinalReport:
    prior_abusive_count: int
    triggered: bool


@dataclass(frozen=True)
class InformationalReport:
    # Scores are None when a profile is missing; the indicator is then
    # untriggered by definition.
    originator_info_score: float | None
    target_info_score: float | None
    target_share_pct: float | None
    triggered: bool


@dataclass(frozen=True)
class VolumetricReport:
    inbound_count: int
    baseline: float
    directionality_pct: float | None   # None iff zero pair events either way
    triggered: bool


@dataclass(frozen=True)
class IndicatorReport:
    pair: DirectedPairKey
    at: datetime
    event_id: str
    longitudinal: LongitudinalReport
    informational: InformationalReport
    volumetric: VolumetricReport
    toxicity: ToxicityScore

    def triggered_kinds(self) -> list[str]:
        kinds = []
        if self.longitudinal.triggered:
            kinds.append("longitudinal")
        if self.informational.triggered:
            kinds.append("informational")
        if self.volumetric.triggered:
            kinds.append("volumetric")
        return kinds


def info_score(profile: UserProfile) -> float:
    """Public-information richness of a profile, in [0, 1].

    0.5 * min(|bio| / 160, 1) + 0.3 * min(#urls, 3) / 3
    + 0.1 * [has image] + 0.1 * [location present]

    |bio| counts unicode code points; a blank location string counts as
    absent.
    """
    bio_term = 0.5 * min(len(profile.bio) / BIO_CHAR_NORM, 1.0)
    url_term = 0.3 * min(len(profile.urls), URL_COUNT_NORM) / URL_COUNT_NORM
    image_term = 0.1 if profile.has_image else 0.0
    location_term = 0.1 if profile.location and profile.location.strip() else 0.0
    return bio_term + url_term + image_term + location_term


def informational_asymmetry(originator: UserProfile, target: UserProfile,
                            config: IndicatorConfig) -> InformationalReport:
    """Share of public information sitting on the target's side of the pair.

    Triggered when the originator is near-anonymous (score below the low
    info threshold) AND the target holds more than share_trigger_pct of
    the pair's combined information.
    """
    s_o = info_score(originator)
    s_t = info_score(target)
    total = s_o + s_t
    share = 50.0 if total == 0 else 100.0 * s_t / total
    triggered = s_o < config.low_info_threshold and share > config.share_trigger_pct
    return InformationalReport(s_o, s_t, share, triggered)


def volumetric_asymmetry(key: DirectedPairKey, store: InteractionStore,
                         at: datetime, config: IndicatorConfig) -> VolumetricReport:
    """Inbound volume vs. trailing baseline plus directional imbalance."""
    outbound = len(store.pair_history(key, config.lookback, at=at).events)
    inbound_dir = len(store.pair_history(key.reversed(), config.lookback, at=at).events)
    total = outbound + inbound_dir
    directionality = None if total == 0 else 100.0 * outbound / total

    inbound = store.inbound_count(key.target_id, config.volume_window, at)
    baseline = store.inbound_baseline(key.target_id, config.volume_window,
                                      config.baseline_trailing, at)
    volume_hit = inbound >= max(config.volume_abs_min, config.volume_multiplier * baseline)
    direction_hit = (directionality is not None
                     and directionality >= config.direction_trigger_pct
                     and total >= config.pair_events_min)
    return VolumetricReport(inbound, baseline, directionality, volume_hit or direction_hit)


def longitudinal(key: DirectedPairKey, store: InteractionStore, at: datetime,
                 config: IndicatorConfig, exclude_event_id: str | None = None) -> LongitudinalReport:
    """Prior abusive events on this directed pair within the lookback.

    The event currently being evaluated is excluded: "X times before"
    refers to history, not the message on screen.
    """
    history = store.pair_history(key, config.lookback, at=at)
    count = sum(
        1 for e in history.events
        if e.event_id != exclude_event_id and e.toxicity >= config.abuse_toxicity_min
    )
    return LongitudinalReport(count, count >= config.longitudinal_min)


def evaluate(event: InteractionEvent, target_id: str, store: InteractionStore,
             toxicity_client: ToxicityClient, config: IndicatorConfig,
             at: datetime | None = None) -> IndicatorReport:
    """Full indicator report for one (event, target) pair.

    The event is expected to be appended to the store already, so the
    current-window inbound count includes it while the longitudinal count
    excludes it. A missing originator or target profile leaves the
    informational indicator untriggered with absent scores; the other two
    indicators are still computed.
    """
    resolved = {store.resolve_handle(h) for h in event.mentions}
    if target_id not in resolved:
        raise ValueError(f"target {target_id!r} is not mentioned by event {event.event_id!r}")
    when = at or event.created_at
    pair = DirectedPairKey(event.author_id, target_id)

    origin_profile = store.profile(event.author_id)
    target_profile = store.profile(target_id)
    if origin_profile is None or target_profile is None:
        informational = InformationalReport(None, None, None, False)
    else:
        informational = informational_asymmetry(origin_profile, target_profile, config)

    return IndicatorReport(
        pair=pair,
        at=when,
        event_id=event.event_id,
        longitudinal=longitudinal(pair, store, when, config, exclude_event_id=event.event_id),
        informational=informational,
        volumetric=volumetric_asymmetry(pair, store, when, config),
        toxicity=toxicity_client.score(event.text),
    )


def report_summary(report: IndicatorReport) -> dict:
    """JSON-ready condensed view of a report (served with prompts)."""
    return {
        "longitudinal": {
            "prior_abusive_count": report.longitudinal.prior_abusive_count,
            "triggered": report.longitudinal.triggered,
        },
        "informational": {
            "originator_info_score": report.informational.originator_info_score,
            "target_info_score": report.informational.target_info_score,
            "target_share_pct": report.informational.target_share_pct,
            "triggered": report.informational.triggered,
        },
        "volumetric": {
            "inbound_count": report.volumetric.inbound_count,
            "baseline": report.volumetric.baseline,
            "directionality_pct": report.volumetric.directionality_pct,
            "triggered": report.volumetric.triggered,
        },
        "toxicity": report.toxicity.value,
    }
