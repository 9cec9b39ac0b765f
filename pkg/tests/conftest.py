from __future__ import annotations

from datetime import datetime, timedelta, timezone
from pathlib import Path

import pytest

from modkit.clients import ToxicityProvider, ToxicityScore
from modkit.model import InteractionEvent, UserProfile, extract_mentions

DATA_DIR = Path(__file__).resolve().parents[1] / "src" / "modkit" / "data"
T0 = datetime(2023, 5, 1, 12, 0, 0, tzinfo=timezone.utc)


def scenario_dir(name: str) -> Path:
    return DATA_DIR / "scenarios" / name


@pytest.fixture
def t0() -> datetime:
    return T0


def make_event(event_id: str, author_id: str, author_handle: str, text: str,
               at: datetime, **kwargs) -> InteractionEvent:
    return InteractionEvent(
        event_id=event_id,
        author_id=author_id,
        author_handle=author_handle,
        text=text,
        created_at=at,
        mentions=tuple(extract_mentions(text, author_handle)),
        **kwargs,
    )


def make_profile(user_id: str, handle: str, display_name: str = "Sarah Connor",
                 bio: str = "x" * 120, urls: tuple[str, ...] = ("https://e.org",),
                 has_image: bool = True, location: str | None = "Portland",
                 followers: int = 100, tweets: int = 500) -> UserProfile:
    return UserProfile(
        user_id=user_id,
        handle=handle,
        display_name=display_name,
        bio=bio,
        urls=urls,
        has_image=has_image,
        location=location,
        created_at=T0 - timedelta(days=900),
        followers_count=followers,
        tweet_count=tweets,
    )


def tox(value: float) -> ToxicityScore:
    return ToxicityScore(value, ToxicityProvider.OFFLINE_LEXICON)
