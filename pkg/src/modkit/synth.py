"""Deterministic synthetic corpus generator.

Builds the bundled scenario archives (~200 events each) and the mixed
pipeline corpus. Everything is seeded: regenerating produces byte-identical
files, which keeps the replay determinism suite honest.

Scenarios:
  persistent_abuser  one account sends repeated abusive tweets to the target
  pile_on            25 accounts flood the target inside one hour
  low_info           an anonymous empty-profile account contacts the target
  benign             symmetric friendly chatter only
  male_male          abusive exchange between two male users (out of scope)
"""

from __future__ import annotations

import json
import random
from datetime import datetime, timedelta, timezone
from pathlib import Path

from .clients import ToxicityClient
from .model import format_rfc3339

ANCHOR = datetime(2023, 5, 1, 0, 0, 0, tzinfo=timezone.utc)

BENIGN_TEXTS = [
    "morning @{m}! coffee later this week?",
    "@{m} that trail run photo is stunning",
    "hey @{m} did you catch the match last night",
    "@{m} the deploy went smoothly in the end",
    "thanks @{m} for the recipe, it came out great",
    "@{m} reading that book you recommended, loving it",
    "good luck with the talk @{m}, you will do great",
    "@{m} let's sync on the garden project tomorrow",
    "haha @{m} that one made my day",
    "@{m} sending you the notes in a bit",
    "@{m} the seedlings finally sprouted!",
    "nice weather for the ride tomorrow @{m}?",
]

# Each must offline-score >= 0.70 (two lexicon hits, short texts); the
# generator asserts this.
ABUSIVE_TEXTS = [
    "@{m} you are a worthless idiot and everyone knows it",
    "@{m} pathetic loser, nobody wants you here",
    "@{m} you stupid trash, just quit already",
    "@{m} vile pathetic creep, log off forever",
    "@{m} you are garbage and a moron, seriously",
]

# Rude but lexicon-clean: the pile-on signal is volumetric, not toxicity.
PILE_ON_TEXTS = [
    "everyone look at @{m} and this terrible take",
    "ratio @{m}",
    "@{m} delete your account",
    "imagine thinking this @{m}",
    "@{m} log off",
    "cannot believe @{m} posted this",
]

GHOST_TEXT = "@{m} i know which street you live on. nice curtains."

NO_MENTION_TEXTS = [
    "long walk by the river today, head is clearer now",
    "new post up on the blog about container gardening",
    "rereading my favourite novel this weekend",
    "the sourdough starter lives another day",
]

_BIO_FILLER = (
    "Engineer, gardener, marathon-runner in training. Posting about open "
    "source, trail maps, sourdough experiments, and the occasional synth "
    "jam. Opinions my own."
)


def _bio(length: int) -> str:
    return (_BIO_FILLER * 3)[:length]


def _profile(user_id: str, handle: str, display_name: str, bio_len: int,
             urls: int, has_image: bool, location: str | None,
             rng: random.Random) -> dict:
    created = ANCHOR - timedelta(days=rng.randint(300, 2000))
    return {
        "user_id": user_id,
        "handle": handle,
        "display_name": display_name,
        "bio": _bio(bio_len),
        "urls": [f"https://example.org/{handle}/{i}" for i in range(urls)],
        "has_image": has_image,
        "location": location,
        "created_at": format_rfc3339(created),
        "followers_count": rng.randint(40, 3000),
        "tweet_count": rng.randint(100, 9000),
    }


# (user_id, handle, display_name) - display first names all resolve in the
# bundled gender table so offline labelling covers the whole cast.
TARGET = ("u_sarah", "sarahdev", "Sarah Connor")
FRIENDS = [
    ("u_emily", "emwong", "Emily Wong"),
    ("u_olivia", "oliviareyes", "Olivia Reyes"),
    ("u_james", "jokafor", "James Okafor"),
    ("u_nancy", "nancy_d", "Nancy Drew"),
    ("u_david", "dkim", "David Kim"),
    ("u_grace", "gracepark", "Grace Park"),
    ("u_henry", "hadams", "Henry Adams"),
    ("u_laura", "laurab", "Laura Branigan"),
]

MOB_NAMES = [
    "Kevin Hart", "Brian Cox", "Megan Fox", "Tyler Durden", "Amber Ray",
    "Scott Lang", "Diana Prince", "Eric Idle", "Teresa Green", "Justin Case",
    "Carol Danvers", "Frank Ocean", "Janet Leigh", "Ryan Gosling", "Alice Walker",
    "Jason Momoa", "Diane Keaton", "Aaron Sorkin", "Julia Childs", "Adam West",
    "Maria Callas", "Peter Quill", "Anna Karen", "Jack Sparrow", "Rose Tyler",
]


class _Builder:
    """Accumulates (time, author, text) rows, then emits sorted JSONL dicts."""

    def __init__(self, prefix: str, seed: int):
        self.prefix = prefix
        self.rng = random.Random(seed)
        self.rows: list[tuple[datetime, str, str, str, str]] = []  # t, uid, handle, text, tag
        self.profiles: dict[str, dict] = {}

    def add_user(self, user_id: str, handle: str, display_name: str,
                 bio_len: int = 120, urls: int = 1, has_image: bool = True,
                 location: str | None = "Springfield") -> None:
        if user_id not in self.profiles:
            self.profiles[user_id] = _profile(user_id, handle, display_name,
                                              bio_len, urls, has_image, location, self.rng)

    def say(self, who: tuple[str, str, str], text: str, at: datetime, tag: str = "") -> None:
        self.rows.append((at, who[0], who[1], text, tag))

    def chat(self, a: tuple[str, str, str], b: tuple[str, str, str],
             start: datetime, turns: int) -> None:
        """Benign ping-pong between a and b; alternating direction keeps
        pair directionality near 50%."""
        t = start
        speaker, listener = a, b
        for _ in range(turns):
            text = self.rng.choice(BENIGN_TEXTS).format(m=listener[1])
            self.say(speaker, text, t)
            t += timedelta(minutes=self.rng.randint(8, 18))
            speaker, listener = listener, speaker

    def background_day(self, day: int, cast: list[tuple[str, str, str]],
                       include_target_slots: tuple[int, ...] = (0, 2)) -> None:
        """Four conversation slots per day; the monitored target joins at
        most two, far apart, so background inbound stays well under the
        volumetric trigger."""
        slots = [9, 12, 15, 19]
        for slot_index, hour in enumerate(slots):
            start = ANCHOR + timedelta(days=day, hours=hour,
                                       minutes=self.rng.randint(0, 40))
            turns = self.rng.randint(2, 5)
            if slot_index in include_target_slots:
                friend = cast[self.rng.randrange(len(cast))]
                self.chat(TARGET, friend, start, turns)
            else:
                i = self.rng.randrange(len(cast))
                j = (i + 1 + self.rng.randrange(len(cast) - 1)) % len(cast)
                self.chat(cast[i], cast[j], start, turns)
        if self.rng.random() < 0.5:
            who = cast[self.rng.randrange(len(cast))]
            at = ANCHOR + timedelta(days=day, hours=21, minutes=self.rng.randint(0, 50))
            self.say(who, self.rng.choice(NO_MENTION_TEXTS), at)

    def build(self) -> tuple[list[dict], dict[str, str]]:
        """Sort chronologically, assign sequential ids, return (events, tag->id)."""
        ordered = sorted(enumerate(self.rows), key=lambda row: (row[1][0], row[0]))
        events = []
        tags: dict[str, str] = {}
        for seq, (_, (at, uid, handle, text, tag)) in enumerate(ordered, start=1):
            event_id = f"{self.prefix}_{seq:04d}"
            if tag:
                tags[tag] = event_id
            events.append({
                "event_id": event_id,
                "author_id": uid,
                "author_handle": handle,
                "text": text,
                "created_at": format_rfc3339(at),
                "reply_to_event_id": None,
                "lang": "en",
            })
        return events, tags


def _standard_cast(builder: _Builder) -> None:
    builder.add_user(*TARGET, bio_len=160, urls=3, has_image=True, location="Portland, OR")
    for friend in FRIENDS:
        builder.add_user(*friend, bio_len=builder.rng.randint(90, 160),
                         urls=builder.rng.randint(1, 3), has_image=True)


def gen_persistent_abuser() -> dict:
    b = _Builder("pa", seed=101)
    _standard_cast(b)
    abuser = ("u_dennis", "dkray", "Dennis Kray")
    b.add_user(*abuser, bio_len=100, urls=0, has_image=True, location=None)
    for day in range(14):
        b.background_day(day, FRIENDS)
    for i, day in enumerate((2, 4, 6, 9, 11)):
        at = ANCHOR + timedelta(days=day, hours=17, minutes=7 * i)
        text = ABUSIVE_TEXTS[i].format(m=TARGET[1])
        b.say(abuser, text, at, tag=f"abuse_{i + 1}")
    events, tags = b.build()
    decisions = [{
        "prompt_selector": {"pair": [abuser[0], TARGET[0]], "kind": "longitudinal"},
        "decision": "accept",
        "after_event_id": tags["abuse_4"],
    }]
    return {"events": events, "profiles": list(b.profiles.values()),
            "decisions": decisions, "monitored_targets": [TARGET[0]],
            "tags": tags}


def gen_pile_on() -> dict:
    b = _Builder("po", seed=202)
    _standard_cast(b)
    mob = []
    for i, name in enumerate(MOB_NAMES, start=1):
        uid, handle = f"u_mob{i:02d}", f"acct_{i:02d}"
        mob.append((uid, handle, name))
        b.add_user(uid, handle, name, bio_len=80, urls=0,
                   has_image=True, location=None)
    for day in range(7):
        b.background_day(day, FRIENDS)
    # Day 7: quiet morning, then 25 inbound events inside 40 minutes.
    b.background_day(7, FRIENDS, include_target_slots=(0,))
    for day in (8, 9):
        b.background_day(day, FRIENDS)
    for i, account in enumerate(mob):
        at = ANCHOR + timedelta(days=7, hours=14, minutes=(i * 3) // 2, seconds=(i * 13) % 60)
        text = PILE_ON_TEXTS[i % len(PILE_ON_TEXTS)].format(m=TARGET[1])
        b.say(account, text, at, tag=f"mob_{i + 1}")
    events, tags = b.build()
    return {"events": events, "profiles": list(b.profiles.values()),
            "decisions": [], "monitored_targets": [TARGET[0]], "tags": tags}


def gen_low_info() -> dict:
    b = _Builder("li", seed=303)
    _standard_cast(b)
    ghost = ("u_ghost", "xq_shadow", "xqzv")
    b.add_user(*ghost, bio_len=0, urls=0, has_image=False, location=None)
    for day in range(13):
        b.background_day(day, FRIENDS)
    at = ANCHOR + timedelta(days=5, hours=23, minutes=11)
    b.say(ghost, GHOST_TEXT.format(m=TARGET[1]), at, tag="ghost_1")
    events, tags = b.build()
    return {"events": events, "profiles": list(b.profiles.values()),
            "decisions": [], "monitored_targets": [TARGET[0]], "tags": tags}


def gen_benign() -> dict:
    b = _Builder("bn", seed=404)
    _standard_cast(b)
    for day in range(14):
        b.background_day(day, FRIENDS)
    events, tags = b.build()
    return {"events": events, "profiles": list(b.profiles.values()),
            "decisions": [], "monitored_targets": [TARGET[0]], "tags": tags}


def gen_male_male() -> dict:
    b = _Builder("mm", seed=505)
    _standard_cast(b)
    victor = ("u_victor", "vstone", "Victor Stone")
    marcus = ("u_marcus", "mwebb", "Marcus Webb")
    b.add_user(*victor, bio_len=140, urls=2, has_image=True)
    # Thin profile on purpose: were scope ignored, informational and
    # longitudinal would both fire.
    b.add_user(*marcus, bio_len=0, urls=0, has_image=False, location=None)
    for day in range(13):
        b.background_day(day, FRIENDS)
    for i, day in enumerate((1, 3, 5, 7, 9, 11)):
        at = ANCHOR + timedelta(days=day, hours=20, minutes=3 * i)
        b.say(marcus, ABUSIVE_TEXTS[i % len(ABUSIVE_TEXTS)].format(m=victor[1]), at,
              tag=f"mm_abuse_{i + 1}")
        b.say(victor, ABUSIVE_TEXTS[(i + 2) % len(ABUSIVE_TEXTS)].format(m=marcus[1]),
              at + timedelta(minutes=90))
    events, tags = b.build()
    return {"events": events, "profiles": list(b.profiles.values()),
            "decisions": [], "monitored_targets": [victor[0]], "tags": tags}


def gen_pipeline_corpus() -> dict:
    """Mixed 200-event corpus for pipeline mode, plus 3 malformed lines.

    Every mentioned account has a profile and a table-resolvable first
    name, so offline gender coverage is 100%.
    """
    b = _Builder("pc", seed=606)
    _standard_cast(b)
    abuser = ("u_dennis", "dkray", "Dennis Kray")
    victor = ("u_victor", "vstone", "Victor Stone")
    marcus = ("u_marcus", "mwebb", "Marcus Webb")
    b.add_user(*abuser, bio_len=100, urls=0, has_image=True, location=None)
    b.add_user(*victor, bio_len=140, urls=2, has_image=True)
    b.add_user(*marcus, bio_len=30, urls=0, has_image=False, location=None)
    for day in range(11):
        b.background_day(day, FRIENDS)
    for i, day in enumerate((2, 4, 6, 8)):
        at = ANCHOR + timedelta(days=day, hours=18, minutes=5 * i)
        b.say(abuser, ABUSIVE_TEXTS[i].format(m=TARGET[1]), at, tag=f"abuse_{i + 1}")
    for i, day in enumerate((1, 4, 7, 9)):
        at = ANCHOR + timedelta(days=day, hours=20, minutes=11 * i)
        b.say(marcus, ABUSIVE_TEXTS[i].format(m=victor[1]), at)
        b.say(victor, ABUSIVE_TEXTS[(i + 1) % len(ABUSIVE_TEXTS)].format(m=marcus[1]),
              at + timedelta(minutes=45))
    multi = ANCHOR + timedelta(days=10, hours=11, minutes=5)
    b.say(TARGET, "planning a picnic with @emwong @oliviareyes @gracepark saturday", multi)
    b.say(("u_emily", "emwong", "Emily Wong"),
          "count me in @sarahdev @oliviareyes!", multi + timedelta(minutes=9))
    events, tags = b.build()
    return {"events": events, "profiles": list(b.profiles.values()),
            "decisions": [], "monitored_targets": [TARGET[0]], "tags": tags}


MALFORMED_LINES = [
    '{"event_id": "broken_1", "author_id": "u_x"',
    '{"event_id": "broken_2", "author_id": "u_x", "author_handle": "x", "text": "no timestamp"}',
    '{"event_id": "broken_3", "author_id": "u_x", "author_handle": "x", "text": "bad ts", '
    '"created_at": "yesterday-ish"}',
]

SCENARIOS = {
    "persistent_abuser": gen_persistent_abuser,
    "pile_on": gen_pile_on,
    "low_info": gen_low_info,
    "benign": gen_benign,
    "male_male": gen_male_male,
}


def verify_text_pools(abuse_toxicity_min: float = 0.70) -> None:
    """Generation-time sanity: abusive templates really clear the offline
    toxicity cut and nothing in the benign pools comes close."""
    scorer = ToxicityClient()
    for template in ABUSIVE_TEXTS:
        score = scorer.score(template.format(m="someone")).value
        assert score >= abuse_toxicity_min, (template, score)
    for template in BENIGN_TEXTS + PILE_ON_TEXTS + NO_MENTION_TEXTS + [GHOST_TEXT]:
        score = scorer.score(template.format(m="someone") if "{m}" in template
                             else template).value
        assert score < abuse_toxicity_min, (template, score)


def write_bundle(bundle: dict, out_dir: str | Path, malformed: bool = False) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    event_lines = [json.dumps(e, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
                   for e in bundle["events"]]
    if malformed:
        # Interleave bad lines mid-file so skip-and-count is exercised.
        for offset, bad in enumerate(MALFORMED_LINES):
            event_lines.insert(50 + offset * 60, bad)
    (out / "events.jsonl").write_text("\n".join(event_lines) + "\n", encoding="utf-8")
    profiles = sorted(bundle["profiles"], key=lambda p: p["user_id"])
    (out / "profiles.jsonl").write_text(
        "\n".join(json.dumps(p, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
                  for p in profiles) + "\n", encoding="utf-8")
    if bundle["decisions"]:
        (out / "decisions.jsonl").write_text(
            "\n".join(json.dumps(d, sort_keys=True, separators=(",", ":"))
                      for d in bundle["decisions"]) + "\n", encoding="utf-8")
    (out / "meta.json").write_text(json.dumps(
        {"monitored_targets": bundle["monitored_targets"], "tags": bundle["tags"],
         "events": len(bundle["events"])},
        indent=1, sort_keys=True) + "\n", encoding="utf-8")


def generate_all(base_dir: str | Path) -> None:
    verify_text_pools()
    base = Path(base_dir)
    for name, gen in SCENARIOS.items():
        write_bundle(gen(), base / "scenarios" / name)
    write_bundle(gen_pipeline_corpus(), base / "corpus", malformed=True)
