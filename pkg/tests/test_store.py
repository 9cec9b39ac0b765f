"""Interaction store: pair index, window queries vs brute force, snapshots."""

from __future__ import annotations

import random
from datetime import datetime, timedelta, timezone

import pytest

from modkit.errors import CorruptSnapshot
from modkit.model import DirectedPairKey
from modkit.store import InteractionStore, SCHEMA_VERSION

from conftest import make_event, make_profile, tox

T0 = datetime(2023, 5, 1, 12, 0, 0, tzinfo=timezone.utc)
HOUR = timedelta(hours=1)


def seeded_store():
    store = InteractionStore()
    store.add_profile(make_profile("u_a", "alice", "Alice Alpha"))
    store.add_profile(make_profile("u_b", "bob", "Bob Beta"))
    store.add_profile(make_profile("u_c", "carol", "Carol Gamma"))
    return store


# -- append ------------------------------------------------------------------------

def test_append_single_mention_updates_one_pair():
    store = seeded_store()
    event = make_event("e1", "u_a", "alice", "hi @bob", T0)
    assert store.append_event(event, tox(0.0)) == [DirectedPairKey("u_a", "u_b")]


def test_append_two_mentions_updates_two_pairs_in_order():
    store = seeded_store()
    event = make_event("e1", "u_a", "alice", "hey @bob and @carol", T0)
    assert store.append_event(event, tox(0.0)) == [
        DirectedPairKey("u_a", "u_b"), DirectedPairKey("u_a", "u_c")]


def test_reappend_is_noop():
    store = seeded_store()
    event = make_event("e1", "u_a", "alice", "hi @bob", T0)
    store.append_event(event, tox(0.2))
    assert store.append_event(event, tox(0.2)) == []
    assert store.event_count() == 1
    history = store.pair_history(DirectedPairKey("u_a", "u_b"), at=T0)
    assert len(history.events) == 1


def test_unknown_handle_resolves_to_synthetic_id():
    store = seeded_store()
    event = make_event("e1", "u_a", "alice", "hi @Stranger", T0)
    assert store.append_event(event, tox(0.0)) == [DirectedPairKey("u_a", "@stranger")]


def test_clock_skew_counts_but_stores():
    store = seeded_store()
    store.append_event(make_event("e1", "u_a", "alice", "hi @bob", T0), tox(0.0))
    store.append_event(
        make_event("e0", "u_a", "alice", "hi again @bob", T0 - timedelta(minutes=30)), tox(0.0))
    assert store.skew_count == 1
    assert store.event_count() == 2
    assert store.now() == T0   # clock never moves backward


# -- pair history --------------------------------------------------------------------

def test_unseen_pair_empty_history():
    history = seeded_store().pair_history(DirectedPairKey("u_a", "u_b"), at=T0)
    assert history.events == () and history.abusive_count == 0


def test_lookback_filters_old_events():
    store = seeded_store()
    times = [T0 - timedelta(days=d) for d in (400, 380, 10, 5, 0)]
    for i, at in enumerate(times):
        store.append_event(make_event(f"e{i}", "u_a", "alice", "yo @bob", at), tox(0.0))
    history = store.pair_history(DirectedPairKey("u_a", "u_b"),
                                 lookback=timedelta(days=365), at=T0)
    assert len(history.events) == 3


def test_abusive_count_boundary_inclusive():
    store = seeded_store()
    for i, value in enumerate((0.9, 0.7, 0.1)):
        store.append_event(
            make_event(f"e{i}", "u_a", "alice", "x @bob", T0 + timedelta(minutes=i)),
            tox(value))
    history = store.pair_history(DirectedPairKey("u_a", "u_b"), at=T0 + HOUR)
    assert history.abusive_count == 2


def test_direction_partition():
    store = seeded_store()
    store.append_event(make_event("e1", "u_a", "alice", "to @bob", T0), tox(0.0))
    store.append_event(make_event("e2", "u_b", "bob", "to @alice", T0 + timedelta(minutes=1)), tox(0.0))
    ab = store.pair_history(DirectedPairKey("u_a", "u_b"), at=store.now())
    ba = store.pair_history(DirectedPairKey("u_b", "u_a"), at=store.now())
    assert {e.event_id for e in ab.events} == {"e1"}
    assert {e.event_id for e in ba.events} == {"e2"}


def test_events_sorted_even_with_out_of_order_appends():
    store = seeded_store()
    for i, minutes in enumerate((50, 10, 30)):
        store.append_event(
            make_event(f"e{i}", "u_a", "alice", "x @bob", T0 + timedelta(minutes=minutes)),
            tox(0.0))
    history = store.pair_history(DirectedPairKey("u_a", "u_b"), at=T0 + HOUR)
    assert [e.event_id for e in history.events] == ["e1", "e2", "e0"]


# -- inbound windows -------------------------------------------------------------------

def test_inbound_count_empty():
    assert seeded_store().inbound_count("u_b", HOUR, T0) == 0


def test_inbound_count_half_open_boundary():
    store = seeded_store()
    store.append_event(make_event("edge", "u_a", "alice", "x @bob", T0 - HOUR), tox(0.0))
    store.append_event(make_event("now", "u_c", "carol", "x @bob", T0), tox(0.0))
    assert store.inbound_count("u_b", HOUR, T0) == 1         # edge excluded, now included


def test_inbound_count_twelve_in_hour():
    store = seeded_store()
    for i in range(12):
        store.append_event(
            make_event(f"e{i}", "u_a", "alice", "x @bob", T0 - timedelta(minutes=59 - i)),
            tox(0.0))
    assert store.inbound_count("u_b", HOUR, T0) == 12


def test_baseline_no_history_is_zero():
    assert seeded_store().inbound_baseline("u_b", HOUR, timedelta(hours=3), T0) == 0


def test_baseline_mean_of_prior_windows():
    store = seeded_store()
    # Prior window k covers (T0-(k+1)h, T0-kh]; counts {1, 2, 3} -> mean 2.
    # The 9 events in the current window must not contribute.
    sequence = [(1, 1), (2, 2), (3, 3), (0, 9)]  # (prior window k, events); k=0 is current
    counter = 0
    for k, n in sequence:
        for i in range(n):
            at = T0 - (k + 1) * HOUR + timedelta(minutes=i + 1) if k else \
                T0 - HOUR + timedelta(minutes=i + 1)
            store.append_event(make_event(f"e{counter}", "u_a", "alice", "x @bob", at), tox(0.0))
            counter += 1
    assert store.inbound_baseline("u_b", HOUR, timedelta(hours=3), T0) == 2.0


def test_baseline_uniform_history():
    store = seeded_store()
    counter = 0
    for k in range(1, 8):                      # 7 prior windows, 5 events each
        for i in range(5):
            at = T0 - (k + 1) * HOUR + timedelta(minutes=2 * i + 1)
            store.append_event(make_event(f"e{counter}", "u_a", "alice", "x @bob", at), tox(0.0))
            counter += 1
    assert store.inbound_baseline("u_b", HOUR, timedelta(hours=7), T0) == 5.0


def test_window_preconditions():
    store = seeded_store()
    with pytest.raises(ValueError):
        store.inbound_count("u_b", timedelta(0), T0)
    with pytest.raises(ValueError):
        store.inbound_baseline("u_b", HOUR, timedelta(minutes=30), T0)


# -- brute-force equivalence on random logs ----------------------------------------------

def random_log(rng: random.Random, users: int = 20, events: int = 1000):
    rows = []
    for i in range(events):
        author = rng.randrange(users)
        others = [u for u in range(users) if u != author]
        mentioned = rng.sample(others, k=rng.randint(0, 3))
        text = " ".join(f"@user{u}" for u in mentioned) or "quiet status"
        at = T0 + timedelta(seconds=rng.randint(0, 14 * 24 * 3600))
        rows.append((f"e{i:05d}", f"u{author}", f"user{author}", text, at,
                     round(rng.random(), 3)))
    return rows


def brute_pair_events(rows, originator, target, lo, hi):
    picked = []
    for event_id, author_id, handle, text, at, toxicity in rows:
        if author_id != originator:
            continue
        mentioned = {w[1:].lower() for w in text.split() if w.startswith("@")}
        if target.replace("u", "user", 1) in mentioned and lo <= at <= hi:
            picked.append((at, event_id, toxicity))
    return sorted(picked)


def test_random_logs_match_brute_force():
    rng = random.Random(777)
    for trial in range(3):
        rows = random_log(rng)
        store = InteractionStore()
        for u in range(20):
            store.add_profile(make_profile(f"u{u}", f"user{u}", f"Sam User{u}"))
        for event_id, author_id, handle, text, at, toxicity in rows:
            store.append_event(make_event(event_id, author_id, handle, text, at), tox(toxicity))
        now = store.now()
        for _ in range(25):
            o, t = rng.sample(range(20), 2)
            key = DirectedPairKey(f"u{o}", f"u{t}")
            lookback = timedelta(days=rng.choice((1, 7, 365)))
            got = store.pair_history(key, lookback, at=now)
            want = brute_pair_events(rows, f"u{o}", f"u{t}", now - lookback, now)
            assert [(e.created_at, e.event_id, e.toxicity) for e in got.events] == want
            assert got.abusive_count == sum(1 for _, _, v in want if v >= 0.70)

            window = timedelta(hours=rng.choice((1, 6)))
            at = now - timedelta(hours=rng.randint(0, 48))
            target_handle = f"user{t}"
            brute_inbound = sum(
                1 for _, _, _, text, when, _ in rows
                if target_handle in {w[1:].lower() for w in text.split() if w.startswith("@")}
                and at - window < when <= at)
            assert store.inbound_count(f"u{t}", window, at) == brute_inbound


# -- single writer, many readers --------------------------------------------------------

def test_concurrent_readers_never_see_partial_appends():
    import threading

    store = seeded_store()
    stop = threading.Event()
    failures: list[str] = []

    def reader():
        key = DirectedPairKey("u_a", "u_b")
        while not stop.is_set():
            history = store.pair_history(key, timedelta(days=365), at=store.now())
            recount = sum(1 for e in history.events if e.toxicity >= 0.70)
            if recount != history.abusive_count:
                failures.append("abusive_count mismatch")
            store.inbound_count("u_b", HOUR, store.now())

    readers = [threading.Thread(target=reader) for _ in range(4)]
    for thread in readers:
        thread.start()
    for i in range(500):
        store.append_event(
            make_event(f"w{i}", "u_a", "alice", "ping @bob", T0 + timedelta(seconds=i)),
            tox(0.9 if i % 3 == 0 else 0.1))
    stop.set()
    for thread in readers:
        thread.join()
    assert failures == []
    history = store.pair_history(DirectedPairKey("u_a", "u_b"), at=store.now())
    assert len(history.events) == 500


# -- snapshots ----------------------------------------------------------------------------

def populated_store():
    store = seeded_store()
    rng = random.Random(4242)
    for i in range(1000):
        author = rng.choice([("u_a", "alice"), ("u_b", "bob"), ("u_c", "carol")])
        other = rng.choice([h for _, h in (("u_a", "alice"), ("u_b", "bob"), ("u_c", "carol"))
                            if h != author[1]])
        at = T0 + timedelta(minutes=13 * i)
        store.append_event(
            make_event(f"e{i}", author[0], author[1], f"ping @{other} n{i}", at),
            tox(round(rng.random(), 2)))
    store.decisions.append({"prompt_id": "p1", "decision": "accept",
                            "decided_at": "2023-05-02T00:00:00Z"})
    store.actions.append({"action_id": "a1", "kind": "block_account",
                          "subject": {"originator_id": "u_b", "target_id": "u_a"},
                          "issued_at": "2023-05-02T00:00:00Z", "result": "simulated"})
    return store


def test_snapshot_round_trip_preserves_queries(tmp_path):
    store = populated_store()
    path = tmp_path / "snap.modk"
    store.save_snapshot(path)
    loaded = InteractionStore.load_snapshot(path)

    rng = random.Random(99)
    now = store.now()
    assert loaded.now() == now
    assert loaded.event_count() == store.event_count()
    for _ in range(50):
        ids = ["u_a", "u_b", "u_c"]
        o, t = rng.sample(ids, 2)
        key = DirectedPairKey(o, t)
        lookback = timedelta(days=rng.choice((1, 7, 30)))
        assert store.pair_history(key, lookback, at=now) == loaded.pair_history(key, lookback, at=now)
        window = timedelta(hours=1)
        at = now - timedelta(hours=rng.randint(0, 24))
        assert store.inbound_count(t, window, at) == loaded.inbound_count(t, window, at)
    assert loaded.decisions == store.decisions
    assert loaded.actions == store.actions


def test_snapshot_byte_stable(tmp_path):
    store = populated_store()
    store.save_snapshot(tmp_path / "a.modk")
    store.save_snapshot(tmp_path / "b.modk")
    assert (tmp_path / "a.modk").read_bytes() == (tmp_path / "b.modk").read_bytes()


def test_empty_file_is_corrupt(tmp_path):
    path = tmp_path / "empty.modk"
    path.write_bytes(b"")
    with pytest.raises(CorruptSnapshot):
        InteractionStore.load_snapshot(path)


def test_wrong_schema_version_reports_detail(tmp_path):
    store = seeded_store()
    path = tmp_path / "snap.modk"
    store.save_snapshot(path)
    blob = path.read_bytes()
    tampered = blob.replace(b'"schema_version":' + str(SCHEMA_VERSION).encode(),
                            b'"schema_version":' + str(SCHEMA_VERSION + 1).encode(), 1)
    path.write_bytes(tampered)
    with pytest.raises(CorruptSnapshot, match="schema_version"):
        InteractionStore.load_snapshot(path)


def test_checksum_mismatch_detected(tmp_path):
    store = populated_store()
    path = tmp_path / "snap.modk"
    store.save_snapshot(path)
    blob = bytearray(path.read_bytes())
    blob[-2] ^= 0xFF
    path.write_bytes(bytes(blob))
    with pytest.raises(CorruptSnapshot, match="checksum"):
        InteractionStore.load_snapshot(path)
