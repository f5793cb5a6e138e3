import dataclasses
import random
from collections import Counter
from datetime import datetime, timedelta

import pytest
from hypothesis import given, settings, strategies as st

from helpers import MONDAY, random_records, rec
from recentlog.log_model import BehaviorClass as B
from recentlog.log_model import ContextAttribute as CA
from recentlog.log_model import EmptyLog
from recentlog.pipeline import analyze
from recentlog.recency import (
    WEEK,
    BoundaryMismatch,
    ConflictScore,
    InsufficientWeeks,
    WeekDataset,
    aggregate_recent,
    conflict_score,
    detect_boundary,
    score_series,
    split_by_week,
)
from recentlog.segmentation import apply_segments, build_segments
from recentlog.synth import generate_log, random_drift_spec


def shifted(records, weeks=1):
    return [dataclasses.replace(r, timestamp=r.timestamp + weeks * WEEK) for r in records]


def week(index, records):
    start = MONDAY + (index - 1) * WEEK
    return WeekDataset(index, start, start + WEEK, list(records))


def series_of(scores, n):
    return [ConflictScore((n - k, n - k - 1), 10, 0, s) for k, s in enumerate(scores)]


class TestSplitByWeek:
    def test_exact_21_days(self):
        records = [rec(B.ACCEPT, when=MONDAY), rec(B.ACCEPT, when=MONDAY + timedelta(days=20, hours=23, minutes=59))]
        weeks = split_by_week(records)
        assert [w.index for w in weeks] == [1, 2, 3]
        assert not weeks[0].partial
        assert weeks[0].start == MONDAY and weeks[-1].end == MONDAY + 3 * WEEK

    def test_ten_days(self):
        records = [rec(B.ACCEPT, when=MONDAY), rec(B.ACCEPT, when=MONDAY + timedelta(days=9, hours=12))]
        weeks = split_by_week(records)
        assert [w.index for w in weeks] == [1, 2]
        assert weeks[0].partial and not weeks[1].partial

    def test_empty_middle_week_kept(self):
        records = [rec(B.ACCEPT, when=MONDAY + timedelta(hours=1)),
                   rec(B.REJECT, when=MONDAY + timedelta(days=20, hours=5))]
        weeks = split_by_week(records)
        assert [len(w.records) for w in weeks] == [1, 0, 1]

    def test_newest_record_in_week_n(self):
        last = datetime(2004, 10, 1, 17, 42)
        weeks = split_by_week([rec(B.ACCEPT, when=last - timedelta(days=30)), rec(B.ACCEPT, when=last)])
        assert weeks[-1].end == last + timedelta(minutes=1)
        assert weeks[-1].records[-1].timestamp == last

    def test_single_record(self):
        weeks = split_by_week([rec(B.ACCEPT)])
        assert len(weeks) == 1 and len(weeks[0].records) == 1

    def test_empty(self):
        with pytest.raises(EmptyLog):
            split_by_week([])

    @settings(max_examples=50)
    @given(st.lists(st.integers(0, 60 * 24 * 80), min_size=1, max_size=40))
    def test_windows_cover_records(self, minutes):
        records = [rec(B.ACCEPT, when=MONDAY + timedelta(minutes=m)) for m in sorted(minutes)]
        weeks = split_by_week(records)
        assert sum(len(w.records) for w in weeks) == len(records)
        for w in weeks:
            assert w.end - w.start == WEEK
            assert all(w.start <= r.timestamp < w.end for r in w.records)
        assert all(a.end == b.start for a, b in zip(weeks, weeks[1:]))
        assert [w.index for w in weeks] == list(range(1, len(weeks) + 1))


def _location_week(pattern):
    """Three records per location, all with the given behavior."""
    return [rec(b, location=loc) for loc, b in pattern.items() for _ in range(3)]


class TestConflictScore:
    attrs = (CA.LOCATION,)

    def test_copy_is_zero(self):
        records = random_records(random.Random(3), 40)
        s = conflict_score(week(2, shifted(records)), week(1, records), 1)
        assert s.score == 0.0 and s.shared > 0

    def test_one_of_four(self):
        before = {"home": B.ACCEPT, "office": B.REJECT, "gym": B.MISSED, "cafe": B.ACCEPT}
        after = dict(before, office=B.OUTGOING)
        a, b = _location_week(after), _location_week(before)
        s = conflict_score(week(2, a), week(1, b), 3, self.attrs)

        def dominant(records, loc):
            counts = Counter(r.behavior for r in records if r.location == loc)
            return min(counts, key=lambda k: (-counts[k], k))

        shared = sorted({r.location for r in a} & {r.location for r in b})
        expected = sum(dominant(a, loc) != dominant(b, loc) for loc in shared)
        assert (s.shared, s.conflicts) == (len(shared), expected) == (4, 1)
        assert s.score == 25.0
        assert s.pair == (2, 1)

    def test_empty_week_undefined(self):
        s = conflict_score(week(2, random_records(random.Random(1), 20)), week(1, []), 1)
        assert s.score is None and s.shared == 0

    def test_below_support_undefined(self):
        s = conflict_score(week(2, [rec(B.ACCEPT)]), week(1, [rec(B.ACCEPT)]), 3)
        assert s.score is None

    def test_unique_associations_reported(self):
        a = _location_week({"home": B.ACCEPT, "gym": B.REJECT})
        b = _location_week({"home": B.ACCEPT, "cafe": B.REJECT, "park": B.MISSED})
        s = conflict_score(week(2, a), week(1, b), 3, self.attrs)
        assert (s.shared, s.only_newer, s.only_older, s.score) == (1, 1, 2, 0.0)

    def test_requires_adjacent_newer_first(self):
        with pytest.raises(ValueError):
            conflict_score(week(1, []), week(2, []))

    def test_swapped_behaviors_full_conflict(self):
        before = {"home": B.ACCEPT, "office": B.REJECT, "gym": B.MISSED}
        swap = {B.ACCEPT: B.REJECT, B.REJECT: B.ACCEPT, B.MISSED: B.OUTGOING, B.OUTGOING: B.MISSED}
        after = {k: swap[v] for k, v in before.items()}
        s = conflict_score(week(2, _location_week(after)), week(1, _location_week(before)), 3, self.attrs)
        assert s.score == 100.0

    @settings(max_examples=40)
    @given(st.integers(0, 10**6), st.integers(0, 10**6), st.integers(1, 3))
    def test_symmetric(self, s1, s2, support):
        a = random_records(random.Random(s1), 30, (2, 2, 2, 2))
        b = random_records(random.Random(s2), 30, (2, 2, 2, 2))
        ab = conflict_score(week(2, a), week(1, b), support)
        ba = conflict_score(week(2, b), week(1, a), support)
        assert (ab.shared, ab.conflicts, ab.score) == (ba.shared, ba.conflicts, ba.score)
        assert (ab.only_newer, ab.only_older) == (ba.only_older, ba.only_newer)
        if ab.shared:
            assert ab.score == 100.0 * ab.conflicts / ab.shared
            assert 0 <= ab.conflicts <= ab.shared


def _segmented_weeks(records):
    return split_by_week(apply_segments(records, build_segments(records, 60)))


class TestScoreSeries:
    def test_pair_order(self):
        records = random_records(random.Random(0), 10)
        weeks = [week(i, shifted(records, i)) for i in (1, 2, 3)]
        assert [s.pair for s in score_series(weeks, 1)] == [(3, 2), (2, 1)]

    def test_identical_weeks(self):
        base = [rec(b, when=MONDAY + timedelta(days=d, hours=9)) for d in range(5) for b in (B.ACCEPT,) * 3]
        records = [r for k in range(8) for r in shifted(base, k)]
        series = score_series(_segmented_weeks(records), 3)
        assert len(series) == 7
        assert all(s.score == 0.0 for s in series)

    def test_planted_spike(self):
        spec = random_drift_spec(seed=11, total_weeks=9, drift_week=4)
        series = score_series(_segmented_weeks(generate_log(spec)), 3)
        assert [s.pair for s in series][4] == (5, 4)
        assert [s.score for s in series] == [0.0] * 4 + [100.0] + [0.0] * 3

    def test_insufficient(self):
        with pytest.raises(InsufficientWeeks):
            score_series([week(1, [rec(B.ACCEPT)])])

    def test_parallel_matches_sequential(self):
        spec = random_drift_spec(seed=5, total_weeks=8, drift_week=3, noise=0.2)
        weeks = _segmented_weeks(generate_log(spec))
        assert score_series(weeks, 3, jobs=3) == score_series(weeks, 3, jobs=1)


class TestDetectBoundary:
    def test_first_exceedance(self):
        series = series_of([5, 8, 3, 45, 10], n=6)
        assert detect_boundary(series, 20) == (3, 2)
        weeks = [week(i, [rec(B.ACCEPT, when=MONDAY + (i - 1) * WEEK)]) for i in range(1, 7)]
        assert aggregate_recent(weeks, (3, 2)).recent_weeks == 4

    def test_all_zero(self):
        assert detect_boundary(series_of([0] * 5, 6), 20) is None

    def test_six_recent_weeks(self):
        # first significant pair is (n-5, n-6): six recent weeks
        n = 10
        series = series_of([0, 0, 0, 0, 0, 60, 0, 0, 0], n)
        boundary = detect_boundary(series, 20)
        assert boundary == (n - 5, n - 6)
        weeks = [week(i, []) for i in range(1, n + 1)]
        assert aggregate_recent(weeks, boundary).recent_weeks == 6

    def test_undefined_stops(self):
        assert detect_boundary(series_of([0, None, 90], 4), 20) == (3, 2)

    def test_threshold_is_strict(self):
        assert detect_boundary(series_of([20.0], 2), 20) is None

    def test_threshold_range(self):
        with pytest.raises(ValueError):
            detect_boundary([], 120)

    @given(st.lists(st.one_of(st.none(), st.floats(0, 100)), min_size=1, max_size=15),
           st.floats(0, 100), st.floats(0, 100))
    def test_tighter_threshold_never_longer(self, scores, t1, t2):
        lo, hi = sorted((t1, t2))
        n = len(scores) + 1
        weeks = [week(i, []) for i in range(1, n + 1)]
        series = series_of(scores, n)
        tight = aggregate_recent(weeks, detect_boundary(series, lo)).recent_weeks
        loose = aggregate_recent(weeks, detect_boundary(series, hi)).recent_weeks
        assert tight <= loose


class TestAggregateRecent:
    @pytest.fixture
    def weeks(self):
        return [week(i, [rec(B.ACCEPT, when=MONDAY + (i - 1) * WEEK + timedelta(hours=h)) for h in range(i)])
                for i in range(1, 9)]

    def test_six_weeks(self, weeks):
        n = len(weeks)
        res = aggregate_recent(weeks, (n - 5, n - 6))
        assert res.recent_weeks == 6
        assert len(res.recent_records) == sum(range(n - 5, n + 1))
        ts = [r.timestamp for r in res.recent_records]
        assert ts == sorted(ts)

    def test_no_boundary(self, weeks):
        res = aggregate_recent(weeks, None)
        assert res.recent_weeks == 8 and res.boundary is None
        assert len(res.recent_records) == sum(range(1, 9))

    def test_immediate_change(self, weeks):
        res = aggregate_recent(weeks, (8, 7))
        assert res.recent_weeks == 1
        assert res.recent_records == weeks[-1].records

    @pytest.mark.parametrize("boundary", [(9, 8), (0, -1), (5, 3)])
    def test_mismatch(self, weeks, boundary):
        with pytest.raises(BoundaryMismatch):
            aggregate_recent(weeks, boundary)

    def test_json(self, weeks):
        res = aggregate_recent(weeks, (8, 7), [ConflictScore((8, 7), 2, 1, 50.0)])
        out = res.to_json()
        assert out["boundary"] == [8, 7] and out["weeks"] == 8
        assert out["series"][0]["score"] == 50.0


def test_analyze_pipeline_recovers_drift():
    spec = random_drift_spec(seed=2, total_weeks=10, drift_week=7)
    result = analyze(generate_log(spec)).result
    assert result.boundary == (8, 7)
    assert result.recent_weeks == 3
