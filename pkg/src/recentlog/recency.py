"""Week-wise splitting, adjacent-week conflict scores and the recent-window boundary."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timedelta
from typing import Dict, List, Optional, Sequence, Tuple

from .log_model import DEFAULT_ATTRIBUTES, BehaviorClass, CallRecord, ContextAttribute, EmptyLog
from .mining import DEFAULT_MIN_SUPPORT, ContextAssociation, mine_patterns

WEEK = timedelta(days=7)
DEFAULT_THRESHOLD = 20.0


class InsufficientWeeks(ValueError):
    pass


class BoundaryMismatch(ValueError):
    pass


@dataclass
class WeekDataset:
    index: int  # 1 = oldest
    start: datetime
    end: datetime  # exclusive
    records: List[CallRecord] = field(default_factory=list)
    partial: bool = False


@dataclass(frozen=True)
class ConflictScore:
    pair: Tuple[int, int]  # (newer, older)
    shared: int
    conflicts: int
    score: Optional[float]  # None when nothing is shared
    only_newer: int = 0
    only_older: int = 0

    def to_json(self) -> dict:
        return {
            "pair": list(self.pair),
            "shared": self.shared,
            "conflicts": self.conflicts,
            "score": self.score,
            "only_newer": self.only_newer,
            "only_older": self.only_older,
        }


@dataclass
class RecencyResult:
    series: List[ConflictScore]
    boundary: Optional[Tuple[int, int]]
    recent_weeks: int
    recent_records: List[CallRecord]
    total_weeks: int

    def to_json(self) -> dict:
        return {
            "weeks": self.total_weeks,
            "series": [s.to_json() for s in self.series],
            "boundary": list(self.boundary) if self.boundary else None,
            "recent_weeks": self.recent_weeks,
            "recent_records": len(self.recent_records),
        }


def split_by_week(records: Sequence[CallRecord]) -> List[WeekDataset]:
    """Cut a sorted log into 7-day windows anchored at its newest record.

    Week ``n`` ends one minute after the newest record; earlier windows step
    back a week at a time until the oldest record is covered. The returned
    list is oldest first, so ``weeks[i].index == i + 1``. Empty windows are
    kept.
    """
    if not records:
        raise EmptyLog("cannot split an empty log")
    first, last = records[0].timestamp, records[-1].timestamp
    end = last + timedelta(minutes=1)
    n = max(1, math.ceil((end - first) / WEEK))
    weeks = []
    for i in range(1, n + 1):
        w_end = end - (n - i) * WEEK
        weeks.append(WeekDataset(index=i, start=w_end - WEEK, end=w_end))
    weeks[0].partial = weeks[0].start < first
    origin = weeks[0].start
    for r in records:
        weeks[(r.timestamp - origin) // WEEK].records.append(r)
    return weeks


def compare_patterns(
    newer: Dict[ContextAssociation, BehaviorClass],
    older: Dict[ContextAssociation, BehaviorClass],
    pair: Tuple[int, int] = (2, 1),
) -> ConflictScore:
    shared = newer.keys() & older.keys()
    conflicts = sum(1 for a in shared if newer[a] != older[a])
    score = 100.0 * conflicts / len(shared) if shared else None
    return ConflictScore(
        pair=pair,
        shared=len(shared),
        conflicts=conflicts,
        score=score,
        only_newer=len(newer.keys() - shared),
        only_older=len(older.keys() - shared),
    )


def conflict_score(
    week_a: WeekDataset,
    week_b: WeekDataset,
    min_support: int = DEFAULT_MIN_SUPPORT,
    attributes: Sequence[ContextAttribute] = DEFAULT_ATTRIBUTES,
) -> ConflictScore:
    """Percentage of associations shared by two adjacent weeks whose dominant behaviors differ.

    ``week_a`` must be the newer week. Each week is mined with its own
    attribute precedence; only associations present in both are compared.
    """
    if week_a.index != week_b.index + 1:
        raise ValueError(f"weeks {week_a.index} and {week_b.index} are not adjacent (newer first)")
    return compare_patterns(
        mine_patterns(week_a.records, attributes, min_support),
        mine_patterns(week_b.records, attributes, min_support),
        (week_a.index, week_b.index),
    )


def _mine(args):
    records, attributes, min_support = args
    return mine_patterns(records, attributes, min_support)


def score_series(
    weeks: Sequence[WeekDataset],
    min_support: int = DEFAULT_MIN_SUPPORT,
    attributes: Sequence[ContextAttribute] = DEFAULT_ATTRIBUTES,
    jobs: int = 1,
) -> List[ConflictScore]:
    """Scores for pairs (n, n-1), (n-1, n-2), ..., (2, 1), newest first.

    With ``jobs > 1`` the weeks are mined in worker processes; the result is
    identical to the sequential run.
    """
    if len(weeks) < 2:
        raise InsufficientWeeks(f"need at least 2 weeks, got {len(weeks)}")
    ordered = sorted(weeks, key=lambda w: w.index)
    tasks = [(w.records, tuple(attributes), min_support) for w in ordered]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            patterns = list(pool.map(_mine, tasks))
    else:
        patterns = [_mine(t) for t in tasks]
    series = []
    for i in range(len(ordered) - 1, 0, -1):
        series.append(
            compare_patterns(patterns[i], patterns[i - 1], (ordered[i].index, ordered[i - 1].index))
        )
    return series


def detect_boundary(
    series: Sequence[ConflictScore], threshold: float = DEFAULT_THRESHOLD
) -> Optional[Tuple[int, int]]:
    """First pair, scanning from the newest, whose score is undefined or above ``threshold``."""
    if not 0 <= threshold <= 100:
        raise ValueError(f"threshold must be a percentage, got {threshold}")
    for s in series:
        if s.score is None or s.score > threshold:
            return s.pair
    return None


def aggregate_recent(
    weeks: Sequence[WeekDataset],
    boundary: Optional[Tuple[int, int]],
    series: Sequence[ConflictScore] = (),
) -> RecencyResult:
    """Collect the records of every week newer than the boundary."""
    by_index = {w.index: w for w in weeks}
    n = max(by_index)
    if boundary is None:
        first = min(by_index)
    else:
        newer, older = boundary
        if newer not in by_index or older not in by_index or newer != older + 1:
            raise BoundaryMismatch(f"boundary {boundary} does not match weeks 1..{n}")
        first = newer
    records = [r for i in range(first, n + 1) for r in by_index[i].records]
    return RecencyResult(
        series=list(series),
        boundary=tuple(boundary) if boundary else None,
        recent_weeks=n - first + 1,
        recent_records=records,
        total_weeks=len(by_index),
    )
