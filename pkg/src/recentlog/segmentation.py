"""Behavior-oriented time segments.

Each day of the week is cut into fixed base slots. A slot is labelled with the
dominant behavior of the records that fall in it (``"empty"`` when none do),
and maximal runs of equally-labelled neighbouring slots are merged. Segments
never cross midnight.
"""

from __future__ import annotations

import bisect
import dataclasses
from collections import defaultdict
from dataclasses import dataclass
from datetime import datetime
from typing import Dict, List, Sequence

from .log_model import DAY_NAMES, CallRecord
from .mining import BehaviorDistribution, dominant_behavior

MINUTES_PER_DAY = 1440
DEFAULT_BASE_SLOT = 60
EMPTY = "empty"


class InvalidSlot(ValueError):
    pass


def _hhmm(minutes: int) -> str:
    return f"{minutes // 60:02d}:{minutes % 60:02d}"


@dataclass(frozen=True)
class TimeSegment:
    day: int  # 0 = Monday
    start: int  # minutes from midnight, inclusive
    end: int  # exclusive
    behavior: str = EMPTY

    def __post_init__(self):
        if not 0 <= self.day < 7:
            raise ValueError(f"day out of range: {self.day}")
        if not 0 <= self.start < self.end <= MINUTES_PER_DAY:
            raise ValueError(f"bad segment bounds [{self.start}, {self.end})")

    @property
    def label(self) -> str:
        return f"{DAY_NAMES[self.day]}[{_hhmm(self.start)}-{_hhmm(self.end)}]"

    def contains(self, day: int, minute: int) -> bool:
        return day == self.day and self.start <= minute < self.end

    def to_json(self) -> dict:
        return {
            "day": DAY_NAMES[self.day],
            "start": self.start,
            "end": self.end,
            "label": self.label,
            "behavior": self.behavior,
        }


def merge_runs(labels: Sequence[str]) -> List[tuple]:
    """Run-length encode ``labels`` into ``(first_index, stop_index, label)`` runs."""
    runs = []
    for i, label in enumerate(labels):
        if runs and runs[-1][2] == label:
            runs[-1] = (runs[-1][0], i + 1, label)
        else:
            runs.append((i, i + 1, label))
    return runs


def slot_labels(records: Sequence[CallRecord], base_slot: int = DEFAULT_BASE_SLOT) -> Dict[int, list]:
    """Per-day list of base-slot labels."""
    if base_slot <= 0 or MINUTES_PER_DAY % base_slot:
        raise InvalidSlot(f"base slot {base_slot} does not divide {MINUTES_PER_DAY}")
    n_slots = MINUTES_PER_DAY // base_slot
    buckets = defaultdict(list)
    for r in records:
        buckets[(r.timestamp.weekday(), r.minute_of_day // base_slot)].append(r)
    out = {}
    for day in range(7):
        labels = []
        for slot in range(n_slots):
            members = buckets.get((day, slot))
            if members:
                labels.append(dominant_behavior(BehaviorDistribution.from_records(members)).label)
            else:
                labels.append(EMPTY)
        out[day] = labels
    return out


def build_segments(records: Sequence[CallRecord], base_slot: int = DEFAULT_BASE_SLOT) -> List[TimeSegment]:
    """Segment every day of the week from the behavior in ``records``.

    Returned segments are sorted by (day, start) and partition each day.
    """
    if not records:
        raise ValueError("cannot segment an empty log")
    segments = []
    for day, labels in slot_labels(records, base_slot).items():
        for lo, hi, label in merge_runs(labels):
            segments.append(TimeSegment(day, lo * base_slot, hi * base_slot, label))
    return segments


class SegmentIndex:
    """Lookup of the segment covering a timestamp."""

    def __init__(self, segments: Sequence[TimeSegment]):
        self._starts: Dict[int, list] = defaultdict(list)
        self._segs: Dict[int, list] = defaultdict(list)
        for seg in sorted(segments, key=lambda s: (s.day, s.start)):
            self._starts[seg.day].append(seg.start)
            self._segs[seg.day].append(seg)

    def find(self, timestamp: datetime) -> TimeSegment:
        day, minute = timestamp.weekday(), timestamp.hour * 60 + timestamp.minute
        i = bisect.bisect_right(self._starts[day], minute) - 1
        if i < 0 or not self._segs[day][i].contains(day, minute):
            raise LookupError(f"no segment covers {timestamp}")
        return self._segs[day][i]


def assign_segment(segments: Sequence[TimeSegment], timestamp: datetime) -> str:
    return SegmentIndex(segments).find(timestamp).label


def apply_segments(records: Sequence[CallRecord], segments: Sequence[TimeSegment]) -> List[CallRecord]:
    """Copies of ``records`` with ``time_segment`` filled in."""
    index = SegmentIndex(segments)
    return [dataclasses.replace(r, time_segment=index.find(r.timestamp).label) for r in records]
