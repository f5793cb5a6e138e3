"""Synthetic call logs with a planted behavior change.

Every template is a (day, hour, location, relationship) context. Weeks
``1..drift_week`` draw each template's behavior from ``profile_before``, later
weeks from ``profile_after``. Templates sit on even hours so the gaps between
them stay empty and segmentation keeps each template in its own segment.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from datetime import datetime, timedelta
from typing import Dict, List

from .log_model import BehaviorClass, CallRecord, CallType
from .mining import DEFAULT_MIN_SUPPORT

LOG_START = datetime(2004, 9, 6)  # a Monday
LOCATIONS = ("home", "office", "campus", "gym", "cafe")
RELATIONSHIPS = ("family", "colleague", "friend", "partner", "unknown")
TEMPLATE_HOURS = tuple(range(8, 22, 2))
N_CORRESPONDENTS = 40


@dataclass(frozen=True, order=True)
class Template:
    day: int  # 0 = Monday
    hour: int
    location: str
    relationship: str


@dataclass(frozen=True)
class DriftSpec:
    total_weeks: int
    drift_week: int
    records_per_week: int
    profile_before: Dict[Template, BehaviorClass]
    profile_after: Dict[Template, BehaviorClass]
    noise: float = 0.0
    seed: int = 0
    min_support: int = DEFAULT_MIN_SUPPORT

    def validate(self) -> None:
        if not 1 <= self.drift_week < self.total_weeks:
            raise ValueError(f"drift_week must lie in [1, {self.total_weeks}), got {self.drift_week}")
        if not self.profile_before or set(self.profile_before) != set(self.profile_after):
            raise ValueError("profiles must cover the same non-empty template set")
        if len({(t.day, t.hour) for t in self.profile_before}) != len(self.profile_before):
            raise ValueError("templates must occupy distinct (day, hour) slots")
        need = self.min_support * len(self.profile_before)
        if self.records_per_week < need:
            raise ValueError(f"records_per_week must be >= {need} (min_support x templates)")
        if not 0 <= self.noise < 1:
            raise ValueError("noise must lie in [0, 1)")

    @property
    def recent_weeks(self) -> int:
        """Length of the recent window the planted change should produce."""
        return self.total_weeks - self.drift_week


def shift_behavior(b: BehaviorClass) -> BehaviorClass:
    return BehaviorClass((b + 1) % len(BehaviorClass))


def random_drift_spec(
    seed: int,
    total_weeks: int,
    drift_week: int,
    n_templates: int = 6,
    records_per_week: int = 60,
    noise: float = 0.0,
    drift: bool = True,
    min_support: int = DEFAULT_MIN_SUPPORT,
) -> DriftSpec:
    """Random templates and profiles; with ``drift`` every template changes behavior."""
    rng = random.Random(seed)
    slots = rng.sample([(d, h) for d in range(7) for h in TEMPLATE_HOURS], n_templates)
    templates = sorted(
        Template(d, h, rng.choice(LOCATIONS), rng.choice(RELATIONSHIPS)) for d, h in slots
    )
    before = {t: rng.choice(list(BehaviorClass)) for t in templates}
    after = {t: shift_behavior(b) for t, b in before.items()} if drift else dict(before)
    spec = DriftSpec(total_weeks, drift_week, records_per_week, before, after, noise, seed, min_support)
    spec.validate()
    return spec


def _call_fields(behavior: BehaviorClass, rng: random.Random):
    if behavior is BehaviorClass.ACCEPT:
        return CallType.INCOMING, rng.randint(5, 900)
    if behavior is BehaviorClass.REJECT:
        return CallType.INCOMING, 0
    if behavior is BehaviorClass.MISSED:
        return CallType.MISSED, 0
    return CallType.OUTGOING, rng.randint(5, 900)


def generate_log(spec: DriftSpec) -> List[CallRecord]:
    spec.validate()
    rng = random.Random(spec.seed)
    templates = sorted(spec.profile_before)
    latest = templates[-1]
    base, extra = divmod(spec.records_per_week, len(templates))
    records = []
    for week in range(1, spec.total_weeks + 1):
        profile = spec.profile_before if week <= spec.drift_week else spec.profile_after
        week_start = LOG_START + timedelta(weeks=week - 1)
        for ti, tpl in enumerate(templates):
            for k in range(base + (ti < extra)):
                minute = rng.randrange(60)
                # week windows are anchored at the newest record, which must
                # close the last template slot for windows to line up
                if week == spec.total_weeks and tpl == latest and k == 0:
                    minute = 59
                behavior = profile[tpl]
                if rng.random() < spec.noise:
                    behavior = rng.choice([b for b in BehaviorClass if b is not behavior])
                call_type, duration = _call_fields(behavior, rng)
                records.append(
                    CallRecord(
                        timestamp=week_start + timedelta(days=tpl.day, hours=tpl.hour, minutes=minute),
                        call_type=call_type,
                        duration=duration,
                        location=tpl.location,
                        relationship=tpl.relationship,
                        correspondent_id=f"c{rng.randrange(N_CORRESPONDENTS):02d}",
                    )
                )
    records.sort(key=lambda r: r.timestamp)
    return records
