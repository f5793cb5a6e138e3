"""Call-log records, behavior derivation and CSV parsing."""

from __future__ import annotations

import csv
import enum
from dataclasses import dataclass, field
from datetime import datetime
from typing import IO, Iterable, Mapping, NamedTuple, Optional

TIMESTAMP_FORMAT = "%Y-%m-%d %H:%M"
UNKNOWN = "unknown"

DAY_NAMES = ("Monday", "Tuesday", "Wednesday", "Thursday", "Friday", "Saturday", "Sunday")

DEFAULT_COLUMNS = {
    "date": "date",
    "time": "time",
    "call_type": "call_type",
    "duration": "duration",
    "location": "location",
    "relationship": "relationship",
    "call_id": "call_id",
}


class LogError(Exception):
    """Base class for fatal log errors."""


class MissingColumn(LogError):
    pass


class EmptyLog(LogError):
    pass


class CallType(enum.Enum):
    INCOMING = "incoming"
    MISSED = "missed"
    OUTGOING = "outgoing"

    @classmethod
    def parse(cls, text: str) -> "CallType":
        return cls(text.strip().lower())


class BehaviorClass(enum.IntEnum):
    """User response to a call. The integer order is the tie-break order."""

    ACCEPT = 0
    REJECT = 1
    MISSED = 2
    OUTGOING = 3

    @property
    def label(self) -> str:
        return self.name.lower()


class ContextAttribute(str, enum.Enum):
    TIME_SEGMENT = "time_segment"
    DAY_OF_WEEK = "day_of_week"
    LOCATION = "location"
    RELATIONSHIP = "relationship"


DEFAULT_ATTRIBUTES = (
    ContextAttribute.TIME_SEGMENT,
    ContextAttribute.DAY_OF_WEEK,
    ContextAttribute.LOCATION,
    ContextAttribute.RELATIONSHIP,
)


def derive_behavior(call_type: CallType, duration: int) -> BehaviorClass:
    """Map a call type and duration to the user's behavior.

    Incoming calls with a positive duration were accepted, zero-duration
    incoming calls were rejected. Duration is ignored for other call types.
    """
    if duration < 0:
        raise ValueError(f"negative duration: {duration}")
    if call_type is CallType.MISSED:
        return BehaviorClass.MISSED
    if call_type is CallType.OUTGOING:
        return BehaviorClass.OUTGOING
    return BehaviorClass.ACCEPT if duration > 0 else BehaviorClass.REJECT


@dataclass(frozen=True)
class CallRecord:
    timestamp: datetime
    call_type: CallType
    duration: int
    location: str
    relationship: str
    correspondent_id: str
    time_segment: Optional[str] = None
    behavior: BehaviorClass = field(init=False, compare=True)

    def __post_init__(self):
        if self.timestamp.second or self.timestamp.microsecond:
            raise ValueError("timestamps have minute resolution")
        object.__setattr__(self, "behavior", derive_behavior(self.call_type, self.duration))

    @property
    def day_of_week(self) -> str:
        return DAY_NAMES[self.timestamp.weekday()]

    @property
    def minute_of_day(self) -> int:
        return self.timestamp.hour * 60 + self.timestamp.minute


def context_value(record: CallRecord, attribute: ContextAttribute) -> str:
    """Categorical value of ``attribute`` for ``record``."""
    if attribute is ContextAttribute.TIME_SEGMENT:
        if record.time_segment is None:
            raise ValueError("record has no time segment; run segmentation first")
        return record.time_segment
    if attribute is ContextAttribute.DAY_OF_WEEK:
        return record.day_of_week
    if attribute is ContextAttribute.LOCATION:
        return record.location
    if attribute is ContextAttribute.RELATIONSHIP:
        return record.relationship
    raise KeyError(attribute)


@dataclass(frozen=True)
class MalformedRow:
    row: int  # 1-based data row number, header excluded
    reason: str


class ParsedLog(NamedTuple):
    records: list
    malformed: list


def _category(value: Optional[str]) -> str:
    value = (value or "").strip()
    return value if value else UNKNOWN


def parse_log(source: IO[str], columns: Optional[Mapping[str, str]] = None) -> ParsedLog:
    """Parse a CSV call log.

    ``columns`` maps logical field names (see ``DEFAULT_COLUMNS``) to header
    spellings; unspecified fields keep their default name. Rows that cannot be
    parsed are collected in ``ParsedLog.malformed``. Records come back sorted by
    timestamp, ties in input order.
    """
    mapping = dict(DEFAULT_COLUMNS)
    if columns:
        unknown = set(columns) - set(DEFAULT_COLUMNS)
        if unknown:
            raise ValueError(f"unknown logical columns: {sorted(unknown)}")
        mapping.update(columns)

    reader = csv.DictReader(source)
    header = reader.fieldnames or []
    missing = [name for name in mapping.values() if name not in header]
    if missing:
        raise MissingColumn(f"columns absent from header: {', '.join(missing)}")

    records, malformed = [], []
    for rownum, row in enumerate(reader, start=1):
        try:
            stamp = datetime.strptime(
                f"{row[mapping['date']].strip()} {row[mapping['time']].strip()}", TIMESTAMP_FORMAT
            )
            call_type = CallType.parse(row[mapping["call_type"]] or "")
            duration = int(row[mapping["duration"]])
            if duration < 0:
                raise ValueError(f"negative duration {duration}")
        except (ValueError, TypeError, AttributeError) as exc:
            # TypeError/AttributeError: short rows yield None fields
            malformed.append(MalformedRow(rownum, str(exc)))
            continue
        records.append(
            CallRecord(
                timestamp=stamp,
                call_type=call_type,
                duration=duration,
                location=_category(row[mapping["location"]]),
                relationship=_category(row[mapping["relationship"]]),
                correspondent_id=(row[mapping["call_id"]] or "").strip(),
            )
        )

    if not records:
        raise EmptyLog("log contains no valid rows")
    records.sort(key=lambda r: r.timestamp)
    return ParsedLog(records, malformed)


def write_log(records: Iterable[CallRecord], dest: IO[str]) -> None:
    """Write records in the default CSV input format."""
    writer = csv.writer(dest, lineterminator="\n")
    writer.writerow(list(DEFAULT_COLUMNS))
    for r in records:
        writer.writerow(
            [
                r.timestamp.strftime("%Y-%m-%d"),
                r.timestamp.strftime("%H:%M"),
                r.call_type.value,
                r.duration,
                r.location,
                r.relationship,
                r.correspondent_id,
            ]
        )
