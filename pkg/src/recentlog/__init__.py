"""Detect how many recent weeks of a phone call log share the same behavior."""

from .log_model import (
    BehaviorClass,
    CallRecord,
    CallType,
    ContextAttribute,
    EmptyLog,
    MalformedRow,
    MissingColumn,
    derive_behavior,
    parse_log,
    write_log,
)
from .mining import (
    BehaviorDistribution,
    ContextAssociation,
    EmptyDataset,
    EmptyDistribution,
    context_precedence,
    dominant_behavior,
    entropy,
    generate_associations,
    information_gain,
)
from .pipeline import AnalysisConfig, analyze
from .recency import (
    BoundaryMismatch,
    ConflictScore,
    InsufficientWeeks,
    RecencyResult,
    WeekDataset,
    aggregate_recent,
    conflict_score,
    detect_boundary,
    score_series,
    split_by_week,
)
from .segmentation import InvalidSlot, TimeSegment, assign_segment, build_segments

__version__ = "0.1.0"
