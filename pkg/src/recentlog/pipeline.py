"""Analysis configuration and the end-to-end recency pipeline."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Mapping, Optional, Tuple

from .log_model import DEFAULT_ATTRIBUTES, ContextAttribute
from .mining import DEFAULT_MIN_SUPPORT
from .recency import (
    DEFAULT_THRESHOLD,
    RecencyResult,
    aggregate_recent,
    detect_boundary,
    score_series,
    split_by_week,
)
from .segmentation import DEFAULT_BASE_SLOT, MINUTES_PER_DAY, apply_segments, build_segments

OUTPUT_FORMATS = ("json", "csv")


@dataclass(frozen=True)
class AnalysisConfig:
    base_slot: int = DEFAULT_BASE_SLOT
    min_support: int = DEFAULT_MIN_SUPPORT
    threshold: float = DEFAULT_THRESHOLD
    attributes: Tuple[ContextAttribute, ...] = DEFAULT_ATTRIBUTES
    output_format: str = "json"
    jobs: int = 1

    def __post_init__(self):
        object.__setattr__(self, "attributes", tuple(ContextAttribute(a) for a in self.attributes))
        if self.base_slot <= 0 or MINUTES_PER_DAY % self.base_slot:
            raise ValueError(f"base_slot must divide {MINUTES_PER_DAY}, got {self.base_slot}")
        if self.min_support < 1:
            raise ValueError("min_support must be >= 1")
        if not 0 <= self.threshold <= 100:
            raise ValueError("threshold must lie in [0, 100]")
        if not self.attributes or len(set(self.attributes)) != len(self.attributes):
            raise ValueError("attributes must be a non-empty list without repeats")
        if self.output_format not in OUTPUT_FORMATS:
            raise ValueError(f"output_format must be one of {OUTPUT_FORMATS}")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")

    @classmethod
    def layered(cls, file_values: Optional[Mapping[str, Any]] = None, **overrides) -> "AnalysisConfig":
        """Defaults, then ``file_values``, then non-None ``overrides``."""
        known = {f.name for f in fields(cls)}
        values = {}
        for source in (file_values or {}, overrides):
            for key, val in source.items():
                if key not in known:
                    raise ValueError(f"unknown config key: {key}")
                if val is not None:
                    values[key] = val
        return cls(**values)

    @classmethod
    def from_file(cls, path, **overrides) -> "AnalysisConfig":
        data = json.loads(Path(path).read_text())
        if not isinstance(data, dict):
            raise ValueError("config file must hold a JSON object")
        return cls.layered(data, **overrides)


@dataclass
class Analysis:
    result: RecencyResult
    segments: list = field(default_factory=list)


def analyze(records: list, config: AnalysisConfig = AnalysisConfig()) -> Analysis:
    """Segment, split, score and cut a sorted record list."""
    segments = build_segments(records, config.base_slot)
    labelled = apply_segments(records, segments)
    weeks = split_by_week(labelled)
    series = score_series(weeks, config.min_support, config.attributes, jobs=config.jobs)
    boundary = detect_boundary(series, config.threshold)
    return Analysis(aggregate_recent(weeks, boundary, series), segments)
