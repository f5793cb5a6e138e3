"""Categorical mining over call records.

Entropy and information gain rank context attributes; associations are then
grown by adding attributes one at a time in that precedence order, and each
association is summarised by its behavior distribution.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, Iterable, Mapping, Sequence, Tuple

from .log_model import BehaviorClass, CallRecord, ContextAttribute, context_value

DEFAULT_MIN_SUPPORT = 3

_N_CLASSES = len(BehaviorClass)


class EmptyDistribution(ValueError):
    pass


class EmptyDataset(ValueError):
    pass


@dataclass(frozen=True)
class BehaviorDistribution:
    """Counts per behavior class, indexed by ``BehaviorClass`` value."""

    counts: Tuple[int, ...] = (0,) * _N_CLASSES

    def __post_init__(self):
        if len(self.counts) != _N_CLASSES or any(c < 0 for c in self.counts):
            raise ValueError(f"invalid counts {self.counts!r}")

    @classmethod
    def from_mapping(cls, counts: Mapping[BehaviorClass, int]) -> "BehaviorDistribution":
        vec = [0] * _N_CLASSES
        for cls_, n in counts.items():
            vec[BehaviorClass(cls_)] += n
        return cls(tuple(vec))

    @classmethod
    def from_records(cls, records: Iterable[CallRecord]) -> "BehaviorDistribution":
        vec = [0] * _N_CLASSES
        for r in records:
            vec[r.behavior] += 1
        return cls(tuple(vec))

    @property
    def total(self) -> int:
        return sum(self.counts)

    def __getitem__(self, behavior: BehaviorClass) -> int:
        return self.counts[behavior]

    def __add__(self, other: "BehaviorDistribution") -> "BehaviorDistribution":
        return BehaviorDistribution(tuple(a + b for a, b in zip(self.counts, other.counts)))

    def as_dict(self) -> Dict[str, int]:
        return {b.label: self.counts[b] for b in BehaviorClass if self.counts[b]}


@dataclass(frozen=True)
class ContextAssociation:
    """An order-independent conjunction of (attribute, value) bindings."""

    bindings: frozenset

    def __post_init__(self):
        if not self.bindings:
            raise ValueError("association needs at least one binding")
        attrs = [ContextAttribute(a) for a, _ in self.bindings]
        if len(set(attrs)) != len(attrs):
            raise ValueError("at most one binding per attribute")

    @classmethod
    def of(cls, pairs: Iterable[Tuple[ContextAttribute, str]]) -> "ContextAssociation":
        return cls(frozenset((ContextAttribute(a), v) for a, v in pairs))

    def sorted_bindings(self) -> list:
        order = {a: i for i, a in enumerate(ContextAttribute)}
        return sorted(self.bindings, key=lambda av: (order[av[0]], av[1]))

    def __len__(self) -> int:
        return len(self.bindings)

    def __str__(self) -> str:
        return " & ".join(f"{a.value}={v}" for a, v in self.sorted_bindings())

    def sort_key(self):
        return (len(self.bindings), [(a.value, v) for a, v in self.sorted_bindings()])


def entropy(dist: BehaviorDistribution) -> float:
    """Shannon entropy of a behavior distribution, in bits."""
    total = dist.total
    if total == 0:
        raise EmptyDistribution("entropy of an empty distribution")
    h = 0.0
    for n in dist.counts:
        if n:
            p = n / total
            h -= p * math.log2(p)
    return h


def information_gain(records: Sequence[CallRecord], attribute: ContextAttribute) -> float:
    if not records:
        raise EmptyDataset("information gain over no records")
    parts = defaultdict(list)
    for r in records:
        parts[context_value(r, attribute)].append(r)
    n = len(records)
    remainder = sum(
        len(part) / n * entropy(BehaviorDistribution.from_records(part)) for part in parts.values()
    )
    gain = entropy(BehaviorDistribution.from_records(records)) - remainder
    # rounding can leave a tiny negative gain for useless splits
    return max(gain, 0.0)


def context_precedence(
    records: Sequence[CallRecord], attributes: Sequence[ContextAttribute]
) -> list:
    """Attributes ordered by information gain, highest first; ties keep input order."""
    if not attributes:
        raise ValueError("no attributes to rank")
    if not records:
        raise EmptyDataset("cannot rank attributes over no records")
    gains = [information_gain(records, a) for a in attributes]
    # gains equal in exact arithmetic can differ in the last ulp
    order = sorted(range(len(attributes)), key=lambda i: -round(gains[i], 12))
    return [attributes[i] for i in order]


def generate_associations(
    records: Sequence[CallRecord],
    precedence: Sequence[ContextAttribute],
    min_support: int = DEFAULT_MIN_SUPPORT,
) -> Dict[ContextAssociation, BehaviorDistribution]:
    """Group records by every prefix of ``precedence``.

    For k = 1..len(precedence) each observed value tuple of the first k
    attributes becomes one association. Associations matching fewer than
    ``min_support`` records are dropped. Keys are returned in a stable order
    (prefix length, then bindings).
    """
    if not precedence:
        raise ValueError("empty precedence")
    if min_support < 1:
        raise ValueError("min_support must be >= 1")
    if not records:
        raise EmptyDataset("no records to mine")

    counts: Dict[Tuple[str, ...], list] = {}
    for r in records:
        values = tuple(context_value(r, a) for a in precedence)
        for k in range(1, len(precedence) + 1):
            vec = counts.setdefault(values[:k], [0] * _N_CLASSES)
            vec[r.behavior] += 1

    out = {}
    for values, vec in counts.items():
        if sum(vec) < min_support:
            continue
        assoc = ContextAssociation.of(zip(precedence, values))
        out[assoc] = BehaviorDistribution(tuple(vec))
    return {k: out[k] for k in sorted(out, key=ContextAssociation.sort_key)}


def dominant_behavior(dist: BehaviorDistribution) -> BehaviorClass:
    """Most frequent behavior; ties go to the earliest class in ``BehaviorClass`` order."""
    if dist.total == 0:
        raise EmptyDistribution("no dominant behavior in an empty distribution")
    best = max(dist.counts)
    return BehaviorClass(dist.counts.index(best))


def mine_patterns(
    records: Sequence[CallRecord],
    attributes: Sequence[ContextAttribute],
    min_support: int = DEFAULT_MIN_SUPPORT,
) -> Dict[ContextAssociation, BehaviorClass]:
    """Dominant behavior per association for one dataset, using its own precedence."""
    if not records:
        return {}
    precedence = context_precedence(records, attributes)
    assocs = generate_associations(records, precedence, min_support)
    return {a: dominant_behavior(d) for a, d in assocs.items()}
