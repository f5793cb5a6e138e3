"""Record factories and brute-force oracles shared by the tests.

The oracles deliberately avoid the package's own mining code: they work on
plain lists of behavior labels and recompute everything from counts.
"""

import math
import random
from collections import Counter
from datetime import datetime, timedelta
from itertools import product

from recentlog.log_model import BehaviorClass, CallRecord, CallType, ContextAttribute

MONDAY = datetime(2004, 9, 6)

_FIELDS = {
    BehaviorClass.ACCEPT: (CallType.INCOMING, 60),
    BehaviorClass.REJECT: (CallType.INCOMING, 0),
    BehaviorClass.MISSED: (CallType.MISSED, 0),
    BehaviorClass.OUTGOING: (CallType.OUTGOING, 30),
}


def rec(behavior, when=MONDAY, location="office", relationship="colleague", segment="seg", cid="u1"):
    call_type, duration = _FIELDS[behavior]
    return CallRecord(when, call_type, duration, location, relationship, cid, time_segment=segment)


def random_records(rng: random.Random, n: int, n_values=(3, 7, 3, 3)):
    """Records with random context values; n_values bounds each attribute's cardinality."""
    out = []
    for _ in range(n):
        seg = f"s{rng.randrange(n_values[0])}"
        when = MONDAY + timedelta(days=rng.randrange(n_values[1]), minutes=rng.randrange(1440))
        out.append(
            rec(
                rng.choice(list(BehaviorClass)),
                when=when,
                location=f"loc{rng.randrange(n_values[2])}",
                relationship=f"rel{rng.randrange(n_values[3])}",
                segment=seg,
            )
        )
    return out


def column(records, attribute):
    getters = {
        ContextAttribute.TIME_SEGMENT: lambda r: r.time_segment,
        ContextAttribute.DAY_OF_WEEK: lambda r: r.timestamp.strftime("%A"),
        ContextAttribute.LOCATION: lambda r: r.location,
        ContextAttribute.RELATIONSHIP: lambda r: r.relationship,
    }
    return [getters[attribute](r) for r in records]


def labels_of(records):
    return [r.behavior.name for r in records]


def oracle_entropy(labels):
    n = len(labels)
    return sum(-(c / n) * math.log2(c / n) for c in Counter(labels).values())


def oracle_gain(values, labels):
    """H(labels) - sum_v P(v) H(labels | v), by explicit enumeration of each value."""
    n = len(labels)
    total = oracle_entropy(labels)
    for v in sorted(set(values)):
        subset = [lab for val, lab in zip(values, labels) if val == v]
        total -= len(subset) / n * oracle_entropy(subset)
    return total


def oracle_groupby(records, attributes):
    """{frozenset of bindings: Counter of behaviors} for every prefix of attributes."""
    cols = [column(records, a) for a in attributes]
    out = {}
    for k in range(1, len(attributes) + 1):
        for i, r in enumerate(records):
            key = frozenset((attributes[j], cols[j][i]) for j in range(k))
            out.setdefault(key, Counter())[r.behavior] += 1
    return out


def all_call_cases():
    return list(product(CallType, [0, 1, 3600]))
