"""Weighted-threshold recognition of complex-activity occurrences.

An observation lists which atomic activities were seen and which context
attributes held.  Its occurrence weight blends the observed share of atomic
weight mass with the satisfied share of context weight mass; the occurrence
counts as completed when that weight reaches the definition's threshold.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Iterable, TextIO

from .definitions import ComplexActivityDefinition
from .ingestion import OccurrenceRecord


@dataclass(frozen=True)
class Observation:
    """Evidence for one candidate occurrence of a single definition."""

    activity: str
    observed_atomics: frozenset[int]
    satisfied_contexts: frozenset[int]

    @staticmethod
    def from_record(record: OccurrenceRecord) -> "Observation":
        return Observation(
            activity=record.activity,
            observed_atomics=record.observed_atomics,
            satisfied_contexts=record.satisfied_contexts,
        )


@dataclass(frozen=True)
class OccurrenceVerdict:
    """Recognition outcome: blended weight versus the definition threshold."""

    activity: str
    score: float
    threshold: float
    completed: bool


# ---------------------------------------------------------------------------
# Scoring
# ---------------------------------------------------------------------------

def occurrence_weight(
    defn: ComplexActivityDefinition,
    observation: Observation,
    lam: float = 0.5,
) -> float:
    """Blend of observed atomic and satisfied context weight fractions.

    Each side is the fsum of the weights seen divided by the fsum of all the
    definition's weights on that side, so a full observation scores exactly
    1.0 even when the listed weights only sum to 1 within tolerance.  ``lam``
    is the atomic side's blend share and must lie in [0, 1].
    """
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lam must be in [0, 1], got {lam}")
    unknown_at = observation.observed_atomics - defn.atomic_ids
    if unknown_at:
        raise KeyError(f"{defn.name}: unknown atomic ids {sorted(unknown_at)}")
    unknown_ct = observation.satisfied_contexts - defn.context_ids
    if unknown_ct:
        raise KeyError(f"{defn.name}: unknown context ids {sorted(unknown_ct)}")

    if observation.observed_atomics == defn.atomic_ids:
        atomic_fraction = 1.0
    else:
        observed = math.fsum(
            a.weight for a in defn.atomics if a.id in observation.observed_atomics
        )
        atomic_fraction = observed / defn.atomic_weight_total

    if observation.satisfied_contexts == defn.context_ids:
        context_fraction = 1.0
    else:
        satisfied = math.fsum(
            c.weight for c in defn.contexts if c.id in observation.satisfied_contexts
        )
        context_fraction = satisfied / defn.context_weight_total

    return lam * atomic_fraction + (1.0 - lam) * context_fraction


def detect_occurrence(
    defn: ComplexActivityDefinition,
    observation: Observation,
    lam: float = 0.5,
) -> OccurrenceVerdict:
    """Score an observation and compare against the threshold (inclusive)."""
    score = occurrence_weight(defn, observation, lam)
    return OccurrenceVerdict(
        activity=defn.name,
        score=score,
        threshold=defn.threshold,
        completed=score >= defn.threshold,
    )


# ---------------------------------------------------------------------------
# Boundaries
# ---------------------------------------------------------------------------

def detect_boundaries(
    defn: ComplexActivityDefinition,
    events: list[tuple[int, int]],
) -> tuple[int, int] | None:
    """Locate an occurrence's extent from timestamped atomic events.

    ``events`` pairs ``(timestamp, atomic_id)``.  The start is the earliest
    event whose id is in the definition's start set; the end is the latest
    event in its end set.  Returns None when either anchor is missing or the
    anchors are out of order.
    """
    start_ts: int | None = None
    end_ts: int | None = None
    for ts, atomic_id in events:
        if atomic_id in defn.start_atomics and (start_ts is None or ts < start_ts):
            start_ts = ts
        if atomic_id in defn.end_atomics and (end_ts is None or ts > end_ts):
            end_ts = ts
    if start_ts is None or end_ts is None or end_ts < start_ts:
        return None
    return (start_ts, end_ts)


# ---------------------------------------------------------------------------
# Verdict CSV
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScoredOccurrence:
    """A timed occurrence with its recognition score, as written to disk."""

    activity: str
    start: int
    end: int
    score: float
    completed: bool


VERDICT_FIELDS = ["activity", "start", "end", "score", "completed"]


def write_verdicts(rows: Iterable[ScoredOccurrence], stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(VERDICT_FIELDS)
    for r in rows:
        writer.writerow(
            [r.activity, r.start, r.end, repr(r.score), str(r.completed).lower()]
        )


def read_verdicts(stream: TextIO) -> list[ScoredOccurrence]:
    reader = csv.DictReader(stream)
    return [
        ScoredOccurrence(
            activity=row["activity"],
            start=int(row["start"]),
            end=int(row["end"]),
            score=float(row["score"]),
            completed=row["completed"] == "true",
        )
        for row in reader
    ]
