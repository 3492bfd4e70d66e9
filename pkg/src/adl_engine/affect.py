"""Per-occurrence affect inference and the emotion-to-experience mapping.

Each recognized occurrence is judged positive or negative from three signals:
whether the occurrence completed, whether the activity's most important
atomic (and its paired context) was present, and how the occurrence's weight
compares with the person's recent scores for the same activity.  A separate
learned table maps those emotions, per activity and time-of-day bucket, onto
a good/bad experience label.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from enum import Enum
from statistics import fmean
from typing import Iterable, TextIO

from .definitions import ComplexActivityDefinition, most_important_pair
from .recognition import Observation, OccurrenceVerdict

DEFAULT_WINDOW = 5
DEFAULT_EPSILON = 0.05
DEFAULT_BUCKET_WIDTH = 30


class EmotionLabel(str, Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"


class UXLabel(str, Enum):
    GOOD = "good"
    BAD = "bad"


# ---------------------------------------------------------------------------
# Emotion rule
# ---------------------------------------------------------------------------

def infer_emotion(
    defn: ComplexActivityDefinition,
    history: list[float],
    observation: Observation,
    verdict: OccurrenceVerdict,
    window: int = DEFAULT_WINDOW,
    epsilon: float = DEFAULT_EPSILON,
) -> EmotionLabel:
    """Label one occurrence positive or negative.

    Positive requires all three of:
      (a) the occurrence completed;
      (b) the most important atomic was observed and its paired context held;
      (c) the score is within ``epsilon`` below the mean of the last
          ``window`` scores for this activity (vacuous when history is empty).

    ``history`` holds earlier occurrence scores, oldest first, and must not
    include the occurrence under judgment.
    """
    if window < 1:
        raise ValueError(f"window must be >= 1, got {window}")
    if epsilon < 0:
        raise ValueError(f"epsilon must be >= 0, got {epsilon}")

    if not verdict.completed:
        return EmotionLabel.NEGATIVE

    atomic_id, context_id = most_important_pair(defn)
    if atomic_id not in observation.observed_atomics:
        return EmotionLabel.NEGATIVE
    if context_id not in observation.satisfied_contexts:
        return EmotionLabel.NEGATIVE

    if history:
        recent = fmean(history[-window:])
        if verdict.score < recent - epsilon:
            return EmotionLabel.NEGATIVE
    return EmotionLabel.POSITIVE


# ---------------------------------------------------------------------------
# Experience mapping
# ---------------------------------------------------------------------------

def time_bucket(minute_of_day: int, bucket_width: int = DEFAULT_BUCKET_WIDTH) -> int:
    if not 0 <= minute_of_day < 1440:
        raise ValueError(f"minute_of_day must be in [0, 1440), got {minute_of_day}")
    if not 1 <= bucket_width <= 1440:
        raise ValueError(f"bucket_width must be in [1, 1440], got {bucket_width}")
    return minute_of_day // bucket_width


@dataclass(frozen=True)
class UXModel:
    """Majority-vote table from (emotion, activity, bucket) to a UX label."""

    table: dict[tuple[str, str, int], UXLabel] = field(default_factory=dict)
    window: int = DEFAULT_WINDOW
    epsilon: float = DEFAULT_EPSILON
    bucket_width: int = DEFAULT_BUCKET_WIDTH

    def to_json(self) -> str:
        payload = {
            "window": self.window,
            "epsilon": self.epsilon,
            "bucket_width": self.bucket_width,
            "table": {
                f"{emotion}|{activity}|{bucket}": label.value
                for (emotion, activity, bucket), label in self.table.items()
            },
        }
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"

    @staticmethod
    def from_json(text: str) -> "UXModel":
        payload = json.loads(text)
        table: dict[tuple[str, str, int], UXLabel] = {}
        for key, value in payload.get("table", {}).items():
            emotion, activity, bucket = key.rsplit("|", 2)
            table[(emotion, activity, int(bucket))] = UXLabel(value)
        return UXModel(
            table=table,
            window=int(payload.get("window", DEFAULT_WINDOW)),
            epsilon=float(payload.get("epsilon", DEFAULT_EPSILON)),
            bucket_width=int(payload.get("bucket_width", DEFAULT_BUCKET_WIDTH)),
        )


def train_ux_mapper(
    examples: list[tuple[EmotionLabel, str, int, UXLabel]],
    window: int = DEFAULT_WINDOW,
    epsilon: float = DEFAULT_EPSILON,
    bucket_width: int = DEFAULT_BUCKET_WIDTH,
) -> UXModel:
    """Learn the mapping by majority vote per key; ties resolve to good."""
    votes: dict[tuple[str, str, int], list[int]] = {}
    for emotion, activity, bucket, label in examples:
        key = (emotion.value, activity, bucket)
        counts = votes.setdefault(key, [0, 0])
        if label is UXLabel.GOOD:
            counts[0] += 1
        else:
            counts[1] += 1
    table = {
        key: (UXLabel.GOOD if good >= bad else UXLabel.BAD)
        for key, (good, bad) in votes.items()
    }
    return UXModel(table=table, window=window, epsilon=epsilon, bucket_width=bucket_width)


def map_ux(model: UXModel, emotion: EmotionLabel, activity: str, bucket: int) -> UXLabel:
    """Look up the learned label, falling back to the sign of the emotion."""
    learned = model.table.get((emotion.value, activity, bucket))
    if learned is not None:
        return learned
    return UXLabel.GOOD if emotion is EmotionLabel.POSITIVE else UXLabel.BAD


# ---------------------------------------------------------------------------
# Annotation pass
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AffectAnnotation:
    """Emotion plus UX label attached to one scored occurrence."""

    activity: str
    start: int
    end: int
    score: float
    completed: bool
    emotion: EmotionLabel
    ux: UXLabel


def annotate(
    items: list[tuple[ComplexActivityDefinition, Observation, OccurrenceVerdict, int, int]],
    model: UXModel,
) -> list[AffectAnnotation]:
    """Run emotion inference over occurrences in order, then map UX.

    ``items`` pairs each occurrence's definition, observation, verdict, start
    and end timestamps, already in chronological order.  Score history is
    tracked per activity, so one activity's run of poor scores cannot sour
    another's.
    """
    histories: dict[str, list[float]] = {}
    annotations: list[AffectAnnotation] = []
    for defn, observation, verdict, start, end in items:
        history = histories.setdefault(defn.name, [])
        emotion = infer_emotion(
            defn, history, observation, verdict,
            window=model.window, epsilon=model.epsilon,
        )
        minute = (end % 86400) // 60
        bucket = time_bucket(minute, model.bucket_width)
        ux = map_ux(model, emotion, defn.name, bucket)
        annotations.append(
            AffectAnnotation(
                activity=defn.name,
                start=start,
                end=end,
                score=verdict.score,
                completed=verdict.completed,
                emotion=emotion,
                ux=ux,
            )
        )
        history.append(verdict.score)
    return annotations


def write_ux_model(model: UXModel, stream: TextIO) -> None:
    stream.write(model.to_json())


def read_ux_model(stream: TextIO) -> UXModel:
    return UXModel.from_json(stream.read())


ANNOTATED_FIELDS = [
    "activity", "start", "end", "score", "completed", "emotion", "ux",
]


def write_annotated(rows: Iterable[AffectAnnotation], stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(ANNOTATED_FIELDS)
    for r in rows:
        writer.writerow([
            r.activity, r.start, r.end, repr(r.score),
            str(r.completed).lower(), r.emotion.value, r.ux.value,
        ])


def read_annotated(stream: TextIO) -> list[AffectAnnotation]:
    reader = csv.DictReader(stream)
    return [
        AffectAnnotation(
            activity=row["activity"],
            start=int(row["start"]),
            end=int(row["end"]),
            score=float(row["score"]),
            completed=row["completed"] == "true",
            emotion=EmotionLabel(row["emotion"]),
            ux=UXLabel(row["ux"]),
        )
        for row in reader
    ]
