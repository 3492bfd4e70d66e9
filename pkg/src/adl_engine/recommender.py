"""Next-activity recommendation from routine, affect, and experience signals.

A multinomial naive-Bayes model with additive smoothing is trained on
consecutive-occurrence transitions.  Each transition's features are the
current occurrence's end-time bucket, its activity, its emotion and UX
labels, and whether the day is a weekday; the label is the next activity.
Predictions are confidence vectors over every known activity; the
recommendation is the argmax with lexicographic tie-break.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass
from datetime import datetime, timezone
from enum import Enum
from typing import Iterator, Sequence, TextIO

from .affect import AffectAnnotation, EmotionLabel, UXLabel
from .temporal import minute_of_day

DEFAULT_ALPHA = 1.0
DEFAULT_BUCKET_WIDTH = 30
FEATURE_NAMES = ("time_bucket", "previous_activity", "emotion", "ux", "day_kind")

# the encoded previous_activity of a first occurrence
NO_PREVIOUS = "none"


class DayKind(str, Enum):
    WEEKDAY = "weekday"
    WEEKEND = "weekend"


def day_kind_of(timestamp: int) -> DayKind:
    weekday = datetime.fromtimestamp(timestamp, tz=timezone.utc).weekday()
    return DayKind.WEEKDAY if weekday < 5 else DayKind.WEEKEND


@dataclass(frozen=True)
class FeatureVector:
    """Predictor signals for one transition."""

    time_bucket: int
    previous_activity: str | None
    emotion: EmotionLabel
    ux: UXLabel
    day_kind: DayKind

    def __post_init__(self) -> None:
        if self.time_bucket < 0:
            raise ValueError(f"time_bucket must be >= 0, got {self.time_bucket}")


@dataclass(frozen=True)
class LabeledTransition:
    features: FeatureVector
    next_activity: str


@dataclass(frozen=True)
class ConfidenceVector:
    """Per-activity confidence mapping; argmax is the recommendation.

    Construction does not insist the values sum to 1: vectors transcribed
    from rounded external sources may be off by a unit in the last place.
    Vectors produced by predict_confidences always normalize exactly.
    """

    confidences: dict[str, float]

    def __getitem__(self, activity: str) -> float:
        return self.confidences[activity]

    def items(self) -> Iterator[tuple[str, float]]:
        return iter(sorted(self.confidences.items()))

    def total(self) -> float:
        return math.fsum(self.confidences.values())


def _encode(features: FeatureVector) -> dict[str, str]:
    return {
        "time_bucket": str(features.time_bucket),
        "previous_activity": (
            features.previous_activity
            if features.previous_activity is not None
            else NO_PREVIOUS
        ),
        "emotion": features.emotion.value,
        "ux": features.ux.value,
        "day_kind": features.day_kind.value,
    }


# ---------------------------------------------------------------------------
# Model
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RecommenderModel:
    """Smoothed frequency tables for the naive-Bayes posterior.

    ``feature_counts[f][c][v]`` counts transitions of class ``c`` whose
    encoded feature ``f`` had value ``v``; ``feature_domains[f]`` is the
    sorted set of values seen for ``f`` across all classes.
    """

    activities: tuple[str, ...]
    alpha: float
    bucket_width: int
    n_transitions: int
    class_counts: dict[str, int]
    feature_domains: dict[str, tuple[str, ...]]
    feature_counts: dict[str, dict[str, dict[str, int]]]

    def prior(self, activity: str) -> float:
        count = self.class_counts.get(activity, 0)
        denom = self.n_transitions + self.alpha * len(self.activities)
        return (count + self.alpha) / denom

    def conditional(self, feature: str, value: str, activity: str) -> float:
        domain_size = len(self.feature_domains[feature])
        count = self.feature_counts[feature].get(activity, {}).get(value, 0)
        class_count = self.class_counts.get(activity, 0)
        return (count + self.alpha) / (class_count + self.alpha * domain_size)

    def to_json(self) -> str:
        payload = {
            "activities": list(self.activities),
            "alpha": self.alpha,
            "bucket_width": self.bucket_width,
            "n_transitions": self.n_transitions,
            "class_counts": self.class_counts,
            "feature_domains": {f: list(d) for f, d in self.feature_domains.items()},
            "feature_counts": self.feature_counts,
        }
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"

    @staticmethod
    def from_json(text: str) -> "RecommenderModel":
        payload = json.loads(text)
        return RecommenderModel(
            activities=tuple(payload["activities"]),
            alpha=float(payload["alpha"]),
            bucket_width=int(payload["bucket_width"]),
            n_transitions=int(payload["n_transitions"]),
            class_counts={k: int(v) for k, v in payload["class_counts"].items()},
            feature_domains={
                f: tuple(d) for f, d in payload["feature_domains"].items()
            },
            feature_counts={
                f: {c: {v: int(n) for v, n in values.items()}
                    for c, values in classes.items()}
                for f, classes in payload["feature_counts"].items()
            },
        )


# ---------------------------------------------------------------------------
# Training and prediction
# ---------------------------------------------------------------------------

def extract_transitions(
    annotated: Sequence[AffectAnnotation],
    bucket_width: int = DEFAULT_BUCKET_WIDTH,
) -> list[LabeledTransition]:
    """Pair consecutive occurrences into labeled transitions.

    Features come from occurrence i (end-time bucket, its own activity as
    previous_activity, its emotion and UX, its end-day kind); the label is
    the activity of occurrence i+1.  n occurrences yield n-1 transitions.
    """
    if not 1 <= bucket_width <= 1440:
        raise ValueError(f"bucket_width must be in [1, 1440], got {bucket_width}")
    transitions: list[LabeledTransition] = []
    for current, nxt in zip(annotated, annotated[1:]):
        features = FeatureVector(
            time_bucket=minute_of_day(current.end) // bucket_width,
            previous_activity=current.activity,
            emotion=current.emotion,
            ux=current.ux,
            day_kind=day_kind_of(current.end),
        )
        transitions.append(
            LabeledTransition(features=features, next_activity=nxt.activity)
        )
    return transitions


def train(
    transitions: Sequence[LabeledTransition],
    alpha: float = DEFAULT_ALPHA,
    bucket_width: int = DEFAULT_BUCKET_WIDTH,
    activities: Sequence[str] | None = None,
) -> RecommenderModel:
    """Count transition frequencies into a smoothed model.

    ``activities`` widens the class list beyond the labels present in the
    training data, so confidence vectors stay total over the whole activity
    set; omitted, the classes are exactly the labels seen.
    """
    if not transitions:
        raise ValueError("train needs at least one transition")
    if alpha <= 0:
        raise ValueError(f"alpha must be > 0, got {alpha}")

    labels = {t.next_activity for t in transitions}
    class_list = tuple(sorted(labels | set(activities or ())))

    class_counts = Counter(t.next_activity for t in transitions)
    feature_counts: dict[str, dict[str, dict[str, int]]] = {
        f: {} for f in FEATURE_NAMES
    }
    domains: dict[str, set[str]] = {f: set() for f in FEATURE_NAMES}
    for t in transitions:
        encoded = _encode(t.features)
        for f in FEATURE_NAMES:
            value = encoded[f]
            domains[f].add(value)
            per_class = feature_counts[f].setdefault(t.next_activity, {})
            per_class[value] = per_class.get(value, 0) + 1

    return RecommenderModel(
        activities=class_list,
        alpha=alpha,
        bucket_width=bucket_width,
        n_transitions=len(transitions),
        class_counts={c: class_counts.get(c, 0) for c in class_list},
        feature_domains={f: tuple(sorted(domains[f])) for f in FEATURE_NAMES},
        feature_counts=feature_counts,
    )


def predict_confidences(
    model: RecommenderModel, features: FeatureVector
) -> ConfidenceVector:
    """Posterior over activities: prior times per-feature conditionals.

    Values absent from a feature's training domain still contribute the
    smoothing mass alpha over the recorded domain size, so every activity
    keeps strictly positive confidence.  The result is normalized to sum 1.
    """
    encoded = _encode(features)
    weights: dict[str, float] = {}
    for activity in model.activities:
        weight = model.prior(activity)
        for f in FEATURE_NAMES:
            weight *= model.conditional(f, encoded[f], activity)
        weights[activity] = weight
    total = math.fsum(weights.values())
    return ConfidenceVector({a: w / total for a, w in sorted(weights.items())})


def recommend(confidences: ConfidenceVector) -> str:
    """Argmax activity; ties go to the lexicographically first name."""
    if not confidences.confidences:
        raise ValueError("cannot recommend from an empty confidence vector")
    best_name: str | None = None
    best_value = -1.0
    for name, value in sorted(confidences.confidences.items()):
        if value > best_value:
            best_name = name
            best_value = value
    return best_name


def write_model(model: RecommenderModel, stream: TextIO) -> None:
    stream.write(model.to_json())


def read_model(stream: TextIO) -> RecommenderModel:
    return RecommenderModel.from_json(stream.read())
