"""Dataset splitting, confusion matrices, and accuracy/precision/recall.

The confusion matrix follows the predicted-rows/true-columns orientation and
records its label order.  Per-class precision divides the diagonal cell by
its row sum, recall by its column sum; a zero denominator yields an
undefined metric, reported as n/a rather than 0 so averages stay honest.
"""

from __future__ import annotations

import csv
import io
import json
import math
import random
from dataclasses import dataclass
from typing import Sequence, TextIO, TypeVar

T = TypeVar("T")


@dataclass(frozen=True)
class ConfusionMatrix:
    """Square count matrix, rows = predicted label, columns = true label."""

    labels: tuple[str, ...]
    counts: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        n = len(self.labels)
        if len(self.counts) != n or any(len(row) != n for row in self.counts):
            raise ValueError(f"counts must be {n}x{n} to match labels")
        if any(c < 0 for row in self.counts for c in row):
            raise ValueError("counts must be non-negative")
        if len(set(self.labels)) != n:
            raise ValueError("labels must be distinct")

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"unknown label {label!r}") from None

    def grand_total(self) -> int:
        return sum(c for row in self.counts for c in row)

    def trace(self) -> int:
        return sum(self.counts[i][i] for i in range(len(self.labels)))

    def row_sum(self, label: str) -> int:
        return sum(self.counts[self.index(label)])

    def column_sum(self, label: str) -> int:
        j = self.index(label)
        return sum(row[j] for row in self.counts)

    def transpose(self) -> "ConfusionMatrix":
        return ConfusionMatrix(labels=self.labels, counts=tuple(zip(*self.counts)))


# ---------------------------------------------------------------------------
# Splitting
# ---------------------------------------------------------------------------

def split_chronological(
    records: Sequence[T], train_fraction: float
) -> tuple[list[T], list[T]]:
    """First ceil(n * fraction) records train, the rest test; no shuffling."""
    if not 0.0 < train_fraction < 1.0:
        raise ValueError(f"train_fraction must be in (0, 1), got {train_fraction}")
    n = len(records)
    # guard against float products like 93*0.7 landing a hair above the integer
    cut = math.ceil(n * train_fraction - 1e-9)
    return list(records[:cut]), list(records[cut:])


def split_random(
    records: Sequence[T], train_fraction: float, seed: int
) -> tuple[list[T], list[T]]:
    """Seeded shuffle, then the same ceiling cut as the chronological split."""
    if not 0.0 < train_fraction < 1.0:
        raise ValueError(f"train_fraction must be in (0, 1), got {train_fraction}")
    shuffled = list(records)
    random.Random(seed).shuffle(shuffled)
    n = len(shuffled)
    cut = math.ceil(n * train_fraction - 1e-9)
    return shuffled[:cut], shuffled[cut:]


# ---------------------------------------------------------------------------
# Matrix construction and metrics
# ---------------------------------------------------------------------------

def build_confusion(
    pairs: Sequence[tuple[str, str]], labels: Sequence[str]
) -> ConfusionMatrix:
    """Tally (predicted, true) pairs into a matrix over the given labels."""
    index = {label: i for i, label in enumerate(labels)}
    counts = [[0] * len(labels) for _ in labels]
    for predicted, true in pairs:
        if predicted not in index:
            raise KeyError(f"unknown predicted label {predicted!r}")
        if true not in index:
            raise KeyError(f"unknown true label {true!r}")
        counts[index[predicted]][index[true]] += 1
    return ConfusionMatrix(
        labels=tuple(labels), counts=tuple(tuple(row) for row in counts)
    )


def accuracy(cm: ConfusionMatrix) -> float:
    total = cm.grand_total()
    if total == 0:
        raise ValueError("accuracy undefined for an empty matrix")
    return cm.trace() / total


def class_precision(cm: ConfusionMatrix, label: str) -> float | None:
    """Diagonal over row sum; None when the label was never predicted."""
    i = cm.index(label)
    row_total = cm.row_sum(label)
    if row_total == 0:
        return None
    return cm.counts[i][i] / row_total


def class_recall(cm: ConfusionMatrix, label: str) -> float | None:
    """Diagonal over column sum; None when the label never truly occurred."""
    i = cm.index(label)
    col_total = cm.column_sum(label)
    if col_total == 0:
        return None
    return cm.counts[i][i] / col_total


@dataclass(frozen=True)
class MetricsReport:
    """Accuracy plus per-class precision/recall and the matrix totals."""

    labels: tuple[str, ...]
    accuracy: float
    precision: dict[str, float | None]
    recall: dict[str, float | None]
    grand_total: int
    predicted_totals: dict[str, int]
    true_totals: dict[str, int]


def build_report(cm: ConfusionMatrix) -> MetricsReport:
    return MetricsReport(
        labels=cm.labels,
        accuracy=accuracy(cm),
        precision={label: class_precision(cm, label) for label in cm.labels},
        recall={label: class_recall(cm, label) for label in cm.labels},
        grand_total=cm.grand_total(),
        predicted_totals={label: cm.row_sum(label) for label in cm.labels},
        true_totals={label: cm.column_sum(label) for label in cm.labels},
    )


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def _percent(value: float | None) -> str:
    return "n/a" if value is None else f"{value * 100:.2f}%"


def emit_report(report: MetricsReport, format: str = "csv") -> str:
    """Render a report; percentages print with two decimals, n/a when undefined."""
    if format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["metric", "label", "value"])
        writer.writerow(["accuracy", "", _percent(report.accuracy)])
        for label in report.labels:
            writer.writerow(["precision", label, _percent(report.precision[label])])
        for label in report.labels:
            writer.writerow(["recall", label, _percent(report.recall[label])])
        writer.writerow(["grand_total", "", str(report.grand_total)])
        return buf.getvalue()
    if format == "json":
        payload = {
            "labels": list(report.labels),
            "accuracy": report.accuracy,
            "precision": report.precision,
            "recall": report.recall,
            "grand_total": report.grand_total,
            "predicted_totals": report.predicted_totals,
            "true_totals": report.true_totals,
        }
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"
    raise ValueError(f"unsupported report format {format!r}")


def report_from_json(text: str) -> MetricsReport:
    payload = json.loads(text)
    return MetricsReport(
        labels=tuple(payload["labels"]),
        accuracy=float(payload["accuracy"]),
        precision={k: (None if v is None else float(v))
                   for k, v in payload["precision"].items()},
        recall={k: (None if v is None else float(v))
                for k, v in payload["recall"].items()},
        grand_total=int(payload["grand_total"]),
        predicted_totals={k: int(v) for k, v in payload["predicted_totals"].items()},
        true_totals={k: int(v) for k, v in payload["true_totals"].items()},
    )


def write_confusion(cm: ConfusionMatrix, stream: TextIO) -> None:
    """CSV grid: label header row/column, predicted rows by true columns."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["pred\\true", *cm.labels])
    for label, row in zip(cm.labels, cm.counts):
        writer.writerow([label, *row])


def read_confusion(stream: TextIO) -> ConfusionMatrix:
    rows = list(csv.reader(stream))
    if not rows:
        raise ValueError("empty confusion-matrix document")
    labels = tuple(rows[0][1:])
    counts = tuple(tuple(int(cell) for cell in row[1:]) for row in rows[1:])
    return ConfusionMatrix(labels=labels, counts=counts)
