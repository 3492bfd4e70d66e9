"""Command-line front door: `adl-engine <subcommand> --config <path> ...`.

Subcommands cover each pipeline stage plus an end-to-end `pipeline` run.
Every stage reads and writes plain CSV/JSON artifacts in the configured
output directory, so any stage can be re-run from the previous stage's
files.  Outputs carry no timestamps or machine state: identical inputs and
config produce byte-identical artifacts.
"""

from __future__ import annotations

import argparse
import csv
import logging
import os
import sys
from pathlib import Path

from . import affect as affect_mod
from . import definitions as defs_mod
from . import evaluation as eval_mod
from . import ingestion as ingest_mod
from . import recognition as recog_mod
from . import recommender as recom_mod
from . import temporal as temporal_mod
from .config import ConfigError, RunConfig, load_config, with_overrides

logger = logging.getLogger("adl_engine")

_RECOVERABLE = (
    ConfigError,
    defs_mod.DefinitionError,
    ingest_mod.TraceParseError,
    ingest_mod.AnnotationParseError,
    ValueError,
    KeyError,
    OSError,
)


# ---------------------------------------------------------------------------
# Shared helpers
# ---------------------------------------------------------------------------

def _setup_logging() -> None:
    level_name = os.environ.get("ADL_ENGINE_LOG", "warning").upper()
    level = getattr(logging, level_name, None)
    if not isinstance(level, int):
        level = logging.WARNING
    logging.basicConfig(
        level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s"
    )


def _load_all_definitions(paths: tuple[str, ...]) -> defs_mod.DefinitionSet:
    if not paths:
        raise ConfigError("config key 'definitions': at least one file is required")
    merged: dict[str, defs_mod.ComplexActivityDefinition] = {}
    for path in paths:
        loaded = defs_mod.load_definitions(path)
        for name in loaded.names:
            if name in merged:
                raise defs_mod.DefinitionError(
                    f"{path}: duplicate definition {name!r} across files",
                    violations=[name],
                )
            merged[name] = loaded[name]
    return defs_mod.DefinitionSet(definitions=merged)


def _out_dir(config: RunConfig) -> Path:
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _open_write(path: Path):
    return open(path, "w", newline="")


def _ingest_records(
    config: RunConfig, defs: defs_mod.DefinitionSet
) -> list[ingest_mod.OccurrenceRecord]:
    if not config.datasets:
        raise ConfigError("config key 'datasets': at least one entry is required")
    per_file: list[list[ingest_mod.OccurrenceRecord]] = []
    for spec in config.datasets:
        with open(spec.path) as stream:
            if spec.kind == "power-trace":
                samples = ingest_mod.parse_power_trace(stream, spec.channel)
                series = ingest_mod.binarize(
                    samples, config.on_watts, config.gap_tolerance
                )
                records = ingest_mod.segment_occurrences(
                    series, config.channel_map, defs
                )
            else:
                records = ingest_mod.parse_adl_log(stream, defs)
        logger.info("ingested %d occurrences from %s", len(records), spec.path)
        per_file.append(records)
    return ingest_mod.merge_sorted(per_file)


def _score_records(
    records: list[ingest_mod.OccurrenceRecord],
    defs: defs_mod.DefinitionSet,
    lam: float,
) -> list[tuple[ingest_mod.OccurrenceRecord, recog_mod.OccurrenceVerdict]]:
    scored = []
    for record in records:
        defn = defs[record.activity]
        verdict = recog_mod.detect_occurrence(
            defn, recog_mod.Observation.from_record(record), lam
        )
        scored.append((record, verdict))
    return scored


def _annotate_records(
    scored: list[tuple[ingest_mod.OccurrenceRecord, recog_mod.OccurrenceVerdict]],
    defs: defs_mod.DefinitionSet,
    config: RunConfig,
) -> tuple[list[affect_mod.AffectAnnotation], affect_mod.UXModel]:
    base_model = affect_mod.UXModel(
        table={},
        window=config.window,
        epsilon=config.epsilon,
        bucket_width=config.bucket_width,
    )
    items = [
        (
            defs[record.activity],
            recog_mod.Observation.from_record(record),
            verdict,
            record.start,
            record.end,
        )
        for record, verdict in scored
    ]
    annotations = affect_mod.annotate(items, base_model)
    examples = [
        (
            a.emotion,
            a.activity,
            affect_mod.time_bucket((a.end % 86400) // 60, config.bucket_width),
            a.ux,
        )
        for a in annotations
    ]
    trained = affect_mod.train_ux_mapper(
        examples,
        window=config.window,
        epsilon=config.epsilon,
        bucket_width=config.bucket_width,
    )
    return annotations, trained


def _split(items: list, config: RunConfig) -> tuple[list, list]:
    if config.split == "random":
        return eval_mod.split_random(items, config.train_fraction, config.seed)
    return eval_mod.split_chronological(items, config.train_fraction)


def _prediction_header(model: recom_mod.RecommenderModel) -> list[str]:
    return ["activity", "prediction"] + [
        f"confidence({name})" for name in model.activities
    ]


def _write_predictions(
    path: Path,
    model: recom_mod.RecommenderModel,
    rows: list[tuple[str, recom_mod.ConfidenceVector]],
) -> None:
    with _open_write(path) as stream:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(_prediction_header(model))
        for true_label, vector in rows:
            writer.writerow(
                [true_label, recom_mod.recommend(vector)]
                + [repr(vector[name]) for name in model.activities]
            )


def _report_csv_with_seed(report: eval_mod.MetricsReport, seed: int) -> str:
    lines = eval_mod.emit_report(report, "csv").split("\n")
    lines.insert(1, f"seed,,{seed}")
    return "\n".join(lines)


def _evaluate_pairs(
    pairs: list[tuple[str, str]],
    labels: tuple[str, ...],
    config: RunConfig,
    out: Path,
) -> eval_mod.MetricsReport:
    cm = eval_mod.build_confusion(pairs, labels)
    report = eval_mod.build_report(cm)
    with _open_write(out / "confusion.csv") as stream:
        eval_mod.write_confusion(cm, stream)
    (out / "report.csv").write_text(_report_csv_with_seed(report, config.seed))
    (out / "report.json").write_text(eval_mod.emit_report(report, "json"))
    return report


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def _cmd_validate(config: RunConfig | None, args: argparse.Namespace) -> int:
    paths = tuple(args.files) if args.files else (config.definitions if config else ())
    if not paths:
        print("error: no definition files given (positional or via --config)",
              file=sys.stderr)
        return 2
    total = 0
    passed = 0
    failures: list[str] = []
    for path in paths:
        for defn in defs_mod.parse_definition_file(path):
            total += 1
            violations = defs_mod.validate_definition(defn)
            if violations:
                failures.extend(f"{path}: {v}" for v in violations)
            else:
                passed += 1
    for failure in failures:
        print(f"FAIL {failure}")
    print(f"{passed} of {total} definitions passed")
    return 0 if passed == total else 1


def _cmd_ingest(config: RunConfig) -> int:
    defs = _load_all_definitions(config.definitions)
    records = _ingest_records(config, defs)
    out = _out_dir(config)
    with _open_write(out / "occurrences.csv") as stream:
        ingest_mod.write_occurrences(records, stream)
    print(f"wrote {len(records)} occurrences to {out / 'occurrences.csv'}")
    return 0


def _cmd_recognize(config: RunConfig, args: argparse.Namespace) -> int:
    defs = _load_all_definitions(config.definitions)
    out = _out_dir(config)
    source = Path(args.occurrences) if args.occurrences else out / "occurrences.csv"
    with open(source) as stream:
        records = ingest_mod.read_occurrences(stream)
    scored = _score_records(records, defs, config.lam)
    rows = [
        recog_mod.ScoredOccurrence(
            activity=r.activity, start=r.start, end=r.end,
            score=v.score, completed=v.completed,
        )
        for r, v in scored
    ]
    with _open_write(out / "verdicts.csv") as stream:
        recog_mod.write_verdicts(rows, stream)
    completed = sum(1 for row in rows if row.completed)
    print(f"wrote {len(rows)} verdicts ({completed} completed) to {out / 'verdicts.csv'}")
    return 0


def _cmd_affect(config: RunConfig, args: argparse.Namespace) -> int:
    defs = _load_all_definitions(config.definitions)
    out = _out_dir(config)
    source = Path(args.occurrences) if args.occurrences else out / "occurrences.csv"
    with open(source) as stream:
        records = ingest_mod.read_occurrences(stream)
    scored = _score_records(records, defs, config.lam)
    annotations, model = _annotate_records(scored, defs, config)
    with _open_write(out / "annotated.csv") as stream:
        affect_mod.write_annotated(annotations, stream)
    with _open_write(out / "ux_model.json") as stream:
        affect_mod.write_ux_model(model, stream)
    positive = sum(
        1 for a in annotations if a.emotion is affect_mod.EmotionLabel.POSITIVE
    )
    print(
        f"wrote {len(annotations)} annotations ({positive} positive) "
        f"to {out / 'annotated.csv'}"
    )
    return 0


def _cmd_cluster(config: RunConfig, args: argparse.Namespace) -> int:
    out = _out_dir(config)
    source = Path(args.occurrences) if args.occurrences else out / "occurrences.csv"
    with open(source) as stream:
        records = ingest_mod.read_occurrences(stream)
    rows = temporal_mod.cluster_report(records)
    with _open_write(out / "clusters.csv") as stream:
        temporal_mod.write_clusters(rows, stream)
    print(f"wrote {len(rows)} cluster rows to {out / 'clusters.csv'}")
    return 0


def _cmd_train(config: RunConfig, args: argparse.Namespace) -> int:
    defs = _load_all_definitions(config.definitions)
    out = _out_dir(config)
    source = Path(args.annotated) if args.annotated else out / "annotated.csv"
    with open(source) as stream:
        annotations = affect_mod.read_annotated(stream)
    transitions = recom_mod.extract_transitions(annotations, config.bucket_width)
    train_part, _ = _split(transitions, config)
    model = recom_mod.train(
        train_part,
        alpha=config.alpha,
        bucket_width=config.bucket_width,
        activities=defs.names,
    )
    with _open_write(out / "model.json") as stream:
        recom_mod.write_model(model, stream)
    print(
        f"trained on {len(train_part)} of {len(transitions)} transitions, "
        f"wrote {out / 'model.json'}"
    )
    return 0


def _parse_feature_row(
    row: dict[str, str], lineno: int
) -> tuple[str, recom_mod.FeatureVector]:
    try:
        previous = row.get("previous_activity", "").strip()
        features = recom_mod.FeatureVector(
            time_bucket=int(row["time_bucket"]),
            previous_activity=(
                None if previous in ("", recom_mod.NO_PREVIOUS) else previous
            ),
            emotion=affect_mod.EmotionLabel(row["emotion"].strip()),
            ux=affect_mod.UXLabel(row["ux"].strip()),
            day_kind=recom_mod.DayKind(row["day_kind"].strip()),
        )
    except (KeyError, ValueError) as exc:
        raise ValueError(f"features line {lineno}: {exc}") from None
    return row.get("activity", "").strip(), features


def _cmd_recommend(config: RunConfig, args: argparse.Namespace) -> int:
    out = _out_dir(config)
    model_path = Path(args.model) if args.model else out / "model.json"
    with open(model_path) as stream:
        model = recom_mod.read_model(stream)
    with open(args.features) as stream:
        reader = csv.DictReader(stream)
        parsed = [
            _parse_feature_row(row, lineno)
            for lineno, row in enumerate(reader, start=2)
        ]
    rows = [
        (true_label, recom_mod.predict_confidences(model, features))
        for true_label, features in parsed
    ]
    _write_predictions(out / "predictions.csv", model, rows)
    print(f"wrote {len(rows)} predictions to {out / 'predictions.csv'}")
    return 0


def _cmd_evaluate(config: RunConfig, args: argparse.Namespace) -> int:
    defs = _load_all_definitions(config.definitions)
    out = _out_dir(config)
    source = Path(args.predictions) if args.predictions else out / "predictions.csv"
    pairs: list[tuple[str, str]] = []
    with open(source) as stream:
        reader = csv.DictReader(stream)
        for lineno, row in enumerate(reader, start=2):
            true_label = row.get("activity", "").strip()
            predicted = row.get("prediction", "").strip()
            if not true_label:
                raise ValueError(
                    f"{source}: line {lineno}: missing true activity label"
                )
            pairs.append((predicted, true_label))
    labels = tuple(sorted(defs.names))
    report = _evaluate_pairs(pairs, labels, config, out)
    print(f"accuracy: {report.accuracy * 100:.2f}% over {report.grand_total} pairs")
    return 0


def _cmd_pipeline(config: RunConfig) -> int:
    defs = _load_all_definitions(config.definitions)
    out = _out_dir(config)

    records = _ingest_records(config, defs)
    with _open_write(out / "occurrences.csv") as stream:
        ingest_mod.write_occurrences(records, stream)

    scored = _score_records(records, defs, config.lam)
    verdict_rows = [
        recog_mod.ScoredOccurrence(
            activity=r.activity, start=r.start, end=r.end,
            score=v.score, completed=v.completed,
        )
        for r, v in scored
    ]
    with _open_write(out / "verdicts.csv") as stream:
        recog_mod.write_verdicts(verdict_rows, stream)

    annotations, ux_model = _annotate_records(scored, defs, config)
    with _open_write(out / "annotated.csv") as stream:
        affect_mod.write_annotated(annotations, stream)
    with _open_write(out / "ux_model.json") as stream:
        affect_mod.write_ux_model(ux_model, stream)

    with _open_write(out / "clusters.csv") as stream:
        temporal_mod.write_clusters(temporal_mod.cluster_report(records), stream)

    transitions = recom_mod.extract_transitions(annotations, config.bucket_width)
    train_part, test_part = _split(transitions, config)
    model = recom_mod.train(
        train_part,
        alpha=config.alpha,
        bucket_width=config.bucket_width,
        activities=defs.names,
    )
    with _open_write(out / "model.json") as stream:
        recom_mod.write_model(model, stream)

    prediction_rows = [
        (t.next_activity, recom_mod.predict_confidences(model, t.features))
        for t in test_part
    ]
    _write_predictions(out / "predictions.csv", model, prediction_rows)

    pairs = [
        (recom_mod.recommend(vector), true_label)
        for true_label, vector in prediction_rows
    ]
    report = _evaluate_pairs(pairs, model.activities, config, out)

    print(
        f"pipeline: {len(records)} occurrences, {len(transitions)} transitions "
        f"({len(train_part)} train / {len(test_part)} test)"
    )
    print(f"accuracy: {report.accuracy * 100:.2f}% over {report.grand_total} pairs")
    return 0


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="adl-engine",
        description=(
            "Activity recognition, affect inference, and next-activity "
            "recommendation over smart-home event data."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="path to the JSON run configuration")
        p.add_argument("--out", help="output directory (overrides config)")
        p.add_argument("--seed", type=int, help="seed for randomized splitting")
        p.add_argument("--on-watts", type=float, dest="on_watts",
                       help="power on-threshold in watts")
        p.add_argument("--gap-tolerance", type=int, dest="gap_tolerance",
                       help="max off-samples bridged inside an occurrence")
        p.add_argument("--lambda", type=float, dest="lam",
                       help="atomic-side blend share in [0, 1]")
        p.add_argument("--window", type=int, help="score history window size")
        p.add_argument("--epsilon", type=float, help="score slack below history mean")
        p.add_argument("--bucket-width", type=int, dest="bucket_width",
                       help="time bucket width in minutes")
        p.add_argument("--k", type=int, help="neighbor count for temporal KNN")
        p.add_argument("--alpha", type=float, help="additive smoothing constant")
        p.add_argument("--train-fraction", type=float, dest="train_fraction",
                       help="training share in (0, 1)")
        p.add_argument("--split", choices=["chronological", "random"],
                       help="split discipline")

    p_validate = sub.add_parser("validate", help="check definition files")
    p_validate.add_argument("files", nargs="*", help="definition JSON files")
    add_common(p_validate)

    for name, help_text in [
        ("ingest", "parse datasets into occurrence records"),
        ("recognize", "score occurrences against their definitions"),
        ("affect", "attach emotion and UX labels to occurrences"),
        ("cluster", "lay out occurrences on the day clock"),
        ("train", "fit the next-activity model on the training split"),
        ("recommend", "predict confidence vectors for feature rows"),
        ("evaluate", "score saved predictions into a metrics report"),
        ("pipeline", "run every stage end to end"),
    ]:
        p = sub.add_parser(name, help=help_text)
        add_common(p)
        if name in ("recognize", "affect", "cluster"):
            p.add_argument("--occurrences", help="occurrence CSV (default: <out>/occurrences.csv)")
        if name == "train":
            p.add_argument("--annotated", help="annotated CSV (default: <out>/annotated.csv)")
        if name == "recommend":
            p.add_argument("--model", help="model JSON (default: <out>/model.json)")
            p.add_argument("--features", required=True,
                           help="feature rows CSV (time_bucket,previous_activity,emotion,ux,day_kind[,activity])")
        if name == "evaluate":
            p.add_argument("--predictions", help="predictions CSV (default: <out>/predictions.csv)")

    return parser


def _resolve_config(args: argparse.Namespace) -> RunConfig | None:
    if args.config is None:
        return None
    config = load_config(args.config)
    return with_overrides(
        config,
        out_dir=args.out,
        seed=args.seed,
        on_watts=args.on_watts,
        gap_tolerance=args.gap_tolerance,
        lam=args.lam,
        window=args.window,
        epsilon=args.epsilon,
        bucket_width=args.bucket_width,
        k=args.k,
        alpha=args.alpha,
        train_fraction=args.train_fraction,
        split=args.split,
    )


def main(argv: list[str] | None = None) -> int:
    _setup_logging()
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config = _resolve_config(args)
        if args.command == "validate":
            return _cmd_validate(config, args)
        if config is None:
            parser.error(f"{args.command} requires --config")
        if args.command == "ingest":
            return _cmd_ingest(config)
        if args.command == "recognize":
            return _cmd_recognize(config, args)
        if args.command == "affect":
            return _cmd_affect(config, args)
        if args.command == "cluster":
            return _cmd_cluster(config, args)
        if args.command == "train":
            return _cmd_train(config, args)
        if args.command == "recommend":
            return _cmd_recommend(config, args)
        if args.command == "evaluate":
            return _cmd_evaluate(config, args)
        if args.command == "pipeline":
            return _cmd_pipeline(config)
        parser.error(f"unknown subcommand {args.command!r}")
    except _RECOVERABLE as exc:
        logger.debug("command failed", exc_info=True)
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
