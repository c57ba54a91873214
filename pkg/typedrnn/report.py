"""Report generation for training runs."""

import csv
import json
from collections.abc import Iterable, Sequence
from pathlib import Path
from typing import Any

from .db import get_db, get_epochs, get_run

EPOCH_LOG_COLUMNS = ["epoch", "train_loss", "dev_metric", "test_metric", "wall_seconds"]


def generate_report(
    db_path: str | Path,
    run_id: str,
    output_dir: Path,
) -> Path:
    """
    Generate a markdown report and CSV epoch log for a run.

    Args:
        db_path: Path to the SQLite database
        run_id: The run ID to report on
        output_dir: Directory to write report files

    Returns:
        Path of the written report.md
    """
    db = get_db(db_path)

    run_info = get_run(db, run_id)
    if not run_info:
        raise ValueError(f"Run {run_id} not found")

    epochs = get_epochs(db, run_id)
    if not epochs:
        raise ValueError(f"No epochs found for run {run_id}")

    output_dir.mkdir(parents=True, exist_ok=True)
    path = output_dir / "report.md"
    path.write_text(generate_markdown(run_info, epochs), encoding="utf-8")
    export_epoch_csv(epochs, output_dir / "epochs.csv")
    return path


def _metric_name(run_info: dict[str, Any]) -> str:
    return "accuracy" if run_info["task"] == "entailment" else "pearson"


def _fmt(value: Any, digits: int = 4) -> str:
    if value is None or value == "":
        return "-"
    if isinstance(value, float):
        return f"{value:.{digits}f}"
    return str(value)


def generate_markdown(run_info: dict[str, Any], epochs: list[dict[str, Any]]) -> str:
    """Generate a markdown report of one run."""
    metric = _metric_name(run_info)
    lines = [
        "# Training Run Report",
        "",
        "## Run Information",
        "",
        f"- **Run ID**: {run_info['run_id']}",
        f"- **Started**: {run_info['started_at']}",
        f"- **Task**: {run_info['task']}",
        f"- **Encoder**: {run_info['encoder']}" + ("" if run_info.get("tied", 1) else " (untied)"),
        f"- **Status**: {run_info['status']}",
        f"- **Best epoch**: {_fmt(run_info.get('best_epoch'))}",
    ]

    test_metrics = json.loads(run_info.get("test_metrics_json") or "{}")
    if test_metrics:
        lines.extend(["", "## Test Metrics (best epoch)", "", "| Metric | Value |", "|--------|-------|"])
        for name, value in test_metrics.items():
            if value is not None:
                lines.append(f"| {name} | {_fmt(value)} |")

    lines.extend(
        [
            "",
            "## Learning Curve",
            "",
            f"| Epoch | Train loss | Dev {metric} | Test {metric} | Seconds |",
            "|-------|------------|------------|-------------|---------|",
        ]
    )
    for row in epochs:
        lines.append(
            f"| {row['epoch']} | {_fmt(row['train_loss'], 5)} | {_fmt(row['dev_metric'])} | "
            f"{_fmt(row['test_metric'])} | {_fmt(row['wall_seconds'], 1)} |"
        )

    config = json.loads(run_info.get("config_json") or "{}")
    if config:
        lines.extend(["", "## Configuration", "", "```"])
        lines.extend(f"{key}={value}" for key, value in config.items())
        lines.append("```")

    lines.append("")
    return "\n".join(lines)


def compare_runs(db_path: str | Path, run_ids: Sequence[str]) -> str:
    """
    Markdown learning-curve comparison of several runs.

    One column per run holding its test selection metric per epoch, so a
    typed run can be read against a single-weight baseline trained alike.
    """
    db = get_db(db_path)
    runs = []
    for run_id in run_ids:
        run_info = get_run(db, run_id)
        if not run_info:
            raise ValueError(f"Run {run_id} not found")
        runs.append((run_info, {row["epoch"]: row for row in get_epochs(db, run_id)}))

    metrics = {_metric_name(info) for info, _ in runs}
    if len(metrics) > 1:
        raise ValueError("runs of different tasks cannot be compared")
    metric = metrics.pop() if metrics else "metric"

    headers = [f"{info['run_id']} ({info['encoder']})" for info, _ in runs]
    lines = [
        f"# Learning Curves: test {metric}",
        "",
        "| Epoch | " + " | ".join(headers) + " |",
        "|-------|" + "|".join("-" * (len(h) + 2) for h in headers) + "|",
    ]
    last_epoch = max((max(rows, default=0) for _, rows in runs), default=0)
    for epoch in range(1, last_epoch + 1):
        cells = [_fmt(rows[epoch]["test_metric"]) if epoch in rows else "-" for _, rows in runs]
        lines.append(f"| {epoch} | " + " | ".join(cells) + " |")

    lines.extend(["", "| Run | Best epoch | Test at best epoch |", "|-----|------------|--------------------|"])
    for info, _ in runs:
        lines.append(f"| {info['run_id']} | {_fmt(info.get('best_epoch'))} | {_fmt(info.get('test_metric'))} |")
    lines.append("")
    return "\n".join(lines)


def export_epoch_csv(rows: Iterable[dict[str, Any]], output_path: Path) -> None:
    """Export the epoch log; missing metrics are written as empty cells."""
    with open(output_path, "w", newline="", encoding="utf-8") as f:
        writer = csv.DictWriter(f, fieldnames=EPOCH_LOG_COLUMNS, extrasaction="ignore")
        writer.writeheader()
        for row in rows:
            writer.writerow({key: row.get(key) for key in EPOCH_LOG_COLUMNS})
