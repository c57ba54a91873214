"""Tests for the run database and markdown reports."""

import csv

import pytest

from typedrnn.db import finish_run, get_epochs, get_run, get_runs, init_db, insert_epoch, insert_run
from typedrnn.report import compare_runs, generate_report


def add_run(db, run_id: str, encoder: str, metrics: list[float], task: str = "relatedness") -> None:
    insert_run(db, run_id, task, encoder, {"task": task, "encoder_kind": encoder}, f"runs/{run_id}")
    for epoch, value in enumerate(metrics, start=1):
        insert_epoch(
            db,
            run_id,
            {"epoch": epoch, "train_loss": 1.0 / epoch, "dev_metric": value, "test_metric": value, "wall_seconds": 0.5, "dev_pearson": value},
        )
    finish_run(db, run_id, "finished", best_epoch=len(metrics), test_metric=metrics[-1], test_metrics={"pearson": metrics[-1]})


def test_run_lifecycle(tmp_path):
    db = init_db(tmp_path / "results.sqlite")
    insert_run(db, "r1", "entailment", "typed", {"seed": 0}, "runs/r1", tied=False)
    assert get_run(db, "r1")["status"] == "running"
    assert get_run(db, "r1")["tied"] == 0
    insert_epoch(db, "r1", {"epoch": 2, "train_loss": 0.5, "dev_accuracy": 0.7})
    insert_epoch(db, "r1", {"epoch": 1, "train_loss": 0.9, "dev_accuracy": 0.6})
    assert [row["epoch"] for row in get_epochs(db, "r1")] == [1, 2]
    finish_run(db, "r1", "finished", best_epoch=2)
    run = get_run(db, "r1")
    assert run["status"] == "finished" and run["best_epoch"] == 2 and run["finished_at"]
    assert get_run(db, "missing") is None
    assert [r["run_id"] for r in get_runs(db)] == ["r1"]


def test_generate_report(tmp_path):
    db_path = tmp_path / "results.sqlite"
    add_run(init_db(db_path), "typed_run", "typed", [0.5, 0.6, 0.7])
    path = generate_report(db_path, "typed_run", tmp_path / "out")
    text = path.read_text(encoding="utf-8")
    assert text.startswith("# Training Run Report")
    assert "typed_run" in text and "0.7000" in text
    with open(tmp_path / "out" / "epochs.csv", newline="", encoding="utf-8") as f:
        rows = list(csv.DictReader(f))
    assert [r["epoch"] for r in rows] == ["1", "2", "3"]
    assert list(rows[0]) == ["epoch", "train_loss", "dev_metric", "test_metric", "wall_seconds"]


def test_report_unknown_run(tmp_path):
    db_path = tmp_path / "results.sqlite"
    init_db(db_path)
    with pytest.raises(ValueError, match="not found"):
        generate_report(db_path, "nope", tmp_path)


def test_compare_runs(tmp_path):
    db_path = tmp_path / "results.sqlite"
    db = init_db(db_path)
    add_run(db, "typed_run", "typed", [0.5, 0.6, 0.7])
    add_run(db, "single_run", "single", [0.4, 0.45])
    text = compare_runs(db_path, ["typed_run", "single_run"])
    assert text.startswith("# Learning Curves: test pearson")
    assert "| 3 | 0.7000 | - |" in text
    assert "| single_run | 2 | 0.4500 |" in text


def test_compare_runs_of_different_tasks(tmp_path):
    db_path = tmp_path / "results.sqlite"
    db = init_db(db_path)
    add_run(db, "a", "typed", [0.5])
    add_run(db, "b", "typed", [0.5], task="entailment")
    with pytest.raises(ValueError, match="different tasks"):
        compare_runs(db_path, ["a", "b"])
