"""SQLite database layer for storing training runs and their learning curves."""

import json
from datetime import datetime
from pathlib import Path
from typing import Any

import sqlite_utils


def get_db(db_path: str | Path = "results.sqlite") -> sqlite_utils.Database:
    """Get or create the database connection."""
    return sqlite_utils.Database(db_path)


def init_db(db_path: str | Path = "results.sqlite") -> sqlite_utils.Database:
    """Initialize the database with required tables."""
    db = get_db(db_path)

    if "runs" not in db.table_names():
        db["runs"].create(
            {
                "run_id": str,
                "started_at": str,
                "finished_at": str,
                "task": str,
                "encoder": str,
                "tied": int,
                "config_json": str,
                "status": str,
                "best_epoch": int,
                "test_metric": float,
                "test_metrics_json": str,
                "out_dir": str,
            },
            pk="run_id",
        )

    # Metric columns beyond these are added on first insert.
    if "epochs" not in db.table_names():
        db["epochs"].create(
            {
                "id": int,
                "run_id": str,
                "epoch": int,
                "train_loss": float,
                "dev_metric": float,
                "test_metric": float,
                "wall_seconds": float,
            },
            pk="id",
            foreign_keys=[("run_id", "runs", "run_id")],
        )

    return db


def insert_run(
    db: sqlite_utils.Database,
    run_id: str,
    task: str,
    encoder: str,
    config: dict[str, Any],
    out_dir: str,
    tied: bool = True,
) -> None:
    """Insert a new run record with status "running"."""
    db["runs"].insert(
        {
            "run_id": run_id,
            "started_at": datetime.now().isoformat(),
            "task": task,
            "encoder": encoder,
            "tied": 1 if tied else 0,
            "config_json": json.dumps(config, sort_keys=True),
            "status": "running",
            "out_dir": out_dir,
        }
    )


def insert_epoch(db: sqlite_utils.Database, run_id: str, row: dict[str, Any]) -> None:
    """Insert one epoch row; unseen metric columns are created."""
    db["epochs"].insert({"run_id": run_id, **row}, alter=True)


def finish_run(
    db: sqlite_utils.Database,
    run_id: str,
    status: str,
    best_epoch: int | None = None,
    test_metric: float | None = None,
    test_metrics: dict[str, Any] | None = None,
) -> None:
    """Record the outcome of a run."""
    db["runs"].update(
        run_id,
        {
            "finished_at": datetime.now().isoformat(),
            "status": status,
            "best_epoch": best_epoch,
            "test_metric": test_metric,
            "test_metrics_json": json.dumps(test_metrics or {}, sort_keys=True),
        },
    )


def get_epochs(db: sqlite_utils.Database, run_id: str) -> list[dict[str, Any]]:
    """Epoch rows of a run in epoch order."""
    if "epochs" not in db.table_names():
        return []
    return list(db["epochs"].rows_where("run_id = ?", [run_id], order_by="epoch"))


def get_run(db: sqlite_utils.Database, run_id: str) -> dict[str, Any] | None:
    """Get a specific run by ID."""
    try:
        return db["runs"].get(run_id)
    except sqlite_utils.db.NotFoundError:
        return None


def get_runs(db: sqlite_utils.Database) -> list[dict[str, Any]]:
    if "runs" not in db.table_names():
        return []
    return list(db["runs"].rows_where(order_by="started_at"))
