"""SICK sentence-pair records and their pairing with parsed trees."""

import csv
import logging
import re
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from enum import StrEnum
from pathlib import Path
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from .deptree import DepTree
from .errors import DataFormatError, RecordError, UsageError

logger = logging.getLogger(__name__)

REQUIRED_COLUMNS = (
    "pair_ID",
    "sentence_A",
    "sentence_B",
    "relatedness_score",
    "entailment_judgment",
)
SPLIT_COLUMN = "SemEval_set"

_TOKEN = re.compile(r"\w+|[^\w\s]")


class Split(StrEnum):
    TRAIN = "TRAIN"
    TRIAL = "TRIAL"
    TEST = "TEST"


class SickRecord(BaseModel):
    """Schema for one SICK row."""

    model_config = ConfigDict(frozen=True)

    pair_id: int
    sentence_a: str
    sentence_b: str
    relatedness: float = Field(ge=1.0, le=5.0)
    entailment: Literal["CONTRADICTION", "NEUTRAL", "ENTAILMENT"]
    split: Split = Split.TRAIN

    @field_validator("entailment", "split", mode="before")
    @classmethod
    def _upper(cls, value: object) -> object:
        return value.strip().upper() if isinstance(value, str) else value


def read_sick(path: str | Path, default_split: Split = Split.TRAIN) -> list[SickRecord]:
    """
    Read a tab-separated SICK file in file order.

    Raises:
        DataFormatError: if a required column is missing.
        RecordError: if a row has an invalid value, naming its pair_ID.
    """
    records: list[SickRecord] = []
    with open(path, encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f, delimiter="\t", quoting=csv.QUOTE_NONE)
        header = reader.fieldnames or []
        for column in REQUIRED_COLUMNS:
            if column not in header:
                raise DataFormatError(f"{path}: missing column {column}")

        for row in reader:
            pair_id = row.get("pair_ID", "?")
            try:
                records.append(
                    SickRecord(
                        pair_id=row["pair_ID"],
                        sentence_a=row["sentence_A"],
                        sentence_b=row["sentence_B"],
                        relatedness=row["relatedness_score"],
                        entailment=row["entailment_judgment"],
                        split=row.get(SPLIT_COLUMN) or default_split,
                    )
                )
            except ValidationError as e:
                reasons = "; ".join(
                    f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in e.errors()
                )
                raise RecordError(pair_id, reasons) from e
    return records


def load_sick(
    path: str | Path, default_split: Split = Split.TRAIN
) -> dict[Split, list[SickRecord]]:
    """Records grouped by split (every split present as a key)."""
    grouped: dict[Split, list[SickRecord]] = {split: [] for split in Split}
    for record in read_sick(path, default_split):
        grouped[record.split].append(record)
    logger.info(
        "Loaded %s: %s",
        path,
        ", ".join(f"{split.value.lower()} {len(rows)}" for split, rows in grouped.items()),
    )
    return grouped


def write_sick(records: Iterable[SickRecord], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, delimiter="\t", quoting=csv.QUOTE_NONE, lineterminator="\n")
        writer.writerow([*REQUIRED_COLUMNS, SPLIT_COLUMN])
        for r in records:
            writer.writerow(
                [r.pair_id, r.sentence_a, r.sentence_b, repr(r.relatedness), r.entailment, r.split.value]
            )


@dataclass(frozen=True)
class PairExample:
    """A SICK record with the parse trees of both sentences."""

    record: SickRecord
    tree_a: DepTree
    tree_b: DepTree


def attach_trees(
    records: Sequence[SickRecord],
    trees_a: Sequence[DepTree],
    trees_b: Sequence[DepTree],
) -> list[PairExample]:
    """Zip records with the A-side and B-side trees by position."""
    if not (len(records) == len(trees_a) == len(trees_b)):
        raise UsageError(
            f"{len(records)} records but {len(trees_a)} A-side and {len(trees_b)} B-side trees"
        )
    return [PairExample(r, a, b) for r, a, b in zip(records, trees_a, trees_b)]


def group_by_split(examples: Iterable[PairExample]) -> dict[Split, list[PairExample]]:
    grouped: dict[Split, list[PairExample]] = {split: [] for split in Split}
    for example in examples:
        grouped[example.record.split].append(example)
    return grouped


def token_count(sentence: str) -> int:
    """Rough token count (words and punctuation marks)."""
    return len(_TOKEN.findall(sentence))


@dataclass
class AlignmentIssue:
    pair_id: int
    side: str
    sentence: str
    expected_tokens: int
    tree_tokens: int


def check_alignment(examples: Iterable[PairExample], tolerance: int = 0) -> list[AlignmentIssue]:
    """Pairs whose tree length differs from the sentence's token count."""
    issues = []
    for example in examples:
        r = example.record
        for side, sentence, tree in (("A", r.sentence_a, example.tree_a), ("B", r.sentence_b, example.tree_b)):
            expected = token_count(sentence)
            if abs(expected - tree.sentence_length) > tolerance:
                issues.append(AlignmentIssue(r.pair_id, side, sentence, expected, tree.sentence_length))
    return issues
