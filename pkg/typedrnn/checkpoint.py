"""
Checkpoint container.

A checkpoint is an uncompressed zip archive with fixed member timestamps:

    meta.json           {"format": "typedrnn-checkpoint", "version": 1,
                         "config": {...flat RunConfig...},
                         "relations": [...labels, UNK first...],
                         "extra": {...}}
    params/<name>.npy   one float64 array per model parameter, in .npy format

Members are written in sorted order, so identical models produce
byte-identical files.
"""

import io
import json
import os
import zipfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .config import RunConfig
from .deptree import RelationVocab
from .embeddings import WordEmbeddings
from .errors import CompatibilityError, DataFormatError
from .model import SiameseModel, build_model

FORMAT_NAME = "typedrnn-checkpoint"
FORMAT_VERSION = 1

_FIXED_TIME = (1980, 1, 1, 0, 0, 0)
_META = "meta.json"
_PARAM_PREFIX = "params/"


@dataclass
class Checkpoint:
    config: RunConfig
    relations: RelationVocab
    params: dict[str, np.ndarray]
    extra: dict[str, Any] = field(default_factory=dict)

    def build_model(self, words: WordEmbeddings) -> SiameseModel:
        """Model with the stored parameters installed."""
        tied = not any(name.startswith("encoder_b.") for name in self.params)
        model = build_model(self.config.hp, self.relations, words, tied=tied)
        model.load_parameters(self.params)
        return model


def _write_member(zf: zipfile.ZipFile, name: str, data: bytes) -> None:
    info = zipfile.ZipInfo(name, date_time=_FIXED_TIME)
    info.compress_type = zipfile.ZIP_STORED
    info.external_attr = 0o644 << 16
    zf.writestr(info, data)


def save_checkpoint(
    path: str | Path,
    model: SiameseModel,
    config: RunConfig,
    params: dict[str, np.ndarray] | None = None,
    extra: dict[str, Any] | None = None,
) -> Path:
    """
    Write a checkpoint atomically.

    Args:
        path: Destination file
        model: Model whose relation vocabulary and parameters are stored
        config: Run configuration embedded for self-contained evaluation
        params: Parameter arrays to store instead of the model's current ones
        extra: Additional JSON-serializable metadata

    Returns:
        The destination path
    """
    path = Path(path)
    arrays = params if params is not None else model.snapshot()
    meta = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "config": config.to_flat(),
        "relations": model.encoder.relations.labels,
        "extra": {"model": model.describe(), **(extra or {})},
    }

    tmp = path.with_name(path.name + ".tmp")
    path.parent.mkdir(parents=True, exist_ok=True)
    try:
        with zipfile.ZipFile(tmp, "w") as zf:
            _write_member(zf, _META, json.dumps(meta, sort_keys=True, indent=2).encode("utf-8"))
            for name in sorted(arrays):
                buffer = io.BytesIO()
                array = np.ascontiguousarray(arrays[name], dtype=np.float64)
                np.lib.format.write_array(buffer, array, allow_pickle=False)
                _write_member(zf, f"{_PARAM_PREFIX}{name}.npy", buffer.getvalue())
        os.replace(tmp, path)
    except BaseException:
        tmp.unlink(missing_ok=True)
        raise
    return path


def load_checkpoint(path: str | Path) -> Checkpoint:
    """
    Read a checkpoint written by save_checkpoint.

    Raises:
        DataFormatError: if the file is not a checkpoint.
        CompatibilityError: if it was written by another format version.
    """
    try:
        with zipfile.ZipFile(path) as zf:
            meta = json.loads(zf.read(_META).decode("utf-8"))
            if meta.get("format") != FORMAT_NAME:
                raise DataFormatError(f"{path}: not a checkpoint")
            if meta.get("version") != FORMAT_VERSION:
                raise CompatibilityError(
                    f"{path}: checkpoint version {meta.get('version')}, expected {FORMAT_VERSION}"
                )
            params = {}
            for name in zf.namelist():
                if name.startswith(_PARAM_PREFIX) and name.endswith(".npy"):
                    with zf.open(name) as fh:
                        key = name[len(_PARAM_PREFIX):-len(".npy")]
                        params[key] = np.lib.format.read_array(fh, allow_pickle=False)
    except (zipfile.BadZipFile, KeyError, json.JSONDecodeError) as e:
        raise DataFormatError(f"{path}: unreadable checkpoint: {e}") from e

    return Checkpoint(
        config=RunConfig.from_flat(meta["config"]),
        relations=RelationVocab(labels=list(meta["relations"])),
        params=params,
        extra=meta.get("extra", {}),
    )

