"""Fixed pre-trained word embeddings (GloVe text format)."""

import logging
from collections.abc import Iterable
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .autodiff import Tensor, constant
from .errors import EmbeddingFormatError

logger = logging.getLogger(__name__)


@dataclass
class WordVocab:
    """Word → row index of the embedding table."""

    embedding_dim: int
    index: dict[str, int] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.index)

    def __contains__(self, word: str) -> bool:
        return word in self.index

    def words(self) -> list[str]:
        return sorted(self.index, key=self.index.__getitem__)


@dataclass
class EmbeddingTable:
    """Row block of word vectors. Rows are read-only unless trainable."""

    values: np.ndarray
    trainable: bool = False

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 2:
            raise ValueError(f"embedding table must be rank 2, got {self.values.shape}")
        if not self.trainable:
            self.values.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.values.shape[1]


def _is_float(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def load_glove_text(
    path: str | Path,
    restrict_to: Iterable[str] | None = None,
) -> tuple[WordVocab, EmbeddingTable]:
    """
    Load "word v1 ... vd" lines.

    The first line fixes d. A later line with more fields whose second
    field is not a number is read as a word containing spaces followed by
    the last d values.

    Args:
        path: GloVe text file (UTF-8, space separated).
        restrict_to: If given, only these words are kept. Every line is
            still checked for a consistent dimension.

    Returns:
        (WordVocab, EmbeddingTable). Duplicate words keep the first row.

    Raises:
        EmbeddingFormatError: on inconsistent dimension or a bad float,
            with the 1-based line number.
    """
    keep = set(restrict_to) if restrict_to is not None else None
    dim: int | None = None
    index: dict[str, int] = {}
    rows: list[np.ndarray] = []

    with open(path, encoding="utf-8") as f:
        for line_no, raw in enumerate(f, start=1):
            parts = raw.rstrip("\r\n").rstrip(" ").split(" ")
            if len(parts) == 1 and not parts[0]:
                continue
            word, fields = parts[0], parts[1:]
            if dim is None:
                if not fields:
                    raise EmbeddingFormatError(line_no, "no vector values")
                dim = len(fields)
            elif len(fields) > dim and not _is_float(fields[0]):
                # Some large GloVe files hold words with inner spaces.
                word, fields = " ".join(parts[: len(parts) - dim]), parts[len(parts) - dim :]
            if len(fields) != dim:
                raise EmbeddingFormatError(
                    line_no, f"expected {dim} values, got {len(fields)}"
                )
            if word in index or (keep is not None and word not in keep):
                continue
            try:
                vector = np.array([float(v) for v in fields], dtype=np.float64)
            except ValueError as e:
                raise EmbeddingFormatError(line_no, f"unparseable value: {e}") from e
            index[word] = len(rows)
            rows.append(vector)

    if dim is None:
        raise EmbeddingFormatError(0, "file contains no vectors")
    values = np.vstack(rows) if rows else np.zeros((0, dim))
    logger.info("Loaded %d embeddings of dimension %d from %s", len(rows), dim, path)
    return WordVocab(embedding_dim=dim, index=index), EmbeddingTable(values)


def load_word_list(path: str | Path) -> set[str]:
    """One word per line; blank lines ignored."""
    with open(path, encoding="utf-8") as f:
        return {line.strip() for line in f if line.strip()}


def lookup(word: str, vocab: WordVocab, table: EmbeddingTable) -> Tensor:
    """
    x_t for a word: exact match, then lowercase match, then the OOV vector.

    The OOV vector is all zeros.
    """
    row = vocab.index.get(word)
    if row is None:
        row = vocab.index.get(word.lower())
    if row is None:
        return constant(np.zeros(vocab.embedding_dim))
    return constant(table.values[row])


@dataclass
class WordEmbeddings:
    """Vocabulary and table bundled as the word lookup context of encoders."""

    vocab: WordVocab
    table: EmbeddingTable

    @property
    def dim(self) -> int:
        return self.vocab.embedding_dim

    @classmethod
    def load(cls, path: str | Path, restrict_to: Iterable[str] | None = None) -> "WordEmbeddings":
        return cls(*load_glove_text(path, restrict_to))

    @classmethod
    def synthetic(
        cls,
        words: Iterable[str],
        dim: int,
        seed: int = 0,
        scale: float = 0.05,
    ) -> "WordEmbeddings":
        """Seeded uniform vectors in [-scale, scale] for the given words."""
        unique = list(dict.fromkeys(words))
        rng = np.random.default_rng(seed)
        values = rng.uniform(-scale, scale, size=(len(unique), dim))
        vocab = WordVocab(embedding_dim=dim, index={w: i for i, w in enumerate(unique)})
        return cls(vocab, EmbeddingTable(values))

    def lookup(self, word: str) -> Tensor:
        return lookup(word, self.vocab, self.table)

    def coverage(self, words: Iterable[str]) -> float:
        """Fraction of words resolved without falling back to OOV."""
        words = list(words)
        if not words:
            return 1.0
        found = sum(1 for w in words if w in self.vocab or w.lower() in self.vocab)
        return found / len(words)

    def write_glove_text(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as f:
            for word in self.vocab.words():
                vector = self.table.values[self.vocab.index[word]]
                f.write(word + " " + " ".join(repr(float(v)) for v in vector) + "\n")
