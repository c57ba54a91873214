"""Tests for GloVe loading and word lookup."""

import numpy as np
import pytest

from typedrnn.embeddings import WordEmbeddings, load_glove_text, load_word_list
from typedrnn.errors import EmbeddingFormatError


def write(tmp_path, text: str):
    path = tmp_path / "vectors.txt"
    path.write_text(text, encoding="utf-8")
    return path


def test_load_two_lines(tmp_path):
    vocab, table = load_glove_text(write(tmp_path, "the 0.1 0.2 0.3\nfish 1 2 3\n"))
    assert len(vocab) == 2
    assert vocab.embedding_dim == 3
    np.testing.assert_array_equal(table.values[vocab.index["fish"]], [1, 2, 3])


def test_inconsistent_dimension_names_line(tmp_path):
    path = write(tmp_path, "the 0.1 0.2 0.3\nfish 1 2 3\ncat 1 2 3 4\n")
    with pytest.raises(EmbeddingFormatError) as info:
        load_glove_text(path)
    assert info.value.line == 3


def test_bad_float(tmp_path):
    with pytest.raises(EmbeddingFormatError, match="line 2"):
        load_glove_text(write(tmp_path, "the 0.1 0.2\nfish 1 x\n"))


def test_empty_file(tmp_path):
    with pytest.raises(EmbeddingFormatError):
        load_glove_text(write(tmp_path, ""))


def test_duplicates_keep_first_row(tmp_path):
    vocab, table = load_glove_text(write(tmp_path, "a 1 1\na 2 2\n"))
    assert len(vocab) == 1
    np.testing.assert_array_equal(table.values[0], [1, 1])


def test_restrict_to_still_checks_every_line(tmp_path):
    """Skipped words are still validated for dimension."""
    path = write(tmp_path, "a 1 1\nb 2 2\nc 3\n")
    with pytest.raises(EmbeddingFormatError):
        load_glove_text(path, restrict_to={"a"})
    vocab, _ = load_glove_text(write(tmp_path, "a 1 1\nb 2 2\n"), restrict_to={"b"})
    assert vocab.words() == ["b"]


def test_table_is_read_only(tmp_path):
    _, table = load_glove_text(write(tmp_path, "a 1 1\n"))
    with pytest.raises(ValueError):
        table.values[0, 0] = 5.0


def test_lookup_exact_lowercase_and_oov(tmp_path):
    """Exact row, then the lowercase row, then the zero vector."""
    words = WordEmbeddings.load(write(tmp_path, "the 0.5 -0.5\nFish 1 2\n"))
    np.testing.assert_array_equal(words.lookup("Fish").values, [1, 2])
    np.testing.assert_array_equal(words.lookup("The").values, [0.5, -0.5])
    oov = words.lookup("zzqx")
    np.testing.assert_array_equal(oov.values, [0, 0])
    np.testing.assert_array_equal(words.lookup("zzqx").values, oov.values)
    assert not oov.requires_grad


def test_coverage():
    words = WordEmbeddings.synthetic(["a", "b"], dim=2)
    assert words.coverage(["a", "B", "c", "d"]) == 0.5
    assert words.coverage([]) == 1.0


def test_write_and_reload(tmp_path):
    words = WordEmbeddings.synthetic(["a", "b", "c"], dim=4, seed=1)
    words.write_glove_text(tmp_path / "out.txt")
    loaded = WordEmbeddings.load(tmp_path / "out.txt")
    np.testing.assert_array_equal(loaded.table.values, words.table.values)


def test_word_list(tmp_path):
    path = tmp_path / "words.txt"
    path.write_text("the\n\nfish\n", encoding="utf-8")
    assert load_word_list(path) == {"the", "fish"}


def test_word_with_inner_spaces(tmp_path):
    """Extra leading fields that are not numbers belong to the word."""
    vocab, table = load_glove_text(write(tmp_path, "the 0.1 0.2\n. . . 1 2\nat name@x.com 3 4\n"))
    assert vocab.words() == ["the", ". . .", "at name@x.com"]
    np.testing.assert_array_equal(table.values[vocab.index[". . ."]], [1, 2])
    np.testing.assert_array_equal(table.values[vocab.index["at name@x.com"]], [3, 4])
