"""Tests for the synthetic clause generator."""

import numpy as np

from typedrnn.deptree import parse_conllu
from typedrnn.synthetic import Clause, clause_tree, generate_pairs, random_tree, synthetic_embeddings, write_dataset


def test_clause_tree_shape():
    """Subject and object attach to the verb; the auxiliary too."""
    tree = clause_tree(Clause("dog", "chasing", "cat", "big", None))
    assert str(tree) == "the big dog is chasing the cat"
    assert tree.root.word_form == "chasing"
    children = {rel: child for rel, child in tree.root.children}
    assert set(children) == {"nsubj", "aux", "obj"}
    assert [(rel, c.word_form) for rel, c in children["nsubj"].children] == [("det", "the"), ("amod", "big")]


def test_negated_clause_has_nobody_subject():
    tree = clause_tree(Clause(None, "feeding", "bird", None, "small"))
    assert str(tree) == "nobody is feeding the small bird"
    assert dict((rel, c.word_form) for rel, c in tree.root.children)["nsubj"] == "nobody"


def test_pair_kinds_and_labels():
    examples = generate_pairs(8, seed=3)
    labels = [e.record.entailment for e in examples]
    assert labels == ["ENTAILMENT", "NEUTRAL", "CONTRADICTION", "NEUTRAL"] * 2
    same, swap, negate = examples[0], examples[1], examples[2]
    assert same.record.sentence_a == same.record.sentence_b
    assert sorted(swap.tree_a.words()) == sorted(swap.tree_b.words())
    assert swap.record.sentence_a != swap.record.sentence_b
    assert negate.record.sentence_b.startswith("nobody")
    assert all(1.0 <= e.record.relatedness <= 5.0 for e in examples)


def test_generation_is_seeded():
    first = [e.record for e in generate_pairs(12, seed=4)]
    assert first == [e.record for e in generate_pairs(12, seed=4)]
    assert first != [e.record for e in generate_pairs(12, seed=5)]


def test_random_tree_sizes():
    rng = np.random.default_rng(0)
    for length in (1, 3, 9):
        assert random_tree(rng, length).sentence_length == length


def test_embeddings_cover_generated_words():
    words = synthetic_embeddings(5, seed=0)
    tokens = [w for e in generate_pairs(12) for w in e.tree_a.words() + e.tree_b.words()]
    assert words.coverage(tokens) == 1.0


def test_write_dataset(tmp_path):
    config = write_dataset(tmp_path, count=20, seed=1, dim=6, task="relatedness")
    assert config.hp.task == "relatedness"
    assert (tmp_path / "train.cfg").exists()
    trees = parse_conllu((tmp_path / "a.conllu").read_text(encoding="utf-8"))
    assert len(trees) == 20
    assert config.out_dir == tmp_path / "runs"
