"""Shared fixtures: the mirrored fish/turtle trees and small lookup contexts."""

import pytest

from typedrnn.deptree import DepTree, RelationVocab
from typedrnn.embeddings import WordEmbeddings

FISH_TURTLE_WORDS = ["the", "fish", "is", "following", "big", "turtle"]


def svo_tree(subject: list[str], obj: list[str], relation_obj: str = "dobj") -> DepTree:
    """"<subject phrase> is following <object phrase>", nouns last in each phrase."""
    verb = len(subject) + 2

    def phrase(words: list[str], start: int, role: str) -> tuple[list[int], list[str]]:
        noun = start + len(words) - 1
        heads = [verb if start + i == noun else noun for i in range(len(words))]
        relations = [
            role if start + i == noun else ("det" if i == 0 else "amod") for i in range(len(words))
        ]
        return heads, relations

    subject_heads, subject_relations = phrase(subject, 1, "nsubj")
    object_heads, object_relations = phrase(obj, verb + 1, relation_obj)
    return DepTree.from_heads(
        [*subject, "is", "following", *obj],
        [*subject_heads, verb, 0, *object_heads],
        [*subject_relations, "aux", "root", *object_relations],
    )


@pytest.fixture
def fish_turtle() -> tuple[DepTree, DepTree]:
    """"the fish is following the turtle" and its subject/object swap."""
    return (
        svo_tree(["the", "fish"], ["the", "turtle"]),
        svo_tree(["the", "turtle"], ["the", "fish"]),
    )


@pytest.fixture
def fish_big_turtle() -> tuple[DepTree, DepTree]:
    """Swapped pair whose noun phrases differ in length."""
    return (
        svo_tree(["the", "fish"], ["the", "big", "turtle"]),
        svo_tree(["the", "big", "turtle"], ["the", "fish"]),
    )


@pytest.fixture
def relations() -> RelationVocab:
    return RelationVocab.from_labels(["nsubj", "dobj", "det", "amod", "aux", "root"])


@pytest.fixture
def words() -> WordEmbeddings:
    return WordEmbeddings.synthetic(FISH_TURTLE_WORDS, dim=6, seed=3, scale=1.0)
