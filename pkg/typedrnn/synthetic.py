"""Synthetic parsed sentence pairs and random trees for tests and demos."""

from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import RunConfig, write_run_config
from .deptree import DepTree, write_conllu
from .embeddings import WordEmbeddings
from .sick import PairExample, SickRecord, Split, write_sick

NOUNS = ("dog", "cat", "man", "woman", "boy", "girl", "horse", "bird", "fish", "turtle", "child", "chef")
VERBS = ("chasing", "following", "watching", "feeding", "pushing", "holding", "riding", "kicking")
ADJECTIVES = ("big", "small", "young", "old", "brown", "white")
FUNCTION_WORDS = ("the", "is", "nobody")

LEXICON: tuple[str, ...] = FUNCTION_WORDS + NOUNS + VERBS + ADJECTIVES
TREE_RELATIONS = ("nsubj", "obj", "det", "amod", "aux", "advmod", "case", "obl")


@dataclass(frozen=True)
class Clause:
    """Subject-verb-object clause; subject None means "nobody"."""

    subject: str | None
    verb: str
    obj: str
    subject_adj: str | None = None
    object_adj: str | None = None


def _noun_phrase(noun: str, adjective: str | None) -> list[str]:
    return ["the", *([adjective] if adjective else []), noun]


def _attach(
    phrase: list[str], start: int, head: int, role: str
) -> tuple[list[int], list[str]]:
    """Heads and relations of a phrase at 1-based start, its last word attached to head."""
    noun = start + len(phrase) - 1
    heads, relations = [], []
    for offset in range(len(phrase)):
        if start + offset == noun:
            heads.append(head)
            relations.append(role)
        else:
            heads.append(noun)
            relations.append("det" if offset == 0 else "amod")
    return heads, relations


def clause_tree(clause: Clause) -> DepTree:
    """Parse of "<subject> is <verb> <object>"; the verb is the root."""
    if clause.subject is None:
        subject = ["nobody"]
    else:
        subject = _noun_phrase(clause.subject, clause.subject_adj)
    obj = _noun_phrase(clause.obj, clause.object_adj)
    verb = len(subject) + 2

    subject_heads, subject_relations = _attach(subject, 1, verb, "nsubj")
    object_heads, object_relations = _attach(obj, verb + 1, verb, "obj")
    return DepTree.from_heads(
        [*subject, "is", clause.verb, *obj],
        [*subject_heads, verb, 0, *object_heads],
        [*subject_relations, "aux", "root", *object_relations],
    )


def swapped(clause: Clause) -> Clause:
    """Subject and object exchanged, adjectives travelling with their nouns."""
    return Clause(clause.obj, clause.verb, clause.subject or "man", clause.object_adj, clause.subject_adj)


def negated(clause: Clause) -> Clause:
    return Clause(None, clause.verb, clause.obj, None, clause.object_adj)


def random_clause(rng: np.random.Generator, adjective_probability: float = 0.3) -> Clause:
    subject, obj = rng.choice(len(NOUNS), size=2, replace=False)

    def adjective() -> str | None:
        return ADJECTIVES[rng.integers(len(ADJECTIVES))] if rng.random() < adjective_probability else None

    return Clause(NOUNS[subject], VERBS[rng.integers(len(VERBS))], NOUNS[obj], adjective(), adjective())


PAIR_KINDS = ("same", "swap", "negate", "unrelated")


def generate_pairs(
    count: int,
    seed: int = 0,
    split_sizes: Sequence[int] | None = None,
) -> list[PairExample]:
    """
    Labelled pairs cycling through four kinds.

    same       identical sentences           ENTAILMENT     4.6-5.0
    swap       subject/object exchanged      NEUTRAL        3.2-4.0
    negate     "nobody" as subject           CONTRADICTION  3.0-4.0
    unrelated  independent clauses           NEUTRAL        1.0-2.5

    Swapped clauses always carry an adjective on the subject, so the two
    swapped noun phrases differ in length.

    Args:
        count: Number of pairs
        seed: Generator seed
        split_sizes: (train, trial, test) sizes summing to count; all
            pairs are TRAIN when omitted
    """
    rng = np.random.default_rng(seed)
    splits = [Split.TRAIN] * count
    if split_sizes is not None:
        if sum(split_sizes) != count:
            raise ValueError(f"split sizes {split_sizes} do not add up to {count}")
        splits = [s for s, n in zip(Split, split_sizes) for _ in range(n)]

    examples: list[PairExample] = []
    seen: set[tuple[str, str]] = set()
    while len(examples) < count:
        kind = PAIR_KINDS[len(examples) % len(PAIR_KINDS)]
        first = random_clause(rng)
        if kind == "same":
            second, label, low, high = first, "ENTAILMENT", 4.6, 5.0
        elif kind == "swap":
            first = Clause(first.subject, first.verb, first.obj, first.subject_adj or ADJECTIVES[0], None)
            second, label, low, high = swapped(first), "NEUTRAL", 3.2, 4.0
        elif kind == "negate":
            second, label, low, high = negated(first), "CONTRADICTION", 3.0, 4.0
        else:
            second = random_clause(rng)
            label, low, high = "NEUTRAL", 1.0, 2.5

        tree_a, tree_b = clause_tree(first), clause_tree(second)
        key = (str(tree_a), str(tree_b))
        if key in seen or (kind == "unrelated" and key[0] == key[1]):
            continue
        seen.add(key)
        record = SickRecord(
            pair_id=len(examples) + 1,
            sentence_a=key[0],
            sentence_b=key[1],
            relatedness=round(float(rng.uniform(low, high)), 1),
            entailment=label,
            split=splits[len(examples)],
        )
        examples.append(PairExample(record, tree_a, tree_b))
    return examples


def random_tree(
    rng: np.random.Generator,
    length: int,
    relations: Sequence[str] = TREE_RELATIONS,
    words: Sequence[str] = LEXICON,
) -> DepTree:
    """Uniformly attached random tree over length random words."""
    order = rng.permutation(length) + 1
    heads = [0] * length
    for k in range(1, length):
        heads[order[k] - 1] = int(order[rng.integers(k)])
    forms = [words[i] for i in rng.integers(len(words), size=length)]
    labels = [relations[i] for i in rng.integers(len(relations), size=length)]
    labels[order[0] - 1] = "root"
    return DepTree.from_heads(forms, heads, labels)


def synthetic_embeddings(dim: int, seed: int = 0, scale: float = 0.05) -> WordEmbeddings:
    return WordEmbeddings.synthetic(LEXICON, dim, seed=seed, scale=scale)


def write_dataset(
    out_dir: str | Path,
    count: int = 40,
    seed: int = 0,
    dim: int = 16,
    task: str = "entailment",
) -> RunConfig:
    """
    Write a complete small dataset and a matching config file.

    Files: sick.tsv, a.conllu, b.conllu, embeddings.txt, train.cfg.

    Returns:
        The RunConfig stored in train.cfg
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    n_trial = max(1, count // 10)
    n_test = max(1, count // 5)
    examples = generate_pairs(count, seed, (count - n_trial - n_test, n_trial, n_test))

    write_sick([e.record for e in examples], out / "sick.tsv")
    (out / "a.conllu").write_text(write_conllu(e.tree_a for e in examples), encoding="utf-8")
    (out / "b.conllu").write_text(write_conllu(e.tree_b for e in examples), encoding="utf-8")
    synthetic_embeddings(dim, seed, scale=0.5).write_glove_text(out / "embeddings.txt")

    config = RunConfig.from_flat(
        {
            "sick_path": out / "sick.tsv",
            "conllu_a": out / "a.conllu",
            "conllu_b": out / "b.conllu",
            "embeddings": out / "embeddings.txt",
            "out_dir": out / "runs",
            "task": task,
            "hidden_size": 12,
            "dep_embed_size": 4,
            "classifier_hidden": 12,
            "epochs": 5,
            "batch_size": 8,
            "learning_rate": 0.05,
            "seed": seed,
        }
    )
    write_run_config(config, out / "train.cfg")
    return config
