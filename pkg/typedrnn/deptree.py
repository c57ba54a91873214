"""Dependency trees, CoNLL-U ingestion and the relation vocabulary."""

import io
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field

import conllu
import numpy as np
from conllu.exceptions import ParseException
from conllu.models import Token, TokenList

from .autodiff import Tensor, constant
from .errors import MalformedTreeError, RelationshipError

UNK_RELATION = "<unk>"

# UD v2 universal relations plus the v1 labels still produced by the
# Stanford converter. With UNK this gives 47 indices.
UNIVERSAL_RELATIONS: tuple[str, ...] = (
    "acl", "advcl", "advmod", "amod", "appos", "aux", "case", "cc", "ccomp",
    "clf", "compound", "conj", "cop", "csubj", "dep", "det", "discourse",
    "dislocated", "expl", "fixed", "flat", "goeswith", "iobj", "list", "mark",
    "nmod", "nsubj", "nummod", "obj", "obl", "orphan", "parataxis", "punct",
    "reparandum", "root", "vocative", "xcomp",
    "dobj", "nsubjpass", "csubjpass", "auxpass", "neg", "name", "mwe",
    "foreign", "remnant",
)


@dataclass(frozen=True, eq=False)
class DepNode:
    """A word of the sentence and its dependents, ordered by position."""

    token_index: int
    word_form: str
    children: tuple[tuple[str, "DepNode"], ...] = ()

    @property
    def is_leaf(self) -> bool:
        return not self.children


@dataclass(frozen=True, eq=False)
class DepTree:
    root: DepNode
    sentence_length: int

    @classmethod
    def from_heads(
        cls,
        forms: Sequence[str],
        heads: Sequence[int],
        relations: Sequence[str],
        sentence: int = 1,
    ) -> "DepTree":
        """
        Build a tree from parallel 1-based head indices (0 marks the root).

        Raises:
            MalformedTreeError: unless the heads describe exactly one rooted,
                acyclic tree over all tokens.
        """
        n = len(forms)
        if n == 0:
            raise MalformedTreeError(sentence, "empty sentence")
        if len(heads) != n or len(relations) != n:
            raise MalformedTreeError(sentence, "forms, heads and relations differ in length")

        roots = [i + 1 for i, head in enumerate(heads) if head == 0]
        if not roots:
            raise MalformedTreeError(sentence, "no root")
        if len(roots) > 1:
            raise MalformedTreeError(sentence, "multiple roots")

        dependents: dict[int, list[int]] = {i: [] for i in range(n + 1)}
        for i, head in enumerate(heads, start=1):
            if head < 0 or head > n:
                raise MalformedTreeError(sentence, f"token {i} has missing head {head}")
            if head == i:
                raise MalformedTreeError(sentence, f"head cycle at token {i}")
            dependents[head].append(i)

        # Every token must be reachable from the root, otherwise a cycle exists.
        reached = 0
        stack = [roots[0]]
        while stack:
            index = stack.pop()
            reached += 1
            stack.extend(dependents[index])
        if reached != n:
            raise MalformedTreeError(sentence, "head cycle")

        def build(index: int) -> DepNode:
            return DepNode(
                token_index=index,
                word_form=forms[index - 1],
                children=tuple(
                    (relations[child - 1], build(child)) for child in sorted(dependents[index])
                ),
            )

        return cls(root=build(roots[0]), sentence_length=n)

    def nodes(self) -> Iterator[DepNode]:
        """Nodes in pre-order."""
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(child for _, child in reversed(node.children))

    def postorder(self) -> list[DepNode]:
        """Nodes ordered so every child precedes its parent."""
        order = list(self.nodes())
        order.reverse()
        return order

    def words(self) -> list[str]:
        """Word forms in sentence order."""
        return [node.word_form for node in sorted(self.nodes(), key=lambda n: n.token_index)]

    def edges(self) -> Iterator[tuple[DepNode, str, DepNode]]:
        for node in self.nodes():
            for relation, child in node.children:
                yield node, relation, child

    def relations(self) -> list[str]:
        return [relation for _, relation, _ in self.edges()]

    def to_conllu(self) -> str:
        """Serialize as a CoNLL-U block (ID, FORM, HEAD, DEPREL filled)."""
        heads: dict[int, tuple[DepNode, int, str]] = {self.root.token_index: (self.root, 0, "root")}
        for parent, relation, child in self.edges():
            heads[child.token_index] = (child, parent.token_index, relation)
        tokens = TokenList(
            [
                Token(
                    id=index, form=node.word_form, lemma=None, upos=None, xpos=None, feats=None,
                    head=head, deprel=relation, deps=None, misc=None,
                )
                for index, (node, head, relation) in sorted(heads.items())
            ],
            metadata={"text": str(self)},
        )
        return tokens.serialize()

    def __str__(self) -> str:
        return " ".join(self.words())


_REQUIRED_FIELDS = ("id", "form", "head", "deprel")


def tree_from_tokens(tokens: TokenList, ordinal: int, coarse_relations: bool = False) -> DepTree:
    """
    Tree of one parsed sentence.

    Multiword-token ranges and empty nodes (tuple ids) are dropped; the
    remaining ids must run 1..n.

    Raises:
        MalformedTreeError: on missing columns, a missing head or bad ids.
    """
    words = []
    for token in tokens:
        missing = [key for key in _REQUIRED_FIELDS if key not in token]
        if missing:
            raise MalformedTreeError(ordinal, f"token {token.get('id')} lacks {', '.join(missing)}")
        if isinstance(token["id"], int):
            words.append(token)

    ids = [token["id"] for token in words]
    if ids != list(range(1, len(ids) + 1)):
        raise MalformedTreeError(ordinal, f"non-contiguous token ids {ids}")
    forms, heads, relations = [], [], []
    for token in words:
        if token["head"] is None:
            raise MalformedTreeError(ordinal, f"token {token['id']} has missing head")
        relation = token["deprel"]
        if coarse_relations:
            relation = relation.split(":", 1)[0]
        forms.append(token["form"])
        heads.append(token["head"])
        relations.append(relation)
    return DepTree.from_heads(forms, heads, relations, sentence=ordinal)


def parse_conllu(text: str, coarse_relations: bool = False) -> list[DepTree]:
    """
    Parse CoNLL-U text into one tree per sentence block.

    Only ID, FORM, HEAD and DEPREL are used. With coarse_relations, subtypes
    are cut at ':' ("nsubj:pass" becomes "nsubj"). Blocks holding only
    comments are ignored.

    Raises:
        MalformedTreeError: carrying the 1-based sentence ordinal and reason.
    """
    trees: list[DepTree] = []
    sentences = iter(conllu.parse_incr(io.StringIO(text, newline=None)))
    while True:
        try:
            tokens = next(sentences)
        except StopIteration:
            break
        except ParseException as e:
            raise MalformedTreeError(len(trees) + 1, str(e)) from e
        if tokens:
            trees.append(tree_from_tokens(tokens, len(trees) + 1, coarse_relations))
    return trees


def write_conllu(trees: Iterable[DepTree]) -> str:
    return "".join(tree.to_conllu() for tree in trees)


def leaf_count(node: DepNode) -> int:
    """
    l(t): 1 for a leaf, otherwise 1 plus the counts of all children.

    This is the number of words in the subtree, the node itself included.
    """
    return 1 + sum(leaf_count(child) for _, child in node.children)


def child_offset(parent: DepNode, child: DepNode) -> int:
    """
    Signed rank of child among the parent's children on its side.

    The nearest left child is -1, the next -2; the nearest right child
    is +1, and so on.

    Raises:
        RelationshipError: if child is not a direct child of parent.
    """
    if not any(candidate is child for _, candidate in parent.children):
        raise RelationshipError(
            f"token {child.token_index} is not a child of token {parent.token_index}"
        )
    anchor = parent.token_index
    if child.token_index < anchor:
        closer = [c for _, c in parent.children if child.token_index < c.token_index < anchor]
        return -(len(closer) + 1)
    closer = [c for _, c in parent.children if anchor < c.token_index < child.token_index]
    return len(closer) + 1


@dataclass
class RelationVocab:
    """Dense label ↔ index mapping with UNK at index 0."""

    labels: list[str] = field(default_factory=lambda: [UNK_RELATION])
    _index: dict[str, int] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        if not self.labels or self.labels[0] != UNK_RELATION:
            self.labels = [UNK_RELATION, *(lab for lab in self.labels if lab != UNK_RELATION)]
        self._index = {label: i for i, label in enumerate(self.labels)}
        if len(self._index) != len(self.labels):
            raise ValueError("relation labels must be unique")

    @classmethod
    def from_labels(cls, labels: Iterable[str]) -> "RelationVocab":
        seen: dict[str, None] = {}
        for label in labels:
            seen.setdefault(label, None)
        return cls(labels=[UNK_RELATION, *sorted(seen)])

    @classmethod
    def from_trees(cls, trees: Iterable[DepTree]) -> "RelationVocab":
        """Vocabulary of every relation seen in the given (training) trees."""
        return cls.from_labels(label for tree in trees for label in tree.relations())

    @classmethod
    def universal(cls) -> "RelationVocab":
        return cls.from_labels(UNIVERSAL_RELATIONS)

    def index(self, label: str) -> int:
        return self._index.get(label, 0)

    def label(self, index: int) -> str:
        return self.labels[index]

    def __len__(self) -> int:
        return len(self.labels)

    def __contains__(self, label: str) -> bool:
        return label in self._index


def one_hot(label: str, vocab: RelationVocab) -> Tensor:
    """z_k: one-hot column for label, at UNK when the label is unseen."""
    if len(vocab) == 0:
        raise ValueError("relation vocabulary is empty")
    values = np.zeros(len(vocab))
    values[vocab.index(label)] = 1.0
    return constant(values)
