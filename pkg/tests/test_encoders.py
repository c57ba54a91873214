"""Tests for the four tree encoders."""

import numpy as np
import pytest

from typedrnn.autodiff import Graph, Tensor, constant
from typedrnn.deptree import DepTree, RelationVocab, child_offset, one_hot
from typedrnn.embeddings import WordEmbeddings
from typedrnn.encoders import ENCODERS, PositionalEncoder, RelationalEncoder, SingleEncoder, TypedEncoder
from typedrnn.encoders.base import init_matrix
from typedrnn.encoders.positional import offset_name
from typedrnn.encoders.relational import relation_name
from typedrnn.errors import ShapeError
from typedrnn.synthetic import LEXICON, TREE_RELATIONS, random_tree


def make(kind: str, relations: RelationVocab, word_dim: int = 6, hidden: int = 5, seed: int = 0):
    if kind == "typed":
        return TypedEncoder(word_dim, hidden, relations, dep_embed_size=4, seed=seed)
    return ENCODERS[kind](word_dim, hidden, relations, seed=seed)


def encode(encoder, tree: DepTree, words: WordEmbeddings) -> np.ndarray:
    return encoder.encode(Graph(record=False), tree, words).values


def straight_line(tree: DepTree, words: WordEmbeddings, w_v: np.ndarray, child_term) -> np.ndarray:
    """Direct recursion h_t = tanh((W_v·x_t + Σ l(k)·term(t, rel, k, h_k)) / l(t))."""

    def visit(node) -> tuple[np.ndarray, int]:
        total = w_v @ words.lookup(node.word_form).values
        size = 1
        for relation, child in node.children:
            h_child, child_size = visit(child)
            total = total + child_size * child_term(node, relation, child, h_child)
            size += child_size
        return np.tanh(total / size), size

    return visit(tree.root)[0]


@pytest.mark.parametrize("kind", sorted(ENCODERS))
def test_single_word_tree(kind, relations, words):
    """A lone word gives tanh(W_v·x)."""
    tree = DepTree.from_heads(["fish"], [0], ["root"])
    encoder = make(kind, relations)
    expected = np.tanh(encoder.params["W_v"].values @ words.lookup("fish").values)
    np.testing.assert_array_equal(encode(encoder, tree, words), expected)


def test_dep_embed_zero_weights(relations):
    """W_d = 0 and b_d = 0 give d_k = 0 for every relation."""
    encoder = TypedEncoder(3, 2, relations, dep_embed_size=3)
    encoder.params["W_d"].values[:] = 0.0
    for label in relations.labels:
        np.testing.assert_array_equal(encoder.dep_embed(Graph(), one_hot(label, relations)).values, 0.0)


def test_dep_embed_is_relu_of_column(relations):
    encoder = TypedEncoder(3, 2, relations, dep_embed_size=4, seed=2)
    encoder.params["b_d"].values[:] = [0.1, -0.2, 0.0, 0.3]
    j = relations.index("nsubj")
    expected = np.maximum(encoder.params["W_d"].values[:, j] + encoder.params["b_d"].values, 0.0)
    np.testing.assert_array_equal(encoder.dep_embed(Graph(), one_hot("nsubj", relations)).values, expected)


def test_dep_embed_shape_mismatch(relations):
    encoder = TypedEncoder(3, 2, relations, dep_embed_size=4)
    with pytest.raises(ShapeError):
        encoder.dep_embed(Graph(), constant(np.ones(3)))


def test_distinct_relations_get_distinct_embeddings(relations):
    """Random W_d separates nsubj from dobj over many seeds."""
    distinct = 0
    for seed in range(100):
        encoder = TypedEncoder(3, 2, relations, dep_embed_size=10, seed=seed)
        d_nsubj = encoder.dep_embed(Graph(), one_hot("nsubj", relations)).values
        d_dobj = encoder.dep_embed(Graph(), one_hot("dobj", relations)).values
        distinct += not np.array_equal(d_nsubj, d_dobj)
    assert distinct == 100


def test_typed_two_node_hand_evaluation(relations):
    """h=d=2, r=1 against a hand evaluation."""
    words = WordEmbeddings.synthetic(["w0", "w1"], dim=2, seed=0, scale=1.0)
    tree = DepTree.from_heads(["w0", "w1"], [0, 1], ["root", "nsubj"])
    encoder = TypedEncoder(2, 2, relations, dep_embed_size=1)
    p = {k: t.values for k, t in encoder.params.items()}

    x0, x1 = words.lookup("w0").values, words.lookup("w1").values
    h1 = np.tanh(p["W_v"] @ x1)
    d = np.maximum(p["W_d"][:, relations.index("nsubj")] + p["b_d"], 0.0)
    expected = np.tanh((p["W_v"] @ x0 + 1 * (p["W_r"] @ np.concatenate([h1, d]))) / 2)
    np.testing.assert_allclose(encode(encoder, tree, words), expected, rtol=0, atol=1e-12)


def test_positional_matches_straight_line(relations):
    """Random 5-node tree against a direct recursion over W_l/W_r."""
    rng = np.random.default_rng(4)
    tree = random_tree(rng, 5)
    words = WordEmbeddings.synthetic(LEXICON, dim=6, seed=1, scale=1.0)
    encoder = PositionalEncoder(6, 5, relations, seed=3)
    got = encode(encoder, tree, words)

    def term(parent, relation, child, h):
        return init_matrix(3, offset_name(child_offset(parent, child)), 5, 5).values @ h

    expected = straight_line(tree, words, encoder.params["W_v"].values, term)
    np.testing.assert_allclose(got, expected, rtol=0, atol=1e-12)


def test_positional_left_and_right_matrices(words, relations):
    """Zeroing W_l1 removes the influence of the left child."""
    tree = DepTree.from_heads(["the", "fish", "turtle"], [2, 0, 2], ["det", "root", "dobj"])
    other = DepTree.from_heads(["big", "fish", "turtle"], [2, 0, 2], ["det", "root", "dobj"])
    encoder = PositionalEncoder(6, 5, relations)
    encoder.encode(Graph(), tree, words)
    assert set(encoder.params) == {"W_v", "W_l1", "W_r1"}
    assert not np.allclose(encode(encoder, tree, words), encode(encoder, other, words))
    encoder.params["W_l1"].values[:] = 0.0
    np.testing.assert_allclose(encode(encoder, tree, words), encode(encoder, other, words), atol=1e-15)


def test_positional_inference_adds_no_parameters(words, relations):
    """Unseen offsets use their initial values without being stored."""
    tree = DepTree.from_heads(["fish", "the", "turtle", "is"], [0, 1, 1, 1], ["root", "det", "det", "det"])
    encoder = PositionalEncoder(6, 5, relations, seed=2)
    inferred = encode(encoder, tree, words)
    assert set(encoder.params) == {"W_v"}
    recorded = encoder.encode(Graph(), tree, words).values
    assert set(encoder.params) == {"W_v", "W_r1", "W_r2", "W_r3"}
    np.testing.assert_array_equal(inferred, recorded)


def test_positional_offsets_are_clamped(relations):
    encoder = PositionalEncoder(4, 3, relations, max_offset=2)
    assert encoder.position_matrix(-7) is encoder.position_matrix(-2)
    assert offset_name(-1) == "W_l1" and offset_name(3) == "W_r3"


def test_relational_matches_straight_line(relations):
    rng = np.random.default_rng(8)
    tree = random_tree(rng, 6, relations=["nsubj", "dobj", "det", "unseen"])
    words = WordEmbeddings.synthetic(LEXICON, dim=6, seed=2, scale=1.0)
    encoder = RelationalEncoder(6, 5, relations, seed=1)
    p = encoder.params

    def term(parent, relation, child, h):
        label = relation if relation in relations else relations.label(0)
        return p[relation_name(label)].values @ h

    expected = straight_line(tree, words, p["W_v"].values, term)
    np.testing.assert_allclose(encode(encoder, tree, words), expected, rtol=0, atol=1e-12)


def test_relational_shared_matrix_accumulates_both_children(words, relations):
    """Two det children both send gradient into W_dep[det]."""
    tree = DepTree.from_heads(["the", "fish", "big"], [2, 0, 2], ["det", "root", "det"])
    encoder = RelationalEncoder(6, 5, relations)
    w = encoder.params[relation_name("det")]

    def grad_of(t: DepTree) -> np.ndarray:
        w.grad = None
        g = Graph()
        g.backward(g.sum(encoder.encode(g, t, words)))
        return w.grad.copy()

    only_left = DepTree.from_heads(["the", "fish"], [2, 0], ["det", "root"])
    assert not np.allclose(grad_of(tree), grad_of(only_left))
    assert np.count_nonzero(grad_of(tree)) > 0


def test_single_sibling_swap_invariance(words, relations):
    """Swapping equal-size sibling subtrees leaves the root unchanged."""
    a = DepTree.from_heads(["fish", "is", "turtle"], [2, 0, 2], ["nsubj", "root", "dobj"])
    b = DepTree.from_heads(["turtle", "is", "fish"], [2, 0, 2], ["nsubj", "root", "dobj"])
    encoder = SingleEncoder(6, 5, relations)
    np.testing.assert_allclose(encode(encoder, a, words), encode(encoder, b, words), rtol=0, atol=1e-12)


def test_mirrored_pair_single_and_typed_equal(fish_turtle, words, relations):
    """
    With equal-size subtrees the child sum is linear, so single and typed
    encoders both map the mirrored pair to the same root vector.
    """
    a, b = fish_turtle
    for encoder in (SingleEncoder(6, 5, relations), TypedEncoder(6, 5, relations, dep_embed_size=4)):
        np.testing.assert_allclose(encode(encoder, a, words), encode(encoder, b, words), rtol=0, atol=1e-12)


def test_mirrored_pair_positional_differs(fish_turtle, words, relations):
    a, b = fish_turtle
    encoder = PositionalEncoder(6, 5, relations)
    assert np.linalg.norm(encode(encoder, a, words) - encode(encoder, b, words)) > 1e-3


@pytest.mark.parametrize("seed", range(5))
def test_typed_separates_swap_with_unequal_subtrees(seed, fish_big_turtle, words, relations):
    """Typed encoder separates the swap once subtree sizes differ; single does not."""
    a, b = fish_big_turtle
    typed = TypedEncoder(6, 20, relations, dep_embed_size=10, seed=seed)
    d_nsubj = typed.dep_embed(Graph(), one_hot("nsubj", relations)).values
    d_dobj = typed.dep_embed(Graph(), one_hot("dobj", relations)).values
    assert not np.array_equal(d_nsubj, d_dobj)
    assert np.linalg.norm(encode(typed, a, words) - encode(typed, b, words)) > 1e-3

    single = SingleEncoder(6, 20, relations, seed=seed)
    np.testing.assert_allclose(encode(single, a, words), encode(single, b, words), rtol=0, atol=1e-12)


def test_typed_sibling_swap_same_relation_invariant(words, relations):
    """Siblings sharing one relation commute under the typed encoder."""
    a = DepTree.from_heads(["fish", "is", "turtle"], [2, 0, 2], ["det", "root", "det"])
    b = DepTree.from_heads(["turtle", "is", "fish"], [2, 0, 2], ["det", "root", "det"])
    encoder = TypedEncoder(6, 5, relations, dep_embed_size=4)
    np.testing.assert_allclose(encode(encoder, a, words), encode(encoder, b, words), rtol=0, atol=1e-12)


def test_parameter_count_typed_below_relational():
    """h=100, r=10, |V|=47, d=300: the typed encoder has fewer parameters."""
    vocab = RelationVocab.universal()
    typed = TypedEncoder(300, 100, vocab, dep_embed_size=10)
    relational = RelationalEncoder(300, 100, vocab)
    assert typed.parameter_count() == 100 * 300 + 100 * 110 + 10 * 47 + 10
    assert relational.parameter_count() == 100 * 300 + 47 * 100 * 100
    assert typed.parameter_count() < relational.parameter_count()


def test_initialization_depends_on_seed_and_name_only(relations):
    """Matrices are identical whatever the creation order."""
    a = PositionalEncoder(4, 3, relations, seed=9)
    b = PositionalEncoder(4, 3, relations, seed=9)
    a.position_matrix(1)
    a.position_matrix(-1)
    b.position_matrix(-1)
    b.position_matrix(1)
    for name in ("W_v", "W_l1", "W_r1"):
        np.testing.assert_array_equal(a.params[name].values, b.params[name].values)
    bound = 1 / np.sqrt(4)
    assert np.all(np.abs(a.params["W_v"].values) <= bound)


def test_encode_output_shape():
    rng = np.random.default_rng(0)
    vocab = RelationVocab.from_labels(TREE_RELATIONS)
    tree = random_tree(rng, 7)
    words = WordEmbeddings.synthetic(LEXICON, dim=6)
    for kind in ENCODERS:
        out = make(kind, vocab).encode(Graph(), tree, words)
        assert isinstance(out, Tensor) and out.shape == (5,)
