import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import manual_model, random_tree, stump
from morphboost.errors import DimensionError, EmptyModelError
from morphboost.predict import predict_raw, predict_tree_batch, predict_tree_recursive
from morphboost.tasks import TaskKind
from morphboost.tree import LeafNode, Tree


def leaf_tree(value, n_features=2):
    return Tree(root=LeafNode(value=value, n_samples=1, depth=0), n_features=n_features)


class TestBatchTraversal:
    def test_single_leaf_broadcast(self):
        out = predict_tree_batch(leaf_tree(0.5), np.zeros((4, 2)))
        np.testing.assert_array_equal(out, [0.5, 0.5, 0.5, 0.5])

    def test_stump_routing_including_boundary(self):
        tree = stump(0, 1.0, -1.0, 1.0, n_features=1)
        X = np.array([[0.5], [1.0], [2.0]])
        np.testing.assert_array_equal(predict_tree_batch(tree, X), [-1.0, -1.0, 1.0])

    def test_matches_recursive_on_random_trees(self, rng):
        for _ in range(25):
            tree = random_tree(rng, n_features=4, max_depth=6)
            X = rng.standard_normal((200, 4))
            batch = predict_tree_batch(tree, X)
            rec = np.array([predict_tree_recursive(tree, row) for row in X])
            np.testing.assert_array_equal(batch, rec)

    def test_every_slot_written(self, rng):
        tree = random_tree(rng, n_features=3, max_depth=5)
        out = predict_tree_batch(tree, rng.standard_normal((64, 3)))
        assert np.all(np.isfinite(out))

    def test_dimension_mismatch(self, rng):
        tree = random_tree(rng, n_features=3)
        with pytest.raises(DimensionError):
            predict_tree_batch(tree, np.zeros((4, 2)))

    @given(st.integers(0, 2**32 - 1))
    def test_equivalence_property(self, seed):
        rng = np.random.default_rng(seed)
        tree = random_tree(rng, n_features=3, max_depth=5)
        X = rng.standard_normal((20, 3))
        batch = predict_tree_batch(tree, X)
        rec = np.array([predict_tree_recursive(tree, row) for row in X])
        np.testing.assert_array_equal(batch, rec)


class TestRecursiveTraversal:
    def test_leaf_only_tree(self):
        assert predict_tree_recursive(leaf_tree(3.25), np.zeros(2)) == 3.25

    def test_boundary_goes_left(self):
        tree = stump(0, 2.0, -7.0, 7.0, n_features=1)
        assert predict_tree_recursive(tree, np.array([2.0])) == -7.0
        assert predict_tree_recursive(tree, np.array([2.0000001])) == 7.0

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            predict_tree_recursive(leaf_tree(0.0, n_features=3), np.zeros(2))


class TestPredictRaw:
    def test_zero_tree_model_is_base(self):
        model = manual_model([], n_features=2, base_score=0.7)
        out = predict_raw(model, np.zeros((5, 2)))
        np.testing.assert_array_equal(out, np.full(5, 0.7))

    def test_stump_added_twice(self, rng):
        tree = stump(0, 0.0, -1.0, 2.0, n_features=2)
        X = rng.standard_normal((10, 2))
        single = predict_tree_batch(tree, X)
        model = manual_model([tree, tree], n_features=2, base_score=0.25)
        np.testing.assert_allclose(predict_raw(model, X), 0.25 + 2 * single, rtol=1e-15)

    def test_additivity(self, rng):
        t1 = random_tree(rng, n_features=3, max_depth=4)
        t2 = random_tree(rng, n_features=3, max_depth=4)
        X = rng.standard_normal((30, 3))
        base = 0.4
        both = predict_raw(manual_model([t1, t2], 3, base), X)
        only1 = predict_raw(manual_model([t1], 3, base), X)
        only2 = predict_raw(manual_model([t2], 3, base), X)
        np.testing.assert_allclose(both, only1 + only2 - base, rtol=1e-12, atol=1e-12)

    def test_multiclass_layout(self, rng):
        trees = [
            stump(0, 0.0, -1.0, 1.0, n_features=2, class_index=0),
            stump(1, 0.0, -2.0, 2.0, n_features=2, class_index=1),
            stump(0, 0.5, -3.0, 3.0, n_features=2, class_index=2),
        ]
        model = manual_model(
            trees,
            n_features=2,
            base_score=np.array([0.1, 0.2, 0.3]),
            task=TaskKind.multiclass(3),
            label_map=[0.0, 1.0, 2.0],
        )
        X = rng.standard_normal((6, 2))
        out = predict_raw(model, X)
        assert out.shape == (6, 3)
        np.testing.assert_allclose(out[:, 1], 0.2 + predict_tree_batch(trees[1], X), rtol=1e-15)

    def test_empty_model_error(self):
        model = manual_model([], n_features=2, base_score=0.0)
        model.base_score = None
        with pytest.raises(EmptyModelError):
            predict_raw(model, np.zeros((2, 2)))

    def test_dimension_error_names_sizes(self):
        model = manual_model([], n_features=4, base_score=0.0)
        with pytest.raises(DimensionError, match="expected 4 features, got 3"):
            predict_raw(model, np.zeros((2, 3)))
