import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from morphboost.errors import DegenerateTargetError, ValidationError
from morphboost.tasks import TaskKind, detect_task


def test_many_unique_values_is_regression():
    y = np.arange(25, dtype=float).repeat(4)  # n=100, 25 unique
    assert detect_task(y).kind == "regression"


def test_two_values_is_binary():
    y = np.tile([0.0, 1.0], 500)
    task = detect_task(y)
    assert task.kind == "binary"
    assert task.n_classes == 2


def test_low_ratio_many_classes_is_multiclass():
    y = np.arange(10, dtype=float).repeat(100)  # n=1000, ratio 0.01
    task = detect_task(y)
    assert task.kind == "multiclass"
    assert task.n_classes == 10


def test_high_ratio_flips_to_regression():
    # 2 unique values but only 20 samples: ratio 0.1 > 0.05
    y = np.tile([0.0, 1.0], 10)
    assert detect_task(y).kind == "regression"


def test_constant_target_rejected():
    with pytest.raises(DegenerateTargetError):
        detect_task(np.full(50, 3.0))


def test_empty_target_rejected():
    with pytest.raises(ValidationError):
        detect_task(np.empty(0))


@given(st.permutations(list(range(8)) * 20))
def test_detection_is_permutation_invariant(perm):
    y = np.asarray(perm, dtype=float)
    baseline = detect_task(np.sort(y))
    assert detect_task(y) == baseline


def test_taskkind_validation():
    with pytest.raises(ValidationError):
        TaskKind("nonsense")
    with pytest.raises(ValidationError):
        TaskKind.multiclass(2)
    assert TaskKind.binary().n_classes == 2
    assert not TaskKind.regression().is_classification
    assert TaskKind.multiclass(4).is_classification
