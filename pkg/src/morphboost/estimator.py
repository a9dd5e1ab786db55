"""Scikit-learn style estimator facade.

These classes follow the sklearn estimator protocol (params stored
verbatim in ``__init__``, ``get_params``/``set_params``, ``fit``
returning self), so they compose with ``clone``, pipelines and
cross-validation without depending on scikit-learn itself.
"""

from __future__ import annotations

import inspect

import numpy as np

from . import booster
from .data import Dataset, TrainConfig
from .errors import ValidationError
from .tasks import TaskKind
from .validation import check_matrix, check_same_length, check_vector


class _ParamsMixin:
    @classmethod
    def _param_names(cls):
        signature = inspect.signature(cls.__init__)
        return [name for name in signature.parameters if name != "self"]

    def get_params(self, deep: bool = True) -> dict:
        return {name: getattr(self, name) for name in self._param_names()}

    def set_params(self, **params):
        valid = set(self._param_names())
        for name, value in params.items():
            if name not in valid:
                raise ValidationError(
                    f"invalid parameter {name!r} for {type(self).__name__}"
                )
            setattr(self, name, value)
        return self

    def __repr__(self):
        args = ", ".join(f"{k}={v!r}" for k, v in self.get_params().items())
        return f"{type(self).__name__}({args})"


class _MorphBoostBase(_ParamsMixin):
    # scikit-learn >= 1.6 asks estimators for tags; build them lazily so
    # sklearn stays optional (the method only runs when sklearn calls it)
    def __sklearn_tags__(self):
        from sklearn.utils import ClassifierTags, RegressorTags, Tags, TargetTags

        is_classifier = self._estimator_type == "classifier"
        return Tags(
            estimator_type=self._estimator_type,
            target_tags=TargetTags(required=True),
            transformer_tags=None,
            classifier_tags=ClassifierTags() if is_classifier else None,
            regressor_tags=None if is_classifier else RegressorTags(),
        )

    def __init__(
        self,
        n_iterations=100,
        learning_rate=0.1,
        lambda_l2=1.0,
        lambda_l1=0.0,
        evolution_pressure=0.1,
        ema_decay=0.05,
        fast_mode=True,
        adaptive_lr=True,
        max_depth=None,
        min_samples_leaf=1,
        early_stopping_rounds=None,
        seed=0,
    ):
        self.n_iterations = n_iterations
        self.learning_rate = learning_rate
        self.lambda_l2 = lambda_l2
        self.lambda_l1 = lambda_l1
        self.evolution_pressure = evolution_pressure
        self.ema_decay = ema_decay
        self.fast_mode = fast_mode
        self.adaptive_lr = adaptive_lr
        self.max_depth = max_depth
        self.min_samples_leaf = min_samples_leaf
        self.early_stopping_rounds = early_stopping_rounds
        self.seed = seed

    def _config(self) -> TrainConfig:
        return TrainConfig(**self.get_params())

    def _fit(self, X, y, eval_set, task: TaskKind | None):
        X = check_matrix(X)
        y = check_vector(y)
        check_same_length(X, y)
        train = Dataset(X, y)
        eval_data = None
        if eval_set is not None:
            X_val, y_val = eval_set
            eval_data = Dataset(check_matrix(X_val, "eval X"), check_vector(y_val, "eval y"))
        self.model_ = booster.fit(train, self._config(), eval_set=eval_data, task=task)
        self.n_features_in_ = train.n_features
        self.feature_importances_ = self.model_.importance
        self.fingerprint_ = self.model_.fingerprint
        self.best_iteration_ = self.model_.best_iteration
        return self

    def _check_fitted(self):
        if not hasattr(self, "model_"):
            raise ValidationError(f"{type(self).__name__} is not fitted yet")


class MorphBoostClassifier(_MorphBoostBase):
    """Gradient boosting classifier with an iteration-morphing split score.

    Parameters
    ----------
    n_iterations : int, boosting rounds (one tree per class and round for
        multiclass targets).
    learning_rate : float, peak step size; the warm-up/cosine schedule
        modulates it unless ``adaptive_lr`` is False.
    lambda_l2, lambda_l1 : float, regularization added to gain and leaf
        denominators / split costs.
    evolution_pressure : float, damps the information score and shrinks
        leaves as training progresses.
    ema_decay : float in (0, 1), decay of the gradient-statistics EMA.
    fast_mode : bool, fixed fingerprint heuristics and capped threshold
        sampling.
    adaptive_lr : bool, warm-up plus cosine annealing when True.
    max_depth : int or None, overrides the fingerprint-derived depth.
    min_samples_leaf : int, smallest admissible child size.
    early_stopping_rounds : int or None, patience on the eval set.
    seed : int, RNG seed for fingerprint sampling.
    """

    _estimator_type = "classifier"

    def fit(self, X, y, eval_set=None):
        y_arr = check_vector(y)
        classes = np.unique(y_arr)
        if classes.size < 2:
            raise ValidationError("classification needs at least 2 classes")
        task = TaskKind.binary() if classes.size == 2 else TaskKind.multiclass(classes.size)
        self._fit(X, y_arr, eval_set, task)
        self.classes_ = self.model_.label_map
        return self

    def predict(self, X):
        self._check_fitted()
        return booster.predict(self.model_, X)

    def predict_proba(self, X):
        self._check_fitted()
        return booster.predict_proba(self.model_, X)

    def score(self, X, y) -> float:
        """Mean accuracy on the given data."""
        y = check_vector(y)
        return float(np.mean(self.predict(X) == y))


class MorphBoostRegressor(_MorphBoostBase):
    """Gradient boosting regressor; see MorphBoostClassifier for params."""

    _estimator_type = "regressor"

    def fit(self, X, y, eval_set=None):
        self._fit(X, y, eval_set, TaskKind.regression())
        return self

    def predict(self, X):
        self._check_fitted()
        return booster.predict(self.model_, X)

    def score(self, X, y) -> float:
        """Coefficient of determination R^2."""
        y = check_vector(y)
        pred = self.predict(X)
        ss_res = float(np.sum((y - pred) ** 2))
        ss_tot = float(np.sum((y - y.mean()) ** 2))
        if ss_tot == 0:
            return 0.0 if ss_res > 0 else 1.0
        return 1.0 - ss_res / ss_tot
