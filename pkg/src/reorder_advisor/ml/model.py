"""Trained selector models: fitting, prediction and the JSON model file."""

from __future__ import annotations

import json
import os
import time
import warnings
from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigError, EmptyDataset, ParseError, SchemaError, UnsupportedVersion
from ..features import FEATURE_NAMES, FeatureVector
from ..orderings import LABELS
from .bayes import GaussianNaiveBayes
from .dataset import Dataset
from .neighbors import KNearestNeighbors
from .scaling import ScalerParams, apply_scaler, fit_scaler
from .tree import DecisionTree, RandomForest, tree_rng

FORMAT_VERSION = 1
DEFAULT_LABELS = tuple(lab.value for lab in LABELS)

_TREE_PARAMS = {
    "criterion": "gini",
    "max_depth": None,
    "min_samples_split": 2,
    "min_samples_leaf": 1,
    "max_features": None,
}
DEFAULTS = {
    "decision_tree": dict(_TREE_PARAMS),
    "random_forest": dict(_TREE_PARAMS, n_estimators=100, bootstrap=True, max_features="sqrt"),
    "knn": {"k": 5},
    "naive_bayes": {"var_smoothing": 1e-9},
}
ALGORITHMS = tuple(DEFAULTS)

#: the random-forest settings reported for the published selector
REFERENCE_FOREST_PARAMS = {"criterion": "gini", "min_samples_leaf": 1, "min_samples_split": 5, "n_estimators": 100}

_CLASSIFIERS = {
    "decision_tree": DecisionTree,
    "random_forest": RandomForest,
    "knn": KNearestNeighbors,
    "naive_bayes": GaussianNaiveBayes,
}


def resolve_hyperparams(algorithm, hyperparams=None) -> dict:
    """Merge ``hyperparams`` over the defaults and validate them."""
    if algorithm not in DEFAULTS:
        raise ConfigError(f"unknown algorithm {algorithm!r}; expected one of {', '.join(ALGORITHMS)}")
    params = dict(DEFAULTS[algorithm])
    for key, value in (hyperparams or {}).items():
        if key not in params:
            raise ConfigError(f"{algorithm} has no hyperparameter {key!r}")
        params[key] = value
    _validate(algorithm, params)
    return params


def _is_int(v, low):
    return isinstance(v, (int, np.integer)) and not isinstance(v, bool) and v >= low


def _validate(algorithm, p):
    if algorithm in ("decision_tree", "random_forest"):
        if p["criterion"] != "gini":
            raise ConfigError("only the gini criterion is implemented")
        if p["max_depth"] is not None and not _is_int(p["max_depth"], 1):
            raise ConfigError("max_depth must be a positive integer or None")
        if not _is_int(p["min_samples_split"], 2):
            raise ConfigError("min_samples_split must be an integer >= 2")
        if not _is_int(p["min_samples_leaf"], 1):
            raise ConfigError("min_samples_leaf must be an integer >= 1")
        mf = p["max_features"]
        if not (mf is None or mf in ("sqrt", "log2") or _is_int(mf, 1)):
            raise ConfigError("max_features must be None, 'sqrt', 'log2' or a positive integer")
    if algorithm == "random_forest":
        if not _is_int(p["n_estimators"], 1):
            raise ConfigError("n_estimators must be a positive integer")
        if not isinstance(p["bootstrap"], bool):
            raise ConfigError("bootstrap must be true or false")
    if algorithm == "knn" and not _is_int(p["k"], 1):
        raise ConfigError("k must be a positive integer")
    if algorithm == "naive_bayes" and not float(p["var_smoothing"]) > 0:
        raise ConfigError("var_smoothing must be positive")


@dataclass(eq=False)
class TrainedModel:
    algorithm: str
    hyperparams: dict
    scaler: ScalerParams
    classifier: object
    label_schema: tuple = DEFAULT_LABELS
    feature_schema: tuple = FEATURE_NAMES
    seed: int = 42
    format_version: int = FORMAT_VERSION
    warnings: list = field(default_factory=list)

    @property
    def constant_predictor(self):
        return "single-class" in " ".join(self.warnings)


def train_classifier(
    d: Dataset,
    algorithm="random_forest",
    hyperparams=None,
    seed=42,
    scaler="standardization",
    labels=DEFAULT_LABELS,
    n_jobs=1,
) -> TrainedModel:
    """Fit ``scaler`` then ``algorithm`` on ``d``; deterministic for fixed inputs and seed."""
    if len(d) == 0:
        raise EmptyDataset("cannot train on an empty dataset")
    params = resolve_hyperparams(algorithm, hyperparams)
    labels = tuple(str(x) for x in labels)
    code = {lab: i for i, lab in enumerate(labels)}
    unknown = sorted(set(d.y) - set(code))
    if unknown:
        raise SchemaError(f"labels outside the schema: {', '.join(unknown)}")
    y = np.array([code[v] for v in d.y], dtype=np.int64)
    notes = []
    if np.unique(y).size < 2:
        notes.append(f"single-class training set; constant predictor for {d.y[0]}")
        warnings.warn(notes[-1], stacklevel=2)
    sp = fit_scaler(d.X, scaler)
    Xs = apply_scaler(sp, d.X)
    k = len(labels)
    if algorithm in ("decision_tree", "random_forest"):
        tp = {key: params[key] for key in ("max_depth", "min_samples_split", "min_samples_leaf")}
        if algorithm == "decision_tree":
            clf = DecisionTree.fit(
                Xs, y, k, max_features=params["max_features"], rng=tree_rng(seed, 0, 0), **tp
            )
        else:
            clf = RandomForest.fit(
                Xs,
                y,
                k,
                n_estimators=params["n_estimators"],
                bootstrap=params["bootstrap"],
                max_features=params["max_features"],
                seed=seed,
                n_jobs=n_jobs,
                **tp,
            )
    elif algorithm == "knn":
        if params["k"] > len(d):
            raise ConfigError(f"k={params['k']} exceeds the {len(d)} training rows")
        clf = KNearestNeighbors.fit(Xs, y, k, k=params["k"])
    else:
        clf = GaussianNaiveBayes.fit(Xs, y, k, var_smoothing=float(params["var_smoothing"]))
    return TrainedModel(algorithm, params, sp, clf, labels, tuple(FEATURE_NAMES), int(seed), warnings=notes)


def _as_matrix(model, X):
    if isinstance(X, FeatureVector):
        X = X.as_array()
    elif isinstance(X, dict):
        missing = [f for f in model.feature_schema if f not in X]
        if missing:
            raise SchemaError(f"missing features: {', '.join(missing)}")
        X = [X[f] for f in model.feature_schema]
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X[None, :]
    if X.ndim != 2 or X.shape[1] != len(model.feature_schema):
        raise SchemaError(
            f"expected {len(model.feature_schema)} features per row, got shape {X.shape}"
        )
    return X


def predict_batch(model: TrainedModel, X) -> list:
    if isinstance(X, Dataset):
        X = X.X
    elif isinstance(X, (list, tuple)) and X and isinstance(X[0], FeatureVector):
        X = np.array([fv.as_array() for fv in X])
    Xs = apply_scaler(model.scaler, _as_matrix(model, X))
    return [model.label_schema[c] for c in model.classifier.predict(Xs)]


def predict(model: TrainedModel, x) -> str:
    return predict_batch(model, _as_matrix(model, x))[0]


def predict_timed(model: TrainedModel, x):
    """``(label, seconds)`` with the wall time of scaling plus classification."""
    t0 = time.perf_counter()
    label = predict(model, x)
    return label, time.perf_counter() - t0


# --------------------------------------------------------------------------
# model file
# --------------------------------------------------------------------------


def model_to_dict(model: TrainedModel) -> dict:
    return {
        "format_version": model.format_version,
        "algorithm": model.algorithm,
        "hyperparams": model.hyperparams,
        "seed": model.seed,
        "feature_schema": list(model.feature_schema),
        "label_schema": list(model.label_schema),
        "scaler": model.scaler.to_dict(),
        "classifier": model.classifier.to_dict(),
        "warnings": list(model.warnings),
    }


def dumps_model(model: TrainedModel) -> str:
    return json.dumps(model_to_dict(model), sort_keys=True, separators=(",", ":")) + "\n"


def save_model(model: TrainedModel, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps_model(model))


def loads_model(text) -> TrainedModel:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"model file is not valid JSON: {exc}") from None
    if not isinstance(d, dict) or "format_version" not in d:
        raise ParseError("model file lacks format_version")
    version = d["format_version"]
    if version != FORMAT_VERSION:
        raise UnsupportedVersion(
            f"model format_version {version} is not supported (this build reads version {FORMAT_VERSION})"
        )
    try:
        algorithm = d["algorithm"]
        clf = _CLASSIFIERS[algorithm].from_dict(d["classifier"])
        model = TrainedModel(
            algorithm=algorithm,
            hyperparams=dict(d["hyperparams"]),
            scaler=ScalerParams.from_dict(d["scaler"]),
            classifier=clf,
            label_schema=tuple(d["label_schema"]),
            feature_schema=tuple(d["feature_schema"]),
            seed=int(d["seed"]),
            format_version=version,
            warnings=list(d.get("warnings", [])),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed model file: {exc!r}") from None
    if len(model.feature_schema) != len(FEATURE_NAMES):
        raise SchemaError("model feature schema must list 12 features")
    return model


def load_model(path) -> TrainedModel:
    if not os.path.exists(path):
        raise ParseError(f"no model file at {path}")
    with open(path) as fh:
        return loads_model(fh.read())
