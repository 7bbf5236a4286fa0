"""Splitting, cross-validation, grid search and accuracy reports."""

from __future__ import annotations

import itertools
import json
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..errors import ConfigError, EmptyDataset
from .dataset import Dataset
from .model import DEFAULT_LABELS, TrainedModel, predict_batch, resolve_hyperparams, train_classifier


@dataclass(frozen=True)
class EvalReport:
    p_true: int
    p_all: int
    labels: tuple
    confusion: tuple  # confusion[i][j]: true labels[i] predicted labels[j]

    @property
    def accuracy(self) -> Fraction:
        """Exact accuracy in percent."""
        return Fraction(100 * self.p_true, self.p_all)

    @property
    def accuracy_percent(self) -> float:
        return float(self.accuracy)


def evaluate(model: TrainedModel, test: Dataset) -> EvalReport:
    if len(test) == 0:
        raise EmptyDataset("cannot evaluate on an empty test set")
    pred = predict_batch(model, test.X)
    return accuracy_report(test.y, pred, model.label_schema)


def accuracy_report(truth, pred, labels=DEFAULT_LABELS) -> EvalReport:
    labels = tuple(labels)
    extra = sorted((set(truth) | set(pred)) - set(labels))
    labels = labels + tuple(extra)
    pos = {lab: i for i, lab in enumerate(labels)}
    conf = np.zeros((len(labels), len(labels)), dtype=np.int64)
    for t, p in zip(truth, pred):
        conf[pos[t], pos[p]] += 1
    p_true = int(sum(t == p for t, p in zip(truth, pred)))
    return EvalReport(p_true, len(truth), labels, tuple(tuple(int(c) for c in row) for row in conf))


def train_test_split(d: Dataset, ratio=0.8, seed=42, labels=DEFAULT_LABELS):
    """Seeded split, stratified by label.

    Falls back to an unstratified split (with a warning) when there are fewer
    rows than schema classes, or when per-class rounding would leave one
    side empty.
    """
    if not 0 < ratio < 1:
        raise ConfigError("split ratio must lie strictly between 0 and 1")
    rng = np.random.default_rng(seed)
    train = []
    if len(d) >= len(labels):
        y = np.array(d.y, dtype=object)
        for c in d.classes():
            rows = rng.permutation(np.flatnonzero(y == c))
            train.extend(rows[: int(np.floor(ratio * rows.size + 0.5))].tolist())
    if not 0 < len(train) < len(d):
        warnings.warn("too few rows to stratify; falling back to an unstratified split", stacklevel=2)
        perm = np.random.default_rng(seed).permutation(len(d))
        cut = min(max(int(np.floor(ratio * len(d) + 0.5)), 1), len(d) - 1)
        train = perm[:cut].tolist()
    train = np.sort(np.array(train, dtype=np.int64))
    mask = np.zeros(len(d), dtype=bool)
    mask[train] = True
    return d.subset(np.flatnonzero(mask)), d.subset(np.flatnonzero(~mask))


def fold_assignment(y, k, seed=42) -> np.ndarray:
    """Fold index per row; stratified round-robin over seeded per-class shuffles.

    Falls back to an unstratified shuffle (with a warning) when some class
    has fewer than ``k`` members.
    """
    m = len(y)
    if k < 2 or m < k:
        raise ConfigError(f"k-fold needs 2 <= k <= rows, got k={k} with {m} rows")
    rng = np.random.default_rng(seed)
    y = np.array(y, dtype=object)
    classes = sorted(set(y.tolist()))
    folds = np.empty(m, dtype=np.int64)
    if min(int((y == c).sum()) for c in classes) < k:
        warnings.warn(
            f"a class has fewer than {k} members; using unstratified folds", stacklevel=2
        )
        folds[rng.permutation(m)] = np.arange(m) % k
        return folds
    offset = 0
    for c in classes:
        rows = rng.permutation(np.flatnonzero(y == c))
        folds[rows] = (offset + np.arange(rows.size)) % k
        offset += rows.size
    return folds


def kfold_scores(d, algorithm, hyperparams=None, k=5, seed=42, scaler="standardization", labels=DEFAULT_LABELS):
    """Per-fold accuracy (percent) of ``k``-fold cross-validation."""
    folds = fold_assignment(d.y, k, seed)
    scores = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # single-class folds are expected on tiny data
        for f in range(k):
            tr = d.subset(np.flatnonzero(folds != f))
            te = d.subset(np.flatnonzero(folds == f))
            model = train_classifier(tr, algorithm, hyperparams, seed, scaler, labels)
            scores.append(evaluate(model, te).accuracy_percent)
    return scores


def kfold_cv(d, algorithm, hyperparams=None, k=5, seed=42, scaler="standardization", labels=DEFAULT_LABELS) -> float:
    """Mean per-fold accuracy in percent."""
    return float(np.mean(kfold_scores(d, algorithm, hyperparams, k, seed, scaler, labels)))


#: grids searched when none is given; the forest grid covers both readings of
#: the duplicated "min_samples_leaf" hyperparameter row
DEFAULT_GRIDS = {
    "random_forest": {"min_samples_leaf": [1, 5], "min_samples_split": [2, 5], "n_estimators": [100]},
    "decision_tree": {"min_samples_leaf": [1, 5], "min_samples_split": [2, 5]},
    "knn": {"k": [1, 3, 5, 7]},
    "naive_bayes": {"var_smoothing": [1e-9, 1e-6, 1e-3]},
}


def _scalar(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def parse_grid_spec(spec) -> dict:
    """Grid from a JSON object, a JSON file path, or ``key=v1,v2;key2=v3`` text.

    >>> parse_grid_spec("n_estimators=50,100;max_depth=null")
    {'n_estimators': [50, 100], 'max_depth': [None]}
    """
    spec = spec.strip()
    if not spec.startswith("{") and os.path.isfile(spec):
        with open(spec) as fh:
            spec = fh.read().strip()
    if spec.startswith("{"):
        try:
            grid = json.loads(spec)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"grid is not valid JSON: {exc}") from None
        if not isinstance(grid, dict):
            raise ConfigError("grid JSON must be an object")
        grid = {k: v if isinstance(v, list) else [v] for k, v in grid.items()}
    else:
        grid = {}
        for part in filter(None, (p.strip() for p in spec.split(";"))):
            key, sep, values = part.partition("=")
            if not sep or not key.strip() or not values.strip():
                raise ConfigError(f"malformed grid entry {part!r}; expected key=v1,v2")
            grid[key.strip()] = [_scalar(v.strip()) for v in values.split(",")]
    grid_combinations(grid)  # validates emptiness
    return grid


def grid_combinations(grid: dict) -> list:
    """Cartesian product in sorted-key order, candidates in list order."""
    if not grid:
        raise ConfigError("empty hyperparameter grid")
    keys = sorted(grid)
    for key in keys:
        if not isinstance(grid[key], (list, tuple)) or len(grid[key]) == 0:
            raise ConfigError(f"hyperparameter {key!r} has no candidate values")
    return [dict(zip(keys, combo)) for combo in itertools.product(*(grid[k] for k in keys))]


def grid_search(
    d,
    algorithm,
    grid,
    k=5,
    seed=42,
    scaler="standardization",
    labels=DEFAULT_LABELS,
    n_jobs=1,
):
    """Exhaustive search; returns ``(best_params, [(params, mean_accuracy), ...])``.

    The table follows enumeration order and the first maximum wins ties.
    """
    combos = grid_combinations(grid)
    for combo in combos:
        resolve_hyperparams(algorithm, combo)

    def score(combo):
        return kfold_cv(d, algorithm, combo, k, seed, scaler, labels)

    if n_jobs and n_jobs > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            scores = list(pool.map(score, combos))
    else:
        scores = [score(c) for c in combos]
    table = list(zip(combos, scores))
    best = max(range(len(table)), key=lambda i: (table[i][1], -i))
    return dict(table[best][0]), table
