"""Per-feature normalisation fitted on training data."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError, EmptyDataset

KINDS = ("standardization", "minmax")


@dataclass(frozen=True, eq=False)
class ScalerParams:
    """``x' = (x - offset) / scale`` column-wise.

    Constant training columns get ``scale = 1`` (``constant`` flags them), so
    they map to 0 on the training data instead of dividing by zero.
    """

    kind: str
    offset: np.ndarray
    scale: np.ndarray
    constant: np.ndarray

    def to_dict(self):
        return {
            "kind": self.kind,
            "offset": self.offset.tolist(),
            "scale": self.scale.tolist(),
            "constant": self.constant.tolist(),
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            d["kind"],
            np.asarray(d["offset"], dtype=np.float64),
            np.asarray(d["scale"], dtype=np.float64),
            np.asarray(d["constant"], dtype=bool),
        )


def fit_scaler(X, kind="standardization") -> ScalerParams:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] == 0:
        raise EmptyDataset("cannot fit a scaler on an empty feature matrix")
    if kind == "standardization":
        offset = X.mean(axis=0)
        spread = X.std(axis=0)
    elif kind == "minmax":
        offset = X.min(axis=0)
        spread = X.max(axis=0) - offset
    else:
        raise ConfigError(f"unknown scaler {kind!r}; expected one of {', '.join(KINDS)}")
    constant = spread == 0
    scale = np.where(constant, 1.0, spread)
    return ScalerParams(kind, offset, scale, constant)


def apply_scaler(params: ScalerParams, X) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    return (X - params.offset) / params.scale
