import numpy as np


class GaussianNaiveBayes:
    """Gaussian naive Bayes with variance smoothing relative to the largest feature variance."""

    def __init__(self, means, variances, log_prior):
        self.means = np.asarray(means, dtype=np.float64)
        self.variances = np.asarray(variances, dtype=np.float64)
        self.log_prior = np.asarray(log_prior, dtype=np.float64)

    @classmethod
    def fit(cls, X, y, n_classes, *, var_smoothing=1e-9):
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.int64)
        d = X.shape[1]
        eps = var_smoothing * max(float(X.var(axis=0).max()), 1e-300)
        means = np.zeros((n_classes, d))
        variances = np.ones((n_classes, d))
        counts = np.bincount(y, minlength=n_classes)
        for c in np.flatnonzero(counts):
            rows = X[y == c]
            means[c] = rows.mean(axis=0)
            variances[c] = rows.var(axis=0) + eps
        with np.errstate(divide="ignore"):
            log_prior = np.log(counts / counts.sum())
        return cls(means, variances, log_prior)

    def joint_log_likelihood(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        ll = -0.5 * (
            np.log(2.0 * np.pi * self.variances)[None, :, :]
            + (X[:, None, :] - self.means[None, :, :]) ** 2 / self.variances[None, :, :]
        ).sum(axis=2)
        return ll + self.log_prior[None, :]

    def predict(self, X):
        return np.argmax(self.joint_log_likelihood(X), axis=1)

    def to_dict(self):
        # -inf priors (absent classes) are not valid JSON; store them as null
        prior = [None if not np.isfinite(p) else float(p) for p in self.log_prior]
        return {"means": self.means.tolist(), "variances": self.variances.tolist(), "log_prior": prior}

    @classmethod
    def from_dict(cls, d):
        prior = [-np.inf if p is None else p for p in d["log_prior"]]
        return cls(d["means"], d["variances"], prior)
