import numpy as np


class KNearestNeighbors:
    """Plain Euclidean k-NN.

    Distance ties go to the lower training row; vote ties to the lower class code.
    """

    def __init__(self, X, y, n_classes, k):
        self.X = np.asarray(X, dtype=np.float64)
        self.y = np.asarray(y, dtype=np.int64)
        self.n_classes = int(n_classes)
        self.k = int(k)

    @classmethod
    def fit(cls, X, y, n_classes, *, k=5):
        return cls(X, y, n_classes, k)

    def predict(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        d2 = ((X[:, None, :] - self.X[None, :, :]) ** 2).sum(axis=2)
        nearest = np.argsort(d2, axis=1, kind="stable")[:, : self.k]
        votes = np.zeros((X.shape[0], self.n_classes), dtype=np.int64)
        for j in range(nearest.shape[1]):
            votes[np.arange(X.shape[0]), self.y[nearest[:, j]]] += 1
        return np.argmax(votes, axis=1)

    def to_dict(self):
        return {"k": self.k, "n_classes": self.n_classes, "X": self.X.tolist(), "y": self.y.tolist()}

    @classmethod
    def from_dict(cls, d):
        X = np.asarray(d["X"], dtype=np.float64).reshape(len(d["y"]), -1)
        return cls(X, d["y"], d["n_classes"], d["k"])
