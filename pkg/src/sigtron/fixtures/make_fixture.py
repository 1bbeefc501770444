"""Regenerate the bundled 300-point imbalanced fixture.

Two overlapping Gaussian classes in four dimensions, 75 positives and 225
negatives, written as train/test CSV halves of 150 rows each.  Run from any
directory; files land next to this script.
"""

from pathlib import Path

import numpy as np


def make(seed=20240521):
    rng = np.random.default_rng(seed)
    n_pos, n_neg = 75, 225
    cov = np.diag([1.0, 0.6, 1.5, 0.8])
    pos = rng.multivariate_normal([1.8, 0.9, 1.0, 0.0], cov, size=n_pos)
    neg = rng.multivariate_normal([0.0, 0.0, 0.0, 0.3], 1.4 * cov, size=n_neg)
    X = np.vstack([pos, neg]) * np.array([1.0, 10.0, 0.5, 3.0]) + np.array([5, -2, 0, 1])
    y = np.concatenate([np.ones(n_pos, int), -np.ones(n_neg, int)])
    perm = rng.permutation(X.shape[0])
    return X[perm], y[perm]


def write(X, y, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("f1,f2,f3,f4,label\n")
        for row, lab in zip(X, y):
            fh.write(",".join(f"{v:.6f}" for v in row) + f",{lab:+d}\n")


if __name__ == "__main__":
    here = Path(__file__).parent
    X, y = make()
    write(X[:150], y[:150], here / "imbalanced_train.csv")
    write(X[150:], y[150:], here / "imbalanced_test.csv")
