"""Focal-loss grid against logistic regression at a fixed lambda.

Run with ``python3 demos/06_focal_compare.py``.
"""
from importlib import resources

import numpy as np

from sigtron.classify import evaluate_specs, focal_grid
from sigtron.data import load_dataset, standardize
from sigtron.loss import SIC, Focal, Logistic

root = resources.files("sigtron") / "fixtures"
train = load_dataset(str(root / "imbalanced_train.csv"))
test = load_dataset(str(root / "imbalanced_test.csv"))
_, (train, test) = standardize(train, [test])

grid = focal_grid()
specs = [Logistic(), SIC.from_alphas(7 / 8, 8 / 7)] + [Focal(*g) for g in grid]
results = evaluate_specs(train, test, specs, lam=2.0 ** -4)
focal = np.array([r[0] for r in results[2:]])
print(f"logistic:      {results[0][0]:.2f}")
print(f"sic 7/8, 8/7:  {results[1][0]:.2f}")
print(f"focal models:  {len(grid)}  best {focal.max():.2f}  median {np.median(focal):.2f}")
best = grid[int(np.argmax(focal))]
print(f"best focal setting: pi={best[0]} gamma={best[1]} xi={best[2]}")
