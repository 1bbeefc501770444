"""Class and scale-class imbalance of the bundled fixture.

Run with ``python3 demos/04_imbalance_stats.py``.
"""
from importlib import resources

from sigtron.data import concat, imbalance_stats, load_dataset, standardize

root = resources.files("sigtron") / "fixtures"
train = load_dataset(str(root / "imbalanced_train.csv"))
test = load_dataset(str(root / "imbalanced_test.csv"))

raw = imbalance_stats(concat(train, test))
print(f"raw features:          r_c={raw.r_c:.4f}  r_sc={raw.r_sc:.4f}")

# standardizing moves both centroids towards the origin, pulling r_sc towards 1
_, (std,) = standardize(concat(train, test))
s = imbalance_stats(std)
print(f"standardized features: r_c={s.r_c:.4f}  r_sc={s.r_sc:.4f}")
print(f"positives: {s.n_pos}  negatives: {s.n_neg}")
