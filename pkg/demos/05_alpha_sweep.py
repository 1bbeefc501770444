"""Train SIC classifiers on the fixture and sweep a small (alpha+, alpha-) grid.

Run with ``python3 demos/05_alpha_sweep.py``.  The full 20 x 20 grid is
available through ``sigtron sweep``.
"""
from importlib import resources

from sigtron.classify import accuracy, diagnostics, fit_model, sweep_alpha_grid
from sigtron.data import load_dataset, standardize
from sigtron.loss import SIC, Logistic

root = resources.files("sigtron") / "fixtures"
train = load_dataset(str(root / "imbalanced_train.csv"))
test = load_dataset(str(root / "imbalanced_test.csv"))
_, (train, test) = standardize(train, [test])

for name, spec in [("logistic", Logistic()), ("sic 7/8, 8/7", SIC.from_alphas(7 / 8, 8 / 7))]:
    model = fit_model(train, spec)
    acc = accuracy(model.predict(test.features), test.labels)
    print(f"{name:<14} lambda={model.lambdas[0]:g}  test accuracy={acc:.2f}")
    if isinstance(spec, SIC):
        d = diagnostics(model.planes[0], train, spec)
        print(f"{'':<14} eta={d.eta:.3f}  positive centroid distance={d.signed_dist_pos:.3f}")

res = sweep_alpha_grid(train, test, kmax=2)
print("\naccuracy grid (rows alpha+, columns alpha-):")
print(res.to_csv(), end="")
print("best cell:", res.best_cell, f"({res.elapsed:.1f} s)")
