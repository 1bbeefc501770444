"""Model training, lambda cross-validation, one-vs-all and the alpha sweep."""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from .data import Dataset, kfold_assign
from .exceptions import (
    ConfigurationError,
    DegenerateHyperplaneError,
    NumericFailure,
)
from .loss import SIC, Focal, Logistic, Objective
from .optim import OptimConfig, minimize

__all__ = [
    "LAMBDA_GRID",
    "alpha_grid",
    "focal_grid",
    "Hyperplane",
    "Model",
    "SweepResult",
    "HyperplaneDiagnostics",
    "train_binary",
    "predict_binary",
    "accuracy",
    "cross_validate_lambda",
    "fit_model",
    "train_ova",
    "predict_ova",
    "evaluate_specs",
    "sweep_alpha_grid",
    "diagnostics",
    "eta_from_orders",
]

LAMBDA_GRID = tuple(2.0 ** r for r in range(-14, 6))
FOCAL_PIS = tuple(round(0.05 * i, 2) for i in range(1, 20))
FOCAL_GAMMA_XI = tuple((g, x) for g in (1, 2, 3, 4) for x in (0, 1))


def alpha_grid(kmax=10):
    """Shape values with ``|alpha - 1| = 1/k``, ``k = 1..kmax``, ascending.

    ``kmax=10`` gives the 20-value grid ``0, 1/2, ..., 9/10, 11/10, ..., 2``.
    """
    below = [Fraction(k - 1, k) for k in range(1, kmax + 1)]
    above = [Fraction(k + 1, k) for k in range(kmax, 0, -1)]
    return below + above


def focal_grid():
    """The 19 x 8 focal settings as ``(pi, gamma, xi)``, pi varying slowest."""
    return [(p, g, x) for p in FOCAL_PIS for g, x in FOCAL_GAMMA_XI]


@dataclass
class Hyperplane:
    w: np.ndarray
    b: float
    trace: object = field(default=None, repr=False, compare=False)

    def decision(self, X):
        X = np.asarray(X, dtype=float)
        if X.shape[-1] != self.w.shape[0]:
            raise ConfigurationError(
                f"expected {self.w.shape[0]} features, got {X.shape[-1]}")
        return X @ self.w + self.b

    @property
    def theta(self):
        return np.append(self.w, self.b)


def train_binary(ds: Dataset, spec, lam, cfg=OptimConfig(), scale=1.0):
    """Minimize the regularized loss from ``h0 = 0``; the trace rides along."""
    if not ds.binary:
        raise ConfigurationError("train_binary needs a binary dataset")
    obj = Objective(ds.features, ds.labels, spec, lam, scale)
    theta, trace = minimize(obj, np.zeros(obj.dim), cfg, grad=obj.grad, value=obj.value)
    return Hyperplane(theta[:-1].copy(), float(theta[-1]), trace)


def predict_binary(h: Hyperplane, X):
    """``+1`` where ``<w, x> + b >= 0``, else ``-1``."""
    scores = h.decision(X)
    return np.where(scores >= 0.0, 1, -1)


def accuracy(pred, labels):
    """Percentage of exactly matching labels."""
    pred, labels = np.asarray(pred), np.asarray(labels)
    return 100.0 * float(np.mean(pred == labels))


def cross_validate_lambda(ds, spec, cfg=OptimConfig(), folds=4, seed=0,
                          lambdas=LAMBDA_GRID):
    """k-fold CV over ``lambdas``; ties go to the larger lambda.

    Returns ``(best_lambda, mean_accuracy)`` with one mean per candidate.
    """
    if ds.fold_ids is None:
        ds = kfold_assign(ds, folds, seed)
    fold_ids = ds.fold_ids
    n_folds = int(fold_ids.max()) + 1
    splits = [(ds.subset(np.flatnonzero(fold_ids != f)),
               ds.subset(np.flatnonzero(fold_ids == f))) for f in range(n_folds)]
    # fold models are scored and discarded, so skip their trace values
    cv_cfg = replace(cfg, record_values=False)
    means = np.empty(len(lambdas))
    for i, lam in enumerate(lambdas):
        accs = [accuracy(predict_binary(train_binary(tr, spec, lam, cv_cfg), te.features),
                         te.labels)
                for tr, te in splits]
        means[i] = np.mean(accs)
    best = max(range(len(lambdas)), key=lambda i: (means[i], lambdas[i]))
    return lambdas[best], means


def train_ova(ds, spec, cfg=OptimConfig(), folds=4, seed=0, lam=None):
    """One hyperplane per class (class vs rest), each with its own CV lambda.

    Returns ``(planes, lambdas)``.
    """
    if ds.binary:
        raise ConfigurationError("train_ova needs a multi-class dataset")
    if ds.n_classes < 2:
        raise ConfigurationError("need at least two classes")
    if ds.fold_ids is None and lam is None:
        ds = kfold_assign(ds, folds, seed)
    planes, lams = [], []
    for k in range(ds.n_classes):
        view = ds.one_vs_rest(k)
        if not np.any(view.labels == 1):
            raise ConfigurationError(f"class {ds.classes[k]!r} is absent from training data")
        chosen = lam if lam is not None else cross_validate_lambda(view, spec, cfg, folds, seed)[0]
        planes.append(train_binary(view, spec, chosen, cfg))
        lams.append(chosen)
    return planes, lams


def predict_ova(planes, X):
    """Arg-max of the per-class scores; ties resolve to the smallest class id."""
    scores = np.column_stack([h.decision(X) for h in planes])
    return np.argmax(scores, axis=1)


@dataclass
class Model:
    """A trained binary or one-vs-all model with the lambdas it used."""

    planes: list
    lambdas: list
    binary: bool

    def predict(self, X):
        if self.binary:
            return predict_binary(self.planes[0], X)
        return predict_ova(self.planes, X)


def fit_model(train, spec, cfg=OptimConfig(), folds=4, seed=0, lam=None):
    """CV-select lambda (unless given) and refit on all of ``train``."""
    if train.binary:
        if lam is None:
            lam = cross_validate_lambda(train, spec, cfg, folds, seed)[0]
        return Model([train_binary(train, spec, lam, cfg)], [lam], True)
    planes, lams = train_ova(train, spec, cfg, folds, seed, lam)
    return Model(planes, lams, False)


# ---------------------------------------------------------------------------
# batched evaluation

_WORK = {}


def _init_worker(train, test, cfg, folds, seed, lam=None):
    _WORK.update(train=train, test=test, cfg=cfg, folds=folds, seed=seed, lam=lam)


def _eval_spec(spec):
    w = _WORK
    try:
        model = fit_model(w["train"], spec, w["cfg"], w["folds"], w["seed"], w["lam"])
    except (NumericFailure, ConfigurationError, FloatingPointError) as exc:
        return math.nan, [], f"{type(exc).__name__}: {exc}"
    acc = accuracy(model.predict(w["test"].features), w["test"].labels)
    return acc, list(model.lambdas), None


def evaluate_specs(train, test, specs, cfg=OptimConfig(), folds=4, seed=0, jobs=1, lam=None):
    """Fit each loss spec on ``train`` (CV lambda, refit) and score ``test``.

    A given ``lam`` replaces the CV selection for every spec.

    Results come back in the order of ``specs`` as ``(accuracy, lambdas, error)``
    whatever the number of worker processes.
    """
    if train.fold_ids is None:
        train = kfold_assign(train, folds, seed)
    specs = list(specs)
    if jobs is None or jobs <= 1 or len(specs) <= 1:
        _init_worker(train, test, cfg, folds, seed, lam)
        try:
            return [_eval_spec(s) for s in specs]
        finally:
            _WORK.clear()
    chunk = max(1, len(specs) // (4 * jobs))
    with ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker,
                             initargs=(train, test, cfg, folds, seed, lam)) as pool:
        return list(pool.map(_eval_spec, specs, chunksize=chunk))


@dataclass
class SweepResult:
    """Test accuracy over the ``(alpha_pos, alpha_neg)`` grid.

    ``accuracy[i, j]`` belongs to ``alphas_pos[i]`` and ``alphas_neg[j]``;
    failed cells hold NaN.  ``chosen_lambda[i][j]`` lists the lambda of each
    binary problem in the cell (one for binary data, one per class for OVA).
    """

    alphas_pos: list
    alphas_neg: list
    accuracy: np.ndarray
    chosen_lambda: list
    errors: dict = field(default_factory=dict)
    elapsed: float = 0.0

    @property
    def best_cell(self):
        if np.all(np.isnan(self.accuracy)):
            return None
        i, j = np.unravel_index(np.nanargmax(self.accuracy), self.accuracy.shape)
        return self.alphas_pos[i], self.alphas_neg[j], float(self.accuracy[i, j])

    def cell(self, alpha_pos, alpha_neg):
        i = self.alphas_pos.index(Fraction(alpha_pos))
        j = self.alphas_neg.index(Fraction(alpha_neg))
        return float(self.accuracy[i, j])

    @property
    def n_failed(self):
        return int(np.isnan(self.accuracy).sum())

    def to_csv(self):
        head = "alpha_pos\\alpha_neg," + ",".join(str(a) for a in self.alphas_neg)
        lines = [head]
        for a, row in zip(self.alphas_pos, self.accuracy):
            lines.append(str(a) + "," + ",".join(
                "nan" if math.isnan(v) else f"{v:.6f}" for v in row))
        return "\n".join(lines) + "\n"

    def sidecar(self):
        best = self.best_cell
        return {
            "best_cell": None if best is None else
            {"alpha_pos": str(best[0]), "alpha_neg": str(best[1]), "accuracy": best[2]},
            "chosen_lambda": [[lams for lams in row] for row in self.chosen_lambda],
            "failed_cells": {f"{k[0]},{k[1]}": v for k, v in self.errors.items()},
            "elapsed_seconds": self.elapsed,
        }

    def write(self, prefix):
        with open(f"{prefix}.csv", "w", encoding="utf-8") as fh:
            fh.write(self.to_csv())
        with open(f"{prefix}.json", "w", encoding="utf-8") as fh:
            json.dump(self.sidecar(), fh, indent=2)


def sweep_alpha_grid(train, test, c_alpha_mag=2.0, cfg=OptimConfig(), folds=4, seed=0,
                     kmax=10, jobs=1, lam=None):
    """Fit the SIC model on every grid cell and score each on ``test``."""
    grid = alpha_grid(kmax)
    specs = [SIC.from_alphas(float(ap), float(an), c_alpha_mag) for ap in grid for an in grid]
    start = time.perf_counter()
    results = evaluate_specs(train, test, specs, cfg, folds, seed, jobs, lam)
    n = len(grid)
    acc = np.array([r[0] for r in results]).reshape(n, n)
    lams = [[results[i * n + j][1] for j in range(n)] for i in range(n)]
    errors = {(str(grid[i // n]), str(grid[i % n])): r[2]
              for i, r in enumerate(results) if r[2] is not None}
    return SweepResult(grid, list(grid), acc, lams, errors, time.perf_counter() - start)


# ---------------------------------------------------------------------------
# diagnostics


@dataclass(frozen=True)
class HyperplaneDiagnostics:
    eta: float
    signed_dist_pos: float
    signed_dist_neg: float
    cos_theta_pos: float


def eta_from_orders(k_pos, k_neg):
    """Skew ratio ``k_neg / (k_pos + k_neg)`` for equal ``|c_alpha|`` on both sides."""
    return k_neg / (k_pos + k_neg)


def diagnostics(h: Hyperplane, ds: Dataset, spec: SIC):
    """Skew ratio and centroid geometry of a trained SIC hyperplane.

    ``eta = c_-^(a_- - 1) / (c_+^(a_+ - 1) + c_-^(a_- - 1))``, which reduces to
    :func:`eta_from_orders` when both orders are integers and the kink
    magnitudes agree.
    """
    norm = float(np.linalg.norm(h.w))
    if norm == 0.0:
        raise DegenerateHyperplaneError("hyperplane has w = 0")
    pos = ds.labels == 1
    if not pos.any() or pos.all():
        raise ConfigurationError("both classes must be present")
    xp = ds.features[pos].mean(axis=0)
    xn = ds.features[~pos].mean(axis=0)
    sp, sn = spec.pos.slope_scale, spec.neg.slope_scale
    diff = xp - xn
    dn = float(np.linalg.norm(diff))
    cos = float(np.dot(h.w, diff) / (norm * dn)) if dn > 0 else math.nan
    return HyperplaneDiagnostics(
        eta=sn / (sp + sn),
        signed_dist_pos=float(h.decision(xp)) / norm,
        signed_dist_neg=float(h.decision(xn)) / norm,
        cos_theta_pos=cos,
    )

