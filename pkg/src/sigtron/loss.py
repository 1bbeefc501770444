"""Margin losses and the regularized training objective.

Every loss is written as a function of the signed margin ``m = y h(x)``, so
a positive sample contributes ``L_+(h(x))`` and a negative one ``L_-(-h(x))``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.special import expit, log_expit

from .exceptions import ConfigurationError, UnsupportedParameterError
from .extfun import SigtronParams, _logit, _wrap, f_integral_array

__all__ = [
    "SIC",
    "Focal",
    "Logistic",
    "LossSpec",
    "sigtron_loss",
    "sigtron_loss_grad",
    "logistic_loss",
    "logistic_loss_grad",
    "focal_loss",
    "focal_loss_grad",
    "Objective",
    "objective_eval",
]


def logistic_loss(x):
    """``log(1 + exp(-x))`` without overflow."""
    return _wrap(x, -log_expit(np.asarray(x, dtype=float)))


def logistic_loss_grad(x):
    return _wrap(x, -expit(-np.asarray(x, dtype=float)))


def sigtron_loss(p: SigtronParams, x):
    """Virtual SIGTRON-induced loss, the antiderivative of ``sigtron - 1``.

    ``alpha == 1`` falls back to the logistic loss.
    """
    if p.alpha == 1.0:
        return logistic_loss(x)
    xa = np.asarray(x, dtype=float)
    ca = p.c_alpha
    y = (xa + ca) / ca
    inside = y >= 0.0
    ys = np.where(inside, y, 0.0)
    if p.alpha > 1.0:
        F = f_integral_array(ys, p.alpha - 1.0)
        out = np.where(inside, ca - ca * F, -xa)
    else:
        F = f_integral_array(ys, 1.0 - p.alpha)
        out = np.where(inside, ca * F - ca - xa, 0.0)
    return _wrap(x, out)


def sigtron_loss_grad(p: SigtronParams, x):
    """``sigtron(x) - 1``, computed as ``-expit(-z)`` to keep the tail exact."""
    return _wrap(x, -expit(-_logit(p, x)))


@dataclass(frozen=True)
class SIC:
    """Per-class SIGTRON losses: ``pos`` for the +1 class, ``neg`` for -1."""

    pos: SigtronParams
    neg: SigtronParams

    @classmethod
    def from_alphas(cls, alpha_pos, alpha_neg, c_alpha_mag=2.0):
        """Build from shape values with ``|c_alpha|`` fixed on both sides.

        ``alpha == 1`` uses ``c = 1`` (the logistic limit).
        """
        return cls(_params_from_mag(alpha_pos, c_alpha_mag),
                   _params_from_mag(alpha_neg, c_alpha_mag))

    def margin_loss(self, m, positive=True):
        return sigtron_loss(self.pos if positive else self.neg, m)

    def margin_grad(self, m, positive=True):
        return sigtron_loss_grad(self.pos if positive else self.neg, m)


def _params_from_mag(alpha, mag):
    alpha = float(alpha)
    if alpha == 1.0:
        return SigtronParams(1.0, 1.0)
    return SigtronParams.from_c_alpha(alpha, mag if alpha > 1.0 else -mag)


@dataclass(frozen=True)
class Focal:
    """pi-weighted convex focal loss with stiffness ``gamma`` and shift ``xi``.

    Positive class: ``-pi log sigma(gamma h + xi)``.
    Negative class: ``-(1-pi) log(1 - sigma(gamma h + xi))`` with ``h = -m``.
    """

    pi: float = 0.5
    gamma: float = 1.0
    xi: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.pi < 1.0:
            raise UnsupportedParameterError(f"pi must be in (0, 1), got {self.pi}")
        if not self.gamma >= 1.0:
            raise UnsupportedParameterError(f"gamma must be >= 1, got {self.gamma}")
        if not self.xi >= 0.0:
            raise UnsupportedParameterError(f"xi must be >= 0, got {self.xi}")

    def margin_loss(self, m, positive=True):
        return focal_loss(self, m, positive)

    def margin_grad(self, m, positive=True):
        return focal_loss_grad(self, m, positive)


@dataclass(frozen=True)
class Logistic:
    def margin_loss(self, m, positive=True):
        return logistic_loss(m)

    def margin_grad(self, m, positive=True):
        return logistic_loss_grad(m)


LossSpec = Union[SIC, Focal, Logistic]


def _focal_arg(spec, m, positive):
    m = np.asarray(m, dtype=float)
    if positive:
        return spec.pi, spec.gamma * m + spec.xi
    # 1 - sigma(gamma h + xi) = sigma(gamma m - xi) for h = -m
    return 1.0 - spec.pi, spec.gamma * m - spec.xi


def focal_loss(spec: Focal, signed_margin, positive=True):
    weight, u = _focal_arg(spec, signed_margin, positive)
    return _wrap(signed_margin, -weight * log_expit(u))


def focal_loss_grad(spec: Focal, signed_margin, positive=True):
    """Derivative of :func:`focal_loss` with respect to the signed margin."""
    weight, u = _focal_arg(spec, signed_margin, positive)
    return _wrap(signed_margin, -weight * spec.gamma * expit(-u))


class Objective:
    """Regularized empirical risk over a fixed binary sample.

    ``theta`` stacks ``(w, b)``; the penalty ``lam/2 ||w||^2`` leaves ``b``
    alone.  ``scale`` multiplies the whole objective.
    """

    def __init__(self, X, y, spec: LossSpec, lam=0.0, scale=1.0):
        X = np.asarray(X, dtype=float)
        y = np.asarray(y)
        if X.ndim != 2 or X.shape[0] != y.shape[0]:
            raise ConfigurationError("features and labels disagree in length")
        if lam < 0:
            raise ConfigurationError("lambda must be nonnegative")
        pos = y == 1
        neg = y == -1
        if not np.all(pos | neg):
            raise ConfigurationError("binary labels must be -1 or +1")
        if not pos.any() or not neg.any():
            raise ConfigurationError("both classes must be present")
        Xa = np.hstack([X, np.ones((X.shape[0], 1))])
        # rows of Z are y_i [x_i; 1], positives first
        self.Z = np.vstack([Xa[pos], -Xa[neg]])
        self.n_pos = int(pos.sum())
        self.dim = X.shape[1] + 1
        self.spec = spec
        self.lam = float(lam)
        self.scale = float(scale)
        self.n_grad = 0

    def _split(self, m):
        return m[: self.n_pos], m[self.n_pos:]

    def value(self, theta):
        mp, mn = self._split(self.Z @ theta)
        w = theta[:-1]
        total = (np.sum(self.spec.margin_loss(mp, True))
                 + np.sum(self.spec.margin_loss(mn, False))
                 + 0.5 * self.lam * np.dot(w, w))
        return self.scale * float(total)

    def grad(self, theta):
        self.n_grad += 1
        mp, mn = self._split(self.Z @ theta)
        dl = np.concatenate([self.spec.margin_grad(mp, True),
                             self.spec.margin_grad(mn, False)])
        g = self.Z.T @ dl
        g[:-1] += self.lam * theta[:-1]
        return self.scale * g

    def __call__(self, theta):
        return self.value(theta), self.grad(theta)


def objective_eval(spec: LossSpec, X, y, theta, lam=0.0):
    """Objective value and gradient at ``theta = (w, b)``."""
    return Objective(X, y, spec, lam)(np.asarray(theta, dtype=float))
