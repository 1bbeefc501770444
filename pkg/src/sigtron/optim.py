"""L-BFGS driver with an interval-based bisection line search.

The line search only looks at directional derivatives
``phi'(rho) = <grad F(x + rho z), z>`` and accepts a step under the strong
Wolfe test ``|phi'(rho)| <= -c2 phi'(0)``.  That is enough for convex
objectives, including losses that are only known through their gradient.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import asdict, dataclass, field

import numpy as np

from .exceptions import NumericFailure

__all__ = [
    "OptimConfig",
    "CurvaturePair",
    "IterationRecord",
    "Trace",
    "lbfgs_direction",
    "bisection_line_search",
    "minimize",
]

CURVATURE_FLOOR = 1e-10


@dataclass(frozen=True)
class OptimConfig:
    m: int = 40
    c2: float = 0.4
    eps_tol1: float = 1e-2
    eps_tol2: float = 1e-4
    max_outer: int = 100
    max_linesearch: int = 100
    rho0: float = 1.0
    # False skips the trace-only objective values (recorded as NaN)
    record_values: bool = True

    def __post_init__(self):
        if not 0.0 < self.c2 < 1.0:
            raise ValueError(f"c2 must lie in (0, 1), got {self.c2}")
        if self.m < 1 or self.max_outer < 1 or self.max_linesearch < 1:
            raise ValueError("m, max_outer and max_linesearch must be positive")
        if min(self.eps_tol1, self.eps_tol2, self.rho0) <= 0:
            raise ValueError("tolerances and rho0 must be positive")


@dataclass(frozen=True)
class CurvaturePair:
    s: np.ndarray
    y: np.ndarray
    rho: float

    @classmethod
    def make(cls, s, y, floor=CURVATURE_FLOOR):
        """Return a pair, or None when ``<y, s>`` fails the curvature floor."""
        ys = float(np.dot(y, s))
        if not ys > floor * np.linalg.norm(y) * np.linalg.norm(s):
            return None
        return cls(s, y, 1.0 / ys)


def lbfgs_direction(grad, history):
    """Two-loop recursion: ``-H grad`` for the pairs in ``history`` (oldest first)."""
    q = np.array(grad, dtype=float)
    if not np.any(q):
        return np.zeros_like(q)
    alphas = []
    for pair in reversed(history):
        a = pair.rho * np.dot(pair.s, q)
        q -= a * pair.y
        alphas.append(a)
    if history:
        last = history[-1]
        q *= np.dot(last.s, last.y) / np.dot(last.y, last.y)
    for pair, a in zip(history, reversed(alphas)):
        beta = pair.rho * np.dot(pair.y, q)
        q += (a - beta) * pair.s
    return -q


def bisection_line_search(phi_prime, phi_prime_0, cfg=OptimConfig(), trials=None):
    """Step length satisfying ``|phi'(rho)| <= -c2 phi'(0)``, or 0 on failure.

    The bracket ``[lo, hi]`` starts as ``[0, inf]``.  A trial with positive
    slope becomes ``hi``, a negative one becomes ``lo``; the next trial doubles
    ``lo`` while ``hi`` is unbounded and bisects afterwards.  If ``trials`` is
    a list, each ``(rho, phi'(rho))`` pair is appended to it.
    """
    if not phi_prime_0 < 0:
        raise ValueError(f"line search needs phi'(0) < 0, got {phi_prime_0}")
    bound = -cfg.c2 * phi_prime_0
    lo, hi = 0.0, math.inf
    rho = cfg.rho0
    for _ in range(cfg.max_linesearch):
        slope = phi_prime(rho)
        if trials is not None:
            trials.append((rho, slope))
        if abs(slope) <= bound:
            return rho
        if slope > 0:
            hi = rho
        elif slope < 0:
            lo = rho
        rho = 2.0 * lo if hi == math.inf else 0.5 * (lo + hi)
    return 0.0


@dataclass
class IterationRecord:
    iteration: int
    value: float
    grad_norm: float
    step: float
    evals: int
    slope0: float = float("nan")
    slope: float = float("nan")


@dataclass
class Trace:
    """Per-iteration log of a :func:`minimize` run.

    ``status`` is one of ``"gradient"``, ``"step"``, ``"linesearch"``,
    ``"max_outer"`` (why the loop ended) or ``"running"``.
    """

    records: list = field(default_factory=list)
    status: str = "running"
    n_grad: int = 0

    @property
    def n_iter(self):
        return max(len(self.records) - 1, 0)

    @property
    def final_grad_norm(self):
        return self.records[-1].grad_norm if self.records else float("nan")

    def to_jsonl(self):
        return "".join(json.dumps(asdict(r)) + "\n" for r in self.records)

    def dump(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_jsonl())


def _finite_or_raise(arr, what, trace):
    if not np.all(np.isfinite(arr)):
        trace.status = "numeric_failure"
        raise NumericFailure(f"non-finite {what} encountered", trace)


def minimize(objective, x0, cfg=OptimConfig(), grad=None, value=None):
    """Minimize a convex differentiable function from ``x0``.

    ``objective(x)`` returns ``(value, gradient)``.  The optional ``grad(x)``
    and ``value(x)`` callables avoid computing both when only one is needed:
    the line search uses gradients only, and the value is recorded once per
    outer iteration for the trace (unless ``cfg.record_values`` is False).

    Returns ``(x_star, trace)``.
    """
    if grad is None:
        def grad(x):
            return objective(x)[1]
    if value is None:
        def value(x):
            return objective(x)[0]

    trace = Trace()
    n_grad = 0

    def counted_grad(x):
        nonlocal n_grad
        n_grad += 1
        g = np.asarray(grad(x), dtype=float)
        _finite_or_raise(g, "gradient", trace)
        return g

    x = np.array(x0, dtype=float)
    if cfg.record_values:
        fx, g = objective(x)
        n_grad += 1
        g = np.asarray(g, dtype=float)
        _finite_or_raise(np.append(g, fx), "objective", trace)
    else:
        fx, g = math.nan, counted_grad(x)
    trace.records.append(IterationRecord(0, float(fx), float(np.max(np.abs(g), initial=0.0)),
                                         0.0, n_grad))
    history = deque(maxlen=cfg.m)
    x_prev = None
    for t in range(cfg.max_outer + 1):
        if np.max(np.abs(g), initial=0.0) <= cfg.eps_tol1:
            trace.status = "gradient"
            break
        if x_prev is not None and np.max(np.abs(x - x_prev)) <= cfg.eps_tol2:
            trace.status = "step"
            break
        if t == cfg.max_outer:
            trace.status = "max_outer"
            break
        z = lbfgs_direction(g, history)
        slope0 = float(np.dot(g, z))
        if not slope0 < 0:
            # round-off broke descent; restart from steepest descent
            history.clear()
            z = -g
            slope0 = float(np.dot(g, z))

        cache = {}

        def phi_prime(rho):
            gr = counted_grad(x + rho * z)
            cache[rho] = gr
            return float(np.dot(gr, z))

        trials = []
        rho = bisection_line_search(phi_prime, slope0, cfg, trials)
        if rho == 0.0:
            trace.status = "linesearch"
            break
        x_new = x + rho * z
        g_new = cache[rho]
        pair = CurvaturePair.make(x_new - x, g_new - g)
        if pair is not None:
            history.append(pair)
        x_prev, x, g = x, x_new, g_new
        if cfg.record_values:
            fx = value(x)
            _finite_or_raise(np.asarray(fx), "objective", trace)
        trace.records.append(IterationRecord(
            t + 1, float(fx), float(np.max(np.abs(g))), rho, n_grad,
            slope0, trials[-1][1]))
    trace.n_grad = n_grad
    return x, trace
