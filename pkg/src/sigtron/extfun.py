"""Extended exponential/logarithm, the SIGTRON sigmoid and its derivatives.

All functions take a :class:`SigtronParams` and a scalar or array argument.
Scalars in give floats back; arrays in give arrays back.

Inside the restricted domain the sigmoid is evaluated through its logit

    z(x) = -ln(y) / (1 - alpha),   y = 1 + x / c_alpha,

so that ``sigtron = expit(z)`` and ``1 - sigtron = expit(-z)`` are both
accurate in the tails.  Outside the domain ``z`` is set to ``+/-inf``, which
reproduces the Perceptron branch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import expit, log_expit

from .exceptions import DomainError, OverflowGuardError, UnsupportedParameterError

__all__ = [
    "SigtronParams",
    "ext_exp",
    "ext_ln",
    "sigtron",
    "sigtron_grad",
    "sigtron_nth_deriv",
    "stirling_first",
    "stirling_second",
    "derivative_coefficient",
    "inflection_point",
    "f_integral",
    "f_integral_array",
    "f_integral_limit",
    "f_quadrature",
    "unit_order",
    "STIRLING_CAP",
]

STIRLING_CAP = 20
QUAD_TOL = 1e-10
QUAD_MAX_DEPTH = 60
_KINK_RTOL = 1e-14
_ORDER_TOL = 1e-9


def unit_order(b):
    """Return ``k`` when ``b == 1/k`` for a positive integer ``k``, else None."""
    if b <= 0:
        return None
    inv = 1.0 / b
    k = round(inv)
    if k >= 1 and abs(inv - k) <= _ORDER_TOL * max(1.0, inv):
        return int(k)
    return None


@dataclass(frozen=True)
class SigtronParams:
    """Shape ``alpha`` in [0, 2] and scale ``c > 0`` of a SIGTRON.

    ``c_alpha = c**(1 - alpha) / (alpha - 1)`` is None at ``alpha == 1``.
    """

    alpha: float
    c: float = 1.0

    def __post_init__(self):
        a, c = float(self.alpha), float(self.c)
        if not (0.0 <= a <= 2.0):
            raise UnsupportedParameterError(f"alpha must lie in [0, 2], got {a}")
        if not (c > 0.0 and math.isfinite(c)):
            raise UnsupportedParameterError(f"c must be a positive finite number, got {c}")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "c", c)

    @classmethod
    def from_c_alpha(cls, alpha, c_alpha):
        """Build the parameters whose kink constant equals ``c_alpha``.

        The sign of ``c_alpha`` must agree with ``alpha - 1``.
        """
        alpha = float(alpha)
        if alpha == 1.0:
            raise UnsupportedParameterError("c_alpha is undefined at alpha = 1")
        prod = (alpha - 1.0) * c_alpha
        if not prod > 0:
            raise UnsupportedParameterError(
                f"c_alpha={c_alpha} has the wrong sign for alpha={alpha}")
        return cls(alpha, prod ** (1.0 / (1.0 - alpha)))

    @classmethod
    def from_order(cls, k, c_alpha_mag=2.0, side=1):
        """Parameters with ``|alpha - 1| = 1/k`` and ``|c_alpha| = c_alpha_mag``.

        ``side=+1`` selects ``alpha = 1 + 1/k``, ``side=-1`` gives ``1 - 1/k``.
        """
        if k < 1:
            raise UnsupportedParameterError("polynomial order must be >= 1")
        sign = 1 if side > 0 else -1
        return cls.from_c_alpha(1.0 + sign / k, sign * abs(c_alpha_mag))

    @property
    def c_alpha(self):
        if self.alpha == 1.0:
            return None
        return self.c ** (1.0 - self.alpha) / (self.alpha - 1.0)

    @property
    def order(self):
        """Polynomial order ``1/|alpha-1|`` when it is an integer, else None."""
        if self.alpha == 1.0:
            return None
        return unit_order(abs(self.alpha - 1.0))

    @property
    def slope_scale(self):
        """``c**(alpha - 1)``; four times the sigmoid slope at the origin."""
        if self.alpha == 1.0:
            return 1.0
        return 1.0 / ((self.alpha - 1.0) * self.c_alpha)

    def mirror(self):
        """The parameters ``(2 - alpha, 1/c)`` of the reflected sigmoid."""
        return SigtronParams(2.0 - self.alpha, 1.0 / self.c)


def _wrap(x, out):
    if np.ndim(x) == 0:
        return float(out)
    return out


def _kink_tol(ca):
    return _KINK_RTOL * (1.0 + abs(ca))


def ext_exp(p, x):
    """Extended exponential ``exp_{alpha,c}(x)``.

    For ``alpha > 1`` arguments at or above ``c_alpha`` map to ``+inf``.
    For ``alpha < 1`` arguments below ``c_alpha`` raise :class:`DomainError`.
    """
    xa = np.asarray(x, dtype=float)
    if p.alpha == 1.0:
        return _wrap(x, p.c * np.exp(xa))
    ca = p.c_alpha
    expo = 1.0 / (1.0 - p.alpha)
    gap = ca - xa  # proportional to the base 1 - x/c_alpha
    tol = _kink_tol(ca)
    if p.alpha < 1.0:
        if np.any(gap > tol):
            raise DomainError(f"ext_exp with alpha={p.alpha} needs x >= c_alpha={ca}")
        base = np.maximum(gap / ca, 0.0)
        out = p.c * base ** expo
    else:
        inside = gap > tol
        base = np.where(inside, gap / ca, 1.0)
        out = np.where(inside, p.c * base ** expo, np.inf)
    return _wrap(x, out)


def ext_ln(p, y):
    """Extended logarithm ``ln_{alpha,c}(y)``, inverse of :func:`ext_exp`."""
    ya = np.asarray(y, dtype=float)
    if p.alpha < 1.0:
        if np.any(~(ya >= 0.0)):
            raise DomainError("ext_ln needs y >= 0 for alpha < 1")
    elif np.any(~(ya > 0.0)):
        raise DomainError("ext_ln needs y > 0")
    if p.alpha == 1.0:
        return _wrap(y, np.log(ya / p.c))
    om = 1.0 - p.alpha
    return _wrap(y, p.c_alpha - ya ** om / (p.alpha - 1.0))


def _logit(p, x):
    """Logit ``z`` with ``sigtron(x) = expit(z)``; +/-inf on the Perceptron part."""
    xa = np.asarray(x, dtype=float)
    if p.alpha == 1.0:
        return xa
    ca = p.c_alpha
    dist = xa + ca  # signed offset from the kink at -c_alpha
    tol = _kink_tol(ca)
    # alpha > 1: domain is x >= -c_alpha; alpha < 1: x <= -c_alpha
    inside = dist > tol if p.alpha > 1.0 else dist < -tol
    limit = -np.inf if p.alpha > 1.0 else np.inf
    y = np.where(inside, dist / ca, 1.0)
    z = -np.log(y) / (1.0 - p.alpha)
    return np.where(inside, z, limit)


def sigtron(p, x):
    """SIGTRON: the extended asymmetric sigmoid stitched to the Perceptron."""
    return _wrap(x, expit(_logit(p, x)))


def _require_open_alpha(p, what):
    if not (0.0 < p.alpha < 2.0):
        raise UnsupportedParameterError(f"{what} is undefined at alpha={p.alpha}")


def sigtron_grad(p, x):
    """First derivative ``c**(alpha-1) (1-s)**alpha s**(2-alpha)``."""
    _require_open_alpha(p, "sigtron_grad")
    z = _logit(p, x)
    a = p.alpha
    with np.errstate(invalid="ignore"):
        logg = math.log(p.slope_scale) + a * log_expit(-z) + (2.0 - a) * log_expit(z)
    out = np.where(np.isfinite(z), np.exp(logg), 0.0)
    return _wrap(x, out)


def _check_stirling(*args, cap):
    for v in args:
        if v < 0:
            raise ValueError("Stirling numbers need nonnegative arguments")
        if v > cap:
            raise OverflowGuardError(f"argument {v} exceeds the Stirling cap {cap}")


@lru_cache(maxsize=None)
def _s1(n, l):
    if n == 0 and l == 0:
        return 1
    if n == 0 or l == 0 or l > n:
        return 0
    return (n - 1) * _s1(n - 1, l) + _s1(n - 1, l - 1)


@lru_cache(maxsize=None)
def _s2(l, k):
    if l == 0 and k == 0:
        return 1
    if l == 0 or k == 0 or k > l:
        return 0
    return k * _s2(l - 1, k) + _s2(l - 1, k - 1)


def stirling_first(n, l, cap=STIRLING_CAP):
    """Unsigned Stirling number of the first kind ``[n, l]``."""
    _check_stirling(n, l, cap=cap)
    return _s1(int(n), int(l))


def stirling_second(l, k, cap=STIRLING_CAP):
    """Stirling number of the second kind ``{l, k}``."""
    _check_stirling(l, k, cap=cap)
    return _s2(int(l), int(k))


def derivative_coefficient(n, k, alpha):
    """Coefficient ``A_{n,k}`` of the n-th derivative expansion.

    ``(-1)**(n+k) k! sum_l [n,l] {l,k} (alpha-1)**(n-l)``
    """
    total = 0.0
    for l in range(n + 1):
        s = stirling_first(n, l) * stirling_second(l, k)
        if s:
            total += s * (alpha - 1.0) ** (n - l)
    return (-1) ** (n + k) * math.factorial(k) * total


def sigtron_nth_deriv(p, n, x):
    """n-th derivative of SIGTRON, valid for ``alpha`` in ``(1-1/n, 1+1/n)``.

    Each term ``A_{n,k} c exp^{k-n(1-alpha)}(-x) / (c+exp(-x))^{k+1}`` is
    rewritten as ``A_{n,k} s (1-s)^k exp(n((1-alpha) z - ln c^{1-alpha}))``
    and summed in log-magnitude form.  Zero off the domain of the sigmoid.
    """
    n = int(n)
    if n < 1:
        raise ValueError("derivative order must be positive")
    a = p.alpha
    if not (1.0 - 1.0 / n < a < 1.0 + 1.0 / n):
        raise UnsupportedParameterError(
            f"derivative of order {n} needs alpha in ({1 - 1 / n}, {1 + 1 / n}), got {a}")
    z = _logit(p, x)
    finite = np.isfinite(z)
    zf = np.where(finite, z, 0.0)
    if a == 1.0:
        shift = np.zeros_like(zf)
    else:
        shift = n * ((1.0 - a) * zf - math.log((a - 1.0) * p.c_alpha))
    ls, l1s = log_expit(zf), log_expit(-zf)
    total = np.zeros_like(zf)
    for k in range(1, n + 1):
        coef = derivative_coefficient(n, k, a)
        if coef:
            total = total + coef * np.exp(ls + k * l1s + shift)
    return _wrap(x, np.where(finite, total, 0.0))


def inflection_point(p):
    """Inflection point ``-ln_{alpha,c}(c alpha / (2 - alpha))``."""
    _require_open_alpha(p, "inflection_point")
    if p.alpha == 1.0:
        return 0.0
    return -ext_ln(p, p.c * p.alpha / (2.0 - p.alpha))


# ---------------------------------------------------------------------------
# F(z; b) = int_0^z dt / (1 + t**(1/b))

_SQ2, _SQ3, _SQ5 = math.sqrt(2.0), math.sqrt(3.0), math.sqrt(5.0)
_R5M, _R5P = math.sqrt(10.0 - 2.0 * _SQ5), math.sqrt(10.0 + 2.0 * _SQ5)
_C5 = (math.log(2.0) / 10.0
       + _R5M / 10.0 * math.atan((_SQ5 + 1.0) / _R5M)
       - _R5P / 10.0 * math.atan((_SQ5 - 1.0) / _R5P))


def _closed_1(a):
    return np.log1p(a)


def _closed_2(a):
    return np.arctan(a)


def _closed_3(a):
    return (np.log1p(3.0 * a / (a * a - a + 1.0)) / 6.0
            + (np.arctan((2.0 * a - 1.0) / _SQ3) + math.pi / 6.0) / _SQ3)


def _closed_4(a):
    return (np.log1p(2.0 * _SQ2 * a / (a * a - _SQ2 * a + 1.0)) / (4.0 * _SQ2)
            + (np.arctan(1.0 + _SQ2 * a) - np.arctan(1.0 - _SQ2 * a)) / (2.0 * _SQ2))


def _closed_5(a):
    return ((_SQ5 - 1.0) / 20.0 * np.log(2.0 * a * a + (_SQ5 - 1.0) * a + 2.0)
            - (_SQ5 + 1.0) / 20.0 * np.log(2.0 * a * a - (_SQ5 + 1.0) * a + 2.0)
            + np.log1p(a) / 5.0
            - _R5M / 10.0 * np.arctan((-4.0 * a + _SQ5 + 1.0) / _R5M)
            + _R5P / 10.0 * np.arctan((4.0 * a + _SQ5 - 1.0) / _R5P)
            + _C5)


def _closed_6(a):
    return (_SQ3 / 12.0 * np.log1p(2.0 * _SQ3 * a / (a * a - _SQ3 * a + 1.0))
            + (np.arctan(_SQ3 + 2.0 * a) - np.arctan(_SQ3 - 2.0 * a)) / 6.0
            + np.arctan(a) / 3.0)


_CLOSED = {1: _closed_1, 2: _closed_2, 3: _closed_3, 4: _closed_4, 5: _closed_5, 6: _closed_6}

# beyond this the tail expansion F = F(inf) - z**(1-k)/(k-1) is exact in double
_TAIL_Z = 1e8


def f_integral_limit(k):
    """``F(inf; 1/k)`` for an integer order ``k >= 2``."""
    return (math.pi / k) / math.sin(math.pi / k)


def _f_closed(z, k):
    za = np.asarray(z, dtype=float)
    if k == 1:
        return np.log1p(za)
    big = za > _TAIL_Z
    zc = np.where(big, 1.0, za)
    out = _CLOSED[k](zc) if k in _CLOSED else _f_roots(zc, k)
    tail = f_integral_limit(k) - np.where(big, za, 1.0) ** (1.0 - k) / (k - 1.0)
    return np.where(big, tail, out)


def _f_roots(z, k):
    """Partial fractions over the k roots of -1; exact for any integer order.

    Conjugate roots ``exp(+/- i theta)`` are paired so only real logs and
    arctangents appear; the real root -1 (odd ``k``) adds ``log1p(z)/k``.
    """
    za = np.asarray(z, dtype=float)
    out = np.log1p(za) / k if k % 2 else np.zeros_like(za)
    for j in range(k // 2):
        th = math.pi * (2 * j + 1) / k
        ct, st = math.cos(th), math.sin(th)
        mod = 0.5 * np.log1p(za * (za - 2.0 * ct))
        ang = np.arctan2(-st, za - ct) - math.atan2(-st, -ct)
        out = out - (2.0 / k) * (ct * mod - st * ang)
    return out


def _simpson(f, a, b, tol, depth):
    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    whole = (b - a) * (fa + 4.0 * fm + fb) / 6.0
    return _simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth)


def _simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth):
    m = 0.5 * (a + b)
    lm, rm = 0.5 * (a + m), 0.5 * (m + b)
    flm, frm = f(lm), f(rm)
    left = (m - a) * (fa + 4.0 * flm + fm) / 6.0
    right = (b - m) * (fm + 4.0 * frm + fb) / 6.0
    delta = left + right - whole
    if depth <= 0 or abs(delta) <= 15.0 * tol:
        return left + right + delta / 15.0
    return (_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + _simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1))


@lru_cache(maxsize=4096)
def _f_quad(z, b):
    q = 1.0 / b

    def integrand(t):
        return 1.0 / (1.0 + t ** q)

    return _simpson(integrand, 0.0, z, QUAD_TOL, QUAD_MAX_DEPTH)


def f_quadrature(z, b, tol=QUAD_TOL):
    """``F(z; b)`` by adaptive Simpson for every entry of ``z``, ignoring closed forms.

    The sorted points split ``[0, max z]`` into segments that are integrated
    once each and accumulated, so a dense grid costs about one integral.
    """
    _check_f_args(z, b)
    za = np.asarray(z, dtype=float)
    q = 1.0 / float(b)

    def integrand(t):
        return 1.0 / (1.0 + t ** q)

    order = np.argsort(za, axis=None)
    flat = za.ravel()
    out = np.empty(flat.shape)
    acc, prev = 0.0, 0.0
    for i in order:
        v = float(flat[i])
        if v > prev:
            acc += _simpson(integrand, prev, v, tol, QUAD_MAX_DEPTH)
            prev = v
        out[i] = acc
    return _wrap(z, out.reshape(za.shape))


def _check_f_args(z, b):
    if not b > 0:
        raise DomainError(f"F(z; b) needs b > 0, got {b}")
    if np.any(~(np.asarray(z, dtype=float) >= 0.0)):
        raise DomainError("F(z; b) needs z >= 0")


def f_integral(z, b):
    """``F(z; b) = int_0^z dt / (1 + t**(1/b))`` for scalar ``z >= 0``.

    Closed forms for ``b = 1/k`` with ``k <= 6``; adaptive Simpson otherwise.
    """
    _check_f_args(z, b)
    z = float(z)
    if z == 0.0:
        return 0.0
    k = unit_order(b)
    if k is not None and k in _CLOSED:
        return float(_f_closed(z, k))
    return _f_quad(z, float(b))


def f_integral_array(z, b):
    """Vectorized ``F(z; b)`` used by the loss.

    Integer orders ``k >= 7`` use the partial-fraction form instead of
    per-point quadrature; non-integer orders fall back to cached quadrature.
    """
    _check_f_args(z, b)
    za = np.asarray(z, dtype=float)
    k = unit_order(b)
    if k is not None:
        out = _f_closed(za, k)
    else:
        flat = [0.0 if v == 0.0 else _f_quad(float(v), float(b)) for v in za.ravel()]
        out = np.asarray(flat, dtype=float).reshape(za.shape)
    return _wrap(z, out)
