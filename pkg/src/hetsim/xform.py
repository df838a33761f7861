"""Special functions and high-order Laplace-transform derivatives.

The engine works on *tail terms* q_n = (-s)^n L^(n)(s) / n! instead of raw
derivatives.  For a completely monotone Laplace transform every q_n is
nonnegative, so the Gamma-tail coverage sum

    sum_{n < N} (-s)^n / n! * L^(n)(s)  =  sum_{n < N} q_n

has no sign cancellation at all, products of transforms reduce to plain
convolutions of q-arrays (the (-s)^n / n! weights absorb the Leibniz
binomials), and no factorial or power of s is ever materialized on the hot
path.  Raw derivative values are recovered on demand in log space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath as mp
import numpy as np
from scipy.special import gammaln

__all__ = [
    "DomainError",
    "AccuracyError",
    "c_alpha",
    "DerivativeArray",
    "ExpStable",
    "Rational",
    "DegenerateExp",
    "LaplaceProduct",
    "exp_stable_derivatives",
    "rational_derivatives",
    "product_derivatives",
    "gamma_tail_sum",
    "gamma_tail_sum_mp",
    "gamma_tail_bound",
    "tail_power",
]

_EPS = float(np.finfo(np.float64).eps)


class DomainError(ValueError):
    """Argument outside the mathematical domain of a transform or function."""


class AccuracyError(ArithmeticError):
    """A numerical result cannot be certified to the requested accuracy."""


def c_alpha(alpha: float) -> float:
    """Interference constant (2*pi^2/alpha) * csc(2*pi/alpha) of the PPP
    shot-noise functional.  Finite and positive only for alpha > 2."""
    if alpha <= 2.0:
        raise DomainError(
            f"c_alpha: pathloss exponent must exceed 2 (got {alpha}); "
            "csc(2*pi/alpha) has a pole at alpha = 2"
        )
    return (2.0 * math.pi ** 2 / alpha) / math.sin(2.0 * math.pi / alpha)


# ---------------------------------------------------------------------------
# derivative arrays
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DerivativeArray:
    """Derivatives of a Laplace transform L at a point s.

    Canonical storage is ``tail`` with tail[n] = (-s)^n L^(n)(s) / n!.
    ``taylor`` (L^(n)(s)/n!) and ``values`` (raw L^(n)(s)) are derived views;
    at s = 0 the tail encoding is degenerate, so constructors that support
    s = 0 store an explicit ``taylor0`` backing array.
    """

    eval_point: float
    tail: np.ndarray
    taylor0: np.ndarray | None = field(default=None, compare=False)

    @property
    def order(self) -> int:
        return len(self.tail) - 1

    @property
    def taylor(self) -> np.ndarray:
        if self.taylor0 is not None:
            return self.taylor0
        s = self.eval_point
        if s == 0.0:
            raise DomainError("taylor coefficients unavailable at s = 0 for this array")
        n = np.arange(len(self.tail), dtype=float)
        out = np.zeros_like(self.tail)
        nz = self.tail != 0.0
        with np.errstate(over="ignore"):
            out[nz] = (
                np.sign(self.tail[nz])
                * (-1.0) ** n[nz]
                * np.exp(np.log(np.abs(self.tail[nz])) - n[nz] * math.log(abs(s)))
            )
        if s < 0.0:
            # tail[n] = (-s)^n t_n with -s > 0: no extra sign flip needed
            out[nz] = np.abs(out[nz]) * np.sign(self.tail[nz])
        return out

    @property
    def values(self) -> np.ndarray:
        """Raw derivatives L^(n)(s); factorials applied in log space.

        Overflows to inf for very high orders whose derivative genuinely
        exceeds float range; intended for low-order use (oracles, display).
        """
        t = self.taylor
        n = np.arange(len(t), dtype=float)
        out = np.zeros_like(t)
        nz = t != 0.0
        with np.errstate(over="ignore"):
            out[nz] = np.sign(t[nz]) * np.exp(np.log(np.abs(t[nz])) + gammaln(n[nz] + 1.0))
        return out

    def derivative(self, n: int) -> float:
        return float(self.values[n])

    def is_completely_monotone(self, tol: float = 0.0) -> bool:
        """Sign test: L^(n) alternates as (-1)^n iff every tail term >= 0."""
        return bool(np.all(self.tail >= -tol))


# ---------------------------------------------------------------------------
# transform factors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExpStable:
    """exp(-a * s^(2/alpha)): Laplace transform of PPP shot-noise interference."""

    a: float
    alpha: float

    def __post_init__(self):
        if self.a < 0.0:
            raise DomainError(f"ExpStable: a must be >= 0 (got {self.a})")
        if self.alpha <= 2.0:
            raise DomainError(f"ExpStable: alpha must exceed 2 (got {self.alpha})")

    def value(self, s: float) -> float:
        if s < 0.0:
            raise DomainError(f"ExpStable transform undefined for s = {s} < 0")
        return math.exp(-self.a * s ** (2.0 / self.alpha))

    def tail_terms(self, s: float, order: int) -> np.ndarray:
        return _exp_stable_tail(self.a, self.alpha, s, order)

    def tail_terms_mp(self, s, order: int) -> list:
        return _exp_stable_tail_mp(self.a, self.alpha, s, order)


@dataclass(frozen=True)
class Rational:
    """(1 + c*s)^(-1): Laplace transform of an exponentially faded interferer."""

    c: float

    def __post_init__(self):
        if self.c < 0.0:
            raise DomainError(f"Rational: c must be >= 0 (got {self.c})")

    def value(self, s: float) -> float:
        den = 1.0 + self.c * s
        if den <= 0.0:
            raise DomainError(f"Rational transform has a pole: 1 + c*s = {den} <= 0")
        return 1.0 / den

    def tail_terms(self, s: float, order: int) -> np.ndarray:
        den = 1.0 + self.c * s
        if den <= 0.0:
            raise DomainError(f"Rational transform has a pole: 1 + c*s = {den} <= 0")
        rho = self.c * s / den
        return (1.0 / den) * rho ** np.arange(order + 1, dtype=float)

    def taylor_terms(self, s: float, order: int) -> np.ndarray:
        # L^(n)(s)/n! = (-c)^n (1 + c*s)^(-(n+1)), exact at any valid s
        den = 1.0 + self.c * s
        n = np.arange(order + 1, dtype=float)
        with np.errstate(over="ignore"):
            return (-self.c) ** n / den ** (n + 1.0)

    def tail_terms_mp(self, s, order: int) -> list:
        s = mp.mpf(s)
        den = 1 + mp.mpf(self.c) * s
        rho = mp.mpf(self.c) * s / den
        out = [1 / den]
        for _ in range(order):
            out.append(out[-1] * rho)
        return out


@dataclass(frozen=True)
class DegenerateExp:
    """exp(-b*s): deterministic (point-mass) interference, used as a test
    fixture because its Gamma-tail sum is the regularized incomplete gamma."""

    b: float

    def __post_init__(self):
        if self.b < 0.0:
            raise DomainError(f"DegenerateExp: b must be >= 0 (got {self.b})")

    def value(self, s: float) -> float:
        return math.exp(-self.b * s)

    def tail_terms(self, s: float, order: int) -> np.ndarray:
        # Poisson weights e^(-sb) (sb)^n / n!, each computed in log space
        x = self.b * s
        n = np.arange(order + 1, dtype=float)
        if x == 0.0:
            out = np.zeros(order + 1)
            out[0] = 1.0
            return out
        if x < 0.0:
            return np.exp(-x) * (x ** n) / np.exp(gammaln(n + 1.0))
        return np.exp(-x + n * math.log(x) - gammaln(n + 1.0))

    def tail_terms_mp(self, s, order: int) -> list:
        x = mp.mpf(self.b) * mp.mpf(s)
        out = [mp.e ** (-x)]
        for n in range(1, order + 1):
            out.append(out[-1] * x / n)
        return out


@dataclass(frozen=True)
class LaplaceProduct:
    """Product of transform factors, exposing joint evaluation and tails."""

    factors: tuple

    def value(self, s: float) -> float:
        out = 1.0
        for f in self.factors:
            out *= f.value(s)
        return out

    def tail_terms(self, s: float, order: int) -> np.ndarray:
        out = None
        for f in self.factors:
            t = f.tail_terms(s, order)
            out = t if out is None else np.convolve(out, t)[: order + 1]
        if out is None:
            out = np.zeros(order + 1)
            out[0] = 1.0
        return out

    def derivatives(self, s: float, order: int) -> DerivativeArray:
        return DerivativeArray(s, self.tail_terms(s, order))


# ---------------------------------------------------------------------------
# tail-term kernels
# ---------------------------------------------------------------------------


def _exp_stable_tail(a: float, alpha: float, s: float, order: int) -> np.ndarray:
    """Tail terms of exp(g(s)), g(s) = -a s^delta, delta = 2/alpha in (0, 1).

    Uses the exp-of-series recursion q_n = (1/n) sum_{k=1..n} k g_k q_{n-k}
    with g_k = (-s)^k g^(k)(s)/k! = a s^delta |binom(delta, k)|.  All g_k and
    all q_n are nonnegative, so the recursion is cancellation-free.
    """
    delta = 2.0 / alpha
    big_a = a * s ** delta if s > 0.0 else 0.0
    q = np.zeros(order + 1)
    q[0] = math.exp(-big_a)
    if order == 0 or big_a == 0.0:
        return q
    m = np.zeros(order + 1)
    m[1] = delta
    for k in range(2, order + 1):
        m[k] = m[k - 1] * (k - 1 - delta) / k
    kg = big_a * m * np.arange(order + 1, dtype=float)
    for n in range(1, order + 1):
        q[n] = kg[1 : n + 1] @ q[n - 1 :: -1] / n
    return q


def _exp_stable_tail_mp(a: float, alpha: float, s, order: int) -> list:
    delta = mp.mpf(2) / mp.mpf(alpha)
    s = mp.mpf(s)
    big_a = mp.mpf(a) * s ** delta if s > 0 else mp.mpf(0)
    q = [mp.e ** (-big_a)] + [mp.mpf(0)] * order
    if order == 0 or big_a == 0:
        return q
    m = [mp.mpf(0), delta]
    for k in range(2, order + 1):
        m.append(m[-1] * (k - 1 - delta) / k)
    for n in range(1, order + 1):
        q[n] = sum(k * big_a * m[k] * q[n - k] for k in range(1, n + 1)) / n
    return q


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------


def exp_stable_derivatives(a: float, alpha: float, s: float, order: int) -> DerivativeArray:
    """Derivatives of exp(-a s^(2/alpha)) at s > 0 up to the given order."""
    if s <= 0.0:
        raise DomainError(
            f"exp_stable_derivatives: s must be > 0 (got {s}); the fractional "
            "power derivative is singular at the origin"
        )
    if order < 0:
        raise ValueError("order must be >= 0")
    return DerivativeArray(s, _exp_stable_tail(a, alpha, s, order))


def rational_derivatives(c: float, s: float, order: int) -> DerivativeArray:
    """Derivatives of (1 + c*s)^(-1); exact closed form, valid while 1+c*s > 0."""
    if order < 0:
        raise ValueError("order must be >= 0")
    fac = Rational(c)
    tail = fac.tail_terms(s, order)
    taylor0 = fac.taylor_terms(s, order) if s == 0.0 else None
    return DerivativeArray(s, tail, taylor0=taylor0)


def product_derivatives(arrays: list[DerivativeArray] | tuple) -> DerivativeArray:
    """Leibniz product of derivative arrays sharing eval point and order."""
    if not arrays:
        raise ValueError("product_derivatives: need at least one array")
    s = arrays[0].eval_point
    order = arrays[0].order
    for arr in arrays[1:]:
        if arr.eval_point != s:
            raise ValueError(
                f"product_derivatives: eval points differ ({arr.eval_point} != {s})"
            )
        if arr.order != order:
            raise ValueError(
                f"product_derivatives: orders differ ({arr.order} != {order})"
            )
    tail = arrays[0].tail
    for arr in arrays[1:]:
        tail = np.convolve(tail, arr.tail)[: order + 1]
    taylor0 = None
    if s == 0.0:
        taylor0 = arrays[0].taylor
        for arr in arrays[1:]:
            taylor0 = np.convolve(taylor0, arr.taylor)[: order + 1]
    return DerivativeArray(s, tail, taylor0=taylor0)


def tail_power(tail: np.ndarray, exponent: int, order: int) -> np.ndarray:
    """Tail terms of L^k from those of L (repeated-squaring convolution)."""
    if exponent < 0:
        raise ValueError("exponent must be >= 0")
    out = np.zeros(order + 1)
    out[0] = 1.0
    base = tail[: order + 1]
    k = exponent
    while k:
        if k & 1:
            out = np.convolve(out, base)[: order + 1]
        k >>= 1
        if k:
            base = np.convolve(base, base)[: order + 1]
    return out


def _neumaier(terms) -> tuple[float, float]:
    """Compensated sum; returns (sum, sum of |terms|)."""
    total = 0.0
    comp = 0.0
    absum = 0.0
    for v in terms:
        v = float(v)
        absum += abs(v)
        t = total + v
        if abs(total) >= abs(v):
            comp += (total - t) + v
        else:
            comp += (v - t) + total
        total = t
    return total + comp, absum


def gamma_tail_sum(
    derivs: DerivativeArray, n_terms: int, *, err_tol: float = 1e-6
) -> tuple[float, float]:
    """Coverage of a Gamma(n_terms, 1) faded link against interference with
    Laplace-transform derivatives ``derivs``: sum of the first n_terms tail
    terms, compensated, with a tracked cancellation-error bound.

    Returns (value, error_estimate).  Raises AccuracyError when the bound
    exceeds ``err_tol`` (callers should switch to the extended-precision path
    or a Monte Carlo fallback), or when the sum escapes [0, 1] by more than
    the bound.
    """
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")
    if n_terms > derivs.order + 1:
        raise ValueError(
            f"n_terms = {n_terms} exceeds available derivative order {derivs.order}"
        )
    value, absum = _neumaier(derivs.tail[:n_terms])
    # compensation leaves ~2 eps * sum|q|; each term additionally carries a
    # few ulps of construction rounding, hence the n_terms scaling
    err = (2.0 + n_terms) * _EPS * absum
    if err > err_tol:
        raise AccuracyError(
            f"gamma_tail_sum: cancellation error estimate {err:.3e} exceeds "
            f"{err_tol:.1e}; use the extended-precision path or an MC fallback"
        )
    if value > 1.0:
        if value - 1.0 <= err:
            value = 1.0
        else:
            raise AccuracyError(
                f"gamma_tail_sum: value {value} exceeds 1 by more than the "
                f"error bound {err:.3e}"
            )
    elif value < 0.0:
        if -value <= err:
            value = 0.0
        else:
            raise AccuracyError(
                f"gamma_tail_sum: value {value} below 0 by more than the "
                f"error bound {err:.3e}"
            )
    return value, err


def gamma_tail_sum_mp(factors, s: float, n_terms: int, *, dps: int = 34) -> tuple[float, float]:
    """Extended-precision (>= 2x double) evaluation of the Gamma-tail sum for
    a product of factors carrying ``tail_terms_mp``.  Returns (value, error)
    with the error bound inherited from the working precision."""
    with mp.workdps(dps):
        order = n_terms - 1
        tail = None
        for f in factors:
            t = f.tail_terms_mp(s, order)
            if tail is None:
                tail = t
            else:
                tail = [
                    sum(tail[k] * t[n - k] for k in range(n + 1))
                    for n in range(order + 1)
                ]
        total = sum(tail)
        err = float(mp.mpf(10) ** (-dps + 2) * sum(abs(t) for t in tail))
        value = float(total)
    return min(max(value, 0.0), 1.0), err


def gamma_tail_bound(laplace, s: float, n_terms: int) -> float:
    """Upper bound on the Gamma-tail sum: sum_n (s^n/n!) L(s - n/e).

    ``laplace`` is any object with a ``value(x)`` method.  The shifted
    argument may leave the transform's domain; that raises a DomainError
    naming the offending term rather than guessing an alternative reading.
    """
    if s <= 0.0:
        raise DomainError(f"gamma_tail_bound: s must be > 0 (got {s})")
    total = 0.0
    for n in range(n_terms):
        x = s - n / math.e
        try:
            lv = laplace.value(x)
        except DomainError as exc:
            raise DomainError(
                f"gamma_tail_bound: shifted argument s - n/e = {x:.6g} leaves "
                f"the transform's domain at term n = {n}"
            ) from exc
        total += math.exp(n * math.log(s) - math.lgamma(n + 1)) * lv
    return total
