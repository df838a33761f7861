"""Shared oracle helpers for the test suite."""

import math

import mpmath as mp
import numpy as np
from scipy.integrate import quad
from scipy.special import gammaincc


def mp_derivative(f, x: float, n: int, dps: int = 40) -> float:
    """Step-extrapolated finite-difference derivative at high working
    precision; the independent oracle for every derivative array."""
    with mp.workdps(dps):
        return float(mp.diff(f, mp.mpf(x), n, method="step"))


def levy_mixture_coverage(theta: int, amplitude: float) -> float:
    """Coverage of a Gamma(theta+1,1) link against 1/2-stable shot noise
    whose transform is exp(-x) at the evaluation point, computed through
    the closed-form one-sided stable (Levy) mixture:
    (2/sqrt(pi)) * int_0^inf Q(theta+1, x^2/(4w^2)) exp(-w^2) dw.

    Valid for pathloss exponent 4; independent of the recursion path."""
    x = amplitude
    if x == 0.0:
        return 1.0

    def integrand(w: float) -> float:
        return gammaincc(theta + 1, x * x / (4.0 * w * w)) * math.exp(-w * w)

    val, _ = quad(integrand, 0.0, 12.0, epsabs=1e-12, epsrel=1e-10, limit=300)
    return 2.0 / math.sqrt(math.pi) * val


def levy_mixture_radial_coverage(theta: int, peak: float) -> float:
    """Radial average of levy_mixture_coverage over the uniform-disk weight:
    the full independent oracle for the downlink macro coverage at
    pathloss exponent 4 (peak = Delta * R^2)."""

    def integrand(u: float) -> float:
        return levy_mixture_coverage(theta, peak * u)

    val, _ = quad(integrand, 0.0, 1.0, epsabs=1e-10, epsrel=1e-8, limit=200)
    return val
