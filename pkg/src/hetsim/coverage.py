"""Analytic coverage probabilities and area spectral efficiencies.

All position expectations left conditioned by the link-level results are
resolved here by one-dimensional quadrature against the exact distance
densities of the model (uniform users in the macro disk, uniform small
cells, fixed-distance small-cell pairs).  Radial integrals substitute
u = (r/R)^2 so the linear radial weight becomes a uniform measure on [0, 1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np
from scipy.integrate import quad

from .netmodel import NetworkParams, ParameterError, RadialDensity, derive, validate
from .xform import (
    AccuracyError,
    DerivativeArray,
    DomainError,
    ExpStable,
    LaplaceProduct,
    c_alpha,
    gamma_tail_bound,
    gamma_tail_sum,
    gamma_tail_sum_mp,
    tail_power,
)

__all__ = [
    "CoverageResult",
    "AseResult",
    "AveragedRational",
    "uplink_mue_coverage",
    "uplink_mue_coverage_bound",
    "macro_ase_ul",
    "macro_ase_ul_uncorrelated",
    "sue_coverage_ul",
    "sbs_coverage_ul",
    "sc_ase_ul",
    "optimal_q",
    "dl_mue_coverage",
    "dl_mue_coverage_closed_form",
    "macro_ase_dl",
    "dl_sbs_coverage",
    "dl_sbs_conditional",
    "sc_ase_dl",
]

_QUAD_OPTS = dict(epsabs=1e-8, epsrel=1e-6, limit=200)


@dataclass(frozen=True)
class CoverageResult:
    """A coverage probability plus how it was obtained."""

    value: float
    method: str  # closed-form | quadrature | quadrature+position-averaging
    error_estimate: float
    n_terms: int


@dataclass(frozen=True)
class AseResult:
    """Area spectral efficiency with its underlying coverage result(s)."""

    value: float
    tier: str        # macro | small-cell
    direction: str   # UL | DL
    coverage: object  # CoverageResult or tuple of them


def _rate(t: float) -> float:
    return math.log2(1.0 + t)


@lru_cache(maxsize=64)
def _gl_nodes(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (x + 1.0), 0.5 * w


@dataclass(frozen=True)
class AveragedRational:
    """Disk-averaged single-interferer factor E_u[(1 + s*coef*u^(-alpha/2))^(-1)]
    with u uniform on [0, 1] (u = (x/R)^2 for an interferer uniform in the
    disk of radius R and coef = P * R^(-alpha)).

    The n-th derivative in s is the same expectation of the closed-form
    rational derivatives (differentiation under the integral; the integrand
    is dominated on the support), so tail terms are integrals of
    w * rho^n with rho = y/(1+y), w = 1/(1+y), y = s*coef*u^(-alpha/2).
    """

    coef: float
    alpha: float
    tol: float = 1e-12

    _NODE_LADDER = (96, 192, 384, 768, 1536)

    def tail_terms(self, s: float, order: int) -> np.ndarray:
        if s == 0.0 or self.coef == 0.0:
            out = np.zeros(order + 1)
            out[0] = 1.0
            return out
        prev = None
        for n_nodes in self._NODE_LADDER:
            t, w = _gl_nodes(n_nodes)
            y = s * self.coef * t ** (-self.alpha / 2.0)
            rho = y / (1.0 + y)
            cur = w / (1.0 + y)
            q = np.empty(order + 1)
            q[0] = cur.sum()
            for n in range(1, order + 1):
                cur = cur * rho
                q[n] = cur.sum()
            if prev is not None and np.max(np.abs(q - prev)) <= self.tol:
                return q
            prev = q
        return prev

    def tail_terms_mp(self, s, order: int) -> list:
        # positional quadrature stays in double precision; only the
        # downstream convolution/summation gains extended precision
        import mpmath as mp

        return [mp.mpf(float(v)) for v in self.tail_terms(float(s), order)]

    def value(self, s: float) -> float:
        if s < 0.0:
            # y -> -inf as u -> 0, so 1 + y crosses zero inside the support
            raise DomainError(
                f"averaged interferer factor undefined for s = {s} < 0: "
                "the integrand has a pole inside the averaging support"
            )
        return float(self.tail_terms(s, 0)[0])


# ---------------------------------------------------------------------------
# uplink: macro tier
# ---------------------------------------------------------------------------


def _ul_pieces(p: NetworkParams):
    ca = c_alpha(p.pathloss_exponent)
    delta = 2.0 / p.pathloss_exponent
    a_sdl = p.sc_density * p.dl_fraction * p.p_s ** delta * ca
    a_sul = p.sc_density * (1.0 - p.dl_fraction) * p.p_su ** delta * ca
    mul = AveragedRational(
        coef=p.p_mu * p.macro_radius ** (-p.pathloss_exponent),
        alpha=p.pathloss_exponent,
    )
    return a_sdl, a_sul, mul


def _ul_factors(p: NetworkParams):
    a_sdl, a_sul, mul = _ul_pieces(p)
    factors = [
        ExpStable(a_sdl, p.pathloss_exponent),
        ExpStable(a_sul, p.pathloss_exponent),
    ]
    factors.extend([mul] * (p.n_mues - 1))
    return factors


def uplink_mue_coverage(params: NetworkParams, *, precision: str = "auto") -> CoverageResult:
    """P(uplink SIR of a served macro user > T) with an N-antenna maximum
    ratio combining receiver: radial average of the N-term Gamma-tail sum
    against the product of the small-cell shot-noise transforms and the
    position-averaged co-user interference factor."""
    p = validate(params)
    if p.n_mues < 1:
        raise ParameterError("uplink macro analysis requires n_mues >= 1")
    n = p.n_antennas
    order = n - 1
    a_sdl, a_sul, mul = _ul_pieces(p)
    alpha = p.pathloss_exponent
    r2 = p.macro_radius ** 2
    k_int = p.n_mues - 1
    point_errs = [0.0]

    def tail_at(s: float) -> np.ndarray:
        q = ExpStable(a_sdl, alpha).tail_terms(s, order)
        if a_sul > 0.0:
            q = np.convolve(q, ExpStable(a_sul, alpha).tail_terms(s, order))[: order + 1]
        if k_int > 0:
            q = np.convolve(q, tail_power(mul.tail_terms(s, order), k_int, order))[: order + 1]
        return q

    def integrand(u: float) -> float:
        s = p.sir_threshold * (r2 * u) ** (alpha / 2.0) / p.p_mu
        if s == 0.0:
            return 1.0
        if precision == "extended":
            val, err = gamma_tail_sum_mp(_ul_factors(p), s, n)
        else:
            try:
                val, err = gamma_tail_sum(DerivativeArray(s, tail_at(s)), n)
            except AccuracyError as exc:
                if precision == "auto":
                    val, err = gamma_tail_sum_mp(_ul_factors(p), s, n)
                else:
                    r = math.sqrt(r2 * u)
                    raise AccuracyError(
                        f"uplink coverage integrand failed at r = {r:.6g} m: {exc}"
                    ) from exc
        point_errs.append(err)
        return val

    res = quad(integrand, 0.0, 1.0, full_output=1, **_QUAD_OPTS)
    value, abserr = res[0], res[1]
    method = "quadrature+position-averaging" if k_int > 0 else "quadrature"
    return CoverageResult(
        value=min(max(value, 0.0), 1.0),
        method=method,
        error_estimate=abserr + max(point_errs),
        n_terms=n,
    )


def uplink_mue_coverage_bound(params: NetworkParams) -> float:
    """Upper bound on the uplink coverage: the shifted-argument series
    sum_n (s^n/n!) L(s - n/e), radially averaged.  Implemented exactly as
    that expression; a shifted argument outside the transform domain raises
    a DomainError naming the offending term.  The bound can exceed 1 by many
    orders of magnitude in interference-limited regimes with small typical
    interference; it is still a valid upper bound."""
    p = validate(params)
    if p.n_mues < 1:
        raise ParameterError("uplink macro analysis requires n_mues >= 1")
    product = LaplaceProduct(tuple(_ul_factors(p)))
    alpha = p.pathloss_exponent
    r2 = p.macro_radius ** 2

    def integrand(u: float) -> float:
        s = p.sir_threshold * (r2 * u) ** (alpha / 2.0) / p.p_mu
        if s == 0.0:
            return 1.0
        return gamma_tail_bound(product, s, p.n_antennas)

    res = quad(integrand, 0.0, 1.0, full_output=1, **_QUAD_OPTS)
    return res[0]


def macro_ase_ul(params: NetworkParams, *, precision: str = "auto") -> AseResult:
    cov = uplink_mue_coverage(params, precision=precision)
    value = params.n_mues * cov.value * _rate(params.sir_threshold)
    return AseResult(value=value, tier="macro", direction="UL", coverage=cov)


def macro_ase_ul_uncorrelated(params: NetworkParams) -> AseResult:
    """Macro ASE when the combining vector is uncorrelated with the user's
    channel (stale or random combiner): K times the radial average of the
    interference transform itself.  Independent of the antenna count and,
    by its defining expression, carries no log2(1+T) factor."""
    p = validate(params)
    cov = uplink_mue_coverage(replace(p, n_antennas=1))
    return AseResult(
        value=p.n_mues * cov.value, tier="macro", direction="UL", coverage=cov
    )


# ---------------------------------------------------------------------------
# uplink: small-cell tier
# ---------------------------------------------------------------------------


@lru_cache(maxsize=4096)
def _pair_factor(coef: float, radius: float, alpha: float) -> tuple[float, float]:
    """E[(1 + coef * V^(-alpha))^(-1)] with V the distance between two
    independent uniform points in the disk of radius ``radius``."""
    if coef == 0.0:
        return 1.0, 0.0
    density = RadialDensity.pair_distance(radius)

    def integrand(v: float) -> float:
        return float(density.pdf(v)) / (1.0 + coef * v ** (-alpha))

    val, err = quad(integrand, 0.0, 2.0 * radius, epsabs=1e-13, epsrel=1e-11, limit=200)
    return val, err


def _sc_ul_coverage(p: NetworkParams, node: str) -> CoverageResult:
    tx_power = p.p_s if node == "sue" else p.p_su
    s = p.sir_threshold * p.sc_pair_distance ** p.pathloss_exponent / tx_power
    ca = c_alpha(p.pathloss_exponent)
    delta = 2.0 / p.pathloss_exponent
    expo = p.sc_density * ca * s ** delta * (
        p.dl_fraction * p.p_s ** delta + (1.0 - p.dl_fraction) * p.p_su ** delta
    )
    base = math.exp(-expo)
    k = p.n_mues
    if k == 0:
        return CoverageResult(base, "closed-form", 4e-16 * base, 1)
    factor, ferr = _pair_factor(s * p.p_mu, p.macro_radius, p.pathloss_exponent)
    value = base * factor ** k
    err = base * k * factor ** (k - 1) * ferr + 4e-16 * value
    return CoverageResult(value, "quadrature+position-averaging", err, 1)


def sue_coverage_ul(params: NetworkParams) -> CoverageResult:
    """Coverage of a typical small-cell user receiving from its own SBS
    (SC in downlink mode) while the macro tier is in uplink.  The co-located
    macro-user product is replaced by the K-th power of the pair-distance
    averaged factor (user positions are independent of the pair placement)."""
    return _sc_ul_coverage(validate(params), "sue")


def sbs_coverage_ul(params: NetworkParams) -> CoverageResult:
    """Coverage at a typical small-cell base station receiving from its own
    user (SC in uplink mode) while the macro tier is in uplink."""
    return _sc_ul_coverage(validate(params), "sbs")


def sc_ase_ul(params: NetworkParams) -> AseResult:
    """Aggregate small-cell ASE in the macro-uplink slot:
    lambda * [q * p_SUE + (1-q) * p_SBS] * log2(1+T)."""
    p = validate(params)
    sue = _sc_ul_coverage(p, "sue")
    sbs = _sc_ul_coverage(p, "sbs")
    value = p.sc_density * (
        p.dl_fraction * sue.value + (1.0 - p.dl_fraction) * sbs.value
    ) * _rate(p.sir_threshold)
    return AseResult(value=value, tier="small-cell", direction="UL", coverage=(sue, sbs))


def optimal_q(params: NetworkParams, sc_density: float | None = None) -> tuple[float, AseResult]:
    """Duty-cycle optimizer: maximizes the small-cell uplink-slot ASE over
    q in [0, 1] by a 0.01-step grid scan followed by golden-section
    refinement to |dq| < 1e-4.  Ties break toward smaller q."""
    p = validate(params)
    if sc_density is not None:
        p = replace(p, sc_density=sc_density)
    if not p.sc_density > 0.0:
        raise ParameterError("optimal_q requires a positive small-cell density")

    def objective(q: float) -> float:
        return sc_ase_ul(replace(p, dl_fraction=q)).value

    grid = np.linspace(0.0, 1.0, 101)
    vals = np.array([objective(q) for q in grid])
    vmax = float(vals.max())
    tie_tol = 1e-12 * max(abs(vmax), 1e-300)
    best = int(np.argmax(vals >= vmax - tie_tol))  # smallest q among near-ties
    q_grid, v_grid = float(grid[best]), float(vals[best])

    lo = max(0.0, q_grid - 0.01)
    hi = min(1.0, q_grid + 0.01)
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = objective(c), objective(d)
    while b - a > 1e-4:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = objective(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = objective(d)
    q_ref = c if fc >= fd else d
    v_ref = max(fc, fd)

    if v_ref > v_grid + tie_tol:
        q_star = float(q_ref)
    else:
        q_star = q_grid
    return q_star, sc_ase_ul(replace(p, dl_fraction=q_star))


# ---------------------------------------------------------------------------
# downlink
# ---------------------------------------------------------------------------


def _dl_shotnoise_level(p: NetworkParams) -> float:
    # reverse TDD: in the macro downlink slot every small cell is in uplink,
    # so the interference field is the full-density process at SUE power
    ca = c_alpha(p.pathloss_exponent)
    return p.sc_density * p.p_su ** (2.0 / p.pathloss_exponent) * ca


def dl_mue_coverage(params: NetworkParams, *, precision: str = "auto") -> CoverageResult:
    """P(downlink SIR of a served macro user > T) under zero-forcing with
    interference nulling: radial average of the (theta+1)-term Gamma-tail
    sum against the uplink small-cell shot-noise transform."""
    p = validate(params, downlink=True)
    dc = derive(p)
    n_terms = dc.gain_shape + 1
    order = dc.gain_shape
    a = _dl_shotnoise_level(p)
    alpha = p.pathloss_exponent
    r2 = p.macro_radius ** 2
    factor = ExpStable(a, alpha)
    point_errs = [0.0]

    def integrand(u: float) -> float:
        s = p.sir_threshold * (r2 * u) ** (alpha / 2.0) * p.n_mues / p.p_m
        if s == 0.0:
            return 1.0
        if precision == "extended":
            val, err = gamma_tail_sum_mp([factor], s, n_terms)
        else:
            try:
                val, err = gamma_tail_sum(
                    DerivativeArray(s, factor.tail_terms(s, order)), n_terms
                )
            except AccuracyError as exc:
                if precision == "auto":
                    val, err = gamma_tail_sum_mp([factor], s, n_terms)
                else:
                    r = math.sqrt(r2 * u)
                    raise AccuracyError(
                        f"downlink coverage integrand failed at r = {r:.6g} m: {exc}"
                    ) from exc
        point_errs.append(err)
        return val

    res = quad(integrand, 0.0, 1.0, full_output=1, **_QUAD_OPTS)
    return CoverageResult(
        value=min(max(res[0], 0.0), 1.0),
        method="quadrature",
        error_estimate=res[1] + max(point_errs),
        n_terms=n_terms,
    )


def dl_mue_coverage_closed_form(params: NetworkParams) -> CoverageResult:
    """Full-nulling (beta = 1) downlink macro coverage in closed form:
    (1 - exp(-Delta R^2)) / (Delta R^2)."""
    p = validate(params, downlink=True)
    if p.nulling_fraction != 1.0:
        raise ParameterError(
            "closed-form downlink coverage requires nulling_fraction = 1"
        )
    dc = derive(p)
    x = dc.delta * p.macro_radius ** 2
    value = 1.0 if x == 0.0 else -math.expm1(-x) / x
    return CoverageResult(value, "closed-form", 4e-16 * max(value, 1.0), 1)


def macro_ase_dl(params: NetworkParams, *, precision: str = "auto") -> AseResult:
    p = validate(params, downlink=True)
    if p.nulling_fraction == 1.0:
        cov = dl_mue_coverage_closed_form(p)
    else:
        cov = dl_mue_coverage(p, precision=precision)
    value = p.n_mues * cov.value * _rate(p.sir_threshold)
    return AseResult(value=value, tier="macro", direction="DL", coverage=cov)


@lru_cache(maxsize=4096)
def _macro_block_factor(kappa: float, radius: float, alpha: float, k: int) -> tuple[float, float]:
    """E_D[(1 + kappa * D^(-alpha))^(-k)] with D the small cell's distance
    from the macro BS, density 2D/R^2 on [0, R] (u-substitution)."""
    if kappa == 0.0 or k == 0:
        return 1.0, 0.0

    def integrand(u: float) -> float:
        return (1.0 + kappa * (radius * math.sqrt(u)) ** (-alpha)) ** (-k)

    val, err = quad(integrand, 0.0, 1.0, epsabs=1e-13, epsrel=1e-11, limit=200)
    return val, err


def dl_sbs_conditional(params: NetworkParams, distance: float, nulled: bool) -> float:
    """Coverage of a small-cell base station at a given distance from the
    macro BS, conditioned on whether the macro beam nulls it."""
    p = validate(params, downlink=True)
    ca = c_alpha(p.pathloss_exponent)
    delta = 2.0 / p.pathloss_exponent
    base = math.exp(
        -p.sc_density * p.sir_threshold ** delta * p.sc_pair_distance ** 2 * ca
    )
    if nulled:
        return base
    kappa = (
        p.p_m * p.sir_threshold * p.sc_pair_distance ** p.pathloss_exponent
        / (p.n_mues * p.p_su)
    )
    return base * (1.0 + kappa * distance ** (-p.pathloss_exponent)) ** (-p.n_mues)


def dl_sbs_coverage(params: NetworkParams, *, clamp: bool = True) -> CoverageResult:
    """Coverage of a randomly selected small-cell base station in the macro
    downlink slot: nulled with probability P(nulled), otherwise subject to
    the macro beams, position-averaged over the cell.  ``clamp`` selects the
    probability-clamped nulling fraction (default) or the raw ratio used for
    published-table fidelity."""
    p = validate(params, downlink=True)
    dc = derive(p)
    pa = dc.nulling_prob if clamp else dc.nulling_prob_raw
    if not math.isfinite(pa):
        pa = 1.0  # zero-density corner: no small cells, nulling is vacuous
    ca = c_alpha(p.pathloss_exponent)
    delta = 2.0 / p.pathloss_exponent
    base = math.exp(
        -p.sc_density * p.sir_threshold ** delta * p.sc_pair_distance ** 2 * ca
    )
    kappa = (
        p.p_m * p.sir_threshold * p.sc_pair_distance ** p.pathloss_exponent
        / (p.n_mues * p.p_su)
    )
    ed, ed_err = _macro_block_factor(
        kappa, p.macro_radius, p.pathloss_exponent, p.n_mues
    )
    value = pa * base + (1.0 - pa) * base * ed
    return CoverageResult(
        value=value,
        method="quadrature+position-averaging",
        error_estimate=abs(1.0 - pa) * base * ed_err + 4e-16 * abs(value),
        n_terms=1,
    )


def sc_ase_dl(params: NetworkParams, *, clamp: bool = True) -> AseResult:
    """Small-cell ASE in the macro downlink slot: lambda * p_SBS * log2(1+T)."""
    p = validate(params, downlink=True)
    cov = dl_sbs_coverage(p, clamp=clamp)
    value = p.sc_density * cov.value * _rate(p.sir_threshold)
    return AseResult(value=value, tier="small-cell", direction="DL", coverage=cov)
