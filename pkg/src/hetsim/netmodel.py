"""Parameter and derived-constant types for the two-tier massive-MIMO HetNet.

Units are SI throughout: watts, meters, nodes per square meter.  The SIR
threshold is stored linear; dB conversion happens once at the CLI boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace

import numpy as np

from .xform import c_alpha

__all__ = [
    "ParameterError",
    "NetworkParams",
    "DerivedConstants",
    "RadialDensity",
    "validate",
    "derive",
    "load_params",
    "db_to_linear",
    "linear_to_db",
    "fig1_params",
    "table1_params",
]


class ParameterError(ValueError):
    """A network parameter violates its domain constraint."""


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def linear_to_db(x: float) -> float:
    return 10.0 * math.log10(x)


@dataclass(frozen=True)
class NetworkParams:
    """Physical and system parameters of the network.

    n_antennas      macro BS antenna count (N)
    n_mues          macro users served (K); small-cell-only analyses accept 0
    sc_density      small cells per m^2 (lambda)
    dl_fraction     probability a small cell is in downlink mode (q)
    pathloss_exponent  alpha, strictly > 2
    sc_pair_distance   fixed SBS-SUE separation d, m
    macro_radius    MUE disk radius R_m, m
    sir_threshold   SIR threshold T, linear
    p_m, p_mu, p_s, p_su  transmit powers (macro BS, macro UE, SBS, SUE), W
    nulling_fraction   beta in [0, 1]: share of the N-K spare degrees of
                       freedom spent nulling interference toward small cells
    """

    n_antennas: int = 100
    n_mues: int = 10
    sc_density: float = 1e-4
    dl_fraction: float = 0.5
    pathloss_exponent: float = 4.0
    sc_pair_distance: float = 10.0
    macro_radius: float = 250.0
    sir_threshold: float = 10.0 ** 0.5
    p_m: float = 1.0
    p_mu: float = 0.005
    p_s: float = 0.1
    p_su: float = 0.005
    nulling_fraction: float = 0.0


@dataclass(frozen=True)
class DerivedConstants:
    """Constants derived from a parameter set, cached per set."""

    c_alpha: float
    nulled_count: int        # M = ceil(beta * (N - K))
    gain_shape: int          # theta = ceil((N - K) * (1 - beta))
    delta: float             # lambda * C_alpha * (K * P_su * T / P_m)^(2/alpha), 1/m^2
    nulling_prob: float      # P(nulled), clamped to [0, 1]
    nulling_prob_raw: float  # M / (lambda * pi * R_m^2), unclamped


def validate(params: NetworkParams, *, downlink: bool = False) -> NetworkParams:
    """Check every domain constraint; returns the params unchanged on success.

    ``downlink`` additionally requires 1 <= K <= N (the zero-forcing
    pseudoinverse must exist and there must be a served user).
    """
    p = params
    if int(p.n_antennas) != p.n_antennas or p.n_antennas < 1:
        raise ParameterError(f"n_antennas must be a positive count (got {p.n_antennas})")
    if int(p.n_mues) != p.n_mues or p.n_mues < 0:
        raise ParameterError(f"n_mues must be a nonnegative count (got {p.n_mues})")
    if downlink:
        if p.n_mues < 1:
            raise ParameterError("n_mues must be >= 1 in downlink mode")
        if p.n_mues > p.n_antennas:
            raise ParameterError(
                f"n_mues = {p.n_mues} exceeds n_antennas = {p.n_antennas}: "
                "zero-forcing requires K <= N"
            )
    if not (p.sc_density >= 0.0 and math.isfinite(p.sc_density)):
        raise ParameterError(f"sc_density must be finite and >= 0 (got {p.sc_density})")
    if not 0.0 <= p.dl_fraction <= 1.0:
        raise ParameterError(f"dl_fraction must lie in [0, 1] (got {p.dl_fraction})")
    if not p.pathloss_exponent > 2.0:
        raise ParameterError(
            f"pathloss exponent must exceed 2 (got {p.pathloss_exponent})"
        )
    if not p.sc_pair_distance > 0.0:
        raise ParameterError(f"sc_pair_distance must be > 0 (got {p.sc_pair_distance})")
    if not p.macro_radius > 0.0:
        raise ParameterError(f"macro_radius must be > 0 (got {p.macro_radius})")
    if not (p.sir_threshold > 0.0 and math.isfinite(p.sir_threshold)):
        raise ParameterError(f"sir_threshold must be finite and > 0 (got {p.sir_threshold})")
    for name in ("p_m", "p_mu", "p_s", "p_su"):
        v = getattr(p, name)
        if not (v > 0.0 and math.isfinite(v)):
            raise ParameterError(f"{name} must be a positive power in watts (got {v})")
    if not 0.0 <= p.nulling_fraction <= 1.0:
        raise ParameterError(
            f"nulling_fraction must lie in [0, 1] (got {p.nulling_fraction})"
        )
    return p


def _ceil_count(x: float) -> int:
    # beta*(N-K) arrives through float arithmetic (0.2*90 = 18.000000000000004);
    # snap to the nearest integer before ceiling so exact products stay exact.
    nearest = round(x)
    if abs(x - nearest) < 1e-9:
        return int(nearest)
    return int(math.ceil(x))


def derive(params: NetworkParams) -> DerivedConstants:
    """Populate all derived constants for a validated parameter set."""
    p = validate(params)
    ca = c_alpha(p.pathloss_exponent)
    spare = p.n_antennas - p.n_mues
    m = _ceil_count(p.nulling_fraction * spare) if spare > 0 else 0
    theta = _ceil_count((1.0 - p.nulling_fraction) * spare) if spare > 0 else 0
    delta = p.sc_density * ca * (
        p.n_mues * p.p_su * p.sir_threshold / p.p_m
    ) ** (2.0 / p.pathloss_exponent)
    area = p.sc_density * math.pi * p.macro_radius ** 2
    if area > 0.0:
        raw = m / area
    else:
        raw = math.inf if m > 0 else 0.0
    return DerivedConstants(
        c_alpha=ca,
        nulled_count=m,
        gain_shape=theta,
        delta=delta,
        nulling_prob=min(max(raw, 0.0), 1.0),
        nulling_prob_raw=raw,
    )


@dataclass(frozen=True)
class RadialDensity:
    """Distance densities used by the position-averaged expectations.

    kinds:
      mue-radial     f(r) = 2r/R^2 on [0, R]; MUE distance from the macro BS
      sc-radial      same form; small-cell distance from the macro BS
      pair-distance  distance between two independent uniform points of the
                     disk, supported on [0, 2R]
    """

    kind: str
    radius: float

    @property
    def support(self) -> tuple[float, float]:
        if self.kind == "pair-distance":
            return (0.0, 2.0 * self.radius)
        return (0.0, self.radius)

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        r = self.radius
        if self.kind in ("mue-radial", "sc-radial"):
            out = np.where((x >= 0.0) & (x <= r), 2.0 * x / r ** 2, 0.0)
        elif self.kind == "pair-distance":
            inside = (x >= 0.0) & (x <= 2.0 * r)
            xs = np.where(inside, x, 0.0)
            half = np.clip(xs / (2.0 * r), 0.0, 1.0)
            out = np.where(
                inside,
                (2.0 * xs / r ** 2)
                * ((2.0 / math.pi) * np.arccos(half)
                   - (xs / (math.pi * r)) * np.sqrt(np.clip(1.0 - half ** 2, 0.0, None))),
                0.0,
            )
        else:
            raise ValueError(f"unknown density kind {self.kind!r}")
        return out if out.shape else float(out)

    @classmethod
    def mue_radial(cls, radius: float) -> "RadialDensity":
        return cls("mue-radial", radius)

    @classmethod
    def sc_radial(cls, radius: float) -> "RadialDensity":
        return cls("sc-radial", radius)

    @classmethod
    def pair_distance(cls, radius: float) -> "RadialDensity":
        return cls("pair-distance", radius)


# ---------------------------------------------------------------------------
# configuration files and canonical parameter sets
# ---------------------------------------------------------------------------

_INT_FIELDS = {"n_antennas", "n_mues"}
_FIELD_NAMES = {f.name for f in fields(NetworkParams)}


def load_params(path, base: NetworkParams | None = None) -> NetworkParams:
    """Load parameters from a flat key-value file (``key = value`` lines,
    ``#`` comments).  Keys are the NetworkParams field names, except the
    threshold which is given in dB under ``sir_threshold_db``."""
    values = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            if "=" not in text:
                raise ParameterError(f"{path}:{lineno}: expected 'key = value', got {text!r}")
            key, _, raw = text.partition("=")
            key = key.strip()
            raw = raw.strip()
            if key == "sir_threshold_db":
                values["sir_threshold"] = db_to_linear(float(raw))
            elif key in _FIELD_NAMES:
                if key == "sir_threshold":
                    raise ParameterError(
                        f"{path}:{lineno}: use sir_threshold_db (threshold in dB)"
                    )
                values[key] = int(raw) if key in _INT_FIELDS else float(raw)
            else:
                raise ParameterError(f"{path}:{lineno}: unknown parameter {key!r}")
    return replace(base if base is not None else NetworkParams(), **values)


def fig1_params(
    sc_density: float = 1e-4, dl_fraction: float = 0.5, n_antennas: int = 8
) -> NetworkParams:
    """Small-cell sweep parameter set: K=10, P_s=100 mW, P_su=P_mu=5 mW,
    alpha=4, d=10 m, T=5 dB."""
    return NetworkParams(
        n_antennas=n_antennas,
        n_mues=10,
        sc_density=sc_density,
        dl_fraction=dl_fraction,
        pathloss_exponent=4.0,
        sc_pair_distance=10.0,
        macro_radius=250.0,
        sir_threshold=db_to_linear(5.0),
        p_m=1.0,
        p_mu=0.005,
        p_s=0.1,
        p_su=0.005,
        nulling_fraction=0.0,
    )


def table1_params(n_mues: int, n_antennas: int, nulling_fraction: float) -> NetworkParams:
    """Downlink comparison parameter set: alpha=4, P_m=1 W, R_m=250 m,
    lambda=1e-4 /m^2, T=5 dB, with the inferred P_su=0.1 W (the published
    table states no SUE power; 0.1 W is the value consistent with its
    full-nulling rows, see the calibration report)."""
    return NetworkParams(
        n_antennas=n_antennas,
        n_mues=n_mues,
        sc_density=1e-4,
        dl_fraction=0.5,
        pathloss_exponent=4.0,
        sc_pair_distance=10.0,
        macro_radius=250.0,
        sir_threshold=db_to_linear(5.0),
        p_m=1.0,
        p_mu=0.005,
        p_s=0.1,
        p_su=0.1,
        nulling_fraction=nulling_fraction,
    )
