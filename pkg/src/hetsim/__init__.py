"""Coverage and area-spectral-efficiency analysis for a two-tier network:
a massive-MIMO macrocell overlaid with Poisson-distributed small cells in
flexible/reverse TDD, with a Monte Carlo simulator as an independent check
on every analytic expression."""

from .netmodel import (
    DerivedConstants,
    NetworkParams,
    ParameterError,
    RadialDensity,
    db_to_linear,
    derive,
    fig1_params,
    linear_to_db,
    load_params,
    table1_params,
    validate,
)
from .xform import AccuracyError, DomainError, c_alpha
from . import coverage, mcsim, xform

__version__ = "0.1.0"
