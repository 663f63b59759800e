"""Certified fractional-part orbits of algebraic powers and Fourier decay of self-similar measures."""
from __future__ import annotations

__version__ = "0.1.0"

from .algebraic import (
    AlgebraicInvariants,
    AlgebraicNumber,
    conjugates,
    delta_threshold,
    garsia_lower_bound,
    height_upper_bound,
    invariants,
    parse_algebraic,
    rational_algebraic,
)
from .counting import (
    check_recurrence_in_runs,
    count_hits,
    fit_envelope,
    geometric_growth_check,
    logN_fit,
    max_runs,
    solve_theta,
    theorem3_slope,
)
from .enclosure import Interval
from .errors import FracOrbitError, PrecisionCapExceeded, UndecidableRounding, ValidationError
from .field import NumberFieldElement
from .orbit import Orbit, OrbitPoint, PrecisionBudget, compute_orbit
from .polynomial import IntPolynomial
from .realspec import KEMPNER, LIOUVILLE, parse_realspec
from .selfsim import IFSpec, decay_fit, lyons_partial_sum, make_ifs, mu_hat, theorem4_sum, validate_ifs

__all__ = [
    "AlgebraicInvariants", "AlgebraicNumber", "FracOrbitError", "IFSpec", "IntPolynomial", "Interval",
    "KEMPNER", "LIOUVILLE", "NumberFieldElement", "Orbit", "OrbitPoint", "PrecisionBudget",
    "PrecisionCapExceeded", "UndecidableRounding", "ValidationError", "check_recurrence_in_runs",
    "compute_orbit", "conjugates", "count_hits", "decay_fit", "delta_threshold", "fit_envelope",
    "garsia_lower_bound", "geometric_growth_check", "height_upper_bound", "invariants", "logN_fit",
    "lyons_partial_sum", "make_ifs", "max_runs", "mu_hat", "parse_algebraic", "parse_realspec",
    "rational_algebraic", "solve_theta", "theorem3_slope", "theorem4_sum", "validate_ifs",
]
