"""Rational maps: parsing, reduced iteration, degree growth, indeterminacy and orbits."""

from .indeterminacy import IndPoint, indeterminacy_set
from .orbit import (
    COMPLETED,
    INCONCLUSIVE,
    NEAR_INDETERMINACY,
    NOT_REGULAR,
    REGULAR,
    OrbitTrace,
    ProbeResult,
    orbit_batch,
    orbit_pointwise,
    regularity_probe,
)
from .parse import parse_lift, parse_polynomial
from .rmap import (
    DEFAULT_DEGREE_BUDGET,
    DEFAULT_EPS_IND,
    DegreeReport,
    NumericLift,
    RationalMap,
    as_test,
    compose_maps,
    iterate_symbolic,
    parse_map,
    reduce_lift,
    same_map,
)
