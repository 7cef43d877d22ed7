"""Quasi-partial b-metric-like spaces: axiom checks, ball topology, sequences and fixed points."""

from .catalog import make_mapping, make_space
from .core import (
    DEFAULT_PLAN,
    SamplePlan,
    Space,
    check_axioms,
    classify,
    derive_bml,
    is_symmetric,
    minimal_coefficient,
)
from .errors import QpblError

__all__ = [
    "DEFAULT_PLAN",
    "QpblError",
    "SamplePlan",
    "Space",
    "check_axioms",
    "classify",
    "derive_bml",
    "is_symmetric",
    "make_mapping",
    "make_space",
    "minimal_coefficient",
]
__version__ = "0.1.0"
