"""Executable 2d topological quantum field theory for finite gauge groups.

Cobordisms are terms over six generators; they are evaluated either through
a commutative Frobenius algebra or through spans of field groupoids glued by
weak pullback, and closed manifolds are checked against direct counts of
homomorphisms from their fundamental groups.
"""

from .cobordism import (
    COMULT,
    COUNIT,
    ID,
    MULT,
    TWIST,
    UNIT,
    closed_surface,
    compose,
    equal,
    normalize,
    tensor,
    transpose,
)
from .config import ArityError, ResourceLimitError, TQFTError, ValidationError
from .dsl import parse, pretty
from .frobenius import (
    FrobeniusAlgebra,
    center_of_group_algebra,
    closed_invariant,
    evaluate,
    validate,
)
from .groups import FiniteGroup, GroupPresentation, conjugacy_classes, group_by_name, hom_count, surface_presentation
from .invariants import invariant, lens, oracle_report, surface, torus3
from .linalg import LinearMap
from .spans import circle_groupoid, compose_spans, degroupoidify, generator_span, quantize

__version__ = "0.1.0"
