"""Exact likelihood ideals, multidegrees and ML degrees of hypersurface arrangements."""

from types import ModuleType as _ModuleType

from ._engine import budget
from .errors import BudgetExceeded, ConsistencyError, ParseError, RingMismatchError
from .graphic import (
    Graph,
    graphic_arrangement,
    graphic_prelikelihood_generators,
    is_chordal,
    minimal_separators,
    octahedron_obstruction,
    saito_evaluation,
    separator_derivation_evaluation,
)
from .groebner import (
    Ideal,
    codim,
    eliminate,
    groebner_basis,
    hilbert_numerator,
    ideal_equal,
    ideal_member,
    quotient,
    reduce,
    saturate,
)
from .likelihood import (
    Arrangement,
    GentleVerdict,
    build_Q,
    evaluate_derivation,
    is_gentle,
    likelihood_ideal,
    pre_likelihood_ideal,
    presentation,
    saturation_witnesses,
)
from .multidegree import MultidegreeForm, ci_ml_degree, ml_degree, multidegree
from .poly import BIGREVLEX, GREVLEX, LEX, Polynomial, RingContext, TermOrder, compare, parse_poly
from .syzygy import PolyMatrix, kernel, module_gb, split_kernel

__all__ = sorted(n for n, v in globals().items() if not n.startswith("_") and not isinstance(v, _ModuleType))
