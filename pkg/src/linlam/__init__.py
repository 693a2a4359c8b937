"""linlam: an interpreter for a linear-algebraic lambda calculus.

Closed terms built from base vectors, sums, scalar actions, tensors,
matching operators and de Bruijn lambda binders normalize, by term
rewriting modulo AC, to linear combinations of base vectors with exact
scalar coefficients.  A dense linear-algebra evaluator provides an
independent cross-check of every first-order result.
"""

from .dyadic import DyadicFloat
from .engine import (
    Classification,
    Match,
    NormalResult,
    RewriteStep,
    apply_rule,
    apply_rule_at,
    classify,
    format_trace,
    is_normal_form,
    match_rule,
    normalize,
    rewrite_once,
)
from .gates import GATES, gate, prelude_env
from .oracle import Unsupported, Verdict, check, denote, denote_scalar, equal_dense
from .patterns import Rule
from .printer import from_json, pretty, to_json
from .rules import RuleSet, build_ruleset, default_ruleset
from .scalars import BasisSymbol, ExactScalar
from .subst import apply_lambda, reference_substitute
from .surface import LangError, LexError, ParseError, ScopeError, SortError, load_program, parse, parse_term, to_debruijn
from .terms import (
    FALSE,
    IM,
    IM_ISQRT2,
    ISQRT2,
    LIFT,
    SCALAR_ONE,
    SCALAR_ZERO,
    TRUE,
    ZERO_VEC,
    App,
    BasisScalar,
    Bof,
    Conj,
    Dot,
    DyadicLit,
    Lam,
    LiftUnder,
    MatchPair,
    NonScalarResidueError,
    Of,
    ScalarMul,
    ScalarProd,
    ScalarSum,
    SubstArg,
    Sum,
    Tensor,
    Term,
    Var,
    ac_canonicalize,
    ac_equal,
    canonical,
    is_basis_atom,
    is_closed,
    max_free_index,
    scalar_value,
    sort_of,
)

__all__ = [name for name in dir() if not name.startswith("_")]
