"""The full rule set.

Groups, in the order the engine tries them at each redex position (scalar
arithmetic before structural rules, otherwise source order):

  dyadic        exact arithmetic on scalar literals
  scalar_mul    products of scalars: units, basis products, distribution
  scalar_sum    collection of like terms in scalar sums
  conj          conjugation pushed down to literals
  vector_sum    the vector-space rules: distribute, collect, units, zeros
  tensor        bilinearity and zero absorption of the tensor product
  bilinear      bilinearity of match, application and scalar product
                (match and scalar product conjugate their left scalar)
  matching      match applied to a vector becomes a scalar product; scalar
                products of composite base vectors decompose recursively
  orthogonality scalar products of structurally distinct base vectors vanish
  linear_subst  lambda application distributes before substituting
  debruijn      explicit substitution over de Bruijn indices

Within a group, rules are tried in the order listed.  Some equations need no
rule of their own because the canonical AC representation absorbs them
(for instance, multiplying a scaled scalar is product flattening).
"""

from __future__ import annotations

from .dyadic import DYADIC_HALF, DYADIC_MINUS_ONE, DyadicFloat
from .patterns import DyadicOp, Rule, dv, subv, sv, vv
from .subst import DEBRUIJN, LINEAR_SUBST, linearize_rules, subst_rules
from .terms import (
    FALSE,
    IM,
    IM_ISQRT2,
    ISQRT2,
    SCALAR_ONE,
    SCALAR_ZERO,
    TRUE,
    ZERO_VEC,
    App,
    Bof,
    Conj,
    Dot,
    DyadicLit,
    MatchPair,
    ScalarMul,
    ScalarProd,
    ScalarSum,
    Sum,
    Tensor,
    Term,
    canonical,
    dyadic_value_of,
)

DYADIC = "dyadic"
SCALAR_MUL = "scalar_mul"
SCALAR_SUM = "scalar_sum"
CONJ = "conj"
VECTOR_SUM = "vector_sum"
TENSOR = "tensor"
BILINEAR = "bilinear"
MATCHING = "matching"
ORTHOGONALITY = "orthogonality"

GROUP_ORDER = (
    DYADIC,
    SCALAR_MUL,
    SCALAR_SUM,
    CONJ,
    VECTOR_SUM,
    TENSOR,
    BILINEAR,
    MATCHING,
    ORTHOGONALITY,
    LINEAR_SUBST,
    DEBRUIJN,
)

_MINUS_HALF = -DYADIC_HALF


def _match_two_literals(items):
    first = None
    for j, c in enumerate(items):
        if dyadic_value_of(c) is not None:
            if first is not None:
                return {"a": items[first], "b": c}, (first, j)
            first = j
    return None


def _dyadic_head_split(c: Term):
    """Split a canonical product item into (dyadic head, base), or None.

    Canonical operand order puts a literal first, so a scaled component is
    Prod(lit, base...); the base is re-wrapped when several operands remain.
    """
    if type(c) is ScalarProd:
        head = c.items[0]
        if dyadic_value_of(head) is not None:
            rest = c.items[1:]
            base = rest[0] if len(rest) == 1 else canonical(ScalarProd(rest))
            return head, base
    return None


def _match_collect_scaled_scalar(items):
    seen: dict = {}
    for j, c in enumerate(items):
        split = _dyadic_head_split(c)
        if split is None:
            continue
        coeff, base = split
        prev = seen.get(base)
        if prev is not None:
            i, coeff_i = prev
            return {"a": coeff_i, "b": coeff, "u": base}, (i, j)
        seen[base] = (j, coeff)
    return None


def _match_collect_one_scalar(items):
    bare: dict = {}
    scaled: dict = {}
    for j, c in enumerate(items):
        split = _dyadic_head_split(c)
        if split is not None:
            coeff, base = split
            i = bare.get(base)
            if i is not None:
                return {"a": coeff, "u": base}, (i, j)
            if base not in scaled:
                scaled[base] = (j, coeff)
        else:
            got = scaled.get(c)
            if got is not None:
                i, coeff = got
                return {"a": coeff, "u": c}, (i, j)
            if c not in bare:
                bare[c] = j
    return None


def _match_adjacent_duplicates(items):
    for k in range(len(items) - 1):
        if items[k] is items[k + 1]:
            return {"u": items[k]}, (k, k + 1)
    return None


def dyadic_rules() -> list[Rule]:
    """Fuse scalar literals under sum and product (exact integer arithmetic)."""
    a, b = dv("a"), dv("b")
    return [
        Rule(
            "lit_times",
            DYADIC,
            ScalarProd((a, b)),
            DyadicOp("mul", "a", "b"),
            ac_matcher=_match_two_literals,
        ),
        Rule(
            "lit_plus",
            DYADIC,
            ScalarSum((a, b)),
            DyadicOp("add", "a", "b"),
            ac_matcher=_match_two_literals,
        ),
    ]


def scalar_mul_rules() -> list[Rule]:
    """Multiplication of scalars: unit and zero, basis products, distribution.

    The basis products list one orientation; commutativity is the AC matching.
    Multiplying by a scaled scalar needs no rule: products are kept flat.
    """
    t, u, v = sv("t"), sv("u"), sv("v")
    g = SCALAR_MUL

    def times(x: Term, y: Term) -> Term:
        return ScalarProd((x, y))

    half = DyadicLit(DYADIC_HALF)
    minus_one = DyadicLit(DYADIC_MINUS_ONE)
    minus_half = DyadicLit(_MINUS_HALF)
    return [
        Rule("one_times", g, times(SCALAR_ONE, v), v),
        Rule("zero_times", g, times(SCALAR_ZERO, v), SCALAR_ZERO),
        Rule("isqrt2_isqrt2", g, times(ISQRT2, ISQRT2), times(half, SCALAR_ONE)),
        Rule("isqrt2_im", g, times(ISQRT2, IM), IM_ISQRT2),
        Rule("isqrt2_im_isqrt2", g, times(ISQRT2, IM_ISQRT2), times(half, IM)),
        Rule("im_im", g, times(IM, IM), times(minus_one, SCALAR_ONE)),
        Rule("im_im_isqrt2", g, times(IM, IM_ISQRT2), times(minus_one, ISQRT2)),
        Rule("im_isqrt2_im_isqrt2", g, times(IM_ISQRT2, IM_ISQRT2), times(minus_half, SCALAR_ONE)),
        Rule(
            "distribute_times",
            g,
            times(ScalarSum((t, u)), v),
            ScalarSum((times(t, v), times(u, v))),
        ),
    ]


def scalar_sum_rules() -> list[Rule]:
    """Collect like terms in scalar sums; the scalar sort is itself a module
    over the dyadic literals, so these mirror the vector-space rules.

    The collected coefficient is computed in the same step: leaving a literal
    sum inside the product would let product distribution split it apart
    again before literal fusion could run, and the pair would loop.
    """
    a, b, u = dv("a"), dv("b"), sv("u")
    g = SCALAR_SUM
    two = DyadicLit(DyadicFloat.from_int(2))
    return [
        Rule(
            "collect_scaled_scalar",
            g,
            ScalarSum((ScalarProd((a, u)), ScalarProd((b, u)))),
            ScalarProd((DyadicOp("add", "a", "b"), u)),
            ac_matcher=_match_collect_scaled_scalar,
        ),
        Rule("drop_zero_scalar", g, ScalarSum((u, SCALAR_ZERO)), u),
        Rule(
            "collect_one_scalar",
            g,
            ScalarSum((ScalarProd((a, u)), u)),
            ScalarProd((DyadicOp("add_one", "a", "a"), u)),
            ac_matcher=_match_collect_one_scalar,
        ),
        Rule(
            "collect_pair_scalar",
            g,
            ScalarSum((u, u)),
            ScalarProd((two, u)),
            ac_matcher=_match_adjacent_duplicates,
        ),
    ]


def conj_rules() -> list[Rule]:
    """Conjugation distributes over sums and products, fixes the real basis,
    flips the sign of the imaginary basis, and commutes with substitution."""
    r, q = sv("r"), sv("q")
    a = dv("a")
    minus_one = DyadicLit(DYADIC_MINUS_ONE)
    g = CONJ
    s = subv("s")
    return [
        Rule("conj_sum", g, Conj(ScalarSum((r, q))), ScalarSum((Conj(r), Conj(q)))),
        Rule("conj_prod", g, Conj(ScalarProd((r, q))), ScalarProd((Conj(r), Conj(q)))),
        Rule("conj_lit", g, Conj(a), a),
        Rule("conj_isqrt2", g, Conj(ISQRT2), ISQRT2),
        Rule("conj_im", g, Conj(IM), ScalarProd((minus_one, IM))),
        Rule("conj_im_isqrt2", g, Conj(IM_ISQRT2), ScalarProd((minus_one, IM_ISQRT2))),
        Rule("conj_conj", g, Conj(Conj(r)), r),
        Rule("conj_subst", g, Bof(Conj(r), s), Conj(Bof(r, s))),
    ]


def _match_collect_scaled(items):
    seen: dict = {}
    for j, c in enumerate(items):
        if type(c) is ScalarMul:
            i = seen.get(c.vec)
            if i is not None:
                return {"r": items[i].scalar, "s": c.scalar, "u": c.vec}, (i, j)
            seen[c.vec] = j
    return None


def _match_collect_one(items):
    bare: dict = {}
    scaled: dict = {}
    for j, c in enumerate(items):
        if type(c) is ScalarMul:
            i = bare.get(c.vec)
            if i is not None:
                return {"r": c.scalar, "u": c.vec}, (i, j)
            if c.vec not in scaled:
                scaled[c.vec] = j
        else:
            i = scaled.get(c)
            if i is not None:
                return {"r": items[i].scalar, "u": c}, (i, j)
            if c not in bare:
                bare[c] = j
    return None


def vector_sum_rules() -> list[Rule]:
    """The vector-space rules over AC vector sum."""
    r, s = sv("r"), sv("s")
    u, v = vv("u"), vv("v")
    g = VECTOR_SUM
    return [
        Rule(
            "distribute_scale",
            g,
            ScalarMul(r, Sum((u, v))),
            Sum((ScalarMul(r, u), ScalarMul(r, v))),
        ),
        Rule(
            "collect_scaled",
            g,
            Sum((ScalarMul(r, u), ScalarMul(s, u))),
            ScalarMul(ScalarSum((r, s)), u),
            ac_matcher=_match_collect_scaled,
        ),
        Rule("nested_scale", g, ScalarMul(r, ScalarMul(s, u)), ScalarMul(ScalarProd((r, s)), u)),
        Rule("drop_zero_vec", g, Sum((u, ZERO_VEC)), u),
        Rule("unit_scale", g, ScalarMul(SCALAR_ONE, u), u),
        Rule("zero_scale", g, ScalarMul(SCALAR_ZERO, u), ZERO_VEC),
        Rule(
            "collect_one",
            g,
            Sum((ScalarMul(r, u), u)),
            ScalarMul(ScalarSum((r, SCALAR_ONE)), u),
            ac_matcher=_match_collect_one,
        ),
        Rule(
            "collect_pair",
            g,
            Sum((u, u)),
            ScalarMul(ScalarSum((SCALAR_ONE, SCALAR_ONE)), u),
            ac_matcher=_match_adjacent_duplicates,
        ),
        Rule("scale_zero_vec", g, ScalarMul(r, ZERO_VEC), ZERO_VEC),
    ]


def tensor_rules() -> list[Rule]:
    """Bilinearity and zero absorption of the tensor product."""
    r = sv("r")
    u, v, w = vv("u"), vv("v"), vv("w")
    g = TENSOR
    return [
        Rule("tensor_sum_left", g, Tensor(Sum((u, v)), w), Sum((Tensor(u, w), Tensor(v, w)))),
        Rule("tensor_scale_left", g, Tensor(ScalarMul(r, u), v), ScalarMul(r, Tensor(u, v))),
        Rule("tensor_sum_right", g, Tensor(u, Sum((v, w))), Sum((Tensor(u, v), Tensor(u, w)))),
        Rule("tensor_scale_right", g, Tensor(u, ScalarMul(r, v)), ScalarMul(r, Tensor(u, v))),
        Rule("tensor_zero_left", g, Tensor(ZERO_VEC, u), ZERO_VEC),
        Rule("tensor_zero_right", g, Tensor(u, ZERO_VEC), ZERO_VEC),
    ]


def bilinear_rules() -> list[Rule]:
    """Match, application and scalar product are linear in each argument;
    match and scalar product conjugate a scalar pulled out of the left."""
    r, m = sv("r"), sv("m")
    t, u, v, w = vv("t"), vv("u"), vv("v"), vv("w")
    g = BILINEAR
    return [
        # match construct
        Rule("match_sum_left", g, MatchPair(Sum((t, u)), v), Sum((MatchPair(t, v), MatchPair(u, v)))),
        Rule("match_sum_right", g, MatchPair(t, Sum((v, w))), Sum((MatchPair(t, v), MatchPair(t, w)))),
        Rule("match_scale_left", g, MatchPair(ScalarMul(r, u), v), ScalarMul(Conj(r), MatchPair(u, v))),
        Rule("match_scale_right", g, MatchPair(u, ScalarMul(m, v)), ScalarMul(m, MatchPair(u, v))),
        Rule("match_zero_left", g, MatchPair(ZERO_VEC, u), ZERO_VEC),
        Rule("match_zero_right", g, MatchPair(u, ZERO_VEC), ZERO_VEC),
        # application
        Rule("app_sum_left", g, App(Sum((u, v)), w), Sum((App(u, w), App(v, w)))),
        Rule("app_scale_left", g, App(ScalarMul(r, u), v), ScalarMul(r, App(u, v))),
        Rule("app_sum_right", g, App(u, Sum((v, w))), Sum((App(u, v), App(u, w)))),
        Rule("app_scale_right", g, App(u, ScalarMul(r, v)), ScalarMul(r, App(u, v))),
        Rule("app_zero_left", g, App(ZERO_VEC, u), ZERO_VEC),
        Rule("app_zero_right", g, App(u, ZERO_VEC), ZERO_VEC),
        # scalar product (scalar-valued, hence scalar sums and products)
        Rule("dot_sum_left", g, Dot(Sum((t, u)), v), ScalarSum((Dot(t, v), Dot(u, v)))),
        Rule("dot_sum_right", g, Dot(t, Sum((v, w))), ScalarSum((Dot(t, v), Dot(t, w)))),
        Rule("dot_scale_left", g, Dot(ScalarMul(r, u), v), ScalarProd((Conj(r), Dot(u, v)))),
        Rule("dot_scale_right", g, Dot(u, ScalarMul(m, v)), ScalarProd((m, Dot(u, v)))),
        Rule("dot_zero_left", g, Dot(ZERO_VEC, u), SCALAR_ZERO),
        Rule("dot_zero_right", g, Dot(u, ZERO_VEC), SCALAR_ZERO),
    ]


def matching_rules() -> list[Rule]:
    """Applying a match pair takes a scalar product against its pattern side;
    scalar products of composite base vectors decompose componentwise."""
    t, u, v, w = vv("t"), vv("u"), vv("v"), vv("w")
    g = MATCHING
    return [
        Rule("match_apply", g, App(MatchPair(t, u), v), ScalarMul(Dot(t, v), u)),
        Rule(
            "dot_tensor_tensor",
            g,
            Dot(Tensor(t, u), Tensor(v, w)),
            ScalarProd((Dot(t, v), Dot(u, w))),
        ),
        Rule(
            "dot_match_match",
            g,
            Dot(MatchPair(t, u), MatchPair(v, w)),
            ScalarProd((Conj(Dot(t, v)), Dot(u, w))),
        ),
        Rule("dot_true_true", g, Dot(TRUE, TRUE), SCALAR_ONE),
        Rule("dot_true_false", g, Dot(TRUE, FALSE), SCALAR_ZERO),
        Rule("dot_false_true", g, Dot(FALSE, TRUE), SCALAR_ZERO),
        Rule("dot_false_false", g, Dot(FALSE, FALSE), SCALAR_ONE),
    ]


def orthogonality_rules() -> list[Rule]:
    """Base vectors of different shapes are orthogonal."""
    t, u, v, w = vv("t"), vv("u"), vv("v"), vv("w")
    g = ORTHOGONALITY
    pairs = [
        ("dot_tensor_match", Tensor(t, u), MatchPair(v, w)),
        ("dot_tensor_true", Tensor(t, u), TRUE),
        ("dot_tensor_false", Tensor(t, u), FALSE),
        ("dot_match_tensor", MatchPair(t, u), Tensor(v, w)),
        ("dot_match_true", MatchPair(t, u), TRUE),
        ("dot_match_false", MatchPair(t, u), FALSE),
        ("dot_true_tensor", TRUE, Tensor(v, w)),
        ("dot_true_match", TRUE, MatchPair(v, w)),
        ("dot_false_tensor", FALSE, Tensor(v, w)),
        ("dot_false_match", FALSE, MatchPair(v, w)),
    ]
    return [Rule(name, g, Dot(a, b), SCALAR_ZERO) for name, a, b in pairs]


class RuleSet:
    """All rule groups, with an index from root constructor to candidate rules."""

    def __init__(self, groups: dict[str, list[Rule]]):
        self.groups = groups
        self.rules: list[Rule] = [r for name in GROUP_ORDER for r in groups[name]]
        self.by_name: dict[str, Rule] = {r.name: r for r in self.rules}
        if len(self.by_name) != len(self.rules):
            raise ValueError("duplicate rule names")
        self._index: dict[type, list[Rule]] = {}
        for rule in self.rules:
            self._index.setdefault(type(rule.pattern), []).append(rule)

    def group(self, name: str) -> list[Rule]:
        return list(self.groups[name])

    def candidates(self, root: type) -> list[Rule]:
        return self._index.get(root, [])

    def __len__(self) -> int:
        return len(self.rules)


_DEFAULT: RuleSet | None = None


def build_ruleset() -> RuleSet:
    return RuleSet(
        {
            DYADIC: dyadic_rules(),
            SCALAR_MUL: scalar_mul_rules(),
            SCALAR_SUM: scalar_sum_rules(),
            CONJ: conj_rules(),
            VECTOR_SUM: vector_sum_rules(),
            TENSOR: tensor_rules(),
            BILINEAR: bilinear_rules(),
            MATCHING: matching_rules(),
            ORTHOGONALITY: orthogonality_rules(),
            LINEAR_SUBST: linearize_rules(),
            DEBRUIJN: subst_rules(),
        }
    )


def default_ruleset() -> RuleSet:
    """The shared rule set; rules are immutable so sharing is safe."""
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = build_ruleset()
    return _DEFAULT
