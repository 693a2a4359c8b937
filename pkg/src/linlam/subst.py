"""Lambda application and substitution.

Two independent routes compute the same thing:

* the rule groups below, which the engine runs: application first distributes
  over the argument's linear structure, and only basic payloads (base vectors,
  the zero vector, and the variable pairs introduced by the tensor and match
  cases) are ever substituted, one binder at a time, via explicit substitution
  constructs on de Bruijn indices;
* `reference_substitute`, a direct capture-avoiding de Bruijn substitution
  used as an oracle for the rule route in the tests.

Restricting substitutable payloads to basic states is what makes every
definable function linear: duplication of a variable copies base vectors,
it never clones superpositions.
"""

from __future__ import annotations

from .patterns import Rule, subv, sv, vv, VarPat, VarShift
from .terms import (
    FALSE,
    LIFT,
    TRUE,
    ZERO_VEC,
    App,
    Bof,
    Conj,
    Dot,
    DyadicLit,
    Lam,
    LiftUnder,
    MatchPair,
    Of,
    ScalarMul,
    ScalarProd,
    ScalarSum,
    SubstArg,
    Sum,
    Tensor,
    Term,
    Var,
    canonical,
    is_basis_atom,
)

LINEAR_SUBST = "linear_subst"
DEBRUIJN = "debruijn"


def apply_lambda(f: Term, v: Term) -> Term:
    """Start reducing an application of a lambda: returns the pending substitution."""
    if not isinstance(f, Lam):
        raise ValueError(f"not a lambda abstraction: {f!r}")
    return canonical(Of(f.body, v))


def linearize_rules() -> list[Rule]:
    """Application of a binder distributes over the argument before substituting.

    The tensor and match cases split a pair argument into two fresh binders:
    the body is lifted twice, its variable is replaced by the pair of the two
    new variables, and each component is then substituted recursively.
    """
    t, u, v, w, r = vv("t"), vv("u"), vv("v"), vv("w"), sv("r")

    def pair_template(pair: Term) -> Term:
        lifted = Bof(Bof(t, LiftUnder(LIFT)), LiftUnder(LIFT))
        return Of(Of(Bof(lifted, SubstArg(pair)), v), w)

    g = LINEAR_SUBST
    return [
        Rule("beta", g, App(Lam(u), v), Of(u, v)),
        Rule("of_scale", g, Of(t, ScalarMul(r, v)), ScalarMul(r, Of(t, v))),
        Rule("of_sum", g, Of(t, Sum((v, w))), Sum((Of(t, v), Of(t, w)))),
        Rule("of_true", g, Of(t, TRUE), Bof(t, SubstArg(TRUE))),
        Rule("of_false", g, Of(t, FALSE), Bof(t, SubstArg(FALSE))),
        Rule("of_zero", g, Of(t, ZERO_VEC), Bof(t, SubstArg(ZERO_VEC))),
        Rule("of_tensor", g, Of(t, Tensor(v, w)), pair_template(Tensor(Var(0), Var(1)))),
        Rule("of_match", g, Of(t, MatchPair(v, w)), pair_template(MatchPair(Var(0), Var(1)))),
    ]


def subst_rules() -> list[Rule]:
    """Explicit substitution over de Bruijn indices.

    Congruence cases push a pending substitution through every constructor
    (both sorts); the constant cases drop it; the three index cases perform
    the actual shifting.  The scalar catch-all is restricted to terms with no
    variables or substitution constructs inside, where dropping the pending
    substitution is the identity; scalar terms that do mention variables
    (through a scalar product of vectors) are handled by the congruences.
    """
    from .patterns import iv

    t, u, v = vv("t"), vv("u"), vv("v")
    r, q = sv("r"), sv("q")
    s = subv("s")
    g = DEBRUIJN
    return [
        Rule("subst_sum", g, Bof(Sum((t, u)), s), Sum((Bof(t, s), Bof(u, s)))),
        Rule("subst_scale", g, Bof(ScalarMul(r, u), s), ScalarMul(Bof(r, s), Bof(u, s))),
        Rule("subst_dot", g, Bof(Dot(t, u), s), Dot(Bof(t, s), Bof(u, s))),
        Rule("subst_scalar_sum", g, Bof(ScalarSum((r, q)), s), ScalarSum((Bof(r, s), Bof(q, s)))),
        Rule("subst_scalar_prod", g, Bof(ScalarProd((r, q)), s), ScalarProd((Bof(r, s), Bof(q, s)))),
        Rule("subst_scalar_const", g, Bof(iv("r"), s), iv("r")),
        Rule("subst_tensor", g, Bof(Tensor(t, u), s), Tensor(Bof(t, s), Bof(u, s))),
        Rule("subst_match", g, Bof(MatchPair(t, u), s), MatchPair(Bof(t, s), Bof(u, s))),
        Rule("subst_app", g, Bof(App(t, u), s), App(Bof(t, s), Bof(u, s))),
        Rule("subst_lam", g, Bof(Lam(t), s), Lam(Bof(t, LiftUnder(s)))),
        Rule("subst_zero_vec", g, Bof(ZERO_VEC, s), ZERO_VEC),
        Rule("subst_false", g, Bof(FALSE, s), FALSE),
        Rule("subst_true", g, Bof(TRUE, s), TRUE),
        Rule("subst_var_here", g, Bof(Var(0), SubstArg(v)), v),
        Rule("subst_var_above", g, Bof(VarPat("p", 1), SubstArg(v)), VarShift("p", -1)),
        Rule("lift_var_here", g, Bof(Var(0), LiftUnder(s)), Var(0)),
        Rule(
            "lift_var_above",
            g,
            Bof(VarPat("p", 1), LiftUnder(s)),
            Bof(Bof(VarShift("p", -1), s), LIFT),
        ),
        Rule("shift_var", g, Bof(VarPat("p", 0), LIFT), VarShift("p", 1)),
    ]


# -- reference substitution (oracle route) --------------------------------


def substitutable(v: Term) -> bool:
    return v is ZERO_VEC or is_basis_atom(v)


def reference_substitute(body: Term, v: Term) -> Term:
    """Directly substitute v for the outermost binder's variable in body.

    Standard de Bruijn substitution with index shifting, computed without any
    explicit-substitution constructs.  The payload must be a basis atom or the
    zero vector (both are closed, so no lifting of the payload is needed).
    """
    if not substitutable(v):
        raise ValueError(f"payload must be a basis atom or the zero vector: {v!r}")

    def walk(node: Term, depth: int) -> Term:
        if isinstance(node, Var):
            if node.index == depth:
                return v
            if node.index > depth:
                return Var(node.index - 1)
            return node
        if isinstance(node, Lam):
            return Lam(walk(node.body, depth + 1))
        if isinstance(node, (Of, Bof, SubstArg, LiftUnder)):
            raise ValueError("explicit substitution constructs are not supported here")
        kids = node.children()
        if not kids:
            return node
        out = []
        for f in node.fields:
            val = getattr(node, f)
            if isinstance(val, Term):
                out.append(walk(val, depth))
            elif isinstance(val, tuple):
                out.append(tuple(walk(x, depth) for x in val))
            else:
                out.append(val)
        return type(node)(*out)

    return canonical(walk(body, 0))
