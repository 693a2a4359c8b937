"""Pretty printing and a JSON tree form.

`pretty` emits the surface syntax with minimal parentheses; parsing the
output back yields an AC-equal term.  Bound variables get generated names
(x0, x1, ...) by binder depth; a variable escaping all binders prints in the
low-level `var(n)` form, which re-parses to the same index.

The JSON form is a tagged tree: {"node": <constructor>, "children": [...]}
with a "value" field on leaves that carry one (variable index, dyadic
literal, basis symbol).
"""

from __future__ import annotations

from typing import Any

from .dyadic import DyadicFloat
from .scalars import BasisSymbol
from .terms import (
    FALSE,
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
)

_PREC_SUM = 1
_PREC_MATCH = 2
_PREC_TENSOR = 3
_PREC_DOT = 4
_PREC_APP = 5
_PREC_SCALE = 6
_ATOM = 10

_BASIS_NAMES = {
    BasisSymbol.ONE: "1",
    BasisSymbol.INV_SQRT2: "isqrt2",
    BasisSymbol.IM: "im",
    BasisSymbol.IM_INV_SQRT2: "imsqrt2",
}


def pretty(t: Term) -> str:
    """Minimal-parentheses surface form of a term."""
    return _pp(t, 0, 0)


def _wrap(s: str, prec: int, context: int) -> str:
    return f"({s})" if prec < context else s


def _pp(t: Term, context: int, depth: int) -> str:
    if t is TRUE:
        return "true"
    if t is FALSE:
        return "false"
    if t is ZERO_VEC:
        return "zerov"
    if t is SCALAR_ZERO:
        return "0"
    if t is SCALAR_ONE:
        return "1"
    if t is LIFT:
        return "shift"
    if isinstance(t, BasisScalar):
        return _BASIS_NAMES[t.symbol]
    if isinstance(t, DyadicLit):
        return t.value.literal()
    if isinstance(t, Var):
        if t.index < depth:
            return f"x{depth - 1 - t.index}"
        return f"var({t.index})"
    if isinstance(t, Lam):
        body = _pp(t.body, 0, depth + 1)
        return _wrap(f"\\x{depth} -> {body}", 0, context)
    if isinstance(t, (Sum, ScalarSum)):
        parts = " + ".join(_pp(c, _PREC_SUM + 1, depth) for c in t.items)
        return _wrap(parts, _PREC_SUM, context)
    if isinstance(t, ScalarProd):
        parts = " * ".join(_pp(c, _PREC_APP + 1, depth) for c in t.items)
        return _wrap(parts, _PREC_APP, context)
    if isinstance(t, ScalarMul):
        s = f"{_pp(t.scalar, _PREC_SCALE + 1, depth)} . {_pp(t.vec, _PREC_SCALE, depth)}"
        return _wrap(s, _PREC_SCALE, context)
    if isinstance(t, App):
        s = f"{_pp(t.fun, _PREC_APP, depth)} * {_pp(t.arg, _PREC_APP + 1, depth)}"
        return _wrap(s, _PREC_APP, context)
    if isinstance(t, MatchPair):
        s = f"{_pp(t.left, _PREC_MATCH, depth)} |> {_pp(t.right, _PREC_MATCH + 1, depth)}"
        return _wrap(s, _PREC_MATCH, context)
    if isinstance(t, Tensor):
        s = f"{_pp(t.left, _PREC_TENSOR, depth)} # {_pp(t.right, _PREC_TENSOR + 1, depth)}"
        return _wrap(s, _PREC_TENSOR, context)
    if isinstance(t, Dot):
        s = f"{_pp(t.left, _PREC_DOT, depth)} @ {_pp(t.right, _PREC_DOT + 1, depth)}"
        return _wrap(s, _PREC_DOT, context)
    if isinstance(t, Conj):
        return f"conj({_pp(t.arg, 0, depth)})"
    if isinstance(t, Of):
        return f"of({_pp(t.body, 0, depth)}, {_pp(t.arg, 0, depth)})"
    if isinstance(t, Bof):
        return f"bof({_pp(t.target, 0, depth)}, {_pp(t.subst, 0, depth)})"
    if isinstance(t, SubstArg):
        return f"subst({_pp(t.payload, 0, depth)})"
    if isinstance(t, LiftUnder):
        return f"lift({_pp(t.inner, 0, depth)})"
    raise ValueError(f"cannot print {t!r}")


# -- JSON tree form ---------------------------------------------------------

_BASIS_TAGS = {
    BasisSymbol.ONE: "one",
    BasisSymbol.INV_SQRT2: "isqrt2",
    BasisSymbol.IM: "im",
    BasisSymbol.IM_INV_SQRT2: "imsqrt2",
}
_TAGS_BASIS = {v: k for k, v in _BASIS_TAGS.items()}


def to_json(t: Term) -> dict[str, Any]:
    """Tagged-tree encoding: {"node": ..., "children": [...], "value": ...}."""
    node: dict[str, Any] = {"node": type(t).__name__}
    if isinstance(t, Var):
        node["value"] = t.index
    elif isinstance(t, DyadicLit):
        node["value"] = t.value.literal()
    elif isinstance(t, BasisScalar):
        node["value"] = _BASIS_TAGS[t.symbol]
    kids = t.children()
    if kids:
        node["children"] = [to_json(c) for c in kids]
    return node


_NULLARY = {
    "ZeroVec": ZERO_VEC,
    "TrueVec": TRUE,
    "FalseVec": FALSE,
    "ScalarZero": SCALAR_ZERO,
    "ScalarOne": SCALAR_ONE,
    "Lift": LIFT,
}

_FIXED_ARITY = {
    "ScalarMul": ScalarMul,
    "Tensor": Tensor,
    "MatchPair": MatchPair,
    "App": App,
    "Lam": Lam,
    "Of": Of,
    "Bof": Bof,
    "SubstArg": SubstArg,
    "LiftUnder": LiftUnder,
    "Conj": Conj,
    "Dot": Dot,
}

_LIST_ARITY = {"Sum": Sum, "ScalarSum": ScalarSum, "ScalarProd": ScalarProd}


def _parse_dyadic_literal(text: str) -> DyadicFloat:
    negative = text.startswith("-")
    body = text.lstrip("-")
    if "/2^" in body:
        mantissa, exponent = body.split("/2^")
        return DyadicFloat(negative, int(mantissa), int(exponent))
    return DyadicFloat(negative, int(body), 0)


def from_json(node: dict[str, Any]) -> Term:
    """Inverse of to_json, up to canonicalization."""
    name = node["node"]
    children = [from_json(c) for c in node.get("children", [])]
    if name in _NULLARY:
        return _NULLARY[name]
    if name == "Var":
        return Var(int(node["value"]))
    if name == "DyadicLit":
        return canonical(DyadicLit(_parse_dyadic_literal(node["value"])))
    if name == "BasisScalar":
        return canonical(BasisScalar(_TAGS_BASIS[node["value"]]))
    if name in _LIST_ARITY:
        return canonical(_LIST_ARITY[name](tuple(children)))
    if name in _FIXED_ARITY:
        return canonical(_FIXED_ARITY[name](*children))
    raise ValueError(f"unknown node tag {name!r}")
