"""Rule patterns and templates.

A rewrite rule is a pair of terms over pattern variables.  Pattern variables
are sorted: a vector variable only matches vector-sorted terms, and so on.
Two special pattern forms deal with non-term data: `VarPat`/`VarShift` match
and rebuild de Bruijn indices with an offset, and `DyadicOp` computes exact
dyadic arithmetic when a template is instantiated.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from .dyadic import DyadicFloat
from .terms import (
    SCALAR,
    SUBST,
    VEC,
    DyadicLit,
    Term,
    Var,
    canonical,
    dyadic_value_of,
)

_DY_ONE = DyadicFloat.from_int(1)

# Pattern variable kinds.  "dyadic" matches scalar literals (a dyadic value,
# including the constants 0 and 1); "inert_scalar" matches scalar terms that
# contain no variables or substitution constructs.
DYADIC = "dyadic"
INERT_SCALAR = "inert_scalar"


class PatVar(Term):
    __slots__ = ("name", "kind")
    fields = ("name", "kind")
    name: str
    kind: str
    _opaque = True  # a placeholder's own sort and inertness are meaningless


class VarPat(Term):
    """Matches Var(n) with n >= min_index, binding the name to the index."""

    __slots__ = ("name", "min_index")
    fields = ("name", "min_index")
    name: str
    min_index: int
    _opaque = True


class VarShift(Term):
    """Template node building Var(bound index + delta)."""

    __slots__ = ("name", "delta")
    fields = ("name", "delta")
    name: str
    delta: int
    _opaque = True


class DyadicOp(Term):
    """Template node computing exact dyadic arithmetic on two bound literals."""

    __slots__ = ("op", "left_name", "right_name")
    fields = ("op", "left_name", "right_name")
    op: str
    left_name: str
    right_name: str
    _static_sort = SCALAR
    _opaque = True


def vv(name: str) -> PatVar:
    return PatVar(name, VEC)


def sv(name: str) -> PatVar:
    return PatVar(name, SCALAR)


def dv(name: str) -> PatVar:
    return PatVar(name, DYADIC)


def iv(name: str) -> PatVar:
    return PatVar(name, INERT_SCALAR)


def subv(name: str) -> PatVar:
    return PatVar(name, SUBST)


def kind_matches(kind: str, t: Term) -> bool:
    if kind == VEC or kind == SCALAR or kind == SUBST:
        return t.sort == kind
    if kind == DYADIC:
        return dyadic_value_of(t) is not None
    if kind == INERT_SCALAR:
        return t.sort == SCALAR and t.inert
    raise ValueError(f"unknown pattern kind {kind}")


def pattern_vars(t: Term) -> set[str]:
    if isinstance(t, (PatVar, VarPat)):
        return {t.name}
    out: set[str] = set()
    for c in t.kids:
        out |= pattern_vars(c)
    return out


def template_vars(t: Term) -> set[str]:
    if isinstance(t, PatVar):
        return {t.name}
    if isinstance(t, VarShift):
        return {t.name}
    if isinstance(t, DyadicOp):
        return {t.left_name, t.right_name}
    out: set[str] = set()
    for c in t.kids:
        out |= template_vars(c)
    return out


def _operand_filter(pat: Term) -> Callable[[Term], bool]:
    """Cheap feasibility test for one operand of a sum/product pattern."""
    cls = type(pat)
    if cls is PatVar:
        kind = pat.kind
        return lambda s: kind_matches(kind, s)
    if cls is VarPat:
        lo = pat.min_index
        return lambda s: type(s) is Var and s.index >= lo
    if not pattern_vars(pat):
        return lambda s: s is pat
    return lambda s: type(s) is cls


def _root_prefilter(pat: Term) -> Optional[Callable[[Term], bool]]:
    """Fast reject for a non-AC rule: check the immediate operands' shapes
    (their root constructor, sort, or identity) before a full match."""
    checks = []
    for field in pat.fields:
        sub = getattr(pat, field)
        if not isinstance(sub, Term):
            continue
        cls = type(sub)
        if cls is PatVar:
            kind = sub.kind
            if kind in (VEC, SCALAR, SUBST):
                checks.append((field, "sort", kind))
            elif kind == INERT_SCALAR:
                checks.append((field, "inert_scalar", None))
            else:
                checks.append((field, "dyadic", None))
        elif cls is VarPat:
            checks.append((field, "var_min", sub.min_index))
        elif not pattern_vars(sub):
            checks.append((field, "is", sub))
        else:
            checks.append((field, "type", cls))
    if not checks:
        return None

    def quick(subj: Term, checks=tuple(checks)) -> bool:
        for field, mode, want in checks:
            v = getattr(subj, field)
            if mode == "sort":
                if v.sort != want:
                    return False
            elif mode == "type":
                if type(v) is not want:
                    return False
            elif mode == "is":
                if v is not want:
                    return False
            elif mode == "dyadic":
                if dyadic_value_of(v) is None:
                    return False
            elif mode == "var_min":
                if type(v) is not Var or v.index < want:
                    return False
            elif v.sort != SCALAR or not v.inert:
                return False
        return True

    return quick


@dataclass(frozen=True)
class Rule:
    """One oriented rewrite rule, tagged with the group it belongs to.

    `ac_matcher`, when set, replaces the generic operand-pair search for a
    sum/product-rooted rule: it takes the operand tuple and returns
    (binding, (i, j)) for the two operands forming the redex, or None.
    """

    name: str
    group: str
    pattern: Term
    template: Term
    operand_filters: Optional[tuple] = None
    ac_matcher: Optional[Callable] = None
    quick: Optional[Callable] = None

    def __post_init__(self):
        missing = template_vars(self.template) - pattern_vars(self.pattern)
        if missing:
            raise ValueError(f"rule {self.name}: unbound template variables {missing}")
        if hasattr(self.pattern, "items"):
            filters = tuple(_operand_filter(p) for p in self.pattern.items)
            object.__setattr__(self, "operand_filters", filters)
        elif self.pattern.fields:
            object.__setattr__(self, "quick", _root_prefilter(self.pattern))


def instantiate(template: Term, binding: dict) -> Term:
    """Substitute bound values into a template and canonicalize the result."""
    return canonical(_build(template, binding))


def _build(t: Term, binding: dict) -> Term:
    cls = type(t)
    if cls is PatVar:
        return binding[t.name]
    if cls is VarShift:
        return Var(binding[t.name] + t.delta)
    if cls is DyadicOp:
        left = dyadic_value_of(binding[t.left_name])
        assert left is not None
        if t.op == "add_one":
            value: DyadicFloat = left + _DY_ONE
        else:
            right = dyadic_value_of(binding[t.right_name])
            assert right is not None
            value = left + right if t.op == "add" else left * right
        return DyadicLit(value)
    kids = t.kids
    if not kids:
        return t
    if len(t.fields) == 1 and type(getattr(t, t.fields[0])) is tuple:
        return cls(tuple(_build(x, binding) for x in kids))
    out = []
    for f in t.fields:
        v = getattr(t, f)
        out.append(_build(v, binding) if isinstance(v, Term) else v)
    return cls(*out)
