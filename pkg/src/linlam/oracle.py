"""Dense semantics: an independent referee for the rewrite engine.

A first-order vector term denotes a finite map from base vectors to exact
scalars.  Base vectors (true, false, and their tensor and match composites)
form an orthonormal family; sums add maps, scalar actions scale them, the
tensor product pairs keys bilinearly, and the match construct pairs keys
with the left coefficient conjugated.  A match pair applied to a vector
projects on its pattern side.  A lambda term denotes the linear extension of
its action on base vectors, computed with the direct reference substitution
rather than the engine's explicit-substitution rules, so the two routes can
disagree only if one of them is wrong.

Terms outside this fragment (free variables, pending substitutions, a base
vector or tensor applied to something, a lambda applied to a lambda) have no
dense value; `denote` raises Unsupported and `check` reports them skipped.
"""

from __future__ import annotations

from dataclasses import dataclass

from .scalars import ExactScalar, SCALAR_ONE_VALUE
from .subst import reference_substitute
from .terms import (
    FALSE,
    TRUE,
    App,
    Bof,
    Conj,
    Dot,
    Lam,
    MatchPair,
    Of,
    ScalarMul,
    Sum,
    Term,
    Tensor,
    Var,
    canonical,
    scalar_value,
)

DenseValue = dict  # Term (base vector or lambda) -> ExactScalar


class Unsupported(Exception):
    """The term has no dense value (stuck by design or out of fragment)."""


def _add_into(acc: DenseValue, key: Term, coeff: ExactScalar) -> None:
    if coeff.is_zero():
        return
    prev = acc.get(key)
    total = coeff if prev is None else prev + coeff
    if total.is_zero():
        acc.pop(key, None)
    else:
        acc[key] = total


def _has_lambda_keys(value: DenseValue) -> bool:
    return any(isinstance(k, Lam) for k in value)


def denote(t: Term) -> DenseValue:
    """Dense value of a closed vector term: {base vector or lambda: coefficient}."""
    t = canonical(t)
    if t is TRUE or t is FALSE:
        return {t: SCALAR_ONE_VALUE}
    if isinstance(t, Var):
        raise Unsupported("free variable")
    if isinstance(t, (Of, Bof)):
        raise Unsupported("pending explicit substitution")
    if isinstance(t, Lam):
        return {t: SCALAR_ONE_VALUE}
    if isinstance(t, Sum):
        acc: DenseValue = {}
        for item in t.items:
            for k, c in denote(item).items():
                _add_into(acc, k, c)
        return acc
    if isinstance(t, ScalarMul):
        factor = denote_scalar(t.scalar)
        acc = {}
        for k, c in denote(t.vec).items():
            _add_into(acc, k, factor * c)
        return acc
    if isinstance(t, Tensor) or isinstance(t, MatchPair):
        left, right = denote(t.left), denote(t.right)
        if _has_lambda_keys(left) or _has_lambda_keys(right):
            raise Unsupported("lambda under a pairing construct")
        pair = Tensor if isinstance(t, Tensor) else MatchPair
        conj_left = isinstance(t, MatchPair)
        acc = {}
        for ka, ca in left.items():
            ca = ca.conjugate() if conj_left else ca
            for kb, cb in right.items():
                _add_into(acc, pair(ka, kb), ca * cb)
        return acc
    if isinstance(t, App):
        return _denote_app(t.fun, t.arg)
    if type(t).__name__ == "ZeroVec":
        return {}
    raise Unsupported(f"no dense value for {type(t).__name__}")


def _denote_app(fun: Term, arg: Term) -> DenseValue:
    operator = denote(fun)
    argument = denote(arg)
    acc: DenseValue = {}
    for key, coeff in operator.items():
        if isinstance(key, Lam):
            for atom, ca in argument.items():
                if isinstance(atom, Lam):
                    raise Unsupported("lambda applied to a lambda")
                image = denote(reference_substitute(key.body, atom))
                for k, c in image.items():
                    _add_into(acc, k, coeff * ca * c)
        elif isinstance(key, MatchPair):
            for atom, ca in argument.items():
                if isinstance(atom, Lam):
                    raise Unsupported("match pair applied to a lambda")
                if atom is key.left:
                    _add_into(acc, key.right, coeff * ca)
        else:
            # true, false or a tensor in head position applies to nothing
            if argument:
                raise Unsupported("base vector in function position")
    return acc


def _dot_value(left: Term, right: Term) -> ExactScalar:
    lv, rv = denote(left), denote(right)
    if _has_lambda_keys(lv) or _has_lambda_keys(rv):
        raise Unsupported("lambda under a scalar product")
    acc = None
    for k, c in lv.items():
        rc = rv.get(k)
        if rc is None:
            continue
        piece = c.conjugate() * rc
        acc = piece if acc is None else acc + piece
    from .scalars import SCALAR_ZERO_VALUE

    return acc if acc is not None else SCALAR_ZERO_VALUE


def denote_scalar(t: Term) -> ExactScalar:
    """Exact value of a scalar term, giving scalar products their dense meaning."""
    return scalar_value(canonical(t), dot_handler=_dot_value)


def equal_dense(x: DenseValue, y: DenseValue) -> bool:
    """Exact componentwise equality (zero coefficients are never stored)."""
    return x == y


@dataclass(frozen=True)
class Verdict:
    status: str  # "pass" | "fail" | "skipped"
    reason: str = ""

    def __bool__(self) -> bool:
        return self.status == "pass"


def check(t: Term, result: Term) -> Verdict:
    """Compare the dense value of a term against the dense value of its
    (claimed) normal form."""
    try:
        expected = denote(t)
        got = denote(result)
    except Unsupported as exc:
        return Verdict("skipped", str(exc))
    if equal_dense(expected, got):
        return Verdict("pass")
    return Verdict("fail", f"dense values differ: {expected!r} vs {got!r}")
