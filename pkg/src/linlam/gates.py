"""Built-in gate terms and their exact dense columns.

The single- and two-qubit gates are match-pair sums; the two program-style
constants are lambda terms: `Cross` pairs two one-qubit operators into a
two-qubit operator, and `DJ` runs the textbook two-qubit oracle circuit
(prepare false # true, Hadamard both wires, query the oracle given as the
argument, Hadamard both wires again).

The same definitions ship as a prelude source file; `prelude_source` returns
its text and the tests check both routes agree.
"""

from __future__ import annotations

import importlib.resources

from .dyadic import DYADIC_MINUS_ONE
from .scalars import ExactScalar, SCALAR_ONE_VALUE, BasisSymbol
from .terms import (
    FALSE,
    IM,
    ISQRT2,
    TRUE,
    App,
    DyadicLit,
    Lam,
    MatchPair,
    ScalarMul,
    ScalarProd,
    ScalarSum,
    Sum,
    Tensor,
    Term,
    Var,
    canonical,
)

_MINUS_ONE = DyadicLit(DYADIC_MINUS_ONE)
_ISQRT2_VALUE = ExactScalar.basis(BasisSymbol.INV_SQRT2)
_PHASE_VALUE = _ISQRT2_VALUE + ExactScalar.basis(BasisSymbol.IM_INV_SQRT2)


def _not_term() -> Term:
    return Sum((MatchPair(FALSE, TRUE), MatchPair(TRUE, FALSE)))


def _h_term() -> Term:
    plus = ScalarMul(ISQRT2, Sum((FALSE, TRUE)))
    minus = ScalarMul(ISQRT2, Sum((FALSE, ScalarMul(_MINUS_ONE, TRUE))))
    return Sum((MatchPair(FALSE, plus), MatchPair(TRUE, minus)))


def _p_term() -> Term:
    phase = ScalarSum((ISQRT2, ScalarProd((IM, ISQRT2))))
    return Sum((MatchPair(FALSE, FALSE), MatchPair(TRUE, ScalarMul(phase, TRUE))))


def _cnot_term() -> Term:
    rows = []
    for a, b in ((FALSE, FALSE), (FALSE, TRUE), (TRUE, FALSE), (TRUE, TRUE)):
        flipped = (TRUE if b is FALSE else FALSE) if a is TRUE else b
        rows.append(MatchPair(Tensor(a, b), Tensor(a, flipped)))
    return Sum(tuple(rows))


def _cross_term() -> Term:
    # \x -> \y -> sum over two-qubit basis of (b1 # b2) |> ((x * b1) # (y * b2))
    rows = []
    for b1 in (FALSE, TRUE):
        for b2 in (FALSE, TRUE):
            rows.append(
                MatchPair(
                    Tensor(b1, b2),
                    Tensor(App(Var(1), b1), App(Var(0), b2)),
                )
            )
    return Lam(Lam(Sum(tuple(rows))))


def _dj_term() -> Term:
    cross_hh = App(App(_cross_term(), _h_term()), _h_term())
    prepared = App(cross_hh, Tensor(FALSE, TRUE))
    return Lam(App(cross_hh, App(Var(0), prepared)))


_ONE = SCALAR_ONE_VALUE
_MINUS_ISQRT2 = -_ISQRT2_VALUE


def _dense(*pairs):
    return {atom: coeff for atom, coeff in pairs}


def _gate_matrices() -> dict[str, dict[Term, dict]]:
    tt, tf = Tensor(TRUE, TRUE), Tensor(TRUE, FALSE)
    ft, ff = Tensor(FALSE, TRUE), Tensor(FALSE, FALSE)
    return {
        "NOT": {FALSE: _dense((TRUE, _ONE)), TRUE: _dense((FALSE, _ONE))},
        "H": {
            FALSE: _dense((FALSE, _ISQRT2_VALUE), (TRUE, _ISQRT2_VALUE)),
            TRUE: _dense((FALSE, _ISQRT2_VALUE), (TRUE, _MINUS_ISQRT2)),
        },
        "P": {FALSE: _dense((FALSE, _ONE)), TRUE: _dense((TRUE, _PHASE_VALUE))},
        "CNOT": {
            ff: _dense((ff, _ONE)),
            ft: _dense((ft, _ONE)),
            tf: _dense((tt, _ONE)),
            tt: _dense((tf, _ONE)),
        },
    }


class GateDef:
    """A named constant: its core term, dense columns (when it is a plain
    operator on qubit basis vectors) and arity in qubits."""

    def __init__(self, name: str, term: Term, matrix: dict | None, arity: int | None):
        self.name = name
        self.term = canonical(term)
        self.matrix = matrix
        self.arity = arity


def _build() -> dict[str, GateDef]:
    matrices = _gate_matrices()
    return {
        "NOT": GateDef("NOT", _not_term(), matrices["NOT"], 1),
        "H": GateDef("H", _h_term(), matrices["H"], 1),
        "P": GateDef("P", _p_term(), matrices["P"], 1),
        "CNOT": GateDef("CNOT", _cnot_term(), matrices["CNOT"], 2),
        "Cross": GateDef("Cross", _cross_term(), None, None),
        "DJ": GateDef("DJ", _dj_term(), None, None),
    }


GATES: dict[str, GateDef] = _build()


def gate(name: str) -> Term:
    """The core term of a named built-in constant."""
    try:
        return GATES[name].term
    except KeyError:
        raise KeyError(f"unknown gate {name!r}") from None


def prelude_source() -> str:
    return importlib.resources.files("linlam").joinpath("prelude.lal").read_text("utf-8")


_PRELUDE_ENV: dict[str, Term] | None = None


def prelude_env() -> dict[str, Term]:
    """The prelude definitions, loaded (and normalized) once per process."""
    global _PRELUDE_ENV
    if _PRELUDE_ENV is None:
        from .surface import load_program

        _PRELUDE_ENV, _ = load_program(prelude_source())
    return dict(_PRELUDE_ENV)
