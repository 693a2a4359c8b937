"""The scalar ring of the interpreter: a + b/sqrt(2) + c*i + d*i/sqrt(2).

Scalars are the additive and multiplicative closure of {-1, 1, 1/sqrt(2), i}.
Since (1/sqrt(2))^2 = 1/2 is dyadic, the ring is a four-dimensional module
over the dyadic floats with basis {1, 1/sqrt(2), i, i/sqrt(2)}.

`ExactScalar` is the direct value-level implementation; the rewrite rules in
`linlam.rules` compute the same ring on terms, and the two are cross-checked
against each other in the test suite.
"""

from __future__ import annotations

import enum
from fractions import Fraction

from .dyadic import DYADIC_HALF, DYADIC_MINUS_ONE, DYADIC_ONE, DYADIC_ZERO, DyadicFloat


class BasisSymbol(enum.Enum):
    """The four basis elements of the scalar module."""

    ONE = 0
    INV_SQRT2 = 1
    IM = 2
    IM_INV_SQRT2 = 3


# Products of basis symbols: (coefficient, resulting basis symbol).
# Only one triangle is stored; lookup symmetrizes (the product is commutative).
_B = BasisSymbol
_BASIS_PRODUCTS: dict[tuple[BasisSymbol, BasisSymbol], tuple[DyadicFloat, BasisSymbol]] = {
    (_B.INV_SQRT2, _B.INV_SQRT2): (DYADIC_HALF, _B.ONE),
    (_B.INV_SQRT2, _B.IM): (DYADIC_ONE, _B.IM_INV_SQRT2),
    (_B.INV_SQRT2, _B.IM_INV_SQRT2): (DYADIC_HALF, _B.IM),
    (_B.IM, _B.IM): (DYADIC_MINUS_ONE, _B.ONE),
    (_B.IM, _B.IM_INV_SQRT2): (DYADIC_MINUS_ONE, _B.INV_SQRT2),
    (_B.IM_INV_SQRT2, _B.IM_INV_SQRT2): (-DYADIC_HALF, _B.ONE),
}


def basis_product(x: BasisSymbol, y: BasisSymbol) -> tuple[DyadicFloat, BasisSymbol]:
    """Product of two basis symbols as (dyadic coefficient, basis symbol)."""
    if x is _B.ONE:
        return (DYADIC_ONE, y)
    if y is _B.ONE:
        return (DYADIC_ONE, x)
    key = (x, y) if (x, y) in _BASIS_PRODUCTS else (y, x)
    return _BASIS_PRODUCTS[key]


class ExactScalar:
    """Immutable 4-tuple of dyadic coordinates over {1, 1/sqrt2, i, i/sqrt2}."""

    __slots__ = ("coords",)

    def __init__(self, a: DyadicFloat, b: DyadicFloat, c: DyadicFloat, d: DyadicFloat):
        object.__setattr__(self, "coords", (a, b, c, d))

    def __setattr__(self, name, value):
        raise AttributeError("ExactScalar is immutable")

    @classmethod
    def from_dyadic(cls, x: DyadicFloat) -> "ExactScalar":
        return cls(x, DYADIC_ZERO, DYADIC_ZERO, DYADIC_ZERO)

    @classmethod
    def from_int(cls, n: int) -> "ExactScalar":
        return cls.from_dyadic(DyadicFloat.from_int(n))

    @classmethod
    def basis(cls, symbol: BasisSymbol) -> "ExactScalar":
        coords = [DYADIC_ZERO] * 4
        coords[symbol.value] = DYADIC_ONE
        return cls(*coords)

    def component(self, symbol: BasisSymbol) -> DyadicFloat:
        return self.coords[symbol.value]

    def __add__(self, other: "ExactScalar") -> "ExactScalar":
        return ExactScalar(*(x + y for x, y in zip(self.coords, other.coords)))

    def __mul__(self, other: "ExactScalar") -> "ExactScalar":
        acc = [DYADIC_ZERO] * 4
        for sx in BasisSymbol:
            cx = self.coords[sx.value]
            if cx.is_zero():
                continue
            for sy in BasisSymbol:
                cy = other.coords[sy.value]
                if cy.is_zero():
                    continue
                coeff, sym = basis_product(sx, sy)
                acc[sym.value] = acc[sym.value] + cx * cy * coeff
        return ExactScalar(*acc)

    def __neg__(self) -> "ExactScalar":
        return ExactScalar(*(-x for x in self.coords))

    def conjugate(self) -> "ExactScalar":
        a, b, c, d = self.coords
        return ExactScalar(a, b, -c, -d)

    def scale(self, x: DyadicFloat) -> "ExactScalar":
        return ExactScalar(*(x * y for y in self.coords))

    def is_zero(self) -> bool:
        return all(x.is_zero() for x in self.coords)

    def is_one(self) -> bool:
        a, b, c, d = self.coords
        return a.is_one() and b.is_zero() and c.is_zero() and d.is_zero()

    def as_fractions(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return tuple(x.as_fraction() for x in self.coords)  # type: ignore[return-value]

    def __eq__(self, other) -> bool:
        return isinstance(other, ExactScalar) and self.coords == other.coords

    def __hash__(self) -> int:
        return hash(self.coords)

    def __repr__(self) -> str:
        parts = []
        for sym, tag in zip(BasisSymbol, ("", "/sqrt2", "i", "i/sqrt2")):
            x = self.coords[sym.value]
            if not x.is_zero():
                parts.append(f"{x.as_fraction()}{tag}")
        return "ExactScalar(" + (" + ".join(parts) if parts else "0") + ")"


SCALAR_ZERO_VALUE = ExactScalar.from_dyadic(DYADIC_ZERO)
SCALAR_ONE_VALUE = ExactScalar.from_dyadic(DYADIC_ONE)
