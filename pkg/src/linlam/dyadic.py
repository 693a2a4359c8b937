"""Exact dyadic floats: rationals of the form +-m / 2^e.

A dyadic float is a sign, an unsigned binary mantissa and a natural
exponent denoting division by a power of two.  All arithmetic is exact
integer arithmetic; there is no floating point anywhere.

Canonical form:
  * the mantissa has no leading zeros (it is stored as a plain int),
  * if the mantissa is 0 the sign is positive and the exponent is 0,
  * if the exponent is positive the mantissa is odd (trailing zero bits
    are traded against the exponent).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable


class DyadicFloat:
    """Immutable, canonical +-mantissa/2^exponent."""

    __slots__ = ("negative", "mantissa", "exponent")

    def __init__(self, negative: bool, mantissa: int, exponent: int):
        if mantissa < 0 or exponent < 0:
            raise ValueError("mantissa and exponent must be non-negative")
        # Canonicalize: shift out trailing zero bits, normalize zero.
        while mantissa and exponent and mantissa % 2 == 0:
            mantissa //= 2
            exponent -= 1
        if mantissa == 0:
            negative = False
            exponent = 0
        object.__setattr__(self, "negative", bool(negative))
        object.__setattr__(self, "mantissa", mantissa)
        object.__setattr__(self, "exponent", exponent)

    def __setattr__(self, name, value):
        raise AttributeError("DyadicFloat is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def from_bits(cls, negative: bool, bits: Iterable[int] | str, exponent: int) -> "DyadicFloat":
        """Build from a binary numeral given most-significant bit first.

        Leading zeros are accepted and stripped; '0' denotes zero.
        """
        if isinstance(bits, str):
            bits = [int(b) for b in bits]
        m = 0
        for b in bits:
            if b not in (0, 1):
                raise ValueError("bits must be 0 or 1")
            m = 2 * m + b
        return cls(negative, m, exponent)

    @classmethod
    def from_int(cls, n: int) -> "DyadicFloat":
        return cls(n < 0, abs(n), 0)

    @classmethod
    def from_fraction(cls, q: Fraction) -> "DyadicFloat":
        """Exact conversion; raises ValueError if the denominator is not a power of two."""
        q = Fraction(q)
        den = q.denominator
        e = 0
        while den % 2 == 0:
            den //= 2
            e += 1
        if den != 1:
            raise ValueError(f"{q} is not dyadic (denominator has odd factor {den})")
        return cls(q.numerator < 0, abs(q.numerator), e)

    # -- views ---------------------------------------------------------

    @property
    def bits(self) -> tuple[int, ...]:
        """Mantissa as bits, most significant first ((0,) for zero)."""
        if self.mantissa == 0:
            return (0,)
        return tuple(int(b) for b in bin(self.mantissa)[2:])

    def as_fraction(self) -> Fraction:
        sign = -1 if self.negative else 1
        return Fraction(sign * self.mantissa, 2**self.exponent)

    def order_key(self) -> tuple[int, int, int]:
        """Deterministic comparison key: (sign, exponent, mantissa)."""
        return (1 if self.negative else 0, self.exponent, self.mantissa)

    def is_zero(self) -> bool:
        return self.mantissa == 0

    def is_one(self) -> bool:
        return not self.negative and self.mantissa == 1 and self.exponent == 0

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other: "DyadicFloat") -> "DyadicFloat":
        e = max(self.exponent, other.exponent)
        a = self.mantissa << (e - self.exponent)
        b = other.mantissa << (e - other.exponent)
        s = (-a if self.negative else a) + (-b if other.negative else b)
        return DyadicFloat(s < 0, abs(s), e)

    def __mul__(self, other: "DyadicFloat") -> "DyadicFloat":
        return DyadicFloat(
            self.negative != other.negative,
            self.mantissa * other.mantissa,
            self.exponent + other.exponent,
        )

    def __neg__(self) -> "DyadicFloat":
        return DyadicFloat(not self.negative, self.mantissa, self.exponent)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, DyadicFloat)
            and self.negative == other.negative
            and self.mantissa == other.mantissa
            and self.exponent == other.exponent
        )

    def __hash__(self) -> int:
        return hash((self.negative, self.mantissa, self.exponent))

    def __repr__(self) -> str:
        return f"DyadicFloat({self.as_fraction()})"

    def literal(self) -> str:
        """Source form: 'm', '-m', 'm/2^e' or '-m/2^e'."""
        sign = "-" if self.negative else ""
        if self.exponent == 0:
            return f"{sign}{self.mantissa}"
        return f"{sign}{self.mantissa}/2^{self.exponent}"


DYADIC_ZERO = DyadicFloat(False, 0, 0)
DYADIC_ONE = DyadicFloat(False, 1, 0)
DYADIC_HALF = DyadicFloat(False, 1, 1)
DYADIC_MINUS_ONE = DyadicFloat(True, 1, 0)
