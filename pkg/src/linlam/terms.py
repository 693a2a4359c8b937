"""The unified term language and its canonical form modulo AC.

Terms cover two sorts: vectors (base vectors, sums, scalar actions, tensors,
matching pairs, applications, lambda binders with de Bruijn variables and
explicit substitution constructs) and scalars (sums, products, dyadic
literals, basis symbols, conjugation, and the scalar product of two vectors).

Vector sum, scalar sum and scalar product are associative-commutative: their
canonical representation is a flattened operand list sorted by a fixed total
term order.  Terms are hash-consed, so structural equality of canonical terms
is object identity and rewriting shares subtrees for free.
"""

from __future__ import annotations

import weakref
from typing import Iterable, Optional

from .dyadic import DyadicFloat
from .scalars import BasisSymbol, ExactScalar, SCALAR_ONE_VALUE, SCALAR_ZERO_VALUE

VEC = "vec"
SCALAR = "scalar"
SUBST = "subst"

# Constructor precedence for the total term order (any fixed ranking works;
# literals rank below other scalar factors so a scaled component keeps its
# coefficient first).
_RANK_ORDER = (
    "ZeroVec",
    "TrueVec",
    "FalseVec",
    "Var",
    "ScalarMul",
    "Tensor",
    "MatchPair",
    "App",
    "Lam",
    "Sum",
    "Of",
    "Bof",
    "SubstArg",
    "Lift",
    "LiftUnder",
    "ScalarZero",
    "ScalarOne",
    "DyadicLit",
    "BasisScalar",
    "Conj",
    "Dot",
    "ScalarProd",
    "ScalarSum",
)
_RANK_BY_NAME: dict = {name: i for i, name in enumerate(_RANK_ORDER)}
_RANK_BY_NAME_GET = _RANK_BY_NAME.get

_M64 = (1 << 64) - 1
_MIX1 = 0x100000001B3
_MIX2 = 0xC6A4A7935BD1E995


def _rank_of(name: str) -> int:
    return _RANK_BY_NAME.get(name, 99)


class Term:
    """Hash-consed immutable term node; equality is identity.

    Interning is weak, so terms die with their last outside reference.  A few
    derived facts are computed once at construction (sort, children, whether
    any substitution could act on the term), and internal caches for the
    canonical form and for rewriting live in slots on the instance.
    """

    __slots__ = ("_hash", "kids", "sort", "inert", "csum", "_canon", "_try", "_nf", "__weakref__")
    fields: tuple[str, ...] = ()
    _pool: "weakref.WeakValueDictionary[tuple, Term]" = weakref.WeakValueDictionary()
    _static_sort: Optional[str] = VEC  # None: derived from the first child
    _opaque = False  # variables and substitution constructs block inertness

    def __new__(cls, *args):
        key = (cls, args)
        hit = Term._pool.get(key)
        if hit is not None:
            return hit
        self = object.__new__(cls)
        put = object.__setattr__
        for name, value in zip(cls.fields, args):
            put(self, name, value)
        if len(args) == 1 and type(args[0]) is tuple:
            kids = args[0]
        else:
            kids = tuple(a for a in args if isinstance(a, Term))
        put(self, "kids", kids)
        sort = cls._static_sort
        if sort is None:
            sort = kids[0].sort if kids else VEC
        put(self, "sort", sort)
        put(self, "inert", not cls._opaque and all(k.inert for k in kids))
        # Deterministic structural checksum (stable across processes); used
        # as a fast discriminator by the term order.
        acc = (_RANK_BY_NAME_GET(cls.__name__, 99) * _MIX1 + len(kids)) & _M64
        for payload in cls._payload_ints(args):
            acc = ((acc ^ payload) * _MIX2) & _M64
        for k in kids:
            acc = ((acc ^ k.csum) * _MIX1 + 0x9E3779B9) & _M64
        put(self, "csum", acc)
        put(self, "_hash", acc)
        put(self, "_canon", None)
        put(self, "_try", None)
        put(self, "_nf", None)
        Term._pool[key] = self
        return self

    @classmethod
    def _payload_ints(cls, args) -> tuple[int, ...]:
        return ()

    def __setattr__(self, name, value):
        raise AttributeError("terms are immutable")

    def __hash__(self):
        return self._hash

    def __repr__(self):
        args = ", ".join(repr(getattr(self, f)) for f in self.fields)
        return f"{type(self).__name__}({args})"

    def children(self) -> tuple["Term", ...]:
        return self.kids


# -- vector sort -------------------------------------------------------


class ZeroVec(Term):
    __slots__ = ()


class TrueVec(Term):
    __slots__ = ()


class FalseVec(Term):
    __slots__ = ()


class Sum(Term):
    __slots__ = ("items",)
    fields = ("items",)
    items: tuple[Term, ...]


class ScalarMul(Term):
    __slots__ = ("scalar", "vec")
    fields = ("scalar", "vec")
    scalar: Term
    vec: Term


class Tensor(Term):
    __slots__ = ("left", "right")
    fields = ("left", "right")
    left: Term
    right: Term


class MatchPair(Term):
    """The matching construct: ``t |> u`` behaves as the outer product |u><t|."""

    __slots__ = ("left", "right")
    fields = ("left", "right")
    left: Term
    right: Term


class App(Term):
    __slots__ = ("fun", "arg")
    fields = ("fun", "arg")
    fun: Term
    arg: Term


class Lam(Term):
    __slots__ = ("body",)
    fields = ("body",)
    body: Term


class Var(Term):
    __slots__ = ("index",)
    fields = ("index",)
    index: int
    _opaque = True

    @classmethod
    def _payload_ints(cls, args):
        return (args[0],)


class Of(Term):
    """Pending substitution of an argument that may still need decomposing."""

    __slots__ = ("body", "arg")
    fields = ("body", "arg")
    body: Term
    arg: Term
    _static_sort = None
    _opaque = True


class Bof(Term):
    """Pending substitution of a basic payload, walked by the index rules."""

    __slots__ = ("target", "subst")
    fields = ("target", "subst")
    target: Term
    subst: Term
    _static_sort = None
    _opaque = True


# -- substitution sort -------------------------------------------------


class SubstArg(Term):
    __slots__ = ("payload",)
    fields = ("payload",)
    payload: Term
    _static_sort = SUBST
    _opaque = True


class Lift(Term):
    """Shift all free indices up by one."""

    __slots__ = ()
    _static_sort = SUBST
    _opaque = True


class LiftUnder(Term):
    """Protect index 0 and apply the inner substitution one binder deeper."""

    __slots__ = ("inner",)
    fields = ("inner",)
    inner: Term
    _static_sort = SUBST
    _opaque = True


# -- scalar sort -------------------------------------------------------


class ScalarZero(Term):
    __slots__ = ()
    _static_sort = SCALAR


class ScalarOne(Term):
    __slots__ = ()
    _static_sort = SCALAR


class ScalarSum(Term):
    __slots__ = ("items",)
    fields = ("items",)
    items: tuple[Term, ...]
    _static_sort = SCALAR


class ScalarProd(Term):
    __slots__ = ("items",)
    fields = ("items",)
    items: tuple[Term, ...]
    _static_sort = SCALAR


class DyadicLit(Term):
    __slots__ = ("value",)
    fields = ("value",)
    value: DyadicFloat
    _static_sort = SCALAR

    @classmethod
    def _payload_ints(cls, args):
        v = args[0]
        return (int(v.negative), v.exponent, hash(v.mantissa))


class BasisScalar(Term):
    __slots__ = ("symbol",)
    fields = ("symbol",)
    symbol: BasisSymbol
    _static_sort = SCALAR

    @classmethod
    def _payload_ints(cls, args):
        return (args[0].value,)


class Conj(Term):
    __slots__ = ("arg",)
    fields = ("arg",)
    arg: Term
    _static_sort = SCALAR


class Dot(Term):
    """Scalar product of two vectors (a scalar-sorted node)."""

    __slots__ = ("left", "right")
    fields = ("left", "right")
    left: Term
    right: Term
    _static_sort = SCALAR


# Shared singleton instances (hash-consing makes constructor calls identical,
# but module-level references also keep them interned for the process).
ZERO_VEC = ZeroVec()
TRUE = TrueVec()
FALSE = FalseVec()
SCALAR_ZERO = ScalarZero()
SCALAR_ONE = ScalarOne()
LIFT = Lift()
ISQRT2 = BasisScalar(BasisSymbol.INV_SQRT2)
IM = BasisScalar(BasisSymbol.IM)
IM_ISQRT2 = BasisScalar(BasisSymbol.IM_INV_SQRT2)

AC_NODES = (Sum, ScalarSum, ScalarProd)
_AC_SET = frozenset(AC_NODES)


def sort_of(t: Term) -> str:
    """Sort of a term: vector, scalar, or substitution."""
    return t.sort


def substitution_inert(t: Term) -> bool:
    """True when the term contains no variables or substitution constructs,
    so any pending substitution acts on it as the identity."""
    return t.inert


# -- total term order ---------------------------------------------------

def _structural_cmp(a: Term, b: Term) -> int:
    """Tie-break for equal checksums: payload, then children left to right."""
    ta = type(a)
    if ta is Var:
        return -1 if a.index < b.index else 1
    if ta is DyadicLit:
        ka, kb = a.value.order_key(), b.value.order_key()
        return -1 if ka < kb else 1
    if ta is BasisScalar:
        return -1 if a.symbol.value < b.symbol.value else 1
    ca, cb = a.kids, b.kids
    if len(ca) != len(cb):
        return -1 if len(ca) < len(cb) else 1
    for x, y in zip(ca, cb):
        c = term_cmp(x, y)
        if c:
            return c
    return 0


def term_cmp(a: Term, b: Term) -> int:
    """Strict total order on terms: constructor rank, then a deterministic
    structural checksum, with a full structural comparison breaking the
    (vanishingly rare) checksum ties."""
    if a is b:
        return 0
    ta, tb = type(a), type(b)
    if ta is not tb:
        ra = _RANK_BY_NAME_GET(ta.__name__, 99)
        rb = _RANK_BY_NAME_GET(tb.__name__, 99)
        if ra != rb:
            return -1 if ra < rb else 1
        return -1 if ta.__name__ < tb.__name__ else 1  # pattern nodes
    if a.csum != b.csum:
        return -1 if a.csum < b.csum else 1
    return _structural_cmp(a, b)


class _OrderKey:
    __slots__ = ("rank", "csum", "term")

    def __init__(self, term: Term):
        self.rank = _RANK_BY_NAME_GET(type(term).__name__, 99)
        self.csum = term.csum
        self.term = term

    def __lt__(self, other: "_OrderKey") -> bool:
        if self.rank != other.rank:
            return self.rank < other.rank
        if self.csum != other.csum:
            return self.csum < other.csum
        if self.term is other.term:
            return False
        return _structural_cmp(self.term, other.term) < 0


def sorted_terms(items: Iterable[Term]) -> tuple[Term, ...]:
    return tuple(sorted(items, key=_OrderKey))


# -- canonical form -----------------------------------------------------

_SELF = object()  # sentinel: "this term is its own canonical form"


def mark_canonical(t: Term) -> Term:
    """Record that a freshly built node is already in canonical form
    (caller's obligation: canonical children, sorted flat operands, and not
    a literal that identifies with a scalar constant)."""
    object.__setattr__(t, "_canon", _SELF)
    return t


def canonical(t: Term) -> Term:
    """AC-canonical form: flattened sorted operand lists plus literal identifications.

    Identifications (value-preserving representation choices, not rewrite
    steps): the dyadic literals 0 and 1 are the scalar constants 0 and 1, and
    the basis symbol for 1 is the scalar constant 1.  Idempotent.
    """
    c = t._canon
    if c is not None:
        return t if c is _SELF else c
    out = _canonical_node(t)
    object.__setattr__(t, "_canon", _SELF if out is t else out)
    if out is not t:
        object.__setattr__(out, "_canon", _SELF)
    return out


def _canonical_node(t: Term) -> Term:
    cls = type(t)
    if cls in _AC_SET:
        flat: list[Term] = []
        for child in t.items:
            c = canonical(child)
            if type(c) is cls:
                flat.extend(c.items)
            else:
                flat.append(c)
        if not flat:
            return ZERO_VEC if cls is Sum else (SCALAR_ZERO if cls is ScalarSum else SCALAR_ONE)
        if len(flat) == 1:
            return flat[0]
        return cls(sorted_terms(flat))
    if cls is DyadicLit:
        if t.value.is_zero():
            return SCALAR_ZERO
        if t.value.is_one():
            return SCALAR_ONE
        return t
    if cls is BasisScalar:
        if t.symbol is BasisSymbol.ONE:
            return SCALAR_ONE
        return t
    kids = t.kids
    if not kids:
        return t
    new_kids = tuple(canonical(c) for c in kids)
    if new_kids == kids:
        return t
    if len(t.fields) == 1 and type(getattr(t, t.fields[0])) is tuple:
        return cls(new_kids)
    return cls(*new_kids)


def ac_canonicalize(t: Term) -> Term:
    return canonical(t)


def ac_equal(t: Term, u: Term) -> bool:
    """Equality modulo AC of vector sum, scalar sum and scalar product."""
    return canonical(t) is canonical(u)


# -- structural predicates -----------------------------------------------


def is_basis_atom(t: Term) -> bool:
    """Base vectors and their tensor/match composites; pairwise orthonormal."""
    if t is TRUE or t is FALSE:
        return True
    if isinstance(t, (Tensor, MatchPair)):
        return is_basis_atom(t.left) and is_basis_atom(t.right)
    return False


def max_free_index(t: Term) -> Optional[int]:
    """Largest de Bruijn index escaping all binders, or None for closed terms."""

    def walk(node: Term, depth: int) -> int:
        if type(node) is Var:
            return node.index - depth if node.index >= depth else -1
        if type(node) is Lam:
            return walk(node.body, depth + 1)
        best = -1
        for c in node.kids:
            m = walk(c, depth)
            if m > best:
                best = m
        return best

    if t.inert:  # no variables at all
        return None
    m = walk(t, 0)
    return None if m < 0 else m


def is_closed(t: Term) -> bool:
    return max_free_index(t) is None


# -- term-level helpers ---------------------------------------------------


def dyadic_term(x: DyadicFloat | int) -> Term:
    """Canonical scalar literal for a dyadic value."""
    if isinstance(x, int):
        x = DyadicFloat.from_int(x)
    return canonical(DyadicLit(x))


def vsum(*items: Term) -> Term:
    return canonical(Sum(tuple(items)))


def ssum(*items: Term) -> Term:
    return canonical(ScalarSum(tuple(items)))


def sprod(*items: Term) -> Term:
    return canonical(ScalarProd(tuple(items)))


def dyadic_value_of(t: Term) -> Optional[DyadicFloat]:
    """The dyadic value of a literal-like scalar term, else None."""
    cls = type(t)
    if cls is DyadicLit:
        return t.value
    if cls is ScalarZero:
        return _DY_ZERO
    if cls is ScalarOne:
        return _DY_ONE
    return None


_DY_ZERO = DyadicFloat.from_int(0)
_DY_ONE = DyadicFloat.from_int(1)


class NonScalarResidueError(ValueError):
    """Raised when a term expected to be a closed scalar contains vector parts."""


def scalar_value(t: Term, dot_handler=None) -> ExactScalar:
    """Evaluate a closed scalar term directly to its exact 4-tuple value.

    This is the value-level twin of the scalar rewrite rules.  `dot_handler`
    may be supplied to give a meaning to scalar products of vectors; without
    it any vector residue raises NonScalarResidueError.
    """
    cls = type(t)
    if cls is ScalarZero:
        return SCALAR_ZERO_VALUE
    if cls is ScalarOne:
        return SCALAR_ONE_VALUE
    if cls is DyadicLit:
        return ExactScalar.from_dyadic(t.value)
    if cls is BasisScalar:
        return ExactScalar.basis(t.symbol)
    if cls is ScalarSum:
        acc = SCALAR_ZERO_VALUE
        for item in t.items:
            acc = acc + scalar_value(item, dot_handler)
        return acc
    if cls is ScalarProd:
        acc = SCALAR_ONE_VALUE
        for item in t.items:
            acc = acc * scalar_value(item, dot_handler)
        return acc
    if cls is Conj:
        return scalar_value(t.arg, dot_handler).conjugate()
    if cls is Dot and dot_handler is not None:
        return dot_handler(t.left, t.right)
    raise NonScalarResidueError(f"not a closed scalar term: {t!r}")
