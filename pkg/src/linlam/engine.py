"""Rewriting: matching modulo AC, reduction strategies, normalization, tracing.

Matching against a sum or product pattern works on the flattened operand
list.  A rule whose left-hand side is itself a sum or product matches any
two operands of a larger node ("extension" matching): the remaining operands
are kept alongside the rewritten pair.  A sum or product pattern *inside* a
larger left-hand side must cover the node it matches, but a plain variable
operand may absorb several operands as one re-wrapped node.

Strategies pick the redex position: leftmost-outermost (the default),
leftmost-innermost, or a seeded uniformly random choice among all redex
positions.  Rule trials and normality are cached on the terms themselves
(terms are interned and immutable, and both facts depend only on the term
and the rule set), so repeated scans stay cheap.
"""

from __future__ import annotations

import random
from bisect import insort
from dataclasses import dataclass
from typing import Optional

from .patterns import PatVar, Rule, VarPat, instantiate, kind_matches
from .rules import RuleSet, default_ruleset
from .scalars import ExactScalar, SCALAR_ONE_VALUE
from .terms import (
    AC_NODES,
    SCALAR_ONE,
    SCALAR_ZERO,
    ZERO_VEC,
    Lam,
    NonScalarResidueError,
    ScalarMul,
    Sum,
    Term,
    Var,
    _OrderKey,
    canonical,
    is_basis_atom,
    is_closed,
    mark_canonical,
    scalar_value,
)

DEFAULT_BUDGET = 1_000_000
DEFAULT_STRATEGY = "innermost"
STRATEGIES = ("innermost", "outermost")  # plus "random:<seed>"

_AC_SET = frozenset(AC_NODES)
_setattr = object.__setattr__


@dataclass(frozen=True)
class Match:
    """A successful match: variable bindings plus, for extension matches on
    sums and products, the operands not covered by the pattern."""

    binding: dict
    remainder: tuple[Term, ...] = ()


@dataclass(frozen=True)
class RewriteStep:
    rule: str
    path: tuple[int, ...]
    before: Term
    after: Term

    def path_str(self) -> str:
        return ".".join(str(i) for i in self.path) if self.path else "root"


@dataclass(frozen=True)
class NormalResult:
    outcome: str  # "normal" | "budget"
    term: Term
    steps: int
    trace: Optional[tuple[RewriteStep, ...]] = None

    @property
    def is_normal(self) -> bool:
        return self.outcome == "normal"


# -- matching ------------------------------------------------------------


def _match(pat: Term, subj: Term, binding: dict) -> bool:
    cls = type(pat)
    if cls is PatVar:
        bound = binding.get(pat.name)
        if bound is not None:
            return bound is subj
        if not kind_matches(pat.kind, subj):
            return False
        binding[pat.name] = subj
        return True
    if cls is VarPat:
        if type(subj) is not Var or subj.index < pat.min_index:
            return False
        bound = binding.get(pat.name)
        if bound is not None:
            return bound == subj.index
        binding[pat.name] = subj.index
        return True
    if cls is not type(subj):
        return False
    if cls in _AC_SET:
        return _match_ac_covering(cls, pat.items, subj.items, binding)
    if not pat.fields:
        return pat is subj
    for f in pat.fields:
        pv = getattr(pat, f)
        sv = getattr(subj, f)
        if isinstance(pv, Term):
            if not _match(pv, sv, binding):
                return False
        elif pv != sv:
            return False
    return True


def _match_ac_covering(cls, pats, subjs, binding: dict) -> bool:
    """Match a nested AC pattern against the whole operand list.

    Rule patterns always carry two operands here.  Each subject operand is
    tried as the first pattern's match; the second pattern then takes the
    rest, re-wrapped as one node when several operands remain.
    """
    p, q = pats
    for i, c in enumerate(subjs):
        trial = dict(binding)
        if not _match(p, c, trial):
            continue
        rest = subjs[:i] + subjs[i + 1 :]
        rest_term = rest[0] if len(rest) == 1 else canonical(cls(rest))
        if _match(q, rest_term, trial):
            binding.clear()
            binding.update(trial)
            return True
    return False


def match_rule(rule: Rule, t: Term) -> Optional[Match]:
    """Match a rule's left-hand side against a canonical term.

    For sum- and product-rooted rules, any two operands of the node may form
    the redex; pairs are tried smallest-index first, so the result is
    deterministic for a canonical operand order.
    """
    pat = rule.pattern
    pat_cls = type(pat)
    if pat_cls in _AC_SET:
        if type(t) is not pat_cls:
            return None
        items = t.items
        if rule.ac_matcher is not None:
            got = rule.ac_matcher(items)
            if got is None:
                return None
            binding, (i, j) = got
            remainder = tuple(x for k, x in enumerate(items) if k != i and k != j)
            return Match(binding, remainder)
        p, q = pat.items
        fp, fq = rule.operand_filters
        p_idx = [i for i, c in enumerate(items) if fp(c)]
        if not p_idx:
            return None
        q_idx = [j for j, c in enumerate(items) if fq(c)]
        for j in q_idx:
            for i in p_idx:
                if i == j:
                    continue
                binding: dict = {}
                if _match(p, items[i], binding) and _match(q, items[j], binding):
                    remainder = tuple(x for k, x in enumerate(items) if k != i and k != j)
                    return Match(binding, remainder)
        return None
    binding = {}
    if _match(pat, t, binding):
        return Match(binding)
    return None


def apply_rule(rule: Rule, t: Term) -> Optional[Term]:
    """Apply one rule at the root of t, or None if it does not match."""
    m = match_rule(rule, t)
    if m is None:
        return None
    out = instantiate(rule.template, m.binding)
    if m.remainder:
        out = _ac_with(type(rule.pattern), m.remainder, out)
    return out


def _ac_with(cls, sorted_items: tuple[Term, ...], new: Term) -> Term:
    """Canonical `cls` node over already-sorted operands plus one new canonical
    operand (splice-inserted; merged when it is itself a `cls` node)."""
    if not sorted_items:
        return new
    items = list(sorted_items)
    if type(new) is cls:
        for x in new.items:
            insort(items, x, key=_OrderKey)
    else:
        insort(items, new, key=_OrderKey)
    if len(items) == 1:
        return items[0]
    return mark_canonical(cls(tuple(items)))


# -- positions -------------------------------------------------------------


def child_terms(t: Term) -> tuple[Term, ...]:
    return t.kids


def replace_child(t: Term, index: int, new: Term) -> Term:
    """Rebuild one node with child `index` replaced by a canonical term.

    The result is canonical by construction: for sums and products the new
    operand is splice-inserted into the (still sorted) remaining operands,
    and other constructors cannot introduce literal identifications."""
    cls = type(t)
    if cls in _AC_SET:
        rest = t.items[:index] + t.items[index + 1 :]
        return _ac_with(cls, rest, new)
    vals = []
    k = 0
    for f in t.fields:
        v = getattr(t, f)
        if isinstance(v, Term):
            if k == index:
                v = new
            k += 1
        vals.append(v)
    return mark_canonical(cls(*vals))


def subterm_at(t: Term, path: tuple[int, ...]) -> Term:
    for i in path:
        t = t.kids[i]
    return t


def replace_at(t: Term, path: tuple[int, ...], new: Term) -> Term:
    if not path:
        return canonical(new)
    return replace_child(t, path[0], replace_at(t.kids[path[0]], path[1:], new))


def apply_rule_at(t: Term, path: tuple[int, ...], rule: Rule) -> Optional[Term]:
    """Replay helper: apply a named rule at a position of a canonical term."""
    out = apply_rule(rule, subterm_at(t, path))
    if out is None:
        return None
    return replace_at(t, path, out)


# -- redex search ------------------------------------------------------------


def _try_rules(t: Term, rs: RuleSet) -> Optional[tuple[Rule, Term]]:
    """First rule (in rule-set order) applicable at the root of t, with its
    result.  Cached on the term: the answer depends only on (t, rs)."""
    cached = t._try
    if cached is not None and cached[0] is rs:
        return cached[1]
    hit = None
    for rule in rs.candidates(type(t)):
        if rule.quick is not None and not rule.quick(t):
            continue
        out = apply_rule(rule, t)
        if out is not None:
            hit = (rule, out)
            break
    _setattr(t, "_try", (rs, hit))
    return hit


def _find_redex(t: Term, rs: RuleSet, outer: bool, path=()):
    """Leftmost-outermost or leftmost-innermost redex; flags redex-free
    subtrees (on the terms, per rule set) so later scans skip them."""
    if t._nf is rs:
        return None
    if outer:
        hit = _try_rules(t, rs)
        if hit is not None:
            return path, hit[0], hit[1]
    for i, child in enumerate(t.kids):
        found = _find_redex(child, rs, outer, path + (i,))
        if found is not None:
            return found
    if not outer:
        hit = _try_rules(t, rs)
        if hit is not None:
            return path, hit[0], hit[1]
    _setattr(t, "_nf", rs)
    return None


def _collect_redexes(t: Term, rs: RuleSet, path, acc):
    if t._nf is rs:
        return
    before = len(acc)
    hit = _try_rules(t, rs)
    if hit is not None:
        acc.append((path, hit[0], hit[1]))
    for i, child in enumerate(t.kids):
        _collect_redexes(child, rs, path + (i,), acc)
    if len(acc) == before:
        _setattr(t, "_nf", rs)


def _parse_strategy(strategy: str):
    if strategy in ("outermost", "innermost"):
        return strategy, None
    if strategy.startswith("random:"):
        return "random", int(strategy.split(":", 1)[1])
    raise ValueError(f"unknown strategy {strategy!r}")


# -- big-step innermost evaluation -------------------------------------------
#
# Untraced leftmost-innermost normalization does not need to materialize the
# whole term after every step, so it runs as a recursive evaluator: normalize
# the children, canonicalize, apply the first rule, repeat.  The sequence of
# rule applications (and hence the step count and the result) is the same as
# stepping with rewrite_once under "innermost".


class _BudgetStop(Exception):
    def __init__(self, partial: Term):
        self.partial = partial


def _node_with_kids(t: Term, new_kids: list[Term]) -> Term:
    cls = type(t)
    if cls in _AC_SET:
        return canonical(cls(tuple(new_kids)))
    vals = []
    k = 0
    for f in t.fields:
        v = getattr(t, f)
        if isinstance(v, Term):
            v = new_kids[k]
            k += 1
        vals.append(v)
    return canonical(cls(*vals))


def _eval_innermost(t: Term, rs: RuleSet, budget: list[int]) -> Term:
    if t._nf is rs:
        return t
    cur = t
    while True:
        kids = cur.kids
        if kids:
            new_kids: list[Term] = []
            changed = False
            for idx, k in enumerate(kids):
                try:
                    nk = _eval_innermost(k, rs, budget)
                except _BudgetStop as stop:
                    partial = list(new_kids) + [stop.partial] + list(kids[idx + 1 :])
                    raise _BudgetStop(_node_with_kids(cur, partial)) from None
                new_kids.append(nk)
                if nk is not k:
                    changed = True
            if changed:
                cur = _node_with_kids(cur, new_kids)
                if cur._nf is rs:
                    return cur
                if cur.kids and any(c._nf is not rs for c in cur.kids):
                    continue  # canonicalization exposed unnormalized operands
        hit = _try_rules(cur, rs)
        if hit is None:
            _setattr(cur, "_nf", rs)
            return cur
        if budget[0] <= 0:
            raise _BudgetStop(cur)
        budget[0] -= 1
        cur = hit[1]
        if cur._nf is rs:
            return cur


def rewrite_once(
    t: Term,
    rs: RuleSet | None = None,
    strategy: str = DEFAULT_STRATEGY,
    rng: random.Random | None = None,
) -> Optional[RewriteStep]:
    """Perform the first rewrite under the strategy's visit order, or None
    if the term is a normal form."""
    rs = rs or default_ruleset()
    t = canonical(t)
    kind, seed = _parse_strategy(strategy)
    if kind == "random":
        acc: list = []
        _collect_redexes(t, rs, (), acc)
        if not acc:
            return None
        rng = rng or random.Random(seed)
        path, rule, new_sub = acc[rng.randrange(len(acc))]
    else:
        found = _find_redex(t, rs, outer=(kind == "outermost"))
        if found is None:
            return None
        path, rule, new_sub = found
    return RewriteStep(rule.name, path, t, replace_at(t, path, new_sub))


def normalize(
    t: Term,
    rs: RuleSet | None = None,
    strategy: str = DEFAULT_STRATEGY,
    budget: int = DEFAULT_BUDGET,
    trace: bool = False,
    require_closed: bool = True,
) -> NormalResult:
    """Rewrite to a normal form, or stop after `budget` steps.

    Deterministic given (term, rules, strategy); the trace, when requested,
    can be replayed step by step.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    rs = rs or default_ruleset()
    current = canonical(t)
    if require_closed and not is_closed(current):
        raise ValueError("normalize expects a closed term")
    kind, seed = _parse_strategy(strategy)
    if kind == "innermost" and not trace:
        remaining = [budget]
        try:
            nf = _eval_innermost(current, rs, remaining)
        except _BudgetStop as stop:
            return NormalResult("budget", stop.partial, budget)
        return NormalResult("normal", nf, budget - remaining[0])
    rng = random.Random(seed) if kind == "random" else None
    steps: list[RewriteStep] = []
    count = 0
    while count < budget:
        step = rewrite_once(current, rs, strategy, rng)
        if step is None:
            return NormalResult("normal", current, count, tuple(steps) if trace else None)
        count += 1
        if trace:
            steps.append(step)
        current = step.after
    return NormalResult("budget", current, count, tuple(steps) if trace else None)


def is_normal_form(t: Term, rs: RuleSet | None = None) -> bool:
    return rewrite_once(t, rs) is None


def format_trace(result: NormalResult) -> str:
    """One line per step: ``step <k>: <rule> @ <path>`` then the new term."""
    from .printer import pretty

    lines = []
    for k, step in enumerate(result.trace or (), start=1):
        lines.append(f"step {k}: {step.rule} @ {step.path_str()}")
        lines.append(f"  {pretty(step.after)}")
    return "\n".join(lines)


# -- classification ----------------------------------------------------------


@dataclass(frozen=True)
class CombinationEntry:
    coefficient: Optional[Term]  # None when the atom carries no written scalar
    exact: ExactScalar
    atom: Term


@dataclass(frozen=True)
class Classification:
    kind: str  # "zero" | "combination" | "lambda" | "stuck"
    entries: tuple[CombinationEntry, ...] = ()
    reason: str = ""


def classify(t: Term, rs: RuleSet | None = None, check_normal: bool = True) -> Classification:
    """Shape of a normal form: the zero vector, a linear combination of
    distinct base vectors with coefficients other than 0 and 1, a lambda
    abstraction, or a stuck term."""
    t = canonical(t)
    if check_normal and not is_normal_form(t, rs):
        raise ValueError("classify expects a normal form")
    if t is ZERO_VEC:
        return Classification("zero")
    if isinstance(t, Lam):
        return Classification("lambda")
    entries = []
    summands = t.items if isinstance(t, Sum) else (t,)
    for s in summands:
        if is_basis_atom(s):
            entries.append(CombinationEntry(None, SCALAR_ONE_VALUE, s))
            continue
        if isinstance(s, ScalarMul) and is_basis_atom(s.vec):
            if s.scalar is SCALAR_ZERO or s.scalar is SCALAR_ONE:
                return Classification("stuck", reason=f"explicit unit coefficient on {s.vec!r}")
            try:
                exact = scalar_value(s.scalar)
            except NonScalarResidueError:
                return Classification("stuck", reason="coefficient is not a closed scalar")
            entries.append(CombinationEntry(s.scalar, exact, s.vec))
            continue
        return Classification("stuck", reason=f"summand is not a scaled base vector: {s!r}")
    atoms = [e.atom for e in entries]
    if len(set(atoms)) != len(atoms):
        return Classification("stuck", reason="repeated base vector in a sum")
    return Classification("combination", tuple(entries))
