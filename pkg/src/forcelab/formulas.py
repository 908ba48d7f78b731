"""Bounded formulas of set theory: syntax, substitution and enumeration.

Terms are variables, names, or HF sets (after valuation).  Quantifiers are
always bounded by a term.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, Sequence, Union

from .hf import hf_str
from .names import Name


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


Term = Union[Var, Name, frozenset]


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class In:
    left: Term
    right: Term


@dataclass(frozen=True)
class Subset:
    left: Term
    right: Term


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class ExistsIn:
    var: str
    bound: Term
    body: "Formula"


@dataclass(frozen=True)
class ForallIn:
    var: str
    bound: Term
    body: "Formula"


Formula = Union[Eq, In, Subset, Not, And, Or, Implies, ExistsIn, ForallIn]
ATOMIC = (Eq, In, Subset)
BINARY = (And, Or, Implies)
QUANTIFIERS = (ExistsIn, ForallIn)

ATOM_KIND = {Eq: "eq", In: "in", Subset: "subset"}
KIND_ATOM = {v: k for k, v in ATOM_KIND.items()}


def depth(f: Formula) -> int:
    if isinstance(f, ATOMIC):
        return 0
    if isinstance(f, Not):
        return 1 + depth(f.body)
    if isinstance(f, BINARY):
        return 1 + max(depth(f.left), depth(f.right))
    return 1 + depth(f.body)


def term_vars(t: Term) -> set[str]:
    return {t.name} if isinstance(t, Var) else set()


def free_vars(f: Formula) -> set[str]:
    if isinstance(f, ATOMIC):
        return term_vars(f.left) | term_vars(f.right)
    if isinstance(f, Not):
        return free_vars(f.body)
    if isinstance(f, BINARY):
        return free_vars(f.left) | free_vars(f.right)
    return term_vars(f.bound) | (free_vars(f.body) - {f.var})


def is_closed(f: Formula) -> bool:
    return not free_vars(f)


def map_terms(f: Formula, fn: Callable[[Term], Term]) -> Formula:
    """Apply ``fn`` to every non-variable term."""
    def m(t):
        return t if isinstance(t, Var) else fn(t)

    if isinstance(f, ATOMIC):
        return type(f)(m(f.left), m(f.right))
    if isinstance(f, Not):
        return Not(map_terms(f.body, fn))
    if isinstance(f, BINARY):
        return type(f)(map_terms(f.left, fn), map_terms(f.right, fn))
    return type(f)(f.var, m(f.bound), map_terms(f.body, fn))


def substitute(f: Formula, var: str, value: Term) -> Formula:
    """Replace free occurrences of ``var`` by ``value``."""
    def s(t):
        return value if isinstance(t, Var) and t.name == var else t

    if isinstance(f, ATOMIC):
        return type(f)(s(f.left), s(f.right))
    if isinstance(f, Not):
        return Not(substitute(f.body, var, value))
    if isinstance(f, BINARY):
        return type(f)(substitute(f.left, var, value), substitute(f.right, var, value))
    body = f.body if f.var == var else substitute(f.body, var, value)
    return type(f)(f.var, s(f.bound), body)


def constants(f: Formula) -> list:
    out: list = []

    def add(t):
        if not isinstance(t, Var) and t not in out:
            out.append(t)

    def walk(g):
        if isinstance(g, ATOMIC):
            add(g.left)
            add(g.right)
        elif isinstance(g, Not):
            walk(g.body)
        elif isinstance(g, BINARY):
            walk(g.left)
            walk(g.right)
        else:
            add(g.bound)
            walk(g.body)

    walk(f)
    return out


def term_text(t: Term, labels: dict | None = None) -> str:
    if isinstance(t, Var):
        return t.name
    if labels and t in labels:
        return labels[t]
    if isinstance(t, Name):
        return t.text
    return "(hf " + hf_str(t) + ")"


def formula_text(f: Formula, labels: dict | None = None) -> str:
    """S-expression text; ``labels`` optionally maps constants to short names."""
    if isinstance(f, ATOMIC):
        return f"({ATOM_KIND[type(f)]} {term_text(f.left, labels)} {term_text(f.right, labels)})"
    if isinstance(f, Not):
        return f"(not {formula_text(f.body, labels)})"
    if isinstance(f, BINARY):
        op = {And: "and", Or: "or", Implies: "implies"}[type(f)]
        return f"({op} {formula_text(f.left, labels)} {formula_text(f.right, labels)})"
    op = "exists" if isinstance(f, ExistsIn) else "forall"
    return f"({op} {f.var} {term_text(f.bound, labels)} {formula_text(f.body, labels)})"


def var_name(i: int) -> str:
    return f"x{i}"


def iter_formulas(consts: Sequence[Term], max_depth: int, scope: int = 0) -> Iterator[Formula]:
    """Every formula of depth <= max_depth over ``consts`` with free variables among x1..x{scope}.

    Bound variables are named canonically (x{scope+1}, ...), so this covers all
    formulas up to renaming of bound variables.  Exponential; small inputs only.
    """
    terms: list[Term] = list(consts) + [Var(var_name(i)) for i in range(1, scope + 1)]
    for kind in (Eq, In, Subset):
        for a in terms:
            for b in terms:
                yield kind(a, b)
    if max_depth == 0:
        return
    lower = list(iter_formulas(consts, max_depth - 1, scope))
    for g in lower:
        yield Not(g)
    for kind in (And, Or, Implies):
        for g in lower:
            for h in lower:
                yield kind(g, h)
    inner = list(iter_formulas(consts, max_depth - 1, scope + 1))
    for kind in (ExistsIn, ForallIn):
        for t in terms:
            for body in inner:
                yield kind(var_name(scope + 1), t, body)


def count_formulas(n_consts: int, max_depth: int, scope: int = 0) -> int:
    """Number of formulas produced by :func:`iter_formulas` (computed, not enumerated)."""
    terms = n_consts + scope
    atoms = 3 * terms * terms
    if max_depth == 0:
        return atoms
    c = count_formulas(n_consts, max_depth - 1, scope)
    c_inner = count_formulas(n_consts, max_depth - 1, scope + 1)
    return atoms + c + 3 * c * c + 2 * terms * c_inner
