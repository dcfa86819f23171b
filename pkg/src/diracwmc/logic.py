"""Boolean formulas, weight functions and CNF over integer variables.

Variables are positive integers.  Formulas are immutable trees built from
the node classes below; use the smart constructors (:func:`conj`,
:func:`disj`, :func:`neg`, :func:`iff`, :func:`implies`) to get constant
folding and flattening of nested conjunctions/disjunctions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Mapping

from .errors import UnboundVariableError, WmcError


class Formula:
    __slots__ = ()

    def __and__(self, other: "Formula") -> "Formula":
        return conj(self, other)

    def __or__(self, other: "Formula") -> "Formula":
        return disj(self, other)

    def __invert__(self) -> "Formula":
        return neg(self)


@dataclass(frozen=True, slots=True)
class Const(Formula):
    value: bool

    def __repr__(self) -> str:
        return "TRUE" if self.value else "FALSE"


TRUE = Const(True)
FALSE = Const(False)


@dataclass(frozen=True, slots=True)
class Lit(Formula):
    var: int
    positive: bool = True

    def __repr__(self) -> str:
        return f"{'' if self.positive else '~'}x{self.var}"


@dataclass(frozen=True, slots=True)
class Not(Formula):
    child: Formula


@dataclass(frozen=True, slots=True)
class And(Formula):
    children: tuple[Formula, ...]


@dataclass(frozen=True, slots=True)
class Or(Formula):
    children: tuple[Formula, ...]


@dataclass(frozen=True, slots=True)
class Implies(Formula):
    a: Formula
    b: Formula


@dataclass(frozen=True, slots=True)
class Iff(Formula):
    a: Formula
    b: Formula


def var(v: int) -> Lit:
    if v <= 0:
        raise WmcError(f"variable ids must be positive, got {v}")
    return Lit(v, True)


def lit(signed: int) -> Lit:
    """Literal from a DIMACS-style signed integer."""
    if signed == 0:
        raise WmcError("0 is not a literal")
    return Lit(abs(signed), signed > 0)


def neg(f: Formula) -> Formula:
    if isinstance(f, Const):
        return FALSE if f.value else TRUE
    if isinstance(f, Lit):
        return Lit(f.var, not f.positive)
    if isinstance(f, Not):
        return f.child
    return Not(f)


def conj(*fs: Formula) -> Formula:
    out: list[Formula] = []
    for f in fs:
        if isinstance(f, Const):
            if not f.value:
                return FALSE
            continue
        if isinstance(f, And):
            out.extend(f.children)
        else:
            out.append(f)
    if not out:
        return TRUE
    if len(out) == 1:
        return out[0]
    return And(tuple(out))


def disj(*fs: Formula) -> Formula:
    out: list[Formula] = []
    for f in fs:
        if isinstance(f, Const):
            if f.value:
                return TRUE
            continue
        if isinstance(f, Or):
            out.extend(f.children)
        else:
            out.append(f)
    if not out:
        return FALSE
    if len(out) == 1:
        return out[0]
    return Or(tuple(out))


def implies(a: Formula, b: Formula) -> Formula:
    if isinstance(a, Const):
        return b if a.value else TRUE
    if isinstance(b, Const):
        return TRUE if b.value else neg(a)
    return Implies(a, b)


def iff(a: Formula, b: Formula) -> Formula:
    if isinstance(a, Const):
        return b if a.value else neg(b)
    if isinstance(b, Const):
        return a if b.value else neg(a)
    return Iff(a, b)


def cube(assignment: Mapping[int, bool]) -> Formula:
    return conj(*(Lit(v, b) for v, b in assignment.items()))


# -- traversal -------------------------------------------------------------


def _children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, (And, Or)):
        return f.children
    if isinstance(f, Not):
        return (f.child,)
    if isinstance(f, (Implies, Iff)):
        return (f.a, f.b)
    return ()


def iter_nodes(f: Formula) -> Iterator[Formula]:
    """Pre-order walk visiting each distinct node object once."""
    seen: set[int] = set()
    stack = [f]
    while stack:
        node = stack.pop()
        if id(node) in seen:
            continue
        seen.add(id(node))
        yield node
        stack.extend(reversed(_children(node)))


def variables(f: Formula) -> set[int]:
    return {n.var for n in iter_nodes(f) if isinstance(n, Lit)}


def formula_size(f: Formula) -> int:
    return sum(1 for _ in iter_nodes(f))


def evaluate(f: Formula, tau: Mapping[int, bool]) -> bool:
    """Truth value of ``f`` under the assignment ``tau``."""
    if isinstance(f, Lit):
        try:
            value = tau[f.var]
        except KeyError:
            raise UnboundVariableError(f.var) from None
        return bool(value) == f.positive
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Not):
        return not evaluate(f.child, tau)
    if isinstance(f, And):
        return all(evaluate(c, tau) for c in f.children)
    if isinstance(f, Or):
        return any(evaluate(c, tau) for c in f.children)
    if isinstance(f, Implies):
        return (not evaluate(f.a, tau)) or evaluate(f.b, tau)
    if isinstance(f, Iff):
        return evaluate(f.a, tau) == evaluate(f.b, tau)
    raise TypeError(f"not a formula: {f!r}")


def transform(f: Formula, leaf: Callable[[Lit], Formula]) -> Formula:
    """Rebuild ``f`` bottom-up, replacing each literal by ``leaf(lit)``.

    The smart constructors fold any constants produced by ``leaf``.  Shared
    subtrees are rebuilt once.
    """
    memo: dict[int, Formula] = {}

    def go(node: Formula) -> Formula:
        key = id(node)
        hit = memo.get(key)
        if hit is not None:
            return hit
        if isinstance(node, Lit):
            out = leaf(node)
        elif isinstance(node, Const):
            out = node
        elif isinstance(node, Not):
            out = neg(go(node.child))
        elif isinstance(node, And):
            out = conj(*(go(c) for c in node.children))
        elif isinstance(node, Or):
            out = disj(*(go(c) for c in node.children))
        elif isinstance(node, Implies):
            out = implies(go(node.a), go(node.b))
        elif isinstance(node, Iff):
            out = iff(go(node.a), go(node.b))
        else:
            raise TypeError(f"not a formula: {node!r}")
        memo[key] = out
        return out

    return go(f)


def substitute(f: Formula, mapping: Mapping[int, int]) -> Formula:
    """Rename variables according to ``mapping`` (unmapped ones are kept)."""
    if not mapping:
        return f
    return transform(f, lambda l: Lit(mapping.get(l.var, l.var), l.positive))


def condition(f: Formula, fixed: Mapping[int, bool]) -> Formula:
    """Plug in the partial assignment ``fixed`` and fold constants."""
    if not fixed:
        return f

    def leaf(l: Lit) -> Formula:
        value = fixed.get(l.var)
        if value is None:
            return l
        return TRUE if value == l.positive else FALSE

    return transform(f, leaf)


def top_conjuncts(f: Formula) -> list[Formula]:
    if isinstance(f, And):
        return list(f.children)
    if isinstance(f, Const) and f.value:
        return []
    return [f]


# -- variable source -------------------------------------------------------


class VarPool:
    """Strictly increasing source of fresh variable ids."""

    def __init__(self, start: int = 1):
        if start < 1:
            raise WmcError("variable ids start at 1")
        self._next = start

    def fresh(self) -> int:
        v = self._next
        self._next += 1
        return v

    def fresh_many(self, n: int) -> list[int]:
        first = self._next
        self._next += n
        return list(range(first, first + n))

    def reserve(self, upto: int) -> None:
        """Make sure ids ``<= upto`` are never handed out."""
        self._next = max(self._next, upto + 1)

    @property
    def next_id(self) -> int:
        return self._next

    def __repr__(self) -> str:
        return f"VarPool(next={self._next})"


# -- weights ---------------------------------------------------------------


class WeightFunction(Mapping[int, tuple[complex, complex]]):
    """Map ``variable -> (weight when false, weight when true)``.

    Looking up a variable outside the domain raises
    :class:`UnboundVariableError`; there is no default weight.
    """

    __slots__ = ("_w",)

    def __init__(self, entries: Mapping[int, tuple[complex, complex]] | Iterable = ()):
        items = entries.items() if isinstance(entries, Mapping) else entries
        self._w: dict[int, tuple[complex, complex]] = {
            int(v): (complex(w0), complex(w1)) for v, (w0, w1) in items
        }

    @classmethod
    def constant(cls, vs: Iterable[int], value: complex = 1) -> "WeightFunction":
        c = complex(value)
        return cls((v, (c, c)) for v in vs)

    def __getitem__(self, v: int) -> tuple[complex, complex]:
        try:
            return self._w[v]
        except KeyError:
            raise UnboundVariableError(v) from None

    def __iter__(self) -> Iterator[int]:
        return iter(self._w)

    def __len__(self) -> int:
        return len(self._w)

    def __contains__(self, v: object) -> bool:
        return v in self._w

    def __repr__(self) -> str:
        body = ", ".join(f"{v}: ({a:g}, {b:g})" for v, (a, b) in sorted(self._w.items()))
        return f"WeightFunction({{{body}}})"

    @property
    def domain(self) -> set[int]:
        return set(self._w)

    def weight(self, v: int, value: bool) -> complex:
        return self[v][1 if value else 0]

    def union(self, other: "WeightFunction") -> "WeightFunction":
        """Union of two weight functions with disjoint domains."""
        clash = self._w.keys() & other._w.keys()
        if clash:
            raise WmcError(f"weight domains overlap on {sorted(clash)[:5]}")
        merged = dict(self._w)
        merged.update(other._w)
        return WeightFunction(merged)

    def product(self, other: "WeightFunction") -> "WeightFunction":
        """Pointwise product; on the shared domain the weights multiply."""
        merged = dict(self._w)
        for v, (b0, b1) in other._w.items():
            if v in merged:
                a0, a1 = merged[v]
                merged[v] = (a0 * b0, a1 * b1)
            else:
                merged[v] = (b0, b1)
        return WeightFunction(merged)

    def with_entries(self, entries: Mapping[int, tuple[complex, complex]]) -> "WeightFunction":
        merged = dict(self._w)
        merged.update({v: (complex(a), complex(b)) for v, (a, b) in entries.items()})
        return WeightFunction(merged)

    def map(self, f: Callable[[complex], complex]) -> "WeightFunction":
        return WeightFunction((v, (f(a), f(b))) for v, (a, b) in self._w.items())

    def rename(self, mapping: Mapping[int, int]) -> "WeightFunction":
        out: dict[int, tuple[complex, complex]] = {}
        for v, w in self._w.items():
            nv = mapping.get(v, v)
            if nv in out:
                raise WmcError(f"renaming merges variables into {nv}")
            out[nv] = w
        return WeightFunction(out)

    def restrict(self, vs: Iterable[int]) -> "WeightFunction":
        return WeightFunction((v, self[v]) for v in vs)

    def top(self) -> complex:
        return wmc_top(self)


def wmc_top(W: WeightFunction) -> complex:
    """``WMC(TRUE, W)``: product over the domain of ``W(v,0) + W(v,1)``."""
    total = complex(1)
    for v in sorted(W):
        w0, w1 = W[v]
        total *= w0 + w1
    return total


# -- CNF -------------------------------------------------------------------


@dataclass(frozen=True)
class CnfFormula:
    """Clause list over variables ``1..num_vars``.

    An empty clause list is TRUE; an empty clause is FALSE.
    """

    num_vars: int
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        for clause in self.clauses:
            for l in clause:
                if l == 0 or abs(l) > self.num_vars:
                    raise WmcError(f"literal {l} out of range 1..{self.num_vars}")

    def variables(self) -> set[int]:
        return {abs(l) for c in self.clauses for l in c}

    def to_formula(self) -> Formula:
        return conj(*(disj(*(lit(l) for l in c)) if c else FALSE for c in self.clauses))


def rename_fresh(
    formula: Formula,
    W: WeightFunction,
    protected: Iterable[int],
    fresh: VarPool,
) -> tuple[Formula, WeightFunction]:
    """Replace every variable of ``dom(W) - protected`` by a fresh one."""
    keep = set(protected)
    mapping = {v: fresh.fresh() for v in sorted(W) if v not in keep}
    return substitute(formula, mapping), W.rename(mapping)


def all_assignments(vs: Iterable[int]) -> Iterator[dict[int, bool]]:
    vs = sorted(vs)
    for bits in itertools.product((False, True), repeat=len(vs)):
        yield dict(zip(vs, bits))
