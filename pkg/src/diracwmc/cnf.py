"""Tseitin-style conversion of formula trees to CNF.

Small ``Iff``/``Implies``/``Or`` nodes that are already required to hold are
expanded directly; a conjunction sitting inside a required disjunction is
distributed when it is the only one.  Anything else gets an auxiliary
variable defined by a full equivalence, so auxiliaries are functionally
determined and a weight of ``(1, 1)`` keeps the weighted count unchanged.
"""

from __future__ import annotations

from .logic import (
    And,
    CnfFormula,
    Const,
    Formula,
    Iff,
    Implies,
    Lit,
    Not,
    Or,
    VarPool,
    WeightFunction,
    variables,
)

# distribution is only applied while the disjunction stays this short
_DISTRIBUTE_LIMIT = 16


class _Tseitin:
    def __init__(self, fresh: VarPool):
        self.fresh = fresh
        self.clauses: list[tuple[int, ...]] = []
        self.aux: list[int] = []
        self._memo: dict[int, int] = {}
        self._keep: list[Formula] = []

    def _new_aux(self) -> int:
        t = self.fresh.fresh()
        self.aux.append(t)
        return t

    def _add(self, lits) -> None:
        seen: dict[int, None] = {}
        for l in lits:
            if -l in seen:
                return  # tautology
            seen[l] = None
        self.clauses.append(tuple(seen))

    def lit_of(self, f: Formula) -> int:
        if isinstance(f, Lit):
            return f.var if f.positive else -f.var
        if isinstance(f, Not):
            return -self.lit_of(f.child)
        key = id(f)
        if key in self._memo:
            return self._memo[key]
        self._keep.append(f)
        if isinstance(f, Const):
            t = self._new_aux()
            self._add([t] if f.value else [-t])
        elif isinstance(f, And):
            ls = [self.lit_of(c) for c in f.children]
            t = self._new_aux()
            for l in ls:
                self._add([-t, l])
            self._add([t] + [-l for l in ls])
        elif isinstance(f, Or):
            ls = [self.lit_of(c) for c in f.children]
            t = self._new_aux()
            for l in ls:
                self._add([t, -l])
            self._add([-t] + ls)
        elif isinstance(f, Implies):
            la, lb = self.lit_of(f.a), self.lit_of(f.b)
            t = self._new_aux()
            self._add([t, la])
            self._add([t, -lb])
            self._add([-t, -la, lb])
        elif isinstance(f, Iff):
            la, lb = self.lit_of(f.a), self.lit_of(f.b)
            t = self._new_aux()
            self._add([-t, -la, lb])
            self._add([-t, la, -lb])
            self._add([t, la, lb])
            self._add([t, -la, -lb])
        else:
            raise TypeError(f"not a formula: {f!r}")
        self._memo[key] = t
        return t

    def require(self, f: Formula, positive: bool = True) -> None:
        # iterative over the conjunctive spine to keep recursion shallow
        todo = [(f, positive)]
        while todo:
            g, pos = todo.pop()
            if isinstance(g, Const):
                if g.value != pos:
                    self._add([])
            elif isinstance(g, Lit):
                self._add([g.var if g.positive == pos else -g.var])
            elif isinstance(g, Not):
                todo.append((g.child, not pos))
            elif isinstance(g, And):
                if pos:
                    todo.extend((c, True) for c in reversed(g.children))
                else:
                    self.require_disjunction([_negate(c) for c in g.children])
            elif isinstance(g, Or):
                if pos:
                    self.require_disjunction(list(g.children))
                else:
                    todo.extend((c, False) for c in reversed(g.children))
            elif isinstance(g, Implies):
                if pos:
                    self.require_disjunction([_negate(g.a), g.b])
                else:
                    todo.append((g.b, False))
                    todo.append((g.a, True))
            elif isinstance(g, Iff):
                la, lb = self.lit_of(g.a), self.lit_of(g.b)
                if pos:
                    self._add([-la, lb])
                    self._add([la, -lb])
                else:
                    self._add([la, lb])
                    self._add([-la, -lb])
            else:
                raise TypeError(f"not a formula: {g!r}")

    def require_disjunction(self, parts: list[Formula]) -> None:
        flat: list[Formula] = []
        todo = list(reversed(parts))
        while todo:
            p = todo.pop()
            if isinstance(p, Not) and isinstance(p.child, Not):
                todo.append(p.child.child)
            elif isinstance(p, Or):
                todo.extend(reversed(p.children))
            elif isinstance(p, Not) and isinstance(p.child, And):
                todo.extend(_negate(c) for c in reversed(p.child.children))
            elif isinstance(p, Implies):
                todo.append(p.b)
                todo.append(_negate(p.a))
            elif isinstance(p, Const):
                if p.value:
                    return
            else:
                flat.append(p)
        conjunctive = [i for i, p in enumerate(flat) if _conjuncts(p) is not None]
        if len(conjunctive) == 1 and len(flat) <= _DISTRIBUTE_LIMIT:
            i = conjunctive[0]
            rest = flat[:i] + flat[i + 1 :]
            for g in _conjuncts(flat[i]):
                self.require_disjunction(rest + [g])
            return
        self._add([self.lit_of(p) for p in flat])


def _negate(f: Formula) -> Formula:
    if isinstance(f, Lit):
        return Lit(f.var, not f.positive)
    if isinstance(f, Not):
        return f.child
    if isinstance(f, Const):
        return Const(not f.value)
    return Not(f)


def _conjuncts(p: Formula):
    if isinstance(p, And):
        return list(p.children)
    if isinstance(p, Not) and isinstance(p.child, Or):
        return [_negate(c) for c in p.child.children]
    if isinstance(p, Not) and isinstance(p.child, Implies):
        return [p.child.a, _negate(p.child.b)]
    return None


def to_cnf(formula: Formula, fresh: VarPool) -> tuple[CnfFormula, WeightFunction]:
    """Convert ``formula`` to CNF.

    Returns the clause list and a weight function assigning ``(1, 1)`` to
    each auxiliary variable.  Original variable ids are kept; ``fresh`` is
    advanced past them before any auxiliary is allocated.
    """
    original = variables(formula)
    if original:
        fresh.reserve(max(original))
    ts = _Tseitin(fresh)
    ts.require(formula)
    num_vars = max([0, *original, *ts.aux])
    cnf = CnfFormula(num_vars, tuple(ts.clauses))
    return cnf, WeightFunction.constant(ts.aux, 1)
