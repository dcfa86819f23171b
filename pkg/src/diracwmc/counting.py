"""Exact weighted model counting.

``wmc_count`` sums ``phi[tau] * prod_v W(v, tau(v))`` over every assignment
of ``dom(W)``.  Top-level unit literals are propagated first, then the
remaining conjuncts are split into connected components of the variable
co-occurrence graph; each component is counted on its own and the results
are multiplied in order of their smallest variable id.

Counting methods per component:

``enumerate``
    exhaustive enumeration with the compiled (or numpy) kernel; a component
    with more than ``cap`` variables raises :class:`ComponentTooLargeError`.
``eliminate``
    variable elimination on the Tseitin CNF of the component.
``auto``
    enumerate small components, eliminate the rest.
``brute``
    no propagation and no decomposition: enumerate all of ``dom(W)``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from . import elimination, kernel
from .cnf import to_cnf
from .errors import ComponentTooLargeError, UnboundVariableError, WmcError
from .logic import (
    FALSE,
    CnfFormula,
    Const,
    Formula,
    Lit,
    VarPool,
    WeightFunction,
    condition,
    evaluate,
    conj,
    top_conjuncts,
    variables,
    wmc_top,
)
from .program import compile_program

DEFAULT_CAP = 30
AUTO_ENUMERATE_LIMIT = 16
ELIMINATION_WIDTH_LIMIT = 24
METHODS = ("enumerate", "eliminate", "auto", "brute")


def default_cap() -> int:
    env = os.environ.get("DIRACWMC_COMPONENT_CAP")
    if env:
        try:
            return int(env)
        except ValueError:
            raise WmcError(f"DIRACWMC_COMPONENT_CAP must be an integer, got {env!r}") from None
    return DEFAULT_CAP


@dataclass
class Decomposition:
    """Result of unit propagation plus component splitting."""

    fixed: dict[int, bool] = field(default_factory=dict)
    components: list[tuple[list[int], Formula]] = field(default_factory=list)
    free: list[int] = field(default_factory=list)
    unsat: bool = False

    @property
    def sizes(self) -> list[int]:
        return [len(vs) for vs, _ in self.components]


def _propagate(formula: Formula) -> tuple[dict[int, bool], list[Formula], list[set[int]]] | None:
    fixed: dict[int, bool] = {}
    pieces = top_conjuncts(formula)
    piece_vars = [variables(p) for p in pieces]
    while True:
        new: dict[int, bool] = {}
        keep: list[Formula] = []
        keep_vars: list[set[int]] = []
        for p, vs in zip(pieces, piece_vars):
            if isinstance(p, Lit):
                old = fixed.get(p.var, new.get(p.var))
                if old is not None and old != p.positive:
                    return None
                new[p.var] = p.positive
            elif isinstance(p, Const) or not vs:
                if not evaluate(p, {}):
                    return None
            else:
                keep.append(p)
                keep_vars.append(vs)
        new = {v: b for v, b in new.items() if v not in fixed}
        if not new:
            return fixed, keep, keep_vars
        fixed.update(new)
        pieces, piece_vars = [], []
        for p, vs in zip(keep, keep_vars):
            if vs.isdisjoint(new):
                pieces.append(p)
                piece_vars.append(vs)
                continue
            q = condition(p, new)
            if q == FALSE:
                return None
            for r in top_conjuncts(q):
                pieces.append(r)
                piece_vars.append(variables(r))


def decompose(formula: Formula, W: WeightFunction) -> Decomposition:
    out = _propagate(formula)
    if out is None:
        return Decomposition(unsat=True)
    fixed, pieces, piece_vars = out

    parent: dict[int, int] = {}

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for vs in piece_vars:
        it = iter(vs)
        first = next(it)
        parent.setdefault(first, first)
        root = find(first)
        for v in it:
            parent.setdefault(v, v)
            r = find(v)
            if r != root:
                if r < root:
                    r, root = root, r
                parent[r] = root
    groups: dict[int, list[int]] = {}
    for v in parent:
        groups.setdefault(find(v), []).append(v)
    members: dict[int, list[Formula]] = {}
    for p, vs in zip(pieces, piece_vars):
        members.setdefault(find(next(iter(vs))), []).append(p)
    components = []
    for root in sorted(groups, key=lambda r: min(groups[r])):
        components.append((sorted(groups[root]), conj(*members[root])))
    used = set(parent) | set(fixed)
    free = sorted(v for v in W if v not in used)
    return Decomposition(fixed=fixed, components=components, free=free)


def _enumerate(vs: list[int], formula: Formula, W: WeightFunction, backend=None) -> complex:
    index = {v: i for i, v in enumerate(vs)}
    prog = compile_program(formula, index)
    w0 = np.array([W[v][0] for v in vs], dtype=np.complex128)
    w1 = np.array([W[v][1] for v in vs], dtype=np.complex128)
    run = kernel.get_backend(backend)
    return complex(run(prog.ops, prog.args, len(vs), w0, w1, prog.stack_size))


def _eliminate(vs: list[int], formula: Formula, W: WeightFunction, width: int) -> complex:
    pool = VarPool(max(vs) + 1)
    cnf, aux = to_cnf(formula, pool)
    weights = {v: W[v] for v in vs}
    weights.update(aux)
    return elimination.count_cnf(cnf.clauses, weights, max_width=width)


def count_component(
    vs: list[int],
    formula: Formula,
    W: WeightFunction,
    *,
    cap: int,
    method: str,
    backend: str | None = None,
) -> complex:
    n = len(vs)
    if method == "enumerate" or (method == "auto" and n <= min(cap, AUTO_ENUMERATE_LIMIT)):
        if n > cap:
            raise ComponentTooLargeError(n, cap)
        return _enumerate(vs, formula, W, backend)
    if method in ("eliminate", "auto"):
        return _eliminate(vs, formula, W, min(cap, ELIMINATION_WIDTH_LIMIT))
    raise WmcError(f"unknown counting method {method!r}; expected one of {METHODS}")


def wmc_count(
    formula: Formula | CnfFormula,
    W: WeightFunction,
    *,
    cap: int | None = None,
    method: str = "enumerate",
    backend: str | None = None,
) -> complex:
    """Weighted model count of ``formula`` over all assignments of ``dom(W)``."""
    if isinstance(formula, CnfFormula):
        formula = formula.to_formula()
    if method not in METHODS:
        raise WmcError(f"unknown counting method {method!r}; expected one of {METHODS}")
    cap = default_cap() if cap is None else cap
    missing = variables(formula) - W.domain
    if missing:
        raise UnboundVariableError(min(missing))

    if method == "brute":
        vs = sorted(W)
        if len(vs) > cap:
            raise ComponentTooLargeError(len(vs), cap, "instance")
        if not vs:
            return complex(1) if formula != FALSE else 0j
        return _enumerate(vs, formula, W, backend)

    plan = decompose(formula, W)
    if plan.unsat:
        return 0j
    factors: list[tuple[int, complex]] = []
    for v, b in plan.fixed.items():
        factors.append((v, W.weight(v, b)))
    for v in plan.free:
        w0, w1 = W[v]
        factors.append((v, w0 + w1))
    for vs, f in plan.components:
        factors.append((vs[0], count_component(vs, f, W, cap=cap, method=method, backend=backend)))
    total = complex(1)
    for _, value in sorted(factors, key=lambda t: t[0]):
        total *= value
    return total


__all__ = [
    "DEFAULT_CAP",
    "Decomposition",
    "count_component",
    "decompose",
    "default_cap",
    "wmc_count",
    "wmc_top",
]
