"""Exact weighted counting of a CNF by variable elimination.

Used for components that are too large to enumerate but have a small
induced width (chains and rings such as Trotterized traces).
"""

from __future__ import annotations

import heapq
from typing import Mapping, Sequence

import numpy as np

from .errors import ComponentTooLargeError

# clauses longer than this are split with defined auxiliaries
_MAX_CLAUSE = 10


def _split_long(clauses: Sequence[Sequence[int]], next_var: int):
    out: list[tuple[int, ...]] = []
    aux: list[int] = []
    for clause in clauses:
        clause = tuple(clause)
        while len(clause) > _MAX_CLAUSE:
            head, rest = clause[: _MAX_CLAUSE - 1], clause[_MAX_CLAUSE - 1 :]
            a = next_var
            next_var += 1
            aux.append(a)
            # a <-> OR(rest); keeps a functionally determined
            out.append(head + (a,))
            for l in rest:
                out.append((a, -l))
            clause = (-a,) + rest
        out.append(clause)
    return out, aux


def elimination_order(var_sets: Sequence[Sequence[int]], variables: Sequence[int]) -> list[int]:
    """Greedy min-degree order on the primal graph (ties by variable id)."""
    adj: dict[int, set[int]] = {v: set() for v in variables}
    for vs in var_sets:
        for a in vs:
            adj[a].update(vs)
    for v in adj:
        adj[v].discard(v)
    heap = [(len(n), v) for v, n in adj.items()]
    heapq.heapify(heap)
    done: set[int] = set()
    order: list[int] = []
    while heap:
        deg, v = heapq.heappop(heap)
        if v in done or deg != len(adj[v]):
            continue
        done.add(v)
        order.append(v)
        nbrs = adj.pop(v)
        for u in nbrs:
            adj[u].discard(v)
            adj[u].update(nbrs - {u})
            heapq.heappush(heap, (len(adj[u]), u))
    return order


def count_cnf(
    clauses: Sequence[Sequence[int]],
    weights: Mapping[int, tuple[complex, complex]],
    max_width: int = 24,
) -> complex:
    """Weighted count of ``clauses`` summed over every variable in ``weights``.

    Raises :class:`ComponentTooLargeError` when an intermediate factor would
    span more than ``max_width`` variables.
    """
    weights = dict(weights)
    if any(len(c) == 0 for c in clauses):
        return 0j
    next_var = max([0, *weights, *(abs(l) for c in clauses for l in c)]) + 1
    clauses, aux = _split_long(clauses, next_var)
    for a in aux:
        weights[a] = (1, 1)

    factors: dict[int, tuple[tuple[int, ...], np.ndarray]] = {}
    by_var: dict[int, set[int]] = {v: set() for v in weights}
    clauses = [c for c in clauses if not any(-l in c for l in c)]
    for fid, clause in enumerate(clauses):
        vs = tuple(sorted({abs(l) for l in clause}))
        table = np.ones((2,) * len(vs), dtype=np.complex128)
        falsifying = {abs(l): 0 if l > 0 else 1 for l in clause}
        table[tuple(falsifying[v] for v in vs)] = 0
        factors[fid] = (vs, table)
        for v in vs:
            by_var[v].add(fid)
    next_fid = len(clauses)

    order = elimination_order([f[0] for f in factors.values()], sorted(weights))
    scalars: list[complex] = []
    for v in order:
        w0, w1 = weights[v]
        fids = sorted(by_var.pop(v))
        if not fids:
            scalars.append(complex(w0) + complex(w1))
            continue
        scope = sorted({u for fid in fids for u in factors[fid][0]})
        if len(scope) > max_width:
            raise ComponentTooLargeError(len(scope), max_width, "elimination factor")
        label = {u: i for i, u in enumerate(scope)}
        operands: list = [np.array([w0, w1], dtype=np.complex128), [label[v]]]
        for fid in fids:
            vs, table = factors.pop(fid)
            operands += [table, [label[u] for u in vs]]
            for u in vs:
                if u != v:
                    by_var[u].discard(fid)
        out_vars = tuple(u for u in scope if u != v)
        result = np.einsum(*operands, [label[u] for u in out_vars], optimize="greedy")
        if out_vars:
            factors[next_fid] = (out_vars, result)
            for u in out_vars:
                by_var[u].add(next_fid)
            next_fid += 1
        else:
            scalars.append(complex(result))
    total = complex(1)
    for s in scalars:
        total *= s
    for fid in sorted(factors):
        total *= complex(factors[fid][1])
    return total
