"""Compilation of expressions into weighted model counting representations.

A scalar is represented by ``ScalarRep(phi, W)`` with value ``WMC(phi, W)``.
A ``q**n x q**m`` matrix is represented by ``MatrixRep(phi, W, x, y, q)``
whose entry ``(i, j)`` is ``WMC(phi & (x = j) & (y = i), W)``; ``x`` is the
input string (length m) and ``y`` the output string (length n).  The two
strings may share variables, which makes the matrix diagonal.

All rule functions allocate new variables from one :class:`VarPool`, so a
compilation is deterministic given the pool's starting point.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .counting import wmc_count
from .encodings import DEFAULT_KIND, EncodingString, QStateEncoding, normalize_kind
from .errors import DenseSizeError, EncodingError, WmcError
from .lang import (
    CONJUGATE,
    Apply,
    Bra,
    Const,
    Entry,
    Expr,
    Ket,
    Kron,
    MatAdd,
    MatMul,
    MatrixType,
    SAdd,
    ScalMul,
    SMul,
    Trace,
    Trans,
    postorder,
    type_map,
)
from .logic import FALSE, Formula, Lit, VarPool, WeightFunction, conj, iff, implies, neg, substitute, variables
from .values import MAX_DIM

# |W(v,0) + W(v,1)| below this fraction of the weights counts as cancelling
_CANCEL_TOL = 1e-12


@dataclass(frozen=True)
class ScalarRep:
    phi: Formula
    W: WeightFunction

    def value(self, **kw) -> complex:
        return rep_scalar_value(self, **kw)


@dataclass(frozen=True)
class MatrixRep:
    phi: Formula
    W: WeightFunction
    x: EncodingString
    y: EncodingString
    q: int
    kind: str = DEFAULT_KIND

    def __post_init__(self):
        for s in (self.x, self.y):
            for d in s:
                if d.q != self.q or d.kind != self.kind:
                    raise EncodingError(f"string digit {d.kind}/q={d.q} does not match {self.kind}/q={self.q}")

    @property
    def shape(self) -> tuple[int, int]:
        return self.q ** len(self.y), self.q ** len(self.x)

    def entry(self, i: int, j: int, **kw) -> complex:
        return rep_matrix_entry(self, i, j, **kw)

    def value(self, **kw) -> np.ndarray:
        return rep_matrix_value(self, **kw)


Rep = Union[ScalarRep, MatrixRep]


# -- helpers ---------------------------------------------------------------


def _rename_rep(r: Rep, mapping: dict[int, int]) -> Rep:
    phi = substitute(r.phi, mapping)
    W = r.W.rename(mapping)
    if isinstance(r, ScalarRep):
        return ScalarRep(phi, W)
    return MatrixRep(phi, W, r.x.renamed(mapping), r.y.renamed(mapping), r.q, r.kind)


def fresh_copy(r: Rep, pool: VarPool) -> Rep:
    """Same representation with every variable replaced by a fresh one."""
    return _rename_rep(r, {v: pool.fresh() for v in sorted(r.W)})


def _disjoint(left: Rep, right: Rep, pool: VarPool) -> Rep:
    """``right`` with variables shared with ``left`` renamed apart."""
    clash = left.W.domain & right.W.domain
    if not clash:
        return right
    return _rename_rep(right, {v: pool.fresh() for v in sorted(clash)})


def _cancels(w0: complex, w1: complex) -> bool:
    return abs(w0 + w1) <= _CANCEL_TOL * max(abs(w0), abs(w1))


def normalize_nonzero_top(r: Rep, pool: VarPool) -> Rep:
    """Equivalent representation whose weight function has a nonzero top count."""
    W = r.W
    if any(w0 == 0 and w1 == 0 for w0, w1 in W.values()):
        if isinstance(r, ScalarRep):
            return ScalarRep(FALSE, WeightFunction())
        x = EncodingString.new(r.q, r.kind, len(r.x), pool)
        y = EncodingString.new(r.q, r.kind, len(r.y), pool)
        return MatrixRep(FALSE, WeightFunction.constant(x.vars + y.vars, 1), x, y, r.q, r.kind)
    links: list[Formula] = []
    updates: dict[int, tuple[complex, complex]] = {}
    for v in sorted(W):
        w0, w1 = W[v]
        if _cancels(w0, w1):
            v2 = pool.fresh()
            links.append(iff(Lit(v), Lit(v2)))
            updates[v] = (2 * w0, w1)
            updates[v2] = (0.5, 1)
    if not links:
        return r
    phi = conj(r.phi, *links)
    W = W.with_entries(updates)
    if isinstance(r, ScalarRep):
        return ScalarRep(phi, W)
    return MatrixRep(phi, W, r.x, r.y, r.q, r.kind)


# -- scalar rules -----------------------------------------------------------


def rep_const(alpha: complex, pool: VarPool) -> ScalarRep:
    v = pool.fresh()
    return ScalarRep(Lit(v), WeightFunction.constant([v], alpha))


def rep_smul(a: ScalarRep, b: ScalarRep, pool: VarPool) -> ScalarRep:
    b = _disjoint(a, b, pool)
    return ScalarRep(conj(a.phi, b.phi), a.W.union(b.W))


def _control(a: Rep, b: Rep, pool: VarPool) -> tuple[int, WeightFunction]:
    c = pool.fresh()
    # c false selects the left operand
    return c, WeightFunction({c: (1 / b.W.top(), 1 / a.W.top())})


def rep_sadd(a: ScalarRep, b: ScalarRep, pool: VarPool) -> ScalarRep:
    a = normalize_nonzero_top(a, pool)
    b = _disjoint(a, normalize_nonzero_top(b, pool), pool)
    c, Wc = _control(a, b, pool)
    phi = conj(implies(neg(Lit(c)), a.phi), implies(Lit(c), b.phi))
    return ScalarRep(phi, a.W.union(b.W).union(Wc))


def _endo(f: str):
    if f == CONJUGATE:
        return lambda w: w.conjugate()
    return lambda w: w


def rep_apply(f: str, r: Rep) -> Rep:
    W = r.W.map(_endo(f))
    if isinstance(r, ScalarRep):
        return ScalarRep(r.phi, W)
    return MatrixRep(r.phi, W, r.x, r.y, r.q, r.kind)


def rep_trace(r: MatrixRep) -> ScalarRep:
    if len(r.x) != len(r.y):
        raise WmcError("trace of a non-square representation")
    return ScalarRep(conj(r.phi, r.x.equiv(r.y), r.x.validity()), r.W)


def rep_entry(i: int, j: int, r: MatrixRep) -> ScalarRep:
    return ScalarRep(conj(r.phi, r.x.equals(j), r.y.equals(i)), r.W)


# -- matrix rules -----------------------------------------------------------


def _basis(i: int, q: int, kind: str, pool: VarPool) -> tuple[Formula, WeightFunction, EncodingString]:
    v = QStateEncoding.new(q, kind, pool)
    return v.equals(i), WeightFunction.constant(v.vars, 1), EncodingString((v,))


def rep_bra(i: int, q: int, pool: VarPool, kind: str = DEFAULT_KIND) -> MatrixRep:
    kind = normalize_kind(kind)
    phi, W, x = _basis(i, q, kind, pool)
    return MatrixRep(phi, W, x, EncodingString(), q, kind)


def rep_ket(i: int, q: int, pool: VarPool, kind: str = DEFAULT_KIND) -> MatrixRep:
    kind = normalize_kind(kind)
    phi, W, y = _basis(i, q, kind, pool)
    return MatrixRep(phi, W, EncodingString(), y, q, kind)


def _check_compatible(a: MatrixRep, b: MatrixRep) -> None:
    if a.q != b.q or a.kind != b.kind:
        raise EncodingError(f"cannot combine {a.kind}/q={a.q} with {b.kind}/q={b.q}")


def rep_matmul(m2: MatrixRep, m1: MatrixRep, pool: VarPool) -> MatrixRep:
    """Product ``m2 . m1``: the input string of ``m2`` is joined to the output of ``m1``."""
    _check_compatible(m1, m2)
    if len(m2.x) != len(m1.y):
        raise WmcError(f"cannot compose: {len(m2.x)} input digits after {len(m1.y)} output digits")
    mapping: dict[int, int] = {}
    for d2, d1 in zip(m2.x, m1.y):
        mapping.update(zip(d2.vars, d1.vars))
    for v in sorted(m2.W):
        if v not in mapping and v in m1.W:
            mapping[v] = pool.fresh()
    m2 = _rename_rep(m2, mapping)
    phi = conj(m1.phi, m2.phi, m1.y.validity())
    return MatrixRep(phi, m1.W.product(m2.W), m1.x, m2.y, m1.q, m1.kind)


def rep_matadd(a: MatrixRep, b: MatrixRep, pool: VarPool) -> MatrixRep:
    _check_compatible(a, b)
    if len(a.x) != len(b.x) or len(a.y) != len(b.y):
        raise WmcError("cannot add representations of different shapes")
    a = normalize_nonzero_top(a, pool)
    b = _disjoint(a, normalize_nonzero_top(b, pool), pool)
    c, Wc = _control(a, b, pool)
    x = EncodingString.new(a.q, a.kind, len(a.x), pool)
    y = EncodingString.new(a.q, a.kind, len(a.y), pool)
    left = conj(x.equiv(a.x), y.equiv(a.y), a.phi)
    right = conj(x.equiv(b.x), y.equiv(b.y), b.phi)
    phi = conj(implies(neg(Lit(c)), left), implies(Lit(c), right))
    W = a.W.union(b.W).union(Wc).union(WeightFunction.constant(x.vars + y.vars, 1))
    return MatrixRep(phi, W, x, y, a.q, a.kind)


def rep_kron(m1: MatrixRep, m2: MatrixRep, pool: VarPool) -> MatrixRep:
    """``m1 (x) m2``; the digits of ``m1`` become the more significant ones."""
    _check_compatible(m1, m2)
    m2 = _disjoint(m1, m2, pool)
    return MatrixRep(conj(m1.phi, m2.phi), m1.W.union(m2.W), m2.x + m1.x, m2.y + m1.y, m1.q, m1.kind)


def rep_scalmul(s: ScalarRep, m: MatrixRep, pool: VarPool) -> MatrixRep:
    s = _disjoint(m, s, pool)
    return MatrixRep(conj(m.phi, s.phi), m.W.union(s.W), m.x, m.y, m.q, m.kind)


def rep_trans(m: MatrixRep) -> MatrixRep:
    return MatrixRep(m.phi, m.W, m.y, m.x, m.q, m.kind)


# -- compiler ---------------------------------------------------------------


def compile_expr(
    e: Expr,
    kind: str = DEFAULT_KIND,
    pool: VarPool | None = None,
    *,
    early_eval: bool = False,
    method: str = "auto",
) -> Rep:
    """Representation of the typed expression ``e``.

    Shared subexpressions are compiled once and then copied with fresh
    variables.  With ``early_eval`` every compound scalar subexpression is
    counted right away and replaced by a constant.
    """
    kind = normalize_kind(kind)
    pool = pool or VarPool(1)
    types = type_map(e)
    results: dict[int, Rep] = {}
    used: set[int] = set()

    def go(e: Expr) -> Rep:
        # the first consumer takes the representation, later ones get fresh copies
        r = results[id(e)]
        if id(e) in used:
            return fresh_copy(r, pool)
        used.add(id(e))
        return r

    def rule(e: Expr) -> Rep:
        if isinstance(e, Const):
            return rep_const(e.value, pool)
        if isinstance(e, SMul):
            return rep_smul(go(e.left), go(e.right), pool)
        if isinstance(e, SAdd):
            return rep_sadd(go(e.left), go(e.right), pool)
        if isinstance(e, Apply):
            return rep_apply(e.f, go(e.arg))
        if isinstance(e, Trace):
            return rep_trace(go(e.arg))
        if isinstance(e, Entry):
            return rep_entry(e.i, e.j, go(e.arg))
        if isinstance(e, Bra):
            return rep_bra(e.i, e.q, pool, kind)
        if isinstance(e, Ket):
            return rep_ket(e.i, e.q, pool, kind)
        if isinstance(e, MatMul):
            m1 = go(e.right)
            return rep_matmul(go(e.left), m1, pool)
        if isinstance(e, MatAdd):
            return rep_matadd(go(e.left), go(e.right), pool)
        if isinstance(e, Kron):
            return rep_kron(go(e.left), go(e.right), pool)
        if isinstance(e, ScalMul):
            return rep_scalmul(go(e.scalar), go(e.arg), pool)
        if isinstance(e, Trans):
            return rep_trans(go(e.arg))
        raise TypeError(f"not an expression: {e!r}")

    for node in postorder(e):
        r = rule(node)
        if early_eval and isinstance(r, ScalarRep) and not isinstance(node, Const):
            r = rep_const(rep_scalar_value(r, method=method), pool)
        results[id(node)] = r
    r = results[id(e)]
    t = types[id(e)]
    if isinstance(t, MatrixType) and isinstance(r, MatrixRep):
        assert (len(r.x), len(r.y), r.q) == (t.m, t.n, t.q)
    return r


compile = compile_expr


# -- evaluation ------------------------------------------------------------


def rep_scalar_value(r: ScalarRep, *, method: str = "auto", cap: int | None = None, backend: str | None = None) -> complex:
    return wmc_count(r.phi, r.W, method=method, cap=cap, backend=backend)


def rep_matrix_entry(
    r: MatrixRep, i: int, j: int, *, method: str = "auto", cap: int | None = None, backend: str | None = None
) -> complex:
    rows, cols = r.shape
    if not (0 <= i < rows and 0 <= j < cols):
        raise IndexError(f"entry ({i}, {j}) out of range for a {rows}x{cols} matrix")
    return wmc_count(conj(r.phi, r.x.equals(j), r.y.equals(i)), r.W, method=method, cap=cap, backend=backend)


def rep_matrix_value(
    r: MatrixRep, *, method: str = "auto", cap: int | None = None, backend: str | None = None
) -> np.ndarray:
    rows, cols = r.shape
    if rows > MAX_DIM or cols > MAX_DIM:
        raise DenseSizeError(f"matrix of shape {rows}x{cols} exceeds the {MAX_DIM} cap")
    out = np.empty((rows, cols), dtype=np.complex128)
    for i in range(rows):
        for j in range(cols):
            out[i, j] = rep_matrix_entry(r, i, j, method=method, cap=cap, backend=backend)
    return out


def rep_value(r: Rep, **kw):
    return rep_scalar_value(r, **kw) if isinstance(r, ScalarRep) else rep_matrix_value(r, **kw)


def rep_size(r: Rep) -> tuple[int, int]:
    """Number of variables in the weight function and in the formula."""
    return len(r.W), len(variables(r.phi))


__all__ = [
    "MatrixRep",
    "Rep",
    "ScalarRep",
    "compile",
    "compile_expr",
    "fresh_copy",
    "normalize_nonzero_top",
    "rep_apply",
    "rep_bra",
    "rep_const",
    "rep_entry",
    "rep_ket",
    "rep_kron",
    "rep_matadd",
    "rep_matmul",
    "rep_matrix_entry",
    "rep_matrix_value",
    "rep_sadd",
    "rep_scalar_value",
    "rep_scalmul",
    "rep_smul",
    "rep_trace",
    "rep_trans",
    "rep_value",
]
