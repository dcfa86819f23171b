"""Abstract syntax, types and type checker for the Dirac expression language.

Scalars have type :data:`SCALAR`; a ``q**n x q**m`` matrix has type
``MatrixType(q, m, n)`` (read: a map from m input subspaces to n output
subspaces).  ``MatMul(a, b)`` is the product ``a . b``, so ``b`` is applied
first.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .errors import DiracTypeError

IDENTITY = "id"
CONJUGATE = "conj"
ENDOMORPHISMS = (IDENTITY, CONJUGATE)


@dataclass(frozen=True)
class ScalarType:
    def __str__(self) -> str:
        return "S"


SCALAR = ScalarType()


@dataclass(frozen=True)
class MatrixType:
    q: int
    m: int
    n: int

    def __post_init__(self):
        if self.q < 2 or self.m < 0 or self.n < 0:
            raise ValueError(f"invalid matrix type M({self.q}, {self.m}->{self.n})")

    @property
    def shape(self) -> tuple[int, int]:
        return self.q**self.n, self.q**self.m

    def __str__(self) -> str:
        return f"M({self.q}, {self.m}->{self.n})"


ExprType = Union[ScalarType, MatrixType]


class Expr:
    """Base class of all expression nodes.

    The arithmetic operators build expressions: ``a * b`` picks the scalar,
    scalar-matrix or matrix product from the operand sorts, ``a + b`` adds.
    """

    __slots__ = ()

    @property
    def is_scalar(self) -> bool:
        raise NotImplementedError

    def __mul__(self, other):
        return mul(self, _lift(other))

    def __rmul__(self, other):
        return mul(_lift(other), self)

    def __add__(self, other):
        return add(self, _lift(other))

    def __radd__(self, other):
        return add(_lift(other), self)

    def __str__(self) -> str:
        from .parser import to_text

        return to_text(self)


def _lift(x) -> "Expr":
    if isinstance(x, Expr):
        return x
    if isinstance(x, (int, float, complex)):
        return Const(complex(x))
    return NotImplemented


class ScalarExpr(Expr):
    __slots__ = ()

    @property
    def is_scalar(self) -> bool:
        return True


class MatrixExpr(Expr):
    __slots__ = ()

    @property
    def is_scalar(self) -> bool:
        return False


@dataclass(frozen=True, eq=True)
class Const(ScalarExpr):
    value: complex

    def __post_init__(self):
        object.__setattr__(self, "value", complex(self.value))


@dataclass(frozen=True)
class SMul(ScalarExpr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class SAdd(ScalarExpr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Trace(ScalarExpr):
    arg: Expr


@dataclass(frozen=True)
class Entry(ScalarExpr):
    i: int
    j: int
    arg: Expr


@dataclass(frozen=True)
class Bra(MatrixExpr):
    i: int
    q: int


@dataclass(frozen=True)
class Ket(MatrixExpr):
    i: int
    q: int


@dataclass(frozen=True)
class MatMul(MatrixExpr):
    """``left . right``; ``right`` is applied first."""

    left: Expr
    right: Expr


@dataclass(frozen=True)
class MatAdd(MatrixExpr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Kron(MatrixExpr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class ScalMul(MatrixExpr):
    scalar: Expr
    arg: Expr


@dataclass(frozen=True)
class Trans(MatrixExpr):
    arg: Expr


@dataclass(frozen=True)
class Apply(Expr):
    """Entrywise field endomorphism; its sort is that of ``arg``."""

    f: str
    arg: Expr

    def __post_init__(self):
        if self.f not in ENDOMORPHISMS:
            raise ValueError(f"unsupported endomorphism {self.f!r}; expected one of {ENDOMORPHISMS}")

    @property
    def is_scalar(self) -> bool:
        return self.arg.is_scalar


def mul(a: Expr, b: Expr) -> Expr:
    """Product node chosen from the operand sorts."""
    if a.is_scalar and b.is_scalar:
        return SMul(a, b)
    if a.is_scalar:
        return ScalMul(a, b)
    if b.is_scalar:
        return ScalMul(b, a)
    return MatMul(a, b)


def add(a: Expr, b: Expr) -> Expr:
    if a.is_scalar != b.is_scalar:
        raise DiracTypeError("cannot add a scalar and a matrix", rule="Add")
    return SAdd(a, b) if a.is_scalar else MatAdd(a, b)


def conj(e: Expr) -> Apply:
    return Apply(CONJUGATE, e)


def kron(*es: Expr) -> Expr:
    out = es[0]
    for e in es[1:]:
        out = Kron(out, e)
    return out


def children(e: Expr) -> tuple[Expr, ...]:
    if isinstance(e, (SMul, SAdd, MatMul, MatAdd, Kron)):
        return (e.left, e.right)
    if isinstance(e, ScalMul):
        return (e.scalar, e.arg)
    if isinstance(e, (Trace, Entry, Trans, Apply)):
        return (e.arg,)
    return ()


def _expect_matrix(t: ExprType, rule: str, e: Expr) -> MatrixType:
    if not isinstance(t, MatrixType):
        raise DiracTypeError(f"expected a matrix, got a scalar in {type(e).__name__}", rule, e)
    return t


def _expect_scalar(t: ExprType, rule: str, e: Expr) -> None:
    if not isinstance(t, ScalarType):
        raise DiracTypeError(f"expected a scalar, got {t} in {type(e).__name__}", rule, e)


def postorder(e: Expr) -> list[Expr]:
    """Every distinct node of ``e`` (by identity), children before parents.

    Iterative, so arbitrarily deep expressions are fine.
    """
    out: list[Expr] = []
    seen: set[int] = set()
    stack: list[tuple[Expr, bool]] = [(e, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            out.append(node)
            continue
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.append((node, True))
        for c in reversed(children(node)):
            if id(c) not in seen:
                stack.append((c, False))
    return out


def type_map(e: Expr) -> dict[int, ExprType]:
    """Types of every node of ``e``, keyed by ``id(node)``."""
    memo: dict[int, ExprType] = {}
    for node in postorder(e):
        memo[id(node)] = _rule(node, lambda c: memo[id(c)])
    return memo


def typecheck(e: Expr) -> ExprType:
    """Return the unique type of ``e`` or raise :class:`DiracTypeError`."""
    return type_map(e)[id(e)]


def _rule(e: Expr, go) -> ExprType:
    if isinstance(e, Const):
        return SCALAR
    if isinstance(e, (SMul, SAdd)):
        rule = "Mul" if isinstance(e, SMul) else "Add"
        _expect_scalar(go(e.left), rule, e)
        _expect_scalar(go(e.right), rule, e)
        return SCALAR
    if isinstance(e, Apply):
        return go(e.arg)
    if isinstance(e, (Bra, Ket)):
        rule = type(e).__name__
        if e.q < 2:
            raise DiracTypeError(f"base size must be at least 2, got {e.q}", rule, e)
        if not 0 <= e.i < e.q:
            raise DiracTypeError(f"index {e.i} out of range for base {e.q}", rule, e)
        return MatrixType(e.q, 1, 0) if isinstance(e, Bra) else MatrixType(e.q, 0, 1)
    if isinstance(e, Trace):
        t = _expect_matrix(go(e.arg), "Trace", e)
        if t.m != t.n:
            raise DiracTypeError(f"trace of a non-square matrix {t}", "Trace", e)
        return SCALAR
    if isinstance(e, Entry):
        t = _expect_matrix(go(e.arg), "Entry", e)
        rows, cols = t.shape
        if not (0 <= e.i < rows and 0 <= e.j < cols):
            raise DiracTypeError(f"entry ({e.i}, {e.j}) out of range for a {rows}x{cols} matrix", "Entry", e)
        return SCALAR
    if isinstance(e, MatMul):
        t2 = _expect_matrix(go(e.left), "MatMul", e)
        t1 = _expect_matrix(go(e.right), "MatMul", e)
        if t1.q != t2.q:
            raise DiracTypeError(f"base sizes differ: {t2.q} vs {t1.q}", "MatMul", e)
        if t1.n != t2.m:
            raise DiracTypeError(f"cannot compose {t2} after {t1}", "MatMul", e)
        return MatrixType(t1.q, t1.m, t2.n)
    if isinstance(e, MatAdd):
        t1 = _expect_matrix(go(e.left), "MatAdd", e)
        t2 = _expect_matrix(go(e.right), "MatAdd", e)
        if t1 != t2:
            raise DiracTypeError(f"cannot add {t1} and {t2}", "MatAdd", e)
        return t1
    if isinstance(e, Kron):
        t1 = _expect_matrix(go(e.left), "Kron", e)
        t2 = _expect_matrix(go(e.right), "Kron", e)
        if t1.q != t2.q:
            raise DiracTypeError(f"base sizes differ: {t1.q} vs {t2.q}", "Kron", e)
        return MatrixType(t1.q, t1.m + t2.m, t1.n + t2.n)
    if isinstance(e, ScalMul):
        _expect_scalar(go(e.scalar), "ScaMul", e)
        return _expect_matrix(go(e.arg), "ScaMul", e)
    if isinstance(e, Trans):
        t = _expect_matrix(go(e.arg), "Trans", e)
        return MatrixType(t.q, t.n, t.m)
    raise DiracTypeError(f"not an expression: {e!r}")
