"""Dense evaluation of expressions and a dense matrix exponential.

This is the reference semantics the compiler is tested against, so it is
written with plain numpy linear algebra and shares nothing with the
counting pipeline.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DenseSizeError
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

MAX_DIM = 4096


def eval_value(e: Expr) -> complex | np.ndarray:
    """Scalar (``complex``) or matrix (2-d complex array) denoted by ``e``."""
    types = type_map(e)
    for t in types.values():
        if isinstance(t, MatrixType):
            rows, cols = t.shape
            if rows > MAX_DIM or cols > MAX_DIM:
                raise DenseSizeError(f"dense value of shape {rows}x{cols} exceeds the {MAX_DIM} cap")
    memo: dict[int, complex | np.ndarray] = {}
    for node in postorder(e):
        memo[id(node)] = _eval(node, lambda c: memo[id(c)])
    return memo[id(e)]


def _eval(e: Expr, go):
    if isinstance(e, Const):
        return complex(e.value)
    if isinstance(e, SMul):
        return go(e.left) * go(e.right)
    if isinstance(e, SAdd):
        return go(e.left) + go(e.right)
    if isinstance(e, Apply):
        v = go(e.arg)
        return np.conj(v) if e.f == CONJUGATE else v
    if isinstance(e, Bra):
        out = np.zeros((1, e.q), dtype=np.complex128)
        out[0, e.i] = 1
        return out
    if isinstance(e, Ket):
        out = np.zeros((e.q, 1), dtype=np.complex128)
        out[e.i, 0] = 1
        return out
    if isinstance(e, MatMul):
        return go(e.left) @ go(e.right)
    if isinstance(e, MatAdd):
        return go(e.left) + go(e.right)
    if isinstance(e, Kron):
        return np.kron(go(e.left), go(e.right))
    if isinstance(e, ScalMul):
        return go(e.scalar) * go(e.arg)
    if isinstance(e, Trans):
        return go(e.arg).T.copy()
    if isinstance(e, Trace):
        return complex(np.trace(go(e.arg)))
    if isinstance(e, Entry):
        return complex(go(e.arg)[e.i, e.j])
    raise TypeError(f"not an expression: {e!r}")


def is_diagonal(M: np.ndarray) -> bool:
    return not np.any(M - np.diag(np.diag(M)))


def dense_matexp(M: np.ndarray, is_diag: bool | None = None) -> np.ndarray:
    """``exp(M)`` by scaling and squaring of a truncated Taylor series.

    A diagonal input (detected, or promised through ``is_diag``) is
    exponentiated entrywise.
    """
    M = np.asarray(M, dtype=np.complex128)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"matrix exponential needs a square matrix, got shape {M.shape}")
    if M.shape[0] > MAX_DIM:
        raise DenseSizeError(f"matrix of size {M.shape[0]} exceeds the {MAX_DIM} cap")
    if is_diag or (is_diag is None and is_diagonal(M)):
        return np.diag(np.exp(np.diag(M)))
    norm = float(np.linalg.norm(M, 1))
    squarings = max(0, math.ceil(math.log2(norm))) if norm > 0 else 0
    A = M / (2.0**squarings)
    result = np.eye(M.shape[0], dtype=np.complex128)
    term = np.eye(M.shape[0], dtype=np.complex128)
    scaled = norm / (2.0**squarings)
    k = 0
    # with ||A|| <= 1 the remainder after the k-th term is below 2 ||A||^(k+1)/(k+1)!
    bound = 2.0
    while bound > 1e-17 * max(1.0, scaled):
        k += 1
        term = term @ A / k
        result += term
        bound = 2.0 * scaled ** (k + 1) / math.factorial(k + 1)
    for _ in range(squarings):
        result = result @ result
    return result


def format_number(x: complex, digits: int = 6) -> str:
    """Number text with ``digits`` significant digits, ``1.0`` style for integers."""
    x = complex(x)

    def real(v: float) -> str:
        s = f"{v:.{digits}g}"
        if s.lstrip("-").isdigit():
            s += ".0"
        return s

    if x.imag == 0:
        return real(x.real + 0.0)
    if x.real == 0:
        return real(x.imag) + "i"
    im = real(abs(x.imag))
    return f"{real(x.real)}{'-' if x.imag < 0 else '+'}{im}i"


def format_matrix(M: np.ndarray, digits: int = 6) -> str:
    """Bracketed, one row per line::

        [ 0.0  1.0
          0.0  0.0 ]
    """
    M = np.atleast_2d(M)
    rows = ["  ".join(format_number(v, digits) for v in row) for row in M]
    return "[ " + "\n  ".join(rows) + " ]"


def format_value(v, digits: int = 6) -> str:
    if isinstance(v, np.ndarray):
        return format_matrix(v, digits)
    return format_number(v, digits)


__all__ = [
    "MAX_DIM",
    "dense_matexp",
    "eval_value",
    "format_matrix",
    "format_number",
    "format_value",
    "is_diagonal",
]
