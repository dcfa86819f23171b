"""Shared oracles and random generators.

The oracles here deliberately avoid the package's counting and evaluation
code: WMC is summed over ``itertools.product`` with a tiny recursive
evaluator, and Kronecker products are built entry by entry.
"""

from __future__ import annotations

import itertools
import random

import numpy as np
import pytest

from diracwmc import lang
from diracwmc.logic import And, Const, Iff, Implies, Lit, Not, Or, WeightFunction


def truth(f, tau) -> bool:
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Lit):
        return tau[f.var] == f.positive
    if isinstance(f, Not):
        return not truth(f.child, tau)
    if isinstance(f, And):
        return all(truth(a, tau) for a in f.children)
    if isinstance(f, Or):
        return any(truth(a, tau) for a in f.children)
    if isinstance(f, Implies):
        return (not truth(f.a, tau)) or truth(f.b, tau)
    if isinstance(f, Iff):
        return truth(f.a, tau) == truth(f.b, tau)
    raise TypeError(f)


def brute_wmc(f, W) -> complex:
    """Sum over every assignment of ``dom(W)``."""
    vs = sorted(W)
    total = 0j
    for bits in itertools.product((False, True), repeat=len(vs)):
        tau = dict(zip(vs, bits))
        if truth(f, tau):
            w = 1 + 0j
            for v, b in tau.items():
                w *= W[v][1] if b else W[v][0]
            total += w
    return total


def kron_oracle(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Kronecker product from the index formula, first factor most significant."""
    ra, ca = A.shape
    rb, cb = B.shape
    out = np.zeros((ra * rb, ca * cb), dtype=np.complex128)
    for i in range(ra * rb):
        for j in range(ca * cb):
            out[i, j] = A[i // rb, j // cb] * B[i % rb, j % cb]
    return out


def random_formula(rng: random.Random, vs: list[int], depth: int):
    if depth == 0 or rng.random() < 0.25:
        r = rng.random()
        if r < 0.05:
            return Const(rng.random() < 0.5)
        return Lit(rng.choice(vs), rng.random() < 0.5)
    op = rng.choice(("not", "and", "or", "implies", "iff"))
    if op == "not":
        return Not(random_formula(rng, vs, depth - 1))
    a = random_formula(rng, vs, depth - 1)
    b = random_formula(rng, vs, depth - 1)
    if op == "and":
        return And((a, b))
    if op == "or":
        return Or((a, b))
    if op == "implies":
        return Implies(a, b)
    return Iff(a, b)


WEIGHT_CHOICES = (0.5, 1.0, 2.0, -1.0, 1.5, 0.25, 3.0, 1j, 1 - 1j, -0.5 + 2j)


def random_weights(rng: random.Random, vs, complex_ok: bool = True) -> WeightFunction:
    choices = WEIGHT_CHOICES if complex_ok else WEIGHT_CHOICES[:7]
    return WeightFunction({v: (rng.choice(choices), rng.choice(choices)) for v in vs})


CONSTS = (1, 2, -1, 0.5, 3, 1j, 2 - 1j, 0, -0.25 + 0.5j)


def random_scalar(rng: random.Random, q: int, depth: int) -> lang.Expr:
    if depth == 0 or rng.random() < 0.2:
        return lang.Const(rng.choice(CONSTS))
    op = rng.choice(("mul", "add", "tr", "entry", "conj"))
    if op == "mul":
        return lang.SMul(random_scalar(rng, q, depth - 1), random_scalar(rng, q, depth - 1))
    if op == "add":
        return lang.SAdd(random_scalar(rng, q, depth - 1), random_scalar(rng, q, depth - 1))
    if op == "conj":
        return lang.Apply("conj", random_scalar(rng, q, depth - 1))
    if op == "tr":
        k = rng.randint(0, 2)
        return lang.Trace(random_matrix(rng, q, k, k, depth - 1))
    m, n = rng.randint(0, 2), rng.randint(0, 2)
    return lang.Entry(rng.randrange(q**n), rng.randrange(q**m), random_matrix(rng, q, m, n, depth - 1))


def basis_matrix(rng: random.Random, q: int, m: int, n: int) -> lang.Expr:
    """``|i><j|`` with ``n`` output and ``m`` input digits."""
    kets = [lang.Ket(rng.randrange(q), q) for _ in range(n)]
    bras = [lang.Bra(rng.randrange(q), q) for _ in range(m)]
    if not kets and not bras:
        return lang.MatMul(lang.Bra(0, q), lang.Ket(0, q))
    if not bras:
        return lang.kron(*kets)
    if not kets:
        return lang.kron(*bras)
    return lang.MatMul(lang.kron(*kets), lang.kron(*bras))


def random_matrix(rng: random.Random, q: int, m: int, n: int, depth: int) -> lang.Expr:
    """Random expression of type ``M(q, m -> n)``."""
    if depth == 0 or rng.random() < 0.2:
        return basis_matrix(rng, q, m, n)
    ops = ["mul", "add", "scal", "trans", "conj"]
    if m + n >= 1:
        ops.append("kron")
    op = rng.choice(ops)
    d = depth - 1
    if op == "mul":
        k = rng.randint(0, 2)
        return lang.MatMul(random_matrix(rng, q, k, n, d), random_matrix(rng, q, m, k, d))
    if op == "add":
        return lang.MatAdd(random_matrix(rng, q, m, n, d), random_matrix(rng, q, m, n, d))
    if op == "scal":
        return lang.ScalMul(random_scalar(rng, q, d), random_matrix(rng, q, m, n, d))
    if op == "trans":
        return lang.Trans(random_matrix(rng, q, n, m, d))
    if op == "conj":
        return lang.Apply("conj", random_matrix(rng, q, m, n, d))
    m1, n1 = rng.randint(0, m), rng.randint(0, n)
    return lang.Kron(random_matrix(rng, q, m1, n1, d), random_matrix(rng, q, m - m1, n - n1, d))


def random_typed_expr(seed: int, max_depth: int = 4) -> lang.Expr:
    rng = random.Random(seed)
    q = rng.choice((2, 3))
    depth = rng.randint(1, max_depth)
    if rng.random() < 0.3:
        return random_scalar(rng, q, depth)
    return random_matrix(rng, q, rng.randint(0, 2), rng.randint(0, 2), depth)


def close(a, b, rel: float = 1e-9) -> bool:
    """Entrywise ``|a - b| <= rel * max(1, |b|)``."""
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    return a.shape == b.shape and bool(np.all(np.abs(a - b) <= rel * np.maximum(1.0, np.abs(b))))


@pytest.fixture
def rng():
    return random.Random(12345)
