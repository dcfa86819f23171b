import pytest

from diracwmc.errors import DiracTypeError
from diracwmc.lang import (
    SCALAR,
    Apply,
    Bra,
    Const,
    Entry,
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
    add,
    kron,
    mul,
    type_map,
    typecheck,
)


def test_basis_types():
    assert typecheck(Bra(0, 3)) == MatrixType(3, 1, 0)
    assert typecheck(Ket(2, 3)) == MatrixType(3, 0, 1)
    assert MatrixType(3, 1, 0).shape == (1, 3)


def test_compound_types():
    outer = MatMul(Ket(0, 2), Bra(1, 2))
    assert typecheck(outer) == MatrixType(2, 1, 1)
    assert typecheck(Kron(outer, Ket(0, 2))) == MatrixType(2, 1, 2)
    assert typecheck(Trans(Kron(outer, Ket(0, 2)))) == MatrixType(2, 2, 1)
    assert typecheck(Trace(outer)) == SCALAR
    assert typecheck(Entry(0, 1, outer)) == SCALAR
    assert typecheck(ScalMul(Const(2), outer)) == MatrixType(2, 1, 1)
    assert typecheck(Apply("conj", outer)) == MatrixType(2, 1, 1)
    assert typecheck(SAdd(Const(1), SMul(Const(2), Const(3j)))) == SCALAR
    assert str(MatrixType(2, 1, 2)) == "M(2, 1->2)"


@pytest.mark.parametrize(
    "expr, rule",
    [
        (Bra(2, 2), "Bra"),
        (Ket(0, 1), "Ket"),
        (Trace(Ket(0, 2)), "Trace"),
        (Entry(2, 0, MatMul(Ket(0, 2), Bra(0, 2))), "Entry"),
        (MatMul(Ket(0, 2), Ket(0, 2)), "MatMul"),
        (MatMul(Bra(0, 2), Ket(0, 3)), "MatMul"),
        (MatAdd(Ket(0, 2), Bra(0, 2)), "MatAdd"),
        (Kron(Ket(0, 2), Ket(0, 3)), "Kron"),
        (ScalMul(Ket(0, 2), Ket(0, 2)), "ScaMul"),
        (SMul(Const(1), Ket(0, 2)), "Mul"),
        (Trans(Const(1)), "Trans"),
    ],
)
def test_type_errors_name_the_rule(expr, rule):
    with pytest.raises(DiracTypeError) as info:
        typecheck(expr)
    assert info.value.rule == rule


def test_overloaded_operators_pick_the_node():
    k = Ket(0, 2)
    assert isinstance(mul(Const(2), Const(3)), SMul)
    assert isinstance(mul(Const(2), k), ScalMul)
    assert isinstance(mul(k, Const(2)), ScalMul)
    assert isinstance(mul(Bra(0, 2), k), MatMul)
    assert isinstance(add(Const(1), Const(2)), SAdd)
    assert isinstance(add(k, k), MatAdd)
    with pytest.raises(DiracTypeError):
        add(Const(1), k)
    assert isinstance(2 * k + k, MatAdd)


def test_kron_helper_folds_left():
    e = kron(Ket(0, 2), Ket(1, 2), Ket(0, 2))
    assert isinstance(e.left, Kron)
    assert typecheck(e) == MatrixType(2, 0, 3)


def test_type_map_covers_shared_nodes():
    k = Ket(0, 2)
    e = MatAdd(k, k)
    types = type_map(e)
    assert types[id(k)] == MatrixType(2, 0, 1)


def test_apply_rejects_unknown_function():
    with pytest.raises((DiracTypeError, ValueError)):
        typecheck(Apply("sqrt", Const(1)))


def test_deep_products_do_not_recurse():
    e = Ket(0, 2)
    for _ in range(3000):
        e = Kron(e, Ket(0, 2))
    assert typecheck(e).n == 3001
