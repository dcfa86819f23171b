import itertools

import pytest
from conftest import random_formula, truth
from hypothesis import given, settings
from hypothesis import strategies as st

from diracwmc.errors import UnboundVariableError, WmcError
from diracwmc.logic import (
    FALSE,
    TRUE,
    And,
    CnfFormula,
    Lit,
    VarPool,
    WeightFunction,
    all_assignments,
    condition,
    conj,
    disj,
    evaluate,
    iff,
    implies,
    lit,
    neg,
    substitute,
    top_conjuncts,
    variables,
    wmc_top,
)


def test_smart_constructors_fold_constants():
    a = Lit(1)
    assert conj(a, TRUE) == a
    assert conj(a, FALSE) == FALSE
    assert conj() == TRUE
    assert disj(a, TRUE) == TRUE
    assert disj() == FALSE
    assert implies(FALSE, a) == TRUE
    assert implies(a, FALSE) == Lit(1, False)
    assert iff(TRUE, a) == a
    assert iff(a, FALSE) == Lit(1, False)
    assert neg(neg(a)) == a


def test_conj_flattens():
    f = conj(conj(Lit(1), Lit(2)), Lit(3))
    assert isinstance(f, And) and len(f.children) == 3
    assert top_conjuncts(f) == [Lit(1), Lit(2), Lit(3)]
    assert top_conjuncts(TRUE) == []


def test_lit_from_signed_int():
    assert lit(-3) == Lit(3, False)
    with pytest.raises(WmcError):
        lit(0)


def test_evaluate_needs_every_variable():
    with pytest.raises(UnboundVariableError):
        evaluate(Lit(4), {1: True})


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_evaluate_matches_reference(seed):
    import random

    rng = random.Random(seed)
    f = random_formula(rng, [1, 2, 3, 4], 4)
    for tau in all_assignments([1, 2, 3, 4]):
        assert evaluate(f, tau) == truth(f, tau)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.dictionaries(st.integers(1, 4), st.booleans(), max_size=3))
def test_condition_agrees_with_evaluation(seed, fixed):
    import random

    rng = random.Random(seed)
    f = random_formula(rng, [1, 2, 3, 4], 4)
    g = condition(f, fixed)
    assert variables(g).isdisjoint(fixed)
    for tau in all_assignments([1, 2, 3, 4]):
        if all(tau[v] == b for v, b in fixed.items()):
            assert truth(g, tau) == truth(f, tau)


def test_substitute_renames():
    f = iff(Lit(1), Lit(2, False))
    assert substitute(f, {1: 7}) == iff(Lit(7), Lit(2, False))
    assert variables(substitute(f, {1: 5, 2: 6})) == {5, 6}


def test_var_pool():
    p = VarPool(3)
    assert p.fresh() == 3
    assert p.fresh_many(2) == [4, 5]
    p.reserve(10)
    assert p.fresh() == 11
    with pytest.raises(WmcError):
        VarPool(0)


def test_weight_function_basics():
    W = WeightFunction({1: (1, 2), 2: (0.5, 0.5)})
    assert W.weight(1, True) == 2
    assert W.domain == {1, 2}
    with pytest.raises(UnboundVariableError):
        W[3]
    assert wmc_top(W) == 3
    assert W.top() == 3


def test_weight_union_and_product():
    a = WeightFunction({1: (1, 2)})
    b = WeightFunction({1: (3, 4), 2: (1, 1)})
    with pytest.raises(WmcError):
        a.union(b)
    assert a.union(WeightFunction({2: (5, 6)}))[2] == (5, 6)
    p = a.product(b)
    assert p[1] == (3, 8) and p[2] == (1, 1)


def test_weight_rename_rejects_merging():
    W = WeightFunction({1: (1, 1), 2: (1, 1)})
    with pytest.raises(WmcError):
        W.rename({1: 2})
    assert W.rename({1: 9}).domain == {2, 9}


def test_cnf_formula_validates_literals():
    with pytest.raises(WmcError):
        CnfFormula(2, ((1, 3),))
    f = CnfFormula(2, ((1, -2), (2,)))
    assert f.variables() == {1, 2}
    models = [t for t in itertools.product((False, True), repeat=2) if truth(f.to_formula(), {1: t[0], 2: t[1]})]
    assert models == [(True, True)]
    assert CnfFormula(1, ((),)).to_formula() == FALSE
