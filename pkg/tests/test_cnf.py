import random

from conftest import brute_wmc, random_formula, truth
from hypothesis import given, settings
from hypothesis import strategies as st

from diracwmc.cnf import to_cnf
from diracwmc.counting import wmc_count
from diracwmc.logic import FALSE, TRUE, Lit, VarPool, WeightFunction, all_assignments, iff


def _count_models(cnf, vs):
    f = cnf.to_formula()
    return sum(1 for tau in all_assignments(vs) if truth(f, tau))


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6))
def test_tseitin_preserves_weighted_count(seed):
    rng = random.Random(seed)
    vs = [1, 2, 3, 4, 5]
    f = random_formula(rng, vs, 5)
    W = WeightFunction({v: (rng.choice((1, 2, -1)), rng.choice((0.5, 3))) for v in vs})
    # the pool must start past dom(W), not only past the formula's variables
    cnf, aux = to_cnf(f, VarPool(6))
    assert set(aux).isdisjoint(vs)
    assert all(w == (1, 1) for w in aux.values())
    expect = brute_wmc(f, W)
    for method in ("auto", "eliminate"):
        assert abs(wmc_count(cnf, W.union(aux), method=method) - expect) < 1e-9


def test_auxiliaries_are_functionally_determined():
    f = iff(Lit(1), Lit(2) | Lit(5)) | (Lit(3) & iff(Lit(4), Lit(2)))
    cnf, aux = to_cnf(f, VarPool(1))
    assert len(aux) <= 6
    # every model of f extends to exactly one model of the CNF
    assert _count_models(cnf, sorted({1, 2, 3, 4, 5} | set(aux))) == sum(
        1 for tau in all_assignments([1, 2, 3, 4, 5]) if truth(f, tau)
    )


def test_constants():
    cnf, _ = to_cnf(TRUE, VarPool(1))
    assert cnf.clauses == ()
    cnf, _ = to_cnf(FALSE, VarPool(1))
    assert cnf.clauses == ((),)


def test_fresh_pool_is_advanced_past_originals():
    pool = VarPool(1)
    cnf, aux = to_cnf(iff(Lit(7), Lit(3) & Lit(5)) | Lit(2), pool)
    assert min(aux, default=8) > 7
