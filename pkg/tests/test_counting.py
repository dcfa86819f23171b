import random

import numpy as np
import pytest
from conftest import brute_wmc, random_formula, random_weights
from hypothesis import given, settings
from hypothesis import strategies as st

from diracwmc import elimination, kernel
from diracwmc.counting import METHODS, decompose, default_cap, wmc_count
from diracwmc.errors import ComponentTooLargeError, UnboundVariableError, WmcError
from diracwmc.logic import FALSE, TRUE, CnfFormula, Implies, Lit, WeightFunction, conj, iff
from diracwmc.program import compile_program


def test_implication_example():
    W = WeightFunction({1: (1, 1), 2: (0.5, 0.5)})
    assert wmc_count(Implies(Lit(1), Lit(2)), W) == pytest.approx(1.5, abs=1e-12)


def test_variables_outside_the_formula_count():
    W = WeightFunction({1: (1, 2), 2: (3, 4)})
    assert wmc_count(Lit(1), W) == 2 * 7
    assert wmc_count(TRUE, W) == 3 * 7
    assert wmc_count(FALSE, W) == 0
    assert wmc_count(TRUE, WeightFunction()) == 1


def test_unbound_variable():
    with pytest.raises(UnboundVariableError):
        wmc_count(Lit(3), WeightFunction({1: (1, 1)}))


def test_unknown_method():
    with pytest.raises(WmcError):
        wmc_count(TRUE, WeightFunction(), method="magic")


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 9))
def test_all_methods_match_enumeration_oracle(seed, n):
    rng = random.Random(seed)
    vs = list(range(1, n + 1))
    f = random_formula(rng, vs, 5)
    W = random_weights(rng, vs + [n + 1])
    expect = brute_wmc(f, W)
    for method in METHODS:
        got = wmc_count(f, W, method=method)
        assert abs(got - expect) <= 1e-9 * max(1, abs(expect))


@pytest.mark.skipif(len(kernel.BACKENDS) < 2, reason="compiled kernel not built")
@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 14))
def test_backends_agree(seed, n):
    rng = random.Random(seed)
    vs = list(range(1, n + 1))
    f = random_formula(rng, vs, 6)
    W = random_weights(rng, vs)
    a = wmc_count(f, W, method="brute", backend="python")
    b = wmc_count(f, W, method="brute", backend="compiled")
    assert abs(a - b) <= 1e-9 * max(1, abs(a))


def test_python_backend_large_block():
    # more variables than one lane block, so the chunked path runs
    vs = list(range(1, 17))
    f = conj(*(iff(Lit(v), Lit(v + 1)) for v in vs[:-1]))
    W = WeightFunction({v: (1, 2) for v in vs})
    assert wmc_count(f, W, method="brute", backend="python") == pytest.approx(1 + 2**16)


def test_unit_propagation_and_components():
    f = conj(Lit(1), iff(Lit(2), Lit(3)), iff(Lit(4), Lit(5, False)), Implies(Lit(1), Lit(6)))
    W = WeightFunction({v: (1, 1) for v in range(1, 8)})
    plan = decompose(f, W)
    assert plan.fixed == {1: True, 6: True}
    assert sorted(plan.sizes) == [2, 2]
    assert plan.free == [7]
    assert wmc_count(f, W) == 2 * 2 * 2


def test_conflicting_units_are_unsat():
    assert decompose(conj(Lit(1), Lit(1, False)), WeightFunction({1: (1, 1)})).unsat


def test_component_cap():
    vs = list(range(1, 13))
    f = conj(*(iff(Lit(v), Lit(v + 1)) for v in vs[:-1]))
    W = WeightFunction({v: (1, 1) for v in vs})
    with pytest.raises(ComponentTooLargeError):
        wmc_count(f, W, cap=8)
    with pytest.raises(ComponentTooLargeError):
        wmc_count(TRUE, W, cap=8, method="brute")
    assert wmc_count(f, W, cap=8, method="eliminate") == 2


def test_cap_from_environment(monkeypatch):
    monkeypatch.setenv("DIRACWMC_COMPONENT_CAP", "5")
    assert default_cap() == 5
    f = conj(*(iff(Lit(v), Lit(v + 1)) for v in range(1, 8)))
    with pytest.raises(ComponentTooLargeError):
        wmc_count(f, WeightFunction({v: (1, 1) for v in range(1, 9)}))
    monkeypatch.setenv("DIRACWMC_COMPONENT_CAP", "lots")
    with pytest.raises(WmcError):
        default_cap()


def test_cnf_input():
    cnf = CnfFormula(2, ((1, 2),))
    assert wmc_count(cnf, WeightFunction({1: (1, 1), 2: (1, 1)})) == 3


def test_elimination_on_chain_and_width_limit():
    n = 40
    clauses = [(-v, v + 1) for v in range(1, n)] + [(v, -v - 1) for v in range(1, n)]
    W = {v: (1, 2) for v in range(1, n + 1)}
    assert elimination.count_cnf(clauses, W) == pytest.approx(1 + 2**n)
    # one clause over many variables forces a wide factor
    wide = [tuple(range(1, 31))] + [(-1, v) for v in range(2, 31)]
    with pytest.raises(ComponentTooLargeError):
        elimination.count_cnf(wide, {v: (1, 1) for v in range(1, 31)}, max_width=3)


def test_program_stack_bound():
    f = conj(*(Implies(Lit(v), Lit(v + 1)) for v in range(1, 6)))
    prog = compile_program(f, {v: v - 1 for v in range(1, 7)})
    assert prog.stack_size >= 2
    run = kernel.get_backend("python")
    w = np.ones(6, dtype=np.complex128)
    assert run(prog.ops, prog.args, 6, w, w, prog.stack_size) == 7


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernel.get_backend("gpu")
