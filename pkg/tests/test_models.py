import itertools
import math

import numpy as np
import pytest
from conftest import brute_wmc
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from diracwmc import models
from diracwmc.encodings import KINDS
from diracwmc.errors import ModelError
from diracwmc.models import IsingModel, PottsModel, TfimModel


def ising_sum(model, beta):
    """Plain loop over spin configurations."""
    total = 0.0
    for spins in itertools.product((1, -1), repeat=model.n):
        s = dict(zip(model.sites, spins))
        e = sum(v * s[a] * s[b] for (a, b), v in model.J.items()) + sum(v * s[x] for x, v in model.h.items())
        total += math.exp(beta * e)
    return total


def potts_sum(model, beta):
    total = 0.0
    for states in itertools.product(range(model.q), repeat=model.n):
        s = dict(zip(model.sites, states))
        if model.variant == "standard":
            e = model.J * sum(s[a] == s[b] for a, b in model.edges)
        else:
            e = sum(v for (a, b, sa, sb), v in model.Jgen.items() if s[a] == sa and s[b] == sb)
            e += sum(v for (a, sa), v in model.hgen.items() if s[a] == sa)
        total += math.exp(beta * e)
    return total


def tfim_dense(model, beta):
    Z, X, I = np.diag([1.0, -1.0]), np.array([[0.0, 1.0], [1.0, 0.0]]), np.eye(2)

    def at(ops):
        out = np.ones((1, 1))
        for i in range(model.n):
            out = np.kron(out, ops.get(i, I))
        return out

    H = sum(-v * at({model.index(a): Z, model.index(b): Z}) for (a, b), v in model.J.items())
    H = H + sum(-model.mu_z * at({i: Z}) - model.mu_x * at({i: X}) for i in range(model.n))
    return float(np.trace(expm(-beta * H)).real)


TWO = IsingModel(("a", "b"), {("a", "b"): 1.0})


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("pipeline", ("rep", "expr"))
def test_two_site_ising(kind, pipeline):
    want = 2 * math.e + 2 / math.e
    assert models.partition(TWO, 1.0, kind=kind, pipeline=pipeline) == pytest.approx(want, rel=1e-12)


def test_two_site_direct_and_single_site():
    phi, W = models.ising_direct(TWO, 1.0)
    assert brute_wmc(phi, W) == pytest.approx(2 * math.e + 2 / math.e)
    assert models.partition(IsingModel(("a",)), 0.7) == pytest.approx(2.0)


def test_pairs_are_unordered():
    m = IsingModel(("a", "b"), {("b", "a"): 0.3})
    assert list(m.J) == [("a", "b")]
    with pytest.raises(ModelError):
        IsingModel(("a", "b"), {("a", "b"): 1.0, ("b", "a"): 2.0})
    with pytest.raises(ModelError):
        IsingModel(("a",), {("a", "a"): 1.0})
    with pytest.raises(ModelError):
        IsingModel(("a", "a"))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(KINDS), st.floats(0.1, 1.5))
def test_random_ising_matches_enumeration(seed, kind, beta):
    m = models.generate_random_graph(6, 2.5, seed=seed, field="normal")
    want = ising_sum(m, beta)
    assert models.partition(m, beta, kind=kind) == pytest.approx(want, rel=1e-9)
    assert models.ising_oracle(m, beta) == pytest.approx(want, rel=1e-12)
    phi, W = models.ising_direct(m, beta)
    from diracwmc import wmc_count

    assert wmc_count(phi, W) == pytest.approx(want, rel=1e-9)


def test_ising_expr_pipeline_small_lattice():
    m = models.generate_lattice(3, seed=4)
    want = ising_sum(m, 0.4)
    assert models.partition(m, 0.4, pipeline="expr") == pytest.approx(want, rel=1e-9)


def test_structural_diff_is_empty():
    assert models.structural_diff(models.generate_lattice(2, seed=1), 0.5) == []


@pytest.mark.parametrize("kind", KINDS)
def test_potts_single_edge(kind):
    m = PottsModel(("a", "b"), 3, (("a", "b"),), 0.8)
    want = 3 * math.exp(0.8) + 6
    assert models.partition(m, 1.0, kind=kind) == pytest.approx(want, rel=1e-12)
    assert models.partition(m, 1.0, kind=kind, pipeline="expr") == pytest.approx(want, rel=1e-12)


def test_potts_q2_single_edge():
    m = PottsModel(("a", "b"), 2, (("a", "b"),), 1.3)
    assert models.partition(m, 0.5) == pytest.approx(2 * math.exp(0.65) + 2)


def test_potts_no_edges():
    m = PottsModel(("a", "b", "c"), 4)
    assert models.partition(m, 1.0) == pytest.approx(64.0)


@pytest.mark.parametrize("q", (2, 3, 5))
def test_generalized_single_field(q):
    m = PottsModel(("a",), q, hgen={("a", 1): 0.9}, variant="generalized")
    assert models.partition(m, 1.0) == pytest.approx(math.exp(0.9) + q - 1)


@pytest.mark.parametrize("kind", KINDS)
def test_random_generalized_potts(kind):
    import random

    rng = random.Random(7)
    sites = ("a", "b", "c")
    jgen = {(a, b, rng.randrange(3), rng.randrange(3)): rng.uniform(-1, 1) for a, b in (("a", "b"), ("b", "c"), ("a", "c"))}
    hgen = {(s, rng.randrange(3)): rng.uniform(-1, 1) for s in sites}
    m = PottsModel(sites, 3, Jgen=jgen, hgen=hgen, variant="generalized")
    want = potts_sum(m, 0.6)
    assert models.partition(m, 0.6, kind=kind) == pytest.approx(want, rel=1e-9)
    assert models.partition(m, 0.6, kind=kind, pipeline="expr") == pytest.approx(want, rel=1e-9)


def test_standard_and_generalized_agree():
    m = models.generate_lattice(2, seed=0, model="potts", q=3, J=0.7)
    assert models.partition(m, 1.0) == pytest.approx(models.partition(m.generalized(), 1.0), rel=1e-12)
    assert models.potts_oracle(m, 1.0) == pytest.approx(potts_sum(m, 1.0), rel=1e-12)


def test_potts_q2_relates_to_ising():
    # delta(s, s') = (1 + s s') / 2 for q = 2
    p = models.generate_lattice(2, seed=0, model="potts", q=2, J=1.2)
    ising = IsingModel(p.sites, {e: 0.6 for e in p.edges})
    beta = 0.8
    want = math.exp(beta * 1.2 * len(p.edges) / 2) * ising_sum(ising, beta)
    assert models.partition(p, beta) == pytest.approx(want, rel=1e-9)


def test_potts_validation():
    with pytest.raises(ModelError):
        PottsModel(("a",), 1)
    with pytest.raises(ModelError):
        PottsModel(("a", "b"), 3, (("a", "b"), ("b", "a")), 1.0)
    with pytest.raises(ModelError):
        PottsModel(("a",), 3, hgen={("a", 3): 1.0}, variant="generalized")
    with pytest.raises(ModelError):
        PottsModel(("a",), 3, hgen={("a", 0): 1.0})


def test_tfim_without_transverse_field_is_ising():
    t = TfimModel(("a", "b", "c"), {("a", "b"): 0.5, ("b", "c"): -0.8}, mu_z=0.3, mu_x=0.0)
    want = ising_sum(t.classical_part(), 0.9)
    for k in (1, 3):
        assert models.partition(t, 0.9, trotter_k=k) == pytest.approx(want, rel=1e-9)


def test_tfim_oracle_matches_scipy():
    t = TfimModel(("a", "b", "c"), {("a", "b"): 1.0, ("b", "c"): 0.5}, mu_z=0.2, mu_x=0.7)
    assert models.tfim_oracle(t, 1.0) == pytest.approx(tfim_dense(t, 1.0), rel=1e-10)


@pytest.mark.parametrize("pipeline", ("rep", "expr"))
def test_tfim_trotter_converges(pipeline):
    t = TfimModel(("a", "b"), {("a", "b"): 1.0}, mu_x=1.0)
    exact = tfim_dense(t, 1.0)
    errors = []
    for k in (1, 4, 16):
        Z = models.partition(t, 1.0, trotter_k=k, pipeline=pipeline)
        assert abs(Z.imag) < 1e-9
        errors.append(abs(Z.real - exact))
    assert errors[0] > errors[1] > errors[2]
    assert errors[2] / exact < 1e-2


def test_tfim_four_sites_monotone():
    t = TfimModel(tuple("abcd"), {("a", "b"): 1.0, ("b", "c"): 1.0, ("c", "d"): 1.0}, mu_x=0.8)
    exact = tfim_dense(t, 0.5)
    errs = [abs(models.partition(t, 0.5, trotter_k=k).real - exact) for k in (2, 8)]
    assert errs[1] < errs[0]


def test_generators_are_deterministic():
    a = models.generate_lattice(2, seed=3)
    b = models.generate_lattice(2, seed=3)
    assert a == b and len(a.sites) == 4 and len(a.J) == 4
    assert models.generate_lattice(2, seed=4) != a
    g = models.generate_random_graph(10, 3, seed=2)
    assert g == models.generate_random_graph(10, 3, seed=2)
    assert all(-1 <= v <= 1 for v in g.J.values()) and not g.h
    assert models.generate_random_graph(5, 0, seed=1).J == {}
    with pytest.raises(ModelError):
        models.generate_random_graph(4, 5, seed=0)


@pytest.mark.parametrize(
    "model",
    [
        TWO,
        IsingModel(("x", "y", "z"), {("x", "z"): -0.25}, {"y": 0.125}),
        TfimModel(("a", "b"), {("a", "b"): 1.0}, mu_z=0.1, mu_x=1.0),
        PottsModel(("a", "b"), 3, (("a", "b"),), 0.5),
        PottsModel(("a", "b"), 3, Jgen={("a", "b", 0, 2): 0.5}, hgen={("b", 1): -1.0}, variant="generalized"),
    ],
)
def test_model_file_round_trip(model):
    assert models.parse_model(models.format_model(model)) == model


@pytest.mark.parametrize(
    "text",
    [
        "",
        "heisenberg\n",
        "ising\nmu_x 1\n",
        "ising\ncoupling a b\n",
        "ising\ncoupling a b x\n",
        "ising\nsite a\nsite a\n",
        "ising\ncoupling a b 1\ncoupling b a 1\n",
        "potts\nsite a\n",
        "potts\nq 2.5\n",
        "potts\nq 3\nedge a b\nJgen a b 0 0 1\n",
        "tfim\nmu_x 1\nmu_x 2\n",
    ],
)
def test_model_file_errors(text):
    with pytest.raises(ModelError):
        models.parse_model(text)


def test_model_file_comments():
    m = models.parse_model("# two spins\nising\ncoupling a b 1.0  # ferro\n")
    assert m == TWO


def test_beta_must_be_positive():
    with pytest.raises(ModelError):
        models.partition(TWO, 0.0)


def test_free_energy():
    assert models.free_energy(math.e**2, 2.0) == pytest.approx(-1.0)
