"""Partition functions of spin models through the compilation pipeline.

Three model families are supported:

* classical Ising models ``H(s) = -sum J_ij s_i s_j - sum h_i s_i``;
* transverse-field Ising models with uniform fields ``mu_z`` and ``mu_x``;
* standard and generalized Potts models with q states per site.

Every coupling is keyed by an unordered pair of sites and counted once.

Each family has up to three routes to ``Z``: a pure expression in the Dirac
language (``*_expr``), a hand-built representation (``*_rep``) using compact
diagonal encodings, and an independent oracle (``*_oracle``) that sums
Boltzmann weights directly or exponentiates a dense Hamiltonian.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from .encodings import DEFAULT_KIND, EncodingString, QStateEncoding, enc_equiv, normalize_kind
from .errors import ModelError
from .lang import Bra, Const, Expr, Ket, Kron, MatAdd, MatMul, ScalMul, Trace
from .logic import TRUE, Formula, Lit, VarPool, WeightFunction, conj, iff, top_conjuncts
from .reps import (
    MatrixRep,
    ScalarRep,
    compile_expr,
    fresh_copy,
    rep_const,
    rep_matmul,
    rep_scalar_value,
    rep_scalmul,
    rep_trace,
)
from .values import dense_matexp

ORACLE_MAX_SITES = 16
ORACLE_MAX_CONFIGS = 1 << 22
TFIM_ORACLE_MAX_SITES = 12


# -- model types -------------------------------------------------------------


def _pair_key(sites: Sequence[str], a: str, b: str) -> tuple[str, str]:
    if a == b:
        raise ModelError(f"coupling of site {a!r} with itself")
    for s in (a, b):
        if s not in sites:
            raise ModelError(f"unknown site {s!r}")
    return (a, b) if sites.index(a) < sites.index(b) else (b, a)


def _normalize_pairs(sites: Sequence[str], J: Mapping) -> dict[tuple[str, str], float]:
    out: dict[tuple[str, str], float] = {}
    for (a, b), v in J.items():
        key = _pair_key(sites, a, b)
        if key in out:
            raise ModelError(f"coupling {key} given twice")
        out[key] = float(v)
    return out


def _check_sites(sites: Sequence[str]) -> tuple[str, ...]:
    sites = tuple(str(s) for s in sites)
    if len(set(sites)) != len(sites):
        raise ModelError("site names must be distinct")
    return sites


@dataclass(frozen=True)
class IsingModel:
    sites: tuple[str, ...]
    J: Mapping[tuple[str, str], float] = field(default_factory=dict)
    h: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        sites = _check_sites(self.sites)
        object.__setattr__(self, "sites", sites)
        object.__setattr__(self, "J", _normalize_pairs(sites, self.J))
        for s in self.h:
            if s not in sites:
                raise ModelError(f"field on unknown site {s!r}")
        object.__setattr__(self, "h", {s: float(v) for s, v in self.h.items()})

    @property
    def n(self) -> int:
        return len(self.sites)

    def index(self, s: str) -> int:
        return self.sites.index(s)


@dataclass(frozen=True)
class TfimModel:
    sites: tuple[str, ...]
    J: Mapping[tuple[str, str], float] = field(default_factory=dict)
    mu_z: float = 0.0
    mu_x: float = 0.0

    def __post_init__(self):
        sites = _check_sites(self.sites)
        object.__setattr__(self, "sites", sites)
        object.__setattr__(self, "J", _normalize_pairs(sites, self.J))
        object.__setattr__(self, "mu_z", float(self.mu_z))
        object.__setattr__(self, "mu_x", float(self.mu_x))

    @property
    def n(self) -> int:
        return len(self.sites)

    def index(self, s: str) -> int:
        return self.sites.index(s)

    def classical_part(self) -> IsingModel:
        return IsingModel(self.sites, self.J, {s: self.mu_z for s in self.sites} if self.mu_z else {})


@dataclass(frozen=True)
class PottsModel:
    """Standard (``edges`` with one ``J``) or generalized (``Jgen``/``hgen``) Potts model.

    ``Jgen`` maps ``(a, b, s_a, s_b)`` to a coupling, ``hgen`` maps ``(a, s_a)``
    to a field.
    """

    sites: tuple[str, ...]
    q: int
    edges: tuple[tuple[str, str], ...] = ()
    J: float = 0.0
    Jgen: Mapping[tuple[str, str, int, int], float] = field(default_factory=dict)
    hgen: Mapping[tuple[str, int], float] = field(default_factory=dict)
    variant: str = "standard"

    def __post_init__(self):
        sites = _check_sites(self.sites)
        object.__setattr__(self, "sites", sites)
        if self.q < 2:
            raise ModelError(f"q must be at least 2, got {self.q}")
        if self.variant not in ("standard", "generalized"):
            raise ModelError(f"unknown Potts variant {self.variant!r}")
        if self.variant == "standard" and (self.Jgen or self.hgen):
            raise ModelError("a standard Potts model has no state-dependent couplings or fields")
        if self.variant == "generalized" and self.edges:
            raise ModelError("a generalized Potts model takes couplings through Jgen")
        edges = []
        for a, b in self.edges:
            key = _pair_key(sites, a, b)
            if key in edges:
                raise ModelError(f"edge {key} given twice")
            edges.append(key)
        object.__setattr__(self, "edges", tuple(edges))
        object.__setattr__(self, "J", float(self.J))
        jgen: dict[tuple[str, str, int, int], float] = {}
        for (a, b, sa, sb), v in self.Jgen.items():
            self._check_state(sa)
            self._check_state(sb)
            key = _pair_key(sites, a, b)
            full = (a, b, sa, sb) if key == (a, b) else (b, a, sb, sa)
            if full in jgen:
                raise ModelError(f"coupling {full} given twice")
            jgen[full] = float(v)
        object.__setattr__(self, "Jgen", jgen)
        hgen: dict[tuple[str, int], float] = {}
        for (a, sa), v in self.hgen.items():
            if a not in sites:
                raise ModelError(f"field on unknown site {a!r}")
            self._check_state(sa)
            hgen[(a, sa)] = float(v)
        object.__setattr__(self, "hgen", hgen)

    def _check_state(self, s: int) -> None:
        if not 0 <= s < self.q:
            raise ModelError(f"state {s} out of range for q={self.q}")

    @property
    def n(self) -> int:
        return len(self.sites)

    def index(self, s: str) -> int:
        return self.sites.index(s)

    def generalized(self) -> "PottsModel":
        """The same model written with state-dependent couplings."""
        if self.variant == "generalized":
            return self
        jgen = {(a, b, s, s): self.J for a, b in self.edges for s in range(self.q)}
        return PottsModel(self.sites, self.q, Jgen=jgen, variant="generalized")


def _check_beta(beta: float) -> float:
    beta = float(beta)
    if not beta > 0:
        raise ModelError(f"beta must be positive, got {beta}")
    return beta


# -- expression building blocks ---------------------------------------------


def projector_expr(k: int, q: int) -> Expr:
    return MatMul(Ket(k, q), Bra(k, q))


def identity_expr(q: int) -> Expr:
    out: Expr = projector_expr(0, q)
    for k in range(1, q):
        out = MatAdd(out, projector_expr(k, q))
    return out


def diag_expr(values: Sequence[complex]) -> Expr:
    q = len(values)
    out: Expr | None = None
    for k, v in enumerate(values):
        term = ScalMul(Const(v), projector_expr(k, q))
        out = term if out is None else MatAdd(out, term)
    return out


def hadamard_expr() -> Expr:
    h = MatAdd(
        MatAdd(projector_expr(0, 2), MatMul(Ket(0, 2), Bra(1, 2))),
        MatAdd(MatMul(Ket(1, 2), Bra(0, 2)), ScalMul(Const(-1), projector_expr(1, 2))),
    )
    return ScalMul(Const(1 / math.sqrt(2)), h)


def lift(ops: Mapping[int, Expr], n: int, q: int, identity: Expr | None = None) -> Expr:
    """Kronecker product over ``n`` sites, site 0 first; missing sites get the identity."""
    identity = identity if identity is not None else identity_expr(q)
    out: Expr | None = None
    for i in range(n):
        f = ops.get(i, identity)
        out = f if out is None else Kron(out, f)
    return out


def _product(factors: Sequence[Expr], n: int, q: int) -> Expr:
    if not factors:
        return lift({}, n, q)
    out = factors[0]
    for f in factors[1:]:
        out = MatMul(out, f)
    return out


def _pauli_z() -> Expr:
    return diag_expr([1, -1])


def _exp_z(i: int, theta: float, n: int, identity: Expr) -> Expr:
    return lift({i: diag_expr([math.exp(theta), math.exp(-theta)])}, n, 2, identity)


def _exp_zz(i: int, j: int, theta: float, n: int, identity: Expr) -> Expr:
    # exp(theta Z_i Z_j) = cosh(theta) I + sinh(theta) Z_i Z_j
    z = _pauli_z()
    return MatAdd(
        ScalMul(Const(math.cosh(theta)), lift({}, n, 2, identity)),
        ScalMul(Const(math.sinh(theta)), lift({i: z, j: z}, n, 2, identity)),
    )


def _diag_z_factors(J, h: Mapping[str, float], index: Callable[[str], int], scale: float, n: int) -> list[Expr]:
    identity = identity_expr(2)
    factors = [_exp_zz(index(a), index(b), scale * v, n, identity) for (a, b), v in J.items()]
    factors += [_exp_z(index(s), scale * v, n, identity) for s, v in h.items() if v != 0]
    return factors


# -- Ising ------------------------------------------------------------------


def ising_direct(model: IsingModel, beta: float) -> tuple[Formula, WeightFunction]:
    """One variable per site and per coupling; ``WMC = Z``."""
    beta = _check_beta(beta)
    x = {s: i + 1 for i, s in enumerate(model.sites)}
    parts: list[Formula] = []
    W: dict[int, tuple[complex, complex]] = {}
    for s in model.sites:
        hv = model.h.get(s, 0.0)
        W[x[s]] = (math.exp(-beta * hv), math.exp(beta * hv))
    nxt = model.n + 1
    for (a, b), v in model.J.items():
        parts.append(iff(Lit(nxt), iff(Lit(x[a]), Lit(x[b]))))
        W[nxt] = (math.exp(-beta * v), math.exp(beta * v))
        nxt += 1
    return conj(*parts), WeightFunction(W)


def ising_expr(model: IsingModel, beta: float) -> Expr:
    """``tr`` of the product of lifted ``exp(beta J Z Z)`` and ``exp(beta h Z)`` factors."""
    beta = _check_beta(beta)
    factors = _diag_z_factors(model.J, model.h, model.index, beta, model.n)
    return Trace(_product(factors, model.n, 2))


def ising_oracle(model: IsingModel, beta: float) -> float:
    beta = _check_beta(beta)
    if model.n > ORACLE_MAX_SITES:
        raise ModelError(f"oracle limited to {ORACLE_MAX_SITES} sites, model has {model.n}")
    spins = 1 - 2 * ((np.arange(1 << model.n)[:, None] >> np.arange(model.n)[None, :]) & 1)
    energy = np.zeros(1 << model.n)
    for (a, b), v in model.J.items():
        energy -= v * spins[:, model.index(a)] * spins[:, model.index(b)]
    for s, v in model.h.items():
        energy -= v * spins[:, model.index(s)]
    return float(np.sum(np.exp(-beta * energy)))


# -- representation building blocks ---------------------------------------------


def _site_string(n: int, q: int, kind: str, pool: VarPool) -> tuple[list[QStateEncoding], EncodingString]:
    digits = [QStateEncoding.new(q, kind, pool) for _ in range(n)]
    # site 0 is the most significant digit, as in ``lift``
    return digits, EncodingString(tuple(reversed(digits)))


class _DiagonalBuilder:
    """Diagonal matrix representation over one string shared by input and output."""

    def __init__(self, n: int, q: int, kind: str, pool: VarPool):
        self.q, self.kind, self.pool = q, kind, pool
        self.sites, self.string = _site_string(n, q, kind, pool)
        self.W: dict[int, tuple[complex, complex]] = {v: (1, 1) for v in self.string.vars}
        self.parts: list[Formula] = []

    def aux(self, condition: Formula, w_false: complex, w_true: complex) -> None:
        z = self.pool.fresh()
        self.parts.append(iff(Lit(z), condition))
        self.W[z] = (w_false, w_true)

    def equal_sites(self, i: int, j: int, w_false: complex, w_true: complex) -> None:
        self.aux(enc_equiv(self.sites[i], self.sites[j]), w_false, w_true)

    def site_value(self, i: int, values: Sequence[complex]) -> None:
        """Multiply diagonal entries by ``values[s_i]``."""
        d = self.sites[i]
        if self.q == 2 and self.kind in ("log", "order"):
            # one bit, false for state 0: weight it directly
            (v,) = d.vars
            w0, w1 = self.W[v]
            self.W[v] = (w0 * values[0], w1 * values[1])
            return
        for s, val in enumerate(values):
            if val != 1:
                self.aux(d.equals(s), 1, val)

    def build(self) -> MatrixRep:
        return MatrixRep(conj(TRUE, *self.parts), WeightFunction(self.W), self.string, self.string, self.q, self.kind)


def _z_diagonal(J, h: Mapping[str, float], index, scale: float, n: int, kind: str, pool: VarPool) -> MatrixRep:
    b = _DiagonalBuilder(n, 2, kind, pool)
    for (a, c), v in J.items():
        b.equal_sites(index(a), index(c), math.exp(-scale * v), math.exp(scale * v))
    for s, v in h.items():
        if v != 0:
            b.site_value(index(s), [math.exp(scale * v), math.exp(-scale * v)])
    return b.build()


def hadamard_rep(n: int, pool: VarPool, kind: str = DEFAULT_KIND) -> MatrixRep:
    """``H`` on each of ``n`` qubits: ``r <-> (x = 1 & y = 1)``, ``W(r) = (1, -1)``, times ``1/sqrt 2`` each."""
    kind = normalize_kind(kind)
    xs, x = _site_string(n, 2, kind, pool)
    ys, y = _site_string(n, 2, kind, pool)
    parts: list[Formula] = []
    W: dict[int, tuple[complex, complex]] = {v: (1, 1) for v in x.vars + y.vars}
    for a, b in zip(xs, ys):
        r = pool.fresh()
        parts.append(iff(Lit(r), conj(a.equals(1), b.equals(1))))
        W[r] = (1, -1)
    rep = MatrixRep(conj(*parts), WeightFunction(W), x, y, 2, kind)
    for _ in range(n):
        rep = rep_scalmul(rep_const(1 / math.sqrt(2), pool), rep, pool)
    return rep


def ising_rep(model: IsingModel, beta: float, kind: str = DEFAULT_KIND, pool: VarPool | None = None) -> ScalarRep:
    """Trace representation from the compact diagonal encodings."""
    beta = _check_beta(beta)
    pool = pool or VarPool(1)
    D = _z_diagonal(model.J, model.h, model.index, beta, model.n, normalize_kind(kind), pool)
    return rep_trace(D)


def structural_diff(model: IsingModel, beta: float) -> list[str]:
    """Differences between :func:`ising_direct` and the log-encoded :func:`ising_rep`.

    Site variables are matched by site; the representation stores spin up as
    a false bit, so its site weights are compared with the polarity flipped.
    Returns an empty list when both instances agree up to that renaming.
    """
    phi_d, W_d = ising_direct(model, beta)
    rep = ising_rep(model, beta, "log")
    site_d = {s: i + 1 for i, s in enumerate(model.sites)}
    site_r = {s: i + 1 for i, s in enumerate(model.sites)}  # first allocations of the pool
    diffs: list[str] = []
    for s in model.sites:
        d0, d1 = W_d[site_d[s]]
        r0, r1 = rep.W[site_r[s]]
        if not (np.isclose(d0, r1) and np.isclose(d1, r0)):
            diffs.append(f"site {s}: weights {(d0, d1)} vs flipped {(r1, r0)}")
    n_d = len(W_d) - model.n
    n_r = len(rep.W) - model.n
    if n_d != n_r:
        diffs.append(f"coupling variables: {n_d} vs {n_r}")
    if len(top_conjuncts(phi_d)) != len(top_conjuncts(rep.phi)):
        diffs.append("different number of top-level constraints")
    return diffs


# -- transverse-field Ising ---------------------------------------------------


def tfim_hamiltonian(model: TfimModel) -> np.ndarray:
    n = model.n
    if n > TFIM_ORACLE_MAX_SITES:
        raise ModelError(f"dense Hamiltonian limited to {TFIM_ORACLE_MAX_SITES} sites, model has {n}")
    Z = np.diag([1.0, -1.0])
    X = np.array([[0.0, 1.0], [1.0, 0.0]])

    def at(ops: Mapping[int, np.ndarray]) -> np.ndarray:
        out = np.ones((1, 1))
        for i in range(n):
            out = np.kron(out, ops.get(i, np.eye(2)))
        return out

    H = np.zeros((1 << n, 1 << n))
    for (a, b), v in model.J.items():
        H -= v * at({model.index(a): Z, model.index(b): Z})
    for i in range(n):
        H -= model.mu_z * at({i: Z})
        H -= model.mu_x * at({i: X})
    return H


def tfim_oracle(model: TfimModel, beta: float) -> float:
    beta = _check_beta(beta)
    return float(np.trace(dense_matexp(-beta * tfim_hamiltonian(model))).real)


def tfim_expr(model: TfimModel, beta: float, k: int) -> Expr:
    """Trace of the k-th first-order Trotter power written in the Dirac language."""
    beta = _check_beta(beta)
    if k < 1:
        raise ModelError(f"Trotter steps must be at least 1, got {k}")
    n = model.n
    h = {s: model.mu_z for s in model.sites} if model.mu_z else {}
    dz = _product(_diag_z_factors(model.J, h, model.index, beta / k, n), n, 2)
    identity = identity_expr(2)
    dx = _product([_exp_z(i, beta * model.mu_x / k, n, identity) for i in range(n)] if model.mu_x else [], n, 2)
    hn = lift({i: hadamard_expr() for i in range(n)}, n, 2)
    step = MatMul(MatMul(MatMul(dz, hn), dx), hn)
    out: Expr = step
    for _ in range(k - 1):
        out = MatMul(out, step)
    return Trace(out)


def tfim_rep(model: TfimModel, beta: float, k: int, kind: str = DEFAULT_KIND, pool: VarPool | None = None) -> ScalarRep:
    """Trace representation of the k-th Trotter power from compact encodings."""
    beta = _check_beta(beta)
    if k < 1:
        raise ModelError(f"Trotter steps must be at least 1, got {k}")
    kind = normalize_kind(kind)
    pool = pool or VarPool(1)
    n = model.n
    h = {s: model.mu_z for s in model.sites}
    dz = _z_diagonal(model.J, h, model.index, beta / k, n, kind, pool)
    dx = _z_diagonal({}, {s: model.mu_x for s in model.sites}, model.index, beta / k, n, kind, pool)
    hn = hadamard_rep(n, pool, kind)
    step = rep_matmul(dz, rep_matmul(hn, rep_matmul(dx, fresh_copy(hn, pool), pool), pool), pool)
    out = step
    for _ in range(k - 1):
        out = rep_matmul(out, fresh_copy(step, pool), pool)
    return rep_trace(out)


# -- Potts ------------------------------------------------------------------


def _check_potts(model: PottsModel, variant: str) -> None:
    if model.variant != variant:
        raise ModelError(f"expected a {variant} Potts model, got a {model.variant} one")


def _potts_factor(ops: Mapping[int, Expr], weight: float, n: int, q: int, identity: Expr) -> Expr:
    # exp(c P) = I + (e^c - 1) P for a projector P; ``weight`` is e^c
    return MatAdd(lift({}, n, q, identity), ScalMul(Const(weight - 1), lift(ops, n, q, identity)))


def potts_expr(model: PottsModel, beta: float) -> Expr:
    """Trace of the product of per-edge factors ``exp(beta J [s_i = s_j])``."""
    _check_potts(model, "standard")
    beta = _check_beta(beta)
    n, q = model.n, model.q
    identity = identity_expr(q)
    factors = []
    for a, b in model.edges:
        i, j = model.index(a), model.index(b)
        same: Expr | None = None
        for s in range(q):
            term = lift({i: projector_expr(s, q), j: projector_expr(s, q)}, n, q, identity)
            same = term if same is None else MatAdd(same, term)
        factors.append(MatAdd(lift({}, n, q, identity), ScalMul(Const(math.exp(beta * model.J) - 1), same)))
    return Trace(_product(factors, n, q))


def potts_generalized_expr(model: PottsModel, beta: float) -> Expr:
    """Trace of single-entry exponential factors, one per nonzero coupling or field."""
    _check_potts(model, "generalized")
    beta = _check_beta(beta)
    n, q = model.n, model.q
    identity = identity_expr(q)
    factors = []
    for (a, b, sa, sb), v in model.Jgen.items():
        if v != 0:
            ops = {model.index(a): projector_expr(sa, q), model.index(b): projector_expr(sb, q)}
            factors.append(_potts_factor(ops, math.exp(beta * v), n, q, identity))
    for (a, sa), v in model.hgen.items():
        if v != 0:
            factors.append(_potts_factor({model.index(a): projector_expr(sa, q)}, math.exp(beta * v), n, q, identity))
    return Trace(_product(factors, n, q))


def potts_rep(model: PottsModel, beta: float, kind: str = DEFAULT_KIND, pool: VarPool | None = None) -> ScalarRep:
    """Trace representation from ``z <-> (x <-> y)`` (standard) or single-entry encodings."""
    beta = _check_beta(beta)
    pool = pool or VarPool(1)
    b = _DiagonalBuilder(model.n, model.q, normalize_kind(kind), pool)
    if model.variant == "standard":
        for a, c in model.edges:
            b.equal_sites(model.index(a), model.index(c), 1, math.exp(beta * model.J))
    else:
        for (a, c, sa, sc), v in model.Jgen.items():
            if v != 0:
                da, dc = b.sites[model.index(a)], b.sites[model.index(c)]
                b.aux(conj(da.equals(sa), dc.equals(sc)), 1, math.exp(beta * v))
        for (a, sa), v in model.hgen.items():
            if v != 0:
                b.aux(b.sites[model.index(a)].equals(sa), 1, math.exp(beta * v))
    return rep_trace(b.build())


def potts_energy(model: PottsModel, config: Sequence[int]) -> float:
    """``H(s)`` for one configuration (states listed in site order)."""
    e = 0.0
    if model.variant == "standard":
        for a, b in model.edges:
            if config[model.index(a)] == config[model.index(b)]:
                e -= model.J
        return e
    for (a, b, sa, sb), v in model.Jgen.items():
        if config[model.index(a)] == sa and config[model.index(b)] == sb:
            e -= v
    for (a, sa), v in model.hgen.items():
        if config[model.index(a)] == sa:
            e -= v
    return e


def potts_oracle(model: PottsModel, beta: float) -> float:
    beta = _check_beta(beta)
    if model.n > ORACLE_MAX_SITES or model.q**model.n > ORACLE_MAX_CONFIGS:
        raise ModelError(f"oracle limited to {ORACLE_MAX_SITES} sites and {ORACLE_MAX_CONFIGS} configurations")
    n, q = model.n, model.q
    states = (np.arange(q**n)[:, None] // q ** np.arange(n)[None, :]) % q
    energy = np.zeros(q**n)
    if model.variant == "standard":
        for a, b in model.edges:
            energy -= model.J * (states[:, model.index(a)] == states[:, model.index(b)])
    else:
        for (a, b, sa, sb), v in model.Jgen.items():
            energy -= v * ((states[:, model.index(a)] == sa) & (states[:, model.index(b)] == sb))
        for (a, sa), v in model.hgen.items():
            energy -= v * (states[:, model.index(a)] == sa)
    return float(np.sum(np.exp(-beta * energy)))


# -- generators -------------------------------------------------------------


def _sampler(distribution: str, rng: random.Random) -> Callable[[], float]:
    if distribution == "uniform":
        return lambda: rng.uniform(-1.0, 1.0)
    if distribution == "normal":
        return lambda: rng.gauss(0.0, 1.0)
    raise ModelError(f"unknown coupling distribution {distribution!r}; use 'uniform' or 'normal'")


def _build(
    sites: list[str],
    edges: list[tuple[str, str]],
    *,
    model: str,
    rng: random.Random,
    coupling: str,
    field: str | None,
    q: int,
    J: float,
    mu_x: float,
):
    if model == "potts":
        return PottsModel(tuple(sites), q, tuple(edges), J)
    draw = _sampler(coupling, rng)
    couplings = {e: draw() for e in edges}
    if model == "tfim":
        return TfimModel(tuple(sites), couplings, 0.0, mu_x)
    if model != "ising":
        raise ModelError(f"unknown model kind {model!r}")
    fields = {}
    if field is not None:
        fdraw = _sampler(field, rng)
        fields = {s: fdraw() for s in sites}
    return IsingModel(tuple(sites), couplings, fields)


def generate_lattice(
    L: int,
    *,
    seed: int,
    model: str = "ising",
    coupling: str = "normal",
    field: str | None = "normal",
    q: int = 3,
    J: float = 1.0,
    mu_x: float = 1.0,
):
    """``L x L`` square lattice with open boundaries; sites are named ``r<row>c<col>``."""
    if L < 1:
        raise ModelError(f"lattice size must be positive, got {L}")
    rng = random.Random(seed)
    sites = [f"r{r}c{c}" for r in range(L) for c in range(L)]
    edges = []
    for r in range(L):
        for c in range(L):
            if c + 1 < L:
                edges.append((f"r{r}c{c}", f"r{r}c{c + 1}"))
            if r + 1 < L:
                edges.append((f"r{r}c{c}", f"r{r + 1}c{c}"))
    return _build(sites, edges, model=model, rng=rng, coupling=coupling, field=field, q=q, J=J, mu_x=mu_x)


def generate_random_graph(
    n: int,
    expected_degree: float,
    *,
    seed: int,
    model: str = "ising",
    coupling: str = "uniform",
    field: str | None = None,
    q: int = 3,
    J: float = 1.0,
    mu_x: float = 1.0,
):
    """Each of the ``n(n-1)/2`` edges is present with probability ``expected_degree/(n-1)``."""
    if n < 1:
        raise ModelError(f"need at least one site, got {n}")
    if n > 1 and not 0 <= expected_degree <= n - 1:
        raise ModelError(f"expected degree must lie in [0, {n - 1}], got {expected_degree}")
    rng = random.Random(seed)
    p = expected_degree / (n - 1) if n > 1 else 0.0
    sites = [f"v{i}" for i in range(n)]
    edges = [(sites[i], sites[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return _build(sites, edges, model=model, rng=rng, coupling=coupling, field=field, q=q, J=J, mu_x=mu_x)


# -- model files ------------------------------------------------------------


def parse_model(text: str):
    """Read the line-oriented model format (see the README for examples)."""
    header: str | None = None
    sites: list[str] = []
    couplings: dict[tuple[str, str], float] = {}
    fields: dict[str, float] = {}
    scalars: dict[str, float] = {}
    edges: list[tuple[str, str]] = []
    jgen: dict[tuple[str, str, int, int], float] = {}
    hgen: dict[tuple[str, int], float] = {}
    allowed = {
        "ising": {"site", "coupling", "field"},
        "tfim": {"site", "coupling", "mu_z", "mu_x"},
        "potts": {"site", "q", "edge", "J", "Jgen", "hgen"},
    }
    arity = {"site": 1, "coupling": 3, "field": 2, "mu_z": 1, "mu_x": 1, "q": 1, "edge": 2, "J": 1, "Jgen": 5, "hgen": 3}

    def num(tok: str, lineno: int) -> float:
        try:
            return float(tok)
        except ValueError:
            raise ModelError(f"line {lineno}: expected a number, got {tok!r}") from None

    def state(tok: str, lineno: int) -> int:
        try:
            return int(tok)
        except ValueError:
            raise ModelError(f"line {lineno}: expected a state index, got {tok!r}") from None

    def site(name: str) -> str:
        if name not in sites:
            sites.append(name)
        return name

    for lineno, raw in enumerate(text.splitlines(), 1):
        toks = raw.split("#", 1)[0].split()
        if not toks:
            continue
        if header is None:
            if len(toks) != 1 or toks[0] not in allowed:
                raise ModelError(f"line {lineno}: expected a header 'ising', 'tfim' or 'potts'")
            header = toks[0]
            continue
        key, args = toks[0], toks[1:]
        if key not in allowed[header]:
            raise ModelError(f"line {lineno}: {key!r} is not valid in a {header} file")
        if len(args) != arity[key]:
            raise ModelError(f"line {lineno}: {key!r} takes {arity[key]} arguments")
        if key == "site":
            if args[0] in sites:
                raise ModelError(f"line {lineno}: site {args[0]!r} declared twice")
            site(args[0])
        elif key == "coupling":
            pair = (site(args[0]), site(args[1]))
            if pair in couplings or pair[::-1] in couplings:
                raise ModelError(f"line {lineno}: coupling {pair} given twice")
            couplings[pair] = num(args[2], lineno)
        elif key == "field":
            fields[site(args[0])] = num(args[1], lineno)
        elif key in ("mu_z", "mu_x", "q", "J"):
            if key in scalars:
                raise ModelError(f"line {lineno}: {key!r} given twice")
            scalars[key] = num(args[0], lineno)
        elif key == "edge":
            edges.append((site(args[0]), site(args[1])))
        elif key == "Jgen":
            jgen[(site(args[0]), site(args[1]), state(args[2], lineno), state(args[3], lineno))] = num(args[4], lineno)
        elif key == "hgen":
            hgen[(site(args[0]), state(args[1], lineno))] = num(args[2], lineno)
    if header is None:
        raise ModelError("empty model file")
    if header == "ising":
        return IsingModel(tuple(sites), couplings, fields)
    if header == "tfim":
        return TfimModel(tuple(sites), couplings, scalars.get("mu_z", 0.0), scalars.get("mu_x", 0.0))
    if "q" not in scalars or scalars["q"] != int(scalars["q"]):
        raise ModelError("a potts file needs an integer 'q' line")
    q = int(scalars["q"])
    if jgen or hgen:
        if edges or "J" in scalars:
            raise ModelError("a potts file uses either edge/J or Jgen/hgen lines, not both")
        return PottsModel(tuple(sites), q, Jgen=jgen, hgen=hgen, variant="generalized")
    return PottsModel(tuple(sites), q, tuple(edges), scalars.get("J", 0.0))


def format_model(model) -> str:
    """Inverse of :func:`parse_model`."""
    g = lambda v: repr(float(v))  # noqa: E731
    if isinstance(model, IsingModel):
        lines = ["ising", *(f"site {s}" for s in model.sites)]
        lines += [f"coupling {a} {b} {g(v)}" for (a, b), v in model.J.items()]
        lines += [f"field {s} {g(v)}" for s, v in model.h.items()]
    elif isinstance(model, TfimModel):
        lines = ["tfim", *(f"site {s}" for s in model.sites)]
        lines += [f"coupling {a} {b} {g(v)}" for (a, b), v in model.J.items()]
        lines += [f"mu_z {g(model.mu_z)}", f"mu_x {g(model.mu_x)}"]
    elif isinstance(model, PottsModel):
        lines = ["potts", *(f"site {s}" for s in model.sites), f"q {model.q}"]
        if model.variant == "standard":
            lines += [f"edge {a} {b}" for a, b in model.edges]
            lines.append(f"J {g(model.J)}")
        else:
            lines += [f"Jgen {a} {b} {sa} {sb} {g(v)}" for (a, b, sa, sb), v in model.Jgen.items()]
            lines += [f"hgen {a} {s} {g(v)}" for (a, s), v in model.hgen.items()]
    else:
        raise ModelError(f"not a model: {model!r}")
    return "\n".join(lines) + "\n"


# -- dispatch ---------------------------------------------------------------


def partition_rep(model, beta: float, *, kind: str = DEFAULT_KIND, trotter_k: int = 64, pipeline: str = "rep"):
    """Scalar representation of ``Z`` for any supported model."""
    if pipeline not in ("rep", "expr"):
        raise ModelError(f"unknown pipeline {pipeline!r}; use 'rep' or 'expr'")
    if isinstance(model, IsingModel):
        if pipeline == "rep":
            return ising_rep(model, beta, kind)
        return compile_expr(ising_expr(model, beta), kind)
    if isinstance(model, TfimModel):
        if pipeline == "rep":
            return tfim_rep(model, beta, trotter_k, kind)
        return compile_expr(tfim_expr(model, beta, trotter_k), kind)
    if isinstance(model, PottsModel):
        if pipeline == "rep":
            return potts_rep(model, beta, kind)
        e = potts_expr(model, beta) if model.variant == "standard" else potts_generalized_expr(model, beta)
        return compile_expr(e, kind)
    raise ModelError(f"not a model: {model!r}")


def partition(model, beta: float, *, method: str = "auto", cap: int | None = None, **kw) -> complex:
    """``Z`` computed by compiling the model and counting the result."""
    return rep_scalar_value(partition_rep(model, beta, **kw), method=method, cap=cap)


def oracle(model, beta: float) -> float:
    if isinstance(model, IsingModel):
        return ising_oracle(model, beta)
    if isinstance(model, TfimModel):
        return tfim_oracle(model, beta)
    if isinstance(model, PottsModel):
        return potts_oracle(model, beta)
    raise ModelError(f"not a model: {model!r}")


def free_energy(Z: complex, beta: float) -> float:
    """``-log(Z) / beta`` for a real positive ``Z``."""
    return -math.log(complex(Z).real) / beta


__all__ = [
    "IsingModel",
    "PottsModel",
    "TfimModel",
    "format_model",
    "free_energy",
    "generate_lattice",
    "generate_random_graph",
    "hadamard_expr",
    "hadamard_rep",
    "identity_expr",
    "ising_direct",
    "ising_expr",
    "ising_oracle",
    "ising_rep",
    "lift",
    "oracle",
    "parse_model",
    "partition",
    "partition_rep",
    "potts_expr",
    "potts_generalized_expr",
    "potts_oracle",
    "potts_rep",
    "structural_diff",
    "tfim_expr",
    "tfim_hamiltonian",
    "tfim_oracle",
    "tfim_rep",
]
