"""Markov chains on the level-k alcove driven by fusion coefficients.

The kernel for increment gamma is

    q(lam, beta) = N_{lam, gamma}^beta chi_beta(0) / (chi_lam(0) chi_gamma(0)),

and its full eigen-decomposition is read off the discretized characters:
eigenvalue chi_gamma(sigma) / chi_gamma(0) with eigenvector
(chi_beta(sigma) / chi_beta(0))_beta, one pair per sigma in the alcove.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from functools import lru_cache, reduce

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components
from sympy import Matrix
from sympy.matrices.normalforms import smith_normal_form

from .charlib import check_in_alcove, dim, is_minuscule, sine_product
from .errors import InvalidInputError
from .fusion import character_table, coroot_lattice_basis, fusion_matrix
from .rootsys import RootSystem, Weight

FLOAT_FMT = ".17g"


@dataclass(frozen=True, eq=False)
class AlcoveIndex:
    level: int
    weights: tuple[Weight, ...]
    position: dict[Weight, int]

    def __len__(self) -> int:
        return len(self.weights)


@lru_cache(maxsize=None)
def enumerate_alcove(rs: RootSystem, k: int) -> AlcoveIndex:
    """All dominant weights with <lam, theta^v> <= k, in lexicographic order."""
    if k < 0:
        raise InvalidInputError("level must be >= 0")
    comarks = rs.theta_coroot_pairing_vector
    out: list[Weight] = []

    def rec(prefix: list[int], budget: int) -> None:
        i = len(prefix)
        if i == rs.rank:
            out.append(tuple(prefix))
            return
        for a in range(budget // comarks[i] + 1):
            rec(prefix + [a], budget - a * comarks[i])

    rec([], k)
    out.sort()
    return AlcoveIndex(k, tuple(out), {w: i for i, w in enumerate(out)})


def lattice_index(rs: RootSystem, k: int) -> int:
    """|P / (k + h) M| from the Smith form of the embedding matrix."""
    if k < 0:
        raise InvalidInputError("level must be >= 0")
    lk = k + rs.dual_coxeter
    m = Matrix([[lk * a for a in row] for row in coroot_lattice_basis(rs)])
    snf = smith_normal_form(m)
    return abs(math.prod(int(snf[i, i]) for i in range(rs.rank)))


# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class InvariantMeasure:
    alcove: AlcoveIndex
    values: dict[Weight, float]
    lattice_index: int

    def as_array(self) -> np.ndarray:
        return np.array([self.values[w] for w in self.alcove.weights])

    def to_json(self) -> dict:
        return {
            "level": self.alcove.level,
            "lattice_index": self.lattice_index,
            "values": [{"weight": list(w), "mass": v} for w, v in self.values.items()],
        }


def invariant_measure(rs: RootSystem, k: int) -> InvariantMeasure:
    """(1/|P/(k+h)M|) prod_{alpha>0} 4 sin^2(pi (lam+rho|alpha)/(k+h)) on the alcove."""
    alc = enumerate_alcove(rs, k)
    idx = lattice_index(rs, k)
    scale = 4.0**rs.n_positive_roots / idx
    values = {w: scale * sine_product(rs, w, k) ** 2 for w in alc.weights}
    return InvariantMeasure(alc, values, idx)


@dataclass(frozen=True)
class SpectralPair:
    sigma: Weight
    eigenvalue: complex
    eigenvector: np.ndarray


@dataclass(eq=False)
class AlcoveKernel:
    root_system: RootSystem
    alcove: AlcoveIndex
    gammas: tuple[Weight, ...]
    counts: np.ndarray  # integer one-step counts, sum of fusion matrices
    matrix: np.ndarray
    invariant: np.ndarray
    spectrum: list[SpectralPair]
    growth: float  # sum of chi_gamma(0) over the increments
    period: int = 1
    irreducible: bool = True
    classes: list[list[Weight]] = field(default_factory=list)
    phase: np.ndarray | None = None
    state_period: np.ndarray | None = None
    class_labels: np.ndarray | None = None

    @property
    def level(self) -> int:
        return self.alcove.level

    @property
    def gamma(self) -> Weight:
        if len(self.gammas) != 1:
            raise AttributeError("mixture kernel has several increments")
        return self.gammas[0]

    def spectral_residual(self) -> float:
        worst = 0.0
        for p in self.spectrum:
            worst = max(worst, float(np.max(np.abs(self.matrix @ p.eigenvector - p.eigenvalue * p.eigenvector))))
        return worst

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["lambda"] + [" ".join(map(str, b)) for b in self.alcove.weights])
        for lam, row in zip(self.alcove.weights, self.matrix):
            w.writerow([" ".join(map(str, lam))] + [format(float(x), FLOAT_FMT) for x in row])
        return buf.getvalue()

    def spectrum_to_json(self) -> list[dict]:
        return [
            {
                "sigma": list(p.sigma),
                "eigenvalue": float(p.eigenvalue.real),
                "eigenvalue_imag": float(p.eigenvalue.imag),
                "eigenvector": [float(x) for x in p.eigenvector.real],
                "eigenvector_imag": [float(x) for x in p.eigenvector.imag],
            }
            for p in self.spectrum
        ]


def build_kernel(rs: RootSystem, gamma, k: int) -> AlcoveKernel:
    """The fusion kernel q_gamma on the level-k alcove."""
    return build_mixture_kernel(rs, [gamma], k)


def build_mixture_kernel(rs: RootSystem, gammas, k: int) -> AlcoveKernel:
    """Kernel whose one-step counts are sum_m N_{., gamma_m}; weights chi_{gamma_m}(0).

    With one increment this is q_gamma itself.  Repeated increments count
    with multiplicity.
    """
    gammas = tuple(check_in_alcove(rs, g, k, "gamma") for g in gammas)
    if not gammas:
        raise InvalidInputError("at least one increment is required")
    alc = enumerate_alcove(rs, k)
    x = character_table(rs, k)
    a = x[:, 0].real
    counts = sum(fusion_matrix(rs, g, k).astype(np.int64) for g in gammas)
    gi = [alc.position[g] for g in gammas]
    growth = float(sum(a[i] for i in gi))
    matrix = counts * a[None, :] / (a[:, None] * growth)
    spectrum = []
    for j, sigma in enumerate(alc.weights):
        ev = complex(sum(x[i, j] for i in gi) / growth)
        spectrum.append(SpectralPair(sigma, ev, x[:, j] / a))
    pi = invariant_measure(rs, k).as_array()
    kern = AlcoveKernel(rs, alc, gammas, counts, matrix, pi, spectrum, growth)
    d, irreducible, classes, phase, state_period, labels = _period_data(counts, alc)
    kern.period, kern.irreducible, kern.classes, kern.phase = d, irreducible, classes, phase
    kern.state_period, kern.class_labels = state_period, labels
    return kern


def _period_data(counts: np.ndarray, alc: AlcoveIndex):
    """Communication classes, their periods and a cyclic phase for every state."""
    graph = csr_matrix((counts > 0).astype(np.int8))
    ncomp, labels = connected_components(graph, directed=True, connection="strong")
    n = len(alc)
    state_period = np.ones(n, dtype=np.int64)
    phase = np.zeros(n, dtype=np.int64)
    for c in range(ncomp):
        members = np.flatnonzero(labels == c)
        root = int(members[0])
        dist = {root: 0}
        queue = [root]
        for u in queue:
            for v in graph.indices[graph.indptr[u] : graph.indptr[u + 1]]:
                v = int(v)
                if labels[v] == c and v not in dist:
                    dist[v] = dist[u] + 1
                    queue.append(v)
        gaps = (
            dist[int(u)] + 1 - dist[int(v)]
            for u in members
            for v in graph.indices[graph.indptr[u] : graph.indptr[u + 1]]
            if labels[v] == c
        )
        d = reduce(math.gcd, (abs(g) for g in gaps), 0) or 1
        for u in members:
            state_period[u] = d
            phase[u] = dist[int(u)] % d
    classes = sorted([alc.weights[i] for i in np.flatnonzero(labels == c)] for c in range(ncomp))
    return int(state_period[0]), ncomp == 1, classes, phase, state_period, labels


def period_and_classes(kernel: AlcoveKernel) -> tuple[int, bool, list[list[Weight]]]:
    """(period, irreducible flag, communication classes).

    The period is that of the class holding the zero weight; it is the period
    of the chain when the chain is irreducible.
    """
    return kernel.period, kernel.irreducible, kernel.classes


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DirichletPair:
    sigma: Weight
    eigenvalue: float
    eigenfunction: np.ndarray


def substochastic_restriction(rs: RootSystem, gamma, k: int) -> np.ndarray:
    """Free kernel p_gamma restricted to the alcove: N / dim(gamma)."""
    return fusion_matrix(rs, gamma, k) / dim(rs, gamma)


def dirichlet_spectrum(rs: RootSystem, gamma, k: int) -> list[DirichletPair]:
    """Eigenpairs 1 - chi_gamma(sigma)/dim(gamma), f_sigma = chi_.(sigma) of the alcove Dirichlet problem."""
    gamma = check_in_alcove(rs, gamma, k, "gamma")
    if not is_minuscule(rs, gamma):
        raise InvalidInputError(f"gamma {gamma} is not minuscule; the Dirichlet solution needs a minuscule step set")
    alc = enumerate_alcove(rs, k)
    x = character_table(rs, k)
    g = alc.position[gamma]
    d = dim(rs, gamma)
    out = []
    for j, sigma in enumerate(alc.weights):
        ev = 1 - x[g, j] / d
        if abs(ev.imag) < 1e-12:
            ev = ev.real
        out.append(DirichletPair(sigma, ev, x[:, j].copy()))
    return out


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AsymptoticEstimate:
    lam: Weight
    beta: Weight
    n: int
    period: int
    residue: int
    in_residue_class: bool
    value: float
    log_value: float
    exact: int

    @property
    def ratio(self) -> float:
        if not self.in_residue_class:
            return math.nan
        return math.exp(math.log(self.exact) - self.log_value) if self.exact else 0.0

    def to_json(self) -> dict:
        return {
            "lambda": list(self.lam),
            "beta": list(self.beta),
            "n": self.n,
            "period": self.period,
            "residue": self.residue,
            "in_residue_class": self.in_residue_class,
            "asymptotic_value": self.value,
            "exact_count": str(self.exact),
            "ratio": self.ratio if self.in_residue_class else None,
        }


def exact_counts(kernel: AlcoveKernel, lam, n: int) -> dict[Weight, int]:
    """Row lam of counts^n, exact Python integers."""
    alc = kernel.alcove
    mat = kernel.counts.astype(object)
    vec = np.zeros(len(alc), dtype=object)
    vec[:] = 0
    vec[alc.position[tuple(lam)]] = 1
    for _ in range(n):
        vec = vec.dot(mat)
    return {alc.weights[j]: int(c) for j, c in enumerate(vec)}


def residue_class(kernel: AlcoveKernel, lam, beta) -> tuple[int, int]:
    """(r, d): counts from lam to beta vanish unless n = r mod d."""
    p = kernel.alcove.position
    i, j = p[tuple(lam)], p[tuple(beta)]
    if kernel.class_labels[i] != kernel.class_labels[j]:
        raise InvalidInputError(f"{tuple(beta)} is not in the communication class of {tuple(lam)}")
    d = int(kernel.state_period[i])
    return int((kernel.phase[j] - kernel.phase[i]) % d), d


def asymptotic_estimate(kernel: AlcoveKernel, lam, beta, n: int) -> AsymptoticEstimate:
    """Large-n equivalent of the n-step count from lam to beta.

    value = d 4^{|R+|} G^n s(lam) s(beta) / (|P/(k+h)M| pi(C)) with G the
    per-step growth sum_m chi_{gamma_m}(0), d the period and pi(C) the
    invariant mass of the communication class C of lam (1 when the chain is
    irreducible).  When n is in the wrong residue class modulo d the count is
    exactly 0 and ``in_residue_class`` is False.
    """
    rs = kernel.root_system
    k = kernel.level
    lam = check_in_alcove(rs, lam, k, "lambda")
    beta = check_in_alcove(rs, beta, k, "beta")
    if n < 0:
        raise InvalidInputError("n must be >= 0")
    r, d = residue_class(kernel, lam, beta)
    exact = exact_counts(kernel, lam, n)[beta]
    if n % d != r:
        return AsymptoticEstimate(lam, beta, n, d, r, False, 0.0, -math.inf, exact)
    s_prod = sine_product(rs, lam, k) * sine_product(rs, beta, k)
    labels = kernel.class_labels
    class_mass = float(kernel.invariant[labels == labels[kernel.alcove.position[lam]]].sum())
    log_value = (
        math.log(d)
        + rs.n_positive_roots * math.log(4.0)
        + n * math.log(kernel.growth)
        + math.log(s_prod)
        - math.log(lattice_index(rs, k))
        - math.log(class_mass)
    )
    value = math.exp(log_value) if log_value < 700 else math.inf
    return AsymptoticEstimate(lam, beta, n, d, r, True, value, log_value, exact)


def spectrum_json_dumps(kernel: AlcoveKernel) -> str:
    return json.dumps(kernel.spectrum_to_json(), indent=1)
