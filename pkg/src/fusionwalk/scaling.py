"""Convolution measures on the alcove and scaling-limit diagnostics for fusion walks.

K is taken simply connected, so every dominant weight labels a group
representation and the alcove parametrises conjugacy classes.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .alcove_markov import build_kernel, enumerate_alcove
from .charlib import check_in_alcove, dim
from .errors import InvalidInputError
from .fusion import character_table
from .rootsys import RootSystem, Weight


@dataclass(frozen=True, eq=False)
class ConvolutionMeasure:
    level: int
    xi: Weight
    gamma: Weight
    weights: tuple[Weight, ...]  # beta with positive mass
    points: np.ndarray  # (beta + rho) / (k + h), fundamental-weight coordinates
    masses: np.ndarray

    @property
    def atoms(self) -> dict[tuple[float, ...], float]:
        return {tuple(float(c) for c in p): float(m) for p, m in zip(self.points, self.masses)}

    def moments(self) -> tuple[np.ndarray, np.ndarray]:
        """Mean vector and second-moment matrix of the atom positions."""
        mean = self.masses @ self.points
        second = (self.points * self.masses[:, None]).T @ self.points
        return mean, second

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "xi": list(self.xi),
            "gamma": list(self.gamma),
            "atoms": [
                {"beta": list(b), "point": [float(c) for c in p], "mass": float(m)}
                for b, p, m in zip(self.weights, self.points, self.masses)
            ],
        }


def convolution_measure(rs: RootSystem, xi, gamma, k: int) -> ConvolutionMeasure:
    """Atoms q_gamma(xi, beta) at (beta + rho) / (k + h)."""
    xi = check_in_alcove(rs, xi, k, "xi")
    gamma = check_in_alcove(rs, gamma, k, "gamma")
    kern = build_kernel(rs, gamma, k)
    alc = kern.alcove
    row = kern.matrix[alc.position[xi]]
    keep = np.flatnonzero(row > 0)
    weights = tuple(alc.weights[j] for j in keep)
    pts = (np.array(weights, dtype=float) + 1.0) / (k + rs.dual_coxeter)
    return ConvolutionMeasure(k, xi, gamma, weights, pts, row[keep].copy())


def moment_identity_residual(rs: RootSystem, measure: ConvolutionMeasure, lams=None) -> float:
    """max over lam of |chi_lam(xi) chi_lam(gamma) - chi_lam(0) sum_beta mu(beta) chi_lam(beta)| / dim(lam)^2."""
    k = measure.level
    alc = enumerate_alcove(rs, k)
    x = character_table(rs, k)
    lams = alc.weights if lams is None else [check_in_alcove(rs, l, k, "lambda") for l in lams]
    cols = [alc.position[b] for b in measure.weights]
    worst = 0.0
    for lam in lams:
        i = alc.position[tuple(lam)]
        d = dim(rs, lam)
        lhs = x[i, alc.position[measure.xi]] * x[i, alc.position[measure.gamma]]
        rhs = x[i, 0] * np.dot(measure.masses, x[i, cols])
        worst = max(worst, abs(lhs - rhs) / d**2)
    return float(worst)


def approximating_weight(rs: RootSystem, point, k: int) -> Weight:
    """Alcove weight whose rescaled position (w + rho)/(k + h) is closest to ``point`` labelwise."""
    lk = k + rs.dual_coxeter
    w = [max(0, round(float(p) * lk) - 1) for p in point]
    comarks = rs.theta_coroot_pairing_vector
    while sum(a * c for a, c in zip(w, comarks)) > k:
        i = max(range(rs.rank), key=lambda j: w[j])
        w[i] -= 1
    return tuple(w)


# ---------------------------------------------------------------------------
# SU(2)


def su2_density(z, x: float, y: float):
    """Density of the radial part of U T_x U^* T_y for Haar-distributed U in SU(2)."""
    z = np.asarray(z, dtype=float)
    u, v = su2_support(x, y)
    inside = (z >= u) & (z <= v)
    return np.where(inside, 0.5 * np.pi * np.sin(np.pi * z) / (np.sin(np.pi * x) * np.sin(np.pi * y)), 0.0)


def su2_support(x: float, y: float) -> tuple[float, float]:
    a = abs(x - y)
    b = min(x + y, 2 - (x + y))
    return min(a, b), max(a, b)


def _su2_cdf(z, x: float, y: float):
    u, v = su2_support(x, y)
    z = np.clip(np.asarray(z, dtype=float), u, v)
    return 0.5 * (np.cos(np.pi * u) - np.cos(np.pi * z)) / (np.sin(np.pi * x) * np.sin(np.pi * y))


@dataclass(frozen=True)
class DensityComparison:
    level: int
    x: float
    y: float
    edges: np.ndarray
    atom_mass: np.ndarray
    density_mass: np.ndarray
    tv_distance: float
    support_ok: bool

    def to_csv(self) -> str:
        lines = ["left,right,atom_mass,density_mass"]
        for a, b, p, q in zip(self.edges[:-1], self.edges[1:], self.atom_mass, self.density_mass):
            lines.append(",".join(format(float(v), ".17g") for v in (a, b, p, q)))
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {"level": self.level, "x": self.x, "y": self.y, "tv_distance": self.tv_distance, "support_ok": self.support_ok}


def su2_density_comparison(xi: int, gamma: int, k: int) -> DensityComparison:
    """Binned total-variation distance between mu_k and the limiting SU(2) density.

    One bin per atom, with edges at the midpoints between neighbouring atoms;
    density mass outside the outer edges counts towards the distance.
    """
    from .rootsys import build_root_system

    rs = build_root_system("A", 1)
    mu = convolution_measure(rs, (xi,), (gamma,), k)
    lk = k + 2
    z = mu.points[:, 0]
    x, y = (xi + 1) / lk, (gamma + 1) / lk
    edges = np.concatenate([[z[0] - 1 / lk], (z[:-1] + z[1:]) / 2, [z[-1] + 1 / lk]])
    dens = np.diff(_su2_cdf(edges, x, y))
    outside = 1.0 - float(dens.sum())
    tv = 0.5 * (float(np.abs(mu.masses - dens).sum()) + abs(outside))
    u, v = su2_support(x, y)
    tol = 3 / lk  # (h + 1) / (k + h)
    support_ok = bool(np.all(z >= u - tol) and np.all(z <= v + tol))
    return DensityComparison(k, x, y, edges, mu.masses.copy(), dens, tv, support_ok)


def moment_convergence(rs: RootSystem, xi_point, gamma_point, k: int) -> float:
    """Largest change in the first two moments of mu_k between levels k and 2k."""
    out = []
    for lev in (k, 2 * k):
        mu = convolution_measure(rs, approximating_weight(rs, xi_point, lev), approximating_weight(rs, gamma_point, lev), lev)
        out.append(mu.moments())
    (m1, s1), (m2, s2) = out
    return float(max(np.max(np.abs(m1 - m2)), np.max(np.abs(s1 - s2))))


# ---------------------------------------------------------------------------
# trajectories


@dataclass(frozen=True)
class Trajectory:
    n: int
    level: int
    gamma: Weight
    seed: int
    samples: tuple[Weight, ...]

    def to_jsonl(self) -> str:
        return "".join(json.dumps({"m": m, "weight": list(w)}) + "\n" for m, w in enumerate(self.samples))


def _transition_cdf(rs: RootSystem, gamma, k: int) -> np.ndarray:
    q = build_kernel(rs, gamma, k).matrix
    cdf = np.cumsum(q, axis=1)
    # clamp at the last reachable state so rounding never selects a zero-mass target
    for i, row in enumerate(q):
        cdf[i, np.flatnonzero(row > 0)[-1] :] = 1.0
    return cdf


def simulate_replicas(rs: RootSystem, gamma, k: int, steps: int, replicas: int, seed: int) -> np.ndarray:
    """State indices (replicas, steps + 1) of independent walks from 0."""
    gamma = check_in_alcove(rs, gamma, k, "gamma")
    if steps < 0 or replicas < 1:
        raise InvalidInputError("steps must be >= 0 and replicas >= 1")
    cdf = _transition_cdf(rs, gamma, k)
    rng = np.random.default_rng(seed)
    out = np.zeros((replicas, steps + 1), dtype=np.int64)
    state = np.zeros(replicas, dtype=np.int64)
    for m in range(1, steps + 1):
        u = rng.random(replicas)
        state = (cdf[state] < u[:, None]).sum(axis=1)
        out[:, m] = state
    return out


def simulate_trajectory(rs: RootSystem, gamma, n: int, t_max: float, seed: int) -> Trajectory:
    """floor(n t_max) steps of the level-floor(sqrt n) fusion walk started at 0."""
    if n < 1 or t_max < 0:
        raise InvalidInputError("n must be >= 1 and t_max >= 0")
    k = math.isqrt(n)
    gamma = check_in_alcove(rs, gamma, k, "gamma")
    idx = simulate_replicas(rs, gamma, k, int(math.floor(n * t_max)), 1, seed)[0]
    w = enumerate_alcove(rs, k).weights
    return Trajectory(n, k, gamma, seed, tuple(w[i] for i in idx))


# ---------------------------------------------------------------------------
# exact moment diagnostics


def _distribution_after(rs: RootSystem, gamma, k: int, m: int) -> np.ndarray:
    q = build_kernel(rs, gamma, k).matrix
    return np.linalg.matrix_power(q, m)[0]


def character_moment_check(rs: RootSystem, gamma, k: int, sigma, m: int) -> float:
    """|E[chi_Lambda_m(sigma)/chi_Lambda_m(0)] - (chi_gamma(sigma)/chi_gamma(0))^m| from Lambda_0 = 0."""
    gamma = check_in_alcove(rs, gamma, k, "gamma")
    sigma = check_in_alcove(rs, sigma, k, "sigma")
    if m < 0:
        raise InvalidInputError("m must be >= 0")
    alc = enumerate_alcove(rs, k)
    x = character_table(rs, k)
    s = alc.position[sigma]
    f = x[:, s] / x[:, 0].real
    p = _distribution_after(rs, gamma, k, m)
    lhs = p @ f
    rhs = f[alc.position[gamma]] ** m
    return float(abs(lhs - rhs))


def character_moment_sweep(rs: RootSystem, gamma, k: int, m_max: int) -> float:
    """Largest ``character_moment_check`` residual over every sigma and m <= m_max."""
    gamma = check_in_alcove(rs, gamma, k, "gamma")
    if m_max < 0:
        raise InvalidInputError("m_max must be >= 0")
    alc = enumerate_alcove(rs, k)
    x = character_table(rs, k)
    f = x / x[:, :1].real
    q = build_kernel(rs, gamma, k).matrix
    eig = f[alc.position[gamma]]
    p = np.zeros(len(alc))
    p[0] = 1.0
    worst = 0.0
    for m in range(m_max + 1):
        if m:
            p = p @ q
        worst = max(worst, float(np.max(np.abs(p @ f - eig**m))))
    return worst


def casimir(rs: RootSystem, sigma) -> float:
    """||sigma + rho||^2 - ||rho||^2."""
    s = tuple(a + 1 for a in sigma)
    return float(rs.inner_product(s, s) - rs.inner_product(rs.rho, rs.rho))


@dataclass(frozen=True)
class ExponentFit:
    c: float
    residual: float
    n: int
    level: int
    t: float
    sigmas: tuple[Weight, ...]
    log_moments: tuple[float, ...]  # log E[psi_sigma]
    kernel_power_residual: float | None  # direct check where the moment is representable

    def to_json(self) -> dict:
        return {
            "c": self.c,
            "residual": self.residual,
            "n": self.n,
            "level": self.level,
            "t": self.t,
            "sigmas": [list(s) for s in self.sigmas],
            "log_moments": list(self.log_moments),
            "kernel_power_residual": self.kernel_power_residual,
        }


CHECKABLE_MOMENT = 1e-6


def brownian_exponent_fit(rs: RootSystem, gamma, n: int, t: float, sigmas) -> ExponentFit:
    """Fit -log E[psi_sigma] = c t (||sigma+rho||^2 - ||rho||^2) through the origin.

    The walk runs floor(n t) steps at level floor(sqrt n) from 0.  Its exact
    moments are E[psi_sigma] = (chi_sigma(0)/dim sigma) (chi_gamma(sigma)/chi_gamma(0))^m,
    evaluated in log space since they underflow for moderate sigma.  Where a
    moment exceeds ``CHECKABLE_MOMENT`` it is also recomputed from the m-th
    kernel power and the largest relative disagreement is reported.
    residual is the largest relative deviation of a point from the fitted line.
    """
    if t <= 0:
        raise InvalidInputError("t must be > 0")
    k = math.isqrt(n)
    gamma = check_in_alcove(rs, gamma, k, "gamma")
    sigmas = tuple(check_in_alcove(rs, s, k, "sigma") for s in sigmas)
    if not sigmas:
        raise InvalidInputError("at least one test weight is required")
    if not any(gamma):
        raise InvalidInputError("gamma = 0 gives a constant walk; the fit is rank-deficient")
    alc = enumerate_alcove(rs, k)
    x = character_table(rs, k)
    m = int(math.floor(n * t))
    g = alc.position[gamma]
    xs, ys, checks = [], [], []
    p = None
    for s in sigmas:
        j = alc.position[s]
        ratio = x[g, j].real / x[g, 0].real
        if ratio <= 0:
            raise InvalidInputError(f"eigenvalue for sigma {s} is not positive; the level is too small")
        log_f = math.log(x[j, 0].real / dim(rs, s)) + m * math.log(ratio)
        xs.append(casimir(rs, s) * t)
        ys.append(-log_f)
        if log_f > math.log(CHECKABLE_MOMENT):
            if p is None:
                p = _distribution_after(rs, gamma, k, m)
            # chi_sigma(Lambda) = chi_Lambda(sigma) chi_sigma(0) / chi_Lambda(0)
            col = x[:, j] * x[j, 0].real / x[:, 0].real
            direct = float((p @ col).real) / dim(rs, s)
            checks.append(abs(direct / math.exp(log_f) - 1))
    xs_a, ys_a = np.array(xs), np.array(ys)
    if not np.any(ys_a) or not np.any(xs_a):
        raise InvalidInputError("all moments equal 1; the fit is rank-deficient")
    c = float(xs_a @ ys_a / (xs_a @ xs_a))
    residual = float(np.max(np.abs(ys_a - c * xs_a) / np.abs(ys_a)))
    return ExponentFit(c, residual, n, k, t, sigmas, tuple(-y for y in ys), max(checks) if checks else None)
