"""Dimensions, weight multiplicities, discretized characters and tensor products."""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import BoundExceededError, ConsistencyError, InvalidInputError
from .rootsys import RootSystem, Weight, weyl_group

DEFAULT_MAX_DIM = 200_000
LOG_SPACE_ROOTS = 20


def _check_dominant(rs: RootSystem, lam) -> Weight:
    lam = tuple(int(a) for a in lam)
    if len(lam) != rs.rank:
        raise InvalidInputError(f"weight {lam} has length {len(lam)}, expected {rs.rank}")
    if not rs.is_dominant(lam):
        raise InvalidInputError(f"weight {lam} is not dominant")
    return lam


def dim(rs: RootSystem, lam) -> int:
    """Weyl dimension formula, evaluated with coroot pairings (exact)."""
    lam = _check_dominant(rs, lam)
    num = den = 1
    for cor in rs.positive_coroots_simple:
        h = sum(cor)
        num *= h + sum(a * c for a, c in zip(lam, cor))
        den *= h
    if num % den:
        raise ConsistencyError(f"non-integral dimension {num}/{den} for {lam}")
    return num // den


@dataclass(frozen=True)
class WeightMultiplicityMap:
    highest_weight: Weight
    entries: dict[Weight, int]

    @property
    def dim(self) -> int:
        return sum(self.entries.values())

    @property
    def support(self) -> list[Weight]:
        return sorted(self.entries)

    def to_json(self) -> dict:
        return {
            "highest_weight": list(self.highest_weight),
            "entries": [{"weight": list(w), "mult": m} for w, m in sorted(self.entries.items())],
        }

    @classmethod
    def from_json(cls, data: dict) -> "WeightMultiplicityMap":
        return cls(
            tuple(data["highest_weight"]),
            {tuple(e["weight"]): int(e["mult"]) for e in data["entries"]},
        )


def _dominant_weights_below(rs: RootSystem, lam: Weight) -> list[tuple[Weight, int]]:
    """Dominant weights of V_lam with the height of lam - mu, sorted by height."""
    roots = [(a, sum(b)) for a, b in zip(rs.positive_roots, rs.positive_roots_simple)]
    depth = {lam: 0}
    frontier = [lam]
    while frontier:
        nxt = []
        for mu in frontier:
            for a, h in roots:
                nu = tuple(x - y for x, y in zip(mu, a))
                if min(nu) >= 0 and nu not in depth:
                    depth[nu] = depth[mu] + h
                    nxt.append(nu)
        frontier = nxt
    return sorted(depth.items(), key=lambda kv: (kv[1], kv[0]))


@lru_cache(maxsize=4096)
def _dominant_multiplicities(rs: RootSystem, lam: Weight) -> dict[Weight, int]:
    """Freudenthal recursion on the dominant weights, exact integer arithmetic."""
    g = rs.gram_int
    rho = np.ones(rs.rank, dtype=np.int64)
    lam_v = np.array(lam, dtype=np.int64)

    def ip(x, y):
        return int(x @ g @ y)

    top = ip(lam_v + rho, lam_v + rho)
    roots = [np.array(a, dtype=np.int64) for a in rs.positive_roots]
    mult: dict[Weight, int] = {}
    for mu, d in _dominant_weights_below(rs, lam):
        if d == 0:
            mult[mu] = 1
            continue
        mu_v = np.array(mu, dtype=np.int64)
        acc = 0
        for a in roots:
            j = 1
            while True:
                nu = mu_v + j * a
                rep, _ = rs.dominant_representative(tuple(int(x) for x in nu))
                m = mult.get(rep)
                if not m:
                    break
                acc += m * ip(nu, a)
                j += 1
        denom = top - ip(mu_v + rho, mu_v + rho)
        if (2 * acc) % denom:
            raise ConsistencyError(f"Freudenthal produced a non-integer at {mu} in V_{lam}")
        m = 2 * acc // denom
        if m:
            mult[mu] = m
    return mult


def weight_multiplicities(rs: RootSystem, lam, max_dim: int = DEFAULT_MAX_DIM) -> WeightMultiplicityMap:
    """All weights of V_lam with multiplicities (Freudenthal + Weyl orbits)."""
    lam = _check_dominant(rs, lam)
    d = dim(rs, lam)
    if d > max_dim:
        raise BoundExceededError(f"dim V_{lam} = {d} exceeds bound {max_dim}")
    return _full_multiplicities(rs, lam)


@lru_cache(maxsize=4096)
def _full_multiplicities(rs: RootSystem, lam: Weight) -> WeightMultiplicityMap:
    entries: dict[Weight, int] = {}
    for mu, m in _dominant_multiplicities(rs, lam).items():
        for nu in rs.weyl_orbit(mu):
            entries[nu] = m
    return WeightMultiplicityMap(lam, dict(sorted(entries.items())))


def is_minuscule(rs: RootSystem, lam) -> bool:
    lam = _check_dominant(rs, lam)
    return list(_dominant_multiplicities(rs, lam)) == [lam]


def is_quasi_minuscule(rs: RootSystem, lam) -> bool:
    lam = _check_dominant(rs, lam)
    zero = (0,) * rs.rank
    return lam != zero and set(_dominant_multiplicities(rs, lam)) == {lam, zero}


def tensor_power_multiplicities(rs: RootSystem, gamma, n: int, max_dim: int = DEFAULT_MAX_DIM) -> WeightMultiplicityMap:
    """Weights of the n-th tensor power of V_gamma (n-fold convolution)."""
    gamma = _check_dominant(rs, gamma)
    if n < 0:
        raise InvalidInputError("tensor power exponent must be >= 0")
    d = dim(rs, gamma)
    if d**n > max_dim:
        raise BoundExceededError(f"dim(gamma)^n = {d}^{n} exceeds bound {max_dim}")
    base = weight_multiplicities(rs, gamma, max_dim).entries
    cur: dict[Weight, int] = {(0,) * rs.rank: 1}
    for _ in range(n):
        nxt: dict[Weight, int] = defaultdict(int)
        for w, m in cur.items():
            for s, k in base.items():
                nxt[tuple(a + b for a, b in zip(w, s))] += m * k
        cur = nxt
    return WeightMultiplicityMap(gamma, dict(sorted(cur.items())))


def tensor_decompose(rs: RootSystem, lam, gamma, max_dim: int = DEFAULT_MAX_DIM) -> dict[Weight, int]:
    """Littlewood-Richardson multiplicities of V_lam x V_gamma (Brauer-Klimyk)."""
    lam = _check_dominant(rs, lam)
    gamma = _check_dominant(rs, gamma)
    acc: dict[Weight, int] = defaultdict(int)
    for beta, k in weight_multiplicities(rs, gamma, max_dim).entries.items():
        mu, sign = rs.fold_finite(tuple(a + b for a, b in zip(lam, beta)))
        if sign:
            acc[mu] += sign * k
    out = {b: m for b, m in sorted(acc.items()) if m}
    if any(m < 0 for m in out.values()):
        raise ConsistencyError(f"negative tensor multiplicity in {lam} x {gamma}")
    return out


# ---------------------------------------------------------------------------
# level-k quantities


def _angles(rs: RootSystem, lam, level_shift: int) -> list[float]:
    """pi * (lam + rho | alpha) / (k + h) for each positive root."""
    out = []
    for cor, ln in zip(rs.positive_coroots_simple, rs.root_lengths):
        p = sum(cor) + sum(a * c for a, c in zip(lam, cor))
        out.append(math.pi * float(p * ln / 2) / level_shift)
    return out


def sine_product(rs: RootSystem, lam, k: int) -> float:
    """s(lam) = prod_{alpha>0} sin(pi (lam + rho | alpha) / (k + h))."""
    return math.prod(math.sin(t) for t in _angles(rs, lam, k + rs.dual_coxeter))


def in_alcove(rs: RootSystem, lam, k: int) -> bool:
    return len(lam) == rs.rank and rs.is_dominant(lam) and rs.level_of(lam) <= k


def check_in_alcove(rs: RootSystem, lam, k: int, name: str = "weight") -> Weight:
    lam = tuple(int(a) for a in lam)
    if len(lam) != rs.rank:
        raise InvalidInputError(f"{name} {lam} has length {len(lam)}, expected {rs.rank}")
    if not rs.is_dominant(lam):
        raise InvalidInputError(f"{name} {lam} is not dominant (negative Dynkin label)")
    lev = rs.level_of(lam)
    if lev > k:
        raise InvalidInputError(f"{name} {lam} violates the alcove constraint <{name}, theta^v> <= k: {lev} > {k}")
    return lam


def asymptotic_dim(rs: RootSystem, lam, k: int) -> float:
    """chi_lam(0) as a product of sine ratios; log-space for many roots."""
    lam = check_in_alcove(rs, lam, k)
    lk = k + rs.dual_coxeter
    num = _angles(rs, lam, lk)
    den = _angles(rs, (0,) * rs.rank, lk)
    if len(num) > LOG_SPACE_ROOTS:
        return math.exp(sum(math.log(math.sin(a)) - math.log(math.sin(b)) for a, b in zip(num, den)))
    return math.prod(math.sin(a) / math.sin(b) for a, b in zip(num, den))


def _alternating_sums(rs: RootSystem, shifted: np.ndarray, points: np.ndarray, level_shift: int) -> np.ndarray:
    """A[i, j] = sum_w det(w) exp(-2 pi i (w a_i | b_j) / L) with exact phases.

    shifted: (m, r) integer rho-shifted weights a_i; points: (p, r) integer b_j.
    """
    mats, dets = weyl_group(rs)
    modulus = rs.gram_denominator * level_shift
    gb = rs.gram_int @ points.T  # (r, p)
    out = np.zeros((shifted.shape[0], points.shape[0]), dtype=complex)
    for m, d in zip(mats, dets):
        phase = np.mod((shifted @ m) @ gb, modulus)
        out += d * np.exp(-2j * np.pi * phase / modulus)
    return out


class DiscretizedCharacterEvaluator:
    """Level-k discretized characters chi_lam(sigma) via the Weyl character formula.

    Values are complex in general; they are real when lam or sigma is
    self-dual.
    """

    def __init__(self, rs: RootSystem, k: int):
        if k < 0:
            raise InvalidInputError("level must be >= 0")
        self.rs = rs
        self.k = k
        self.level_shift = k + rs.dual_coxeter

    def denominators(self, sigmas) -> np.ndarray:
        pts = np.array(sigmas, dtype=np.int64).reshape(-1, self.rs.rank) + 1
        rho = np.ones((1, self.rs.rank), dtype=np.int64)
        return _alternating_sums(self.rs, rho, pts, self.level_shift)[0]

    def table(self, lams, sigmas) -> np.ndarray:
        """T[i, j] = chi_{lams[i]}(sigmas[j]); lams may be non-dominant."""
        for s in sigmas:
            check_in_alcove(self.rs, s, self.k, "sigma")
        lam_arr = np.array(lams, dtype=np.int64).reshape(-1, self.rs.rank) + 1
        pts = np.array(sigmas, dtype=np.int64).reshape(-1, self.rs.rank) + 1
        num = _alternating_sums(self.rs, lam_arr, pts, self.level_shift)
        den = _alternating_sums(self.rs, np.ones((1, self.rs.rank), dtype=np.int64), pts, self.level_shift)
        vals = num / den
        # exact zeros on affine walls
        from .fusion import fold_affine

        for i, lam in enumerate(lams):
            if fold_affine(self.rs, lam, self.k).sign == 0:
                vals[i, :] = 0.0
        return vals

    def __call__(self, lam, sigma) -> complex:
        return complex(self.table([tuple(lam)], [tuple(sigma)])[0, 0])


def discretized_character(rs: RootSystem, lam, sigma, k: int) -> complex:
    """chi_lam(sigma) at level k."""
    return DiscretizedCharacterEvaluator(rs, k)(lam, sigma)
