"""Affine folding into the level-k alcove and exact fusion coefficients."""

from __future__ import annotations

import csv
import io
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
import sympy

from .charlib import (
    DEFAULT_MAX_DIM,
    DiscretizedCharacterEvaluator,
    check_in_alcove,
    dim,
    tensor_power_multiplicities,
    weight_multiplicities,
)
from .errors import BoundExceededError, ConsistencyError, InvalidInputError
from .rootsys import RootSystem, Weight, _most_negative, weyl_group


@dataclass(frozen=True)
class AffineFoldResult:
    folded: Weight
    sign: int
    reflection_count: int


def fold_affine(rs: RootSystem, x, k: int) -> AffineFoldResult:
    """Fold x + rho into the fundamental domain A_k of the level-k affine Weyl group.

    Finite reflections (most negative label, lowest index first) alternate with
    the affine reflection in the wall <y, theta^v> = k + h.  The sign is 0 when
    x + rho is fixed by a wall; ``folded`` is then x itself.
    """
    if k < 0:
        raise InvalidInputError("level must be >= 0")
    lk = k + rs.dual_coxeter
    theta = rs.theta
    comarks = rs.theta_coroot_pairing_vector
    y = tuple(int(a) + 1 for a in x)
    sign, count = 1, 0
    while True:
        if any(a == 0 for a in y):
            return AffineFoldResult(tuple(x), 0, count)
        i = _most_negative(y)
        if i is not None:
            y = rs.reflect(y, i)
            sign, count = -sign, count + 1
            continue
        t = sum(a * c for a, c in zip(y, comarks))
        if t == lk:
            return AffineFoldResult(tuple(x), 0, count)
        if t < lk:
            return AffineFoldResult(tuple(a - 1 for a in y), sign, count)
        y = tuple(a - (t - lk) * b for a, b in zip(y, theta))
        sign, count = -sign, count + 1


def fusion_coeffs(rs: RootSystem, lam, gamma, k: int, max_dim: int = DEFAULT_MAX_DIM) -> dict[Weight, int]:
    """N_{lam, gamma}^beta by Brauer-Klimyk over the weights of V_gamma plus affine folding."""
    lam = check_in_alcove(rs, lam, k, "lambda")
    gamma = check_in_alcove(rs, gamma, k, "gamma")
    acc: dict[Weight, int] = defaultdict(int)
    for mu, m in weight_multiplicities(rs, gamma, max_dim).entries.items():
        res = fold_affine(rs, tuple(a + b for a, b in zip(lam, mu)), k)
        if res.sign:
            acc[res.folded] += res.sign * m
    out = {b: c for b, c in sorted(acc.items()) if c}
    if any(c < 0 for c in out.values()):
        raise ConsistencyError(f"negative fusion coefficient for {lam} * {gamma} at level {k}")
    return out


def fusion_coeffs_group_sum(rs: RootSystem, lam, gamma, beta, k: int) -> int:
    """N_{lam, gamma}^beta as the literal signed sum over the affine Weyl group.

    For every finite w and every weight mu of V_gamma, the translation part is
    forced: (k + h) x = mu + lam + rho - w(beta + rho) must lie in (k + h) M.
    Slow; kept as an independent cross-check of ``fusion_coeffs``.
    """
    lam = check_in_alcove(rs, lam, k, "lambda")
    gamma = check_in_alcove(rs, gamma, k, "gamma")
    beta = check_in_alcove(rs, beta, k, "beta")
    lk = k + rs.dual_coxeter
    basis_inv = _coroot_lattice_basis_inverse(rs)
    mats, dets = weyl_group(rs)
    b_rho = np.array(beta, dtype=np.int64) + 1
    l_rho = np.array(lam, dtype=np.int64) + 1
    total = 0
    mults = weight_multiplicities(rs, gamma).entries
    for m, d in zip(mats, dets):
        wb = b_rho @ m
        for mu, km in mults.items():
            v = np.array(mu, dtype=np.int64) + l_rho - wb
            if np.any(v % lk):
                continue
            coeffs = [sum(Fraction(int(v[i]) // lk) * basis_inv[i][j] for i in range(rs.rank)) for j in range(rs.rank)]
            if all(c.denominator == 1 for c in coeffs):
                total += int(d) * km
    return total


@lru_cache(maxsize=None)
def coroot_lattice_basis(rs: RootSystem) -> tuple[Weight, ...]:
    """nu(alpha_i^v) = 2 alpha_i / (alpha_i|alpha_i) in fundamental-weight coordinates."""
    out = []
    for a, ln in zip(rs.simple_roots, rs.simple_root_lengths):
        f = Fraction(2) / ln
        assert f.denominator == 1
        out.append(tuple(int(f) * x for x in a))
    return tuple(out)


@lru_cache(maxsize=None)
def _coroot_lattice_basis_inverse(rs: RootSystem) -> tuple[tuple[Fraction, ...], ...]:
    inv = sympy.Matrix(coroot_lattice_basis(rs)).inv()
    return tuple(
        tuple(Fraction(int(sympy.fraction(inv[i, j])[0]), int(sympy.fraction(inv[i, j])[1])) for j in range(rs.rank))
        for i in range(rs.rank)
    )


MAX_ALCOVE_STATES = 20_000


def fusion_matrix(rs: RootSystem, gamma, k: int) -> np.ndarray:
    """Integer matrix N[i, j] = N_{alcove[i], gamma}^{alcove[j]} in alcove order."""
    gamma = check_in_alcove(rs, gamma, k, "gamma")
    d = dim(rs, gamma)
    if d > DEFAULT_MAX_DIM:
        raise BoundExceededError(f"dim V_{gamma} = {d} exceeds bound {DEFAULT_MAX_DIM}")
    check_alcove_size(rs, k)
    return _fusion_matrix(rs, gamma, k)


def check_alcove_size(rs: RootSystem, k: int) -> None:
    from .alcove_markov import enumerate_alcove

    size = len(enumerate_alcove(rs, k))
    if size > MAX_ALCOVE_STATES:
        raise BoundExceededError(f"level-{k} alcove has {size} states, above the dense-matrix bound {MAX_ALCOVE_STATES}")


@lru_cache(maxsize=256)
def _fusion_matrix(rs: RootSystem, gamma: Weight, k: int) -> np.ndarray:
    from .alcove_markov import enumerate_alcove

    alc = enumerate_alcove(rs, k)
    n = len(alc.weights)
    out = np.zeros((n, n), dtype=np.int64)
    for i, lam in enumerate(alc.weights):
        for beta, c in fusion_coeffs(rs, lam, gamma, k).items():
            out[i, alc.position[beta]] = c
    out.setflags(write=False)
    return out


def fusion_power(rs: RootSystem, lam, gamma, n: int, k: int) -> dict[Weight, int]:
    """N_{lam, gamma, n}^beta by iterating the single-step fusion matrix (exact ints)."""
    from .alcove_markov import enumerate_alcove

    lam = check_in_alcove(rs, lam, k, "lambda")
    gamma = check_in_alcove(rs, gamma, k, "gamma")
    if n < 0:
        raise InvalidInputError("n must be >= 0")
    alc = enumerate_alcove(rs, k)
    mat = fusion_matrix(rs, gamma, k).astype(object)
    vec = np.zeros(len(alc.weights), dtype=object)
    vec[:] = 0
    vec[alc.position[lam]] = 1
    for _ in range(n):
        vec = vec.dot(mat)
    return {alc.weights[j]: int(c) for j, c in enumerate(vec) if c}


def fusion_power_tensor_oracle(rs: RootSystem, lam, gamma, n: int, k: int, max_dim: int = DEFAULT_MAX_DIM) -> dict[Weight, int]:
    """N_{lam, gamma, n}^beta from the weights of the n-th tensor power (slow oracle)."""
    lam = check_in_alcove(rs, lam, k, "lambda")
    gamma = check_in_alcove(rs, gamma, k, "gamma")
    acc: dict[Weight, int] = defaultdict(int)
    for mu, m in tensor_power_multiplicities(rs, gamma, n, max_dim).entries.items():
        res = fold_affine(rs, tuple(a + b for a, b in zip(lam, mu)), k)
        if res.sign:
            acc[res.folded] += res.sign * m
    return {b: c for b, c in sorted(acc.items()) if c}


def dual_weight(rs: RootSystem, gamma) -> Weight:
    """Highest weight of the dual representation, -w0(gamma)."""
    gamma = tuple(int(a) for a in gamma)
    if not rs.is_dominant(gamma):
        raise InvalidInputError(f"weight {gamma} is not dominant")
    rep, _ = rs.dominant_representative(tuple(-a for a in gamma))
    return rep


def character_table(rs: RootSystem, k: int) -> np.ndarray:
    """X[i, j] = chi_{alcove[i]}(alcove[j]) at level k."""
    check_alcove_size(rs, k)
    return _character_table(rs, k)


@lru_cache(maxsize=128)
def _character_table(rs: RootSystem, k: int) -> np.ndarray:
    from .alcove_markov import enumerate_alcove

    w = enumerate_alcove(rs, k).weights
    out = DiscretizedCharacterEvaluator(rs, k).table(w, w)
    out.setflags(write=False)
    return out


def verify_fusion_identity(rs: RootSystem, gamma, k: int) -> float:
    """max over lam, sigma of |chi_lam chi_gamma - sum_beta N chi_beta| at sigma."""
    from .alcove_markov import enumerate_alcove

    gamma = check_in_alcove(rs, gamma, k, "gamma")
    alc = enumerate_alcove(rs, k)
    x = character_table(rs, k)
    n = fusion_matrix(rs, gamma, k)
    g = x[alc.position[gamma]]
    resid = x * g[None, :] - n @ x
    return float(np.max(np.abs(resid)))


# ---------------------------------------------------------------------------
# tables and export


@dataclass(frozen=True)
class FusionTable:
    family: str
    rank: int
    level: int
    gamma: Weight
    entries: dict[tuple[Weight, int, Weight], int] = field(default_factory=dict)

    def coeffs(self, lam, n: int = 1) -> dict[Weight, int]:
        lam = tuple(lam)
        return {b: c for (l, m, b), c in self.entries.items() if l == lam and m == n}

    def _sorted(self):
        return sorted(self.entries.items(), key=lambda kv: (kv[0][1], kv[0][0], kv[0][2]))

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "rank": self.rank,
            "level": self.level,
            "gamma": list(self.gamma),
            "entries": [
                {"lambda": list(l), "n": n, "beta": list(b), "coeff": c} for (l, n, b), c in self._sorted()
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "FusionTable":
        entries = {
            (tuple(e["lambda"]), int(e["n"]), tuple(e["beta"])): int(e["coeff"]) for e in data["entries"]
        }
        return cls(data["family"], int(data["rank"]), int(data["level"]), tuple(data["gamma"]), entries)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["family", "rank", "level", "gamma", "lambda", "n", "beta", "coeff"])
        g = " ".join(map(str, self.gamma))
        for (l, n, b), c in self._sorted():
            w.writerow([self.family, self.rank, self.level, g, " ".join(map(str, l)), n, " ".join(map(str, b)), c])
        return buf.getvalue()


def build_fusion_table(rs: RootSystem, gamma, k: int, lambdas=None, n_values=(1,)) -> FusionTable:
    from .alcove_markov import enumerate_alcove

    gamma = check_in_alcove(rs, gamma, k, "gamma")
    if lambdas is None:
        lambdas = enumerate_alcove(rs, k).weights
    entries = {}
    for lam in lambdas:
        lam = check_in_alcove(rs, lam, k, "lambda")
        for n in n_values:
            for b, c in fusion_power(rs, lam, gamma, n, k).items():
                entries[(lam, n, b)] = c
    return FusionTable(rs.family, rs.rank, k, gamma, entries)


def su2_fusion_rule(i: int, j: int, s: int, k: int) -> int:
    """Closed-form SU(2) level-k fusion coefficient."""
    return int(abs(i - j) <= s <= min(i + j, 2 * k - i - j) and (i + j + s) % 2 == 0)

