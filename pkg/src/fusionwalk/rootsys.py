"""Classical root systems A, B, C, D with exact weight arithmetic.

Weights are integer tuples in the fundamental-weight basis (Dynkin labels).
The invariant form is normalised so that long roots have squared length 2,
i.e. (theta^v | theta^v) = 2, and is stored as a rational Gram matrix of the
fundamental weights.  Simple roots follow the Bourbaki numbering.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np
import sympy

from .errors import InvalidInputError

Weight = tuple[int, ...]

FAMILIES = ("A", "B", "C", "D")
MIN_RANK = {"A": 1, "B": 2, "C": 2, "D": 3}


def _cartan_matrix(family: str, rank: int) -> list[list[int]]:
    """Return C with C[i][j] = <alpha_i, alpha_j^v>."""
    n = rank
    c = [[0] * n for _ in range(n)]
    for i in range(n):
        c[i][i] = 2
    for i in range(n - 1):
        c[i][i + 1] = c[i + 1][i] = -1
    if family == "B":
        # alpha_n = e_n is short
        c[n - 2][n - 1] = -2
        c[n - 1][n - 2] = -1
    elif family == "C":
        # alpha_n = 2 e_n is long
        c[n - 2][n - 1] = -1
        c[n - 1][n - 2] = -2
    elif family == "D":
        c[n - 2][n - 1] = c[n - 1][n - 2] = 0
        c[n - 3][n - 1] = c[n - 1][n - 3] = -1
    return c


def _simple_root_lengths(family: str, rank: int) -> list[Fraction]:
    lengths = [Fraction(2)] * rank
    if family == "B":
        lengths[-1] = Fraction(1)
    elif family == "C":
        lengths = [Fraction(1)] * (rank - 1) + [Fraction(2)]
    return lengths


def _weyl_order(family: str, rank: int) -> int:
    if family == "A":
        return math.factorial(rank + 1)
    if family in ("B", "C"):
        return 2**rank * math.factorial(rank)
    return 2 ** (rank - 1) * math.factorial(rank)


@dataclass(frozen=True)
class RootSystem:
    family: str
    rank: int
    cartan: tuple[tuple[int, ...], ...]
    simple_root_lengths: tuple[Fraction, ...]
    positive_roots_simple: tuple[tuple[int, ...], ...]
    positive_coroots_simple: tuple[tuple[int, ...], ...]
    gram: tuple[tuple[Fraction, ...], ...]
    dual_coxeter: int
    weyl_order: int
    theta_index: int = field(repr=False)

    # ---- derived data -------------------------------------------------
    @property
    def simple_roots(self) -> tuple[Weight, ...]:
        return tuple(tuple(row) for row in self.cartan)

    @property
    def simple_coroots(self) -> tuple[Weight, ...]:
        """Simple coroots as pairing vectors: <lam, alpha_i^v> = lam . e_i."""
        return tuple(tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank))

    @property
    def fundamental_weights(self) -> tuple[Weight, ...]:
        return self.simple_coroots

    @cached_property
    def positive_roots(self) -> tuple[Weight, ...]:
        """Positive roots in fundamental-weight coordinates."""
        return tuple(self.from_simple_root_coords(b) for b in self.positive_roots_simple)

    @property
    def n_positive_roots(self) -> int:
        return len(self.positive_roots_simple)

    @property
    def rho(self) -> Weight:
        return (1,) * self.rank

    @property
    def theta(self) -> Weight:
        return self.positive_roots[self.theta_index]

    @property
    def theta_coroot_pairing_vector(self) -> Weight:
        """Comarks: lam -> <lam, theta^v> is the dot product with this vector."""
        return self.positive_coroots_simple[self.theta_index]

    @cached_property
    def gram_denominator(self) -> int:
        return math.lcm(*(x.denominator for row in self.gram for x in row))

    @cached_property
    def gram_int(self) -> np.ndarray:
        """Integer matrix gram_denominator * gram."""
        d = self.gram_denominator
        return np.array([[int(x * d) for x in row] for row in self.gram], dtype=np.int64)

    @cached_property
    def root_lengths(self) -> tuple[Fraction, ...]:
        """(alpha|alpha) for each positive root."""
        return tuple(self.inner_product(a, a) for a in self.positive_roots)

    # ---- arithmetic ----------------------------------------------------
    def from_simple_root_coords(self, b) -> Weight:
        r = self.rank
        return tuple(sum(b[j] * self.cartan[j][i] for j in range(r)) for i in range(r))

    def pairing(self, lam, index: int | str) -> int:
        """<lam, alpha_i^v> for a simple index, or <lam, theta^v> for 'theta'."""
        if index == "theta":
            return sum(a * c for a, c in zip(lam, self.theta_coroot_pairing_vector))
        if not (isinstance(index, int) and 0 <= index < self.rank):
            raise InvalidInputError(f"coroot index {index!r} out of range for rank {self.rank}")
        return lam[index]

    def coroot_pairing(self, lam, root_idx: int) -> int:
        """<lam, alpha^v> for the positive root with the given index."""
        return sum(a * c for a, c in zip(lam, self.positive_coroots_simple[root_idx]))

    def inner_product(self, lam, mu) -> Fraction:
        g = self.gram
        r = self.rank
        return sum(
            (lam[i] * g[i][j] * mu[j] for i in range(r) for j in range(r) if lam[i] and mu[j]),
            Fraction(0),
        )

    def is_dominant(self, lam) -> bool:
        return all(a >= 0 for a in lam)

    def level_of(self, lam) -> int:
        return self.pairing(lam, "theta")

    def reflect(self, lam, i: int) -> Weight:
        """Simple reflection s_i(lam) = lam - <lam, alpha_i^v> alpha_i."""
        c = lam[i]
        if c == 0:
            return tuple(lam)
        a = self.cartan[i]
        return tuple(x - c * y for x, y in zip(lam, a))

    def dominant_representative(self, lam) -> tuple[Weight, int]:
        """Plain W-action: return (dominant weight in the orbit of lam, det(w))."""
        lam = tuple(lam)
        sign = 1
        while True:
            i = _most_negative(lam)
            if i is None:
                return lam, sign
            lam = self.reflect(lam, i)
            sign = -sign

    def weyl_orbit(self, lam) -> list[Weight]:
        seen = {tuple(lam)}
        stack = [tuple(lam)]
        while stack:
            mu = stack.pop()
            for i in range(self.rank):
                if mu[i]:
                    nu = self.reflect(mu, i)
                    if nu not in seen:
                        seen.add(nu)
                        stack.append(nu)
        return sorted(seen)

    def fold_finite(self, x) -> tuple[Weight, int]:
        """Fold x + rho into the dominant chamber; return (mu, det(w)).

        mu is dominant with w(mu + rho) = x + rho.  The sign is 0 when x + rho
        lies on a wall, in which case mu is x unchanged.
        """
        y = tuple(a + 1 for a in x)
        sign = 1
        while True:
            if any(a == 0 for a in y):
                return tuple(x), 0
            i = _most_negative(y)
            if i is None:
                return tuple(a - 1 for a in y), sign
            y = self.reflect(y, i)
            sign = -sign

    # ---- serialisation --------------------------------------------------
    def to_json(self) -> dict:
        return {
            "family": self.family,
            "rank": self.rank,
            "h_dual": self.dual_coxeter,
            "gram": [[f"{x.numerator}/{x.denominator}" for x in row] for row in self.gram],
            "rho": list(self.rho),
            "theta": list(self.theta),
        }

    @classmethod
    def from_json(cls, data: dict) -> "RootSystem":
        rs = build_root_system(data["family"], int(data["rank"]))
        if rs.to_json() != data:
            raise InvalidInputError("root-system JSON does not match the rebuilt descriptor")
        return rs


def _most_negative(lam) -> int | None:
    best, idx = 0, None
    for i, a in enumerate(lam):
        if a < best:
            best, idx = a, i
    return idx


@lru_cache(maxsize=None)
def build_root_system(family: str, rank: int) -> RootSystem:
    family = str(family).upper()
    if family not in FAMILIES:
        raise InvalidInputError(f"unsupported family {family!r}; expected one of {FAMILIES}")
    if not isinstance(rank, int) or rank < MIN_RANK[family]:
        raise InvalidInputError(
            f"family {family} requires rank >= {MIN_RANK[family]}, got {rank!r}"
        )
    cartan = _cartan_matrix(family, rank)
    lengths = _simple_root_lengths(family, rank)
    r = rank

    # root-basis form B_ij = (alpha_i|alpha_j) = C_ij (alpha_j|alpha_j) / 2
    bmat = [[cartan[i][j] * lengths[j] / 2 for j in range(r)] for i in range(r)]

    def pair_simple(b, i):  # <beta, alpha_i^v> for beta in simple-root coords
        return sum(b[j] * cartan[j][i] for j in range(r))

    roots = set()
    stack = [tuple(int(i == j) for j in range(r)) for i in range(r)]
    roots.update(stack)
    while stack:
        b = stack.pop()
        for i in range(r):
            c = pair_simple(b, i)
            if c:
                nb = tuple(x - c * int(j == i) for j, x in enumerate(b))
                if nb not in roots:
                    roots.add(nb)
                    stack.append(nb)
    positive = sorted((b for b in roots if all(x >= 0 for x in b)), key=lambda b: (sum(b), b))

    def norm2(b):
        return sum(b[i] * bmat[i][j] * b[j] for i in range(r) for j in range(r))

    coroots = []
    for b in positive:
        n2 = norm2(b)
        cb = [b[j] * lengths[j] / n2 for j in range(r)]
        assert all(x.denominator == 1 for x in cb)
        coroots.append(tuple(int(x) for x in cb))

    heights = [sum(b) for b in positive]
    theta_index = max(range(len(positive)), key=lambda i: heights[i])

    cm = sympy.Matrix(cartan)
    bm = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in bmat])
    cinv = cm.inv()
    g = cinv * bm * cinv.T
    gram = tuple(
        tuple(Fraction(int(sympy.fraction(g[i, j])[0]), int(sympy.fraction(g[i, j])[1])) for j in range(r))
        for i in range(r)
    )
    h_dual = 1 + sum(coroots[theta_index])
    return RootSystem(
        family=family,
        rank=rank,
        cartan=tuple(tuple(row) for row in cartan),
        simple_root_lengths=tuple(lengths),
        positive_roots_simple=tuple(positive),
        positive_coroots_simple=tuple(coroots),
        gram=gram,
        dual_coxeter=h_dual,
        weyl_order=_weyl_order(family, rank),
        theta_index=theta_index,
    )


@lru_cache(maxsize=None)
def weyl_group(rs: RootSystem) -> tuple[np.ndarray, np.ndarray]:
    """All Weyl group elements as integer matrices acting on row vectors.

    Returns (mats, dets) with mats of shape (|W|, rank, rank).
    """
    r = rs.rank
    gens = []
    for i in range(r):
        s = np.eye(r, dtype=np.int64)
        s[i, :] -= np.array(rs.cartan[i], dtype=np.int64)
        gens.append(s)
    ident = np.eye(r, dtype=np.int64)
    elems = {ident.tobytes(): (ident, 1)}
    frontier = [(ident, 1)]
    while frontier:
        nxt = []
        for m, d in frontier:
            for s in gens:
                p = m @ s
                key = p.tobytes()
                if key not in elems:
                    elems[key] = (p, -d)
                    nxt.append((p, -d))
        frontier = nxt
    if len(elems) != rs.weyl_order:
        raise AssertionError(f"generated {len(elems)} Weyl elements, expected {rs.weyl_order}")
    items = sorted(elems.values(), key=lambda md: md[0].tobytes())
    mats = np.stack([m for m, _ in items])
    dets = np.array([d for _, d in items], dtype=np.int64)
    return mats, dets


def orthogonal_coords(rs: RootSystem, lam) -> tuple[Fraction, ...]:
    """Coordinates of lam in the standard epsilon basis.

    Type A uses n = rank + 1 traceless coordinates.  Type C uses the
    unnormalised basis in which the long roots are 2 e_i.
    """
    n = rs.rank
    fam = rs.family
    if fam == "A":
        m = n + 1
        out = [Fraction(0)] * m
        for i, a in enumerate(lam, start=1):
            for j in range(m):
                out[j] += a * ((1 if j < i else 0) - Fraction(i, m))
        return tuple(out)
    out = [Fraction(0)] * n
    for i, a in enumerate(lam, start=1):
        if fam == "B" and i == n:
            vec = [Fraction(1, 2)] * n
        elif fam == "D" and i == n - 1:
            vec = [Fraction(1, 2)] * (n - 1) + [Fraction(-1, 2)]
        elif fam == "D" and i == n:
            vec = [Fraction(1, 2)] * n
        else:
            vec = [Fraction(1)] * i + [Fraction(0)] * (n - i)
        for j in range(n):
            out[j] += a * vec[j]
    return tuple(out)


def supported_systems(max_rank: int) -> list[tuple[str, int]]:
    return [(f, r) for f in FAMILIES for r in range(MIN_RANK[f], max_rank + 1)]
