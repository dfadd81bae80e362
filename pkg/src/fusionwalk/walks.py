"""Brute-force walk and Littelmann-path counts, free kernels and the closed-form
asymptotic constants for the classical alcove walks.

Everything here counts directly on the lattice; it never calls the fusion
code, so agreement with ``fusion_power`` is a genuine cross-check.
"""

from __future__ import annotations

import csv
import io
import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .charlib import (
    check_in_alcove,
    in_alcove,
    is_minuscule,
    is_quasi_minuscule,
    sine_product,
    weight_multiplicities,
)
from .errors import InvalidInputError
from .rootsys import RootSystem, Weight, orthogonal_coords


@dataclass(frozen=True)
class StepSet:
    steps: tuple[tuple[Weight, int], ...]  # (weight, multiplicity)
    kind: str  # minuscule | quasi-minuscule | composite | general

    @property
    def size(self) -> int:
        return sum(m for _, m in self.steps)


def step_set(rs: RootSystem, gamma) -> StepSet:
    """Weights of V_gamma with multiplicities."""
    mults = weight_multiplicities(rs, gamma).entries
    if is_minuscule(rs, gamma):
        kind = "minuscule"
    elif is_quasi_minuscule(rs, gamma):
        kind = "quasi-minuscule"
    else:
        kind = "general"
    return StepSet(tuple(sorted(mults.items())), kind)


def composite_step_set(rs: RootSystem, gammas) -> StepSet:
    """Union of several weight systems, multiplicities added."""
    acc: dict[Weight, int] = defaultdict(int)
    for g in gammas:
        for w, m in weight_multiplicities(rs, g).entries.items():
            acc[w] += m
    return StepSet(tuple(sorted(acc.items())), "composite")


def _shift(a, b, c=1):
    return tuple(x + c * y for x, y in zip(a, b))


def walk_counts(rs: RootSystem, lam, steps: StepSet, n: int, k: int) -> dict[Weight, int]:
    """Number of n-step walks from lam that never leave the level-k alcove, by endpoint."""
    lam = check_in_alcove(rs, lam, k, "lambda")
    if steps.kind not in ("minuscule", "composite"):
        raise InvalidInputError(f"walk counting needs minuscule steps, got a {steps.kind} step set")
    if n < 0:
        raise InvalidInputError("n must be >= 0")
    cur = {lam: 1}
    for _ in range(n):
        nxt: dict[Weight, int] = defaultdict(int)
        for x, c in cur.items():
            for s, m in steps.steps:
                y = _shift(x, s)
                if in_alcove(rs, y, k):
                    nxt[y] += c * m
        cur = nxt
    return dict(sorted(cur.items()))


def count_walks(rs: RootSystem, lam, beta, steps: StepSet, n: int, k: int) -> int:
    beta = check_in_alcove(rs, beta, k, "beta")
    return walk_counts(rs, lam, steps, n, k).get(beta, 0)


def count_free_walks(lam, steps: StepSet, n: int) -> dict[Weight, int]:
    """Unconstrained n-step walk counts on the weight lattice."""
    cur = {tuple(lam): 1}
    for _ in range(n):
        nxt: dict[Weight, int] = defaultdict(int)
        for x, c in cur.items():
            for s, m in steps.steps:
                nxt[_shift(x, s)] += c * m
        cur = nxt
    return dict(sorted(cur.items()))


def free_kernel_step(rs: RootSystem, lam, gamma) -> dict[Weight, Fraction]:
    """p_gamma(lam, .) = K_gamma^{beta - lam} / dim(gamma)."""
    mults = weight_multiplicities(rs, gamma).entries
    total = sum(mults.values())
    return {_shift(lam, w): Fraction(m, total) for w, m in sorted(mults.items())}


# ---------------------------------------------------------------------------
# Littelmann paths


@dataclass(frozen=True)
class PathFamily:
    """Littelmann module of a minuscule or quasi-minuscule weight.

    Orbit paths are straight segments t -> t mu.  A dip path along a simple
    root alpha goes to -alpha/2 at t = 1/2 and returns to 0 at t = 1.
    """

    gamma: Weight
    orbit_steps: tuple[Weight, ...]
    dip_roots: tuple[Weight, ...]

    def paths(self):
        """Each path as its list of breakpoints after t = 0 (doubled coordinates)."""
        out = [[tuple(2 * a for a in mu)] for mu in self.orbit_steps]
        out += [[tuple(-a for a in alpha), (0,) * len(alpha)] for alpha in self.dip_roots]
        return out

    def endpoints(self) -> list[Weight]:
        return list(self.orbit_steps) + [(0,) * len(self.gamma)] * len(self.dip_roots)


def littelmann_module(rs: RootSystem, gamma) -> PathFamily:
    gamma = tuple(gamma)
    if not (is_minuscule(rs, gamma) or is_quasi_minuscule(rs, gamma)):
        raise InvalidInputError(f"{gamma} is neither minuscule nor quasi-minuscule")
    mults = weight_multiplicities(rs, gamma).entries
    bad = [w for w in mults if abs(rs.level_of(w)) > 1]
    if bad:
        raise InvalidInputError(f"weight {bad[0]} of V_{gamma} has <mu, theta^v> outside {{-1, 0, 1}}")
    orbit = tuple(sorted(rs.weyl_orbit(gamma)))
    orbit_set = set(orbit)
    dips = tuple(a for a in rs.simple_roots if a in orbit_set)
    zero = (0,) * rs.rank
    if len(dips) != mults.get(zero, 0):
        raise InvalidInputError(
            f"{len(dips)} dip paths but the zero weight of V_{gamma} has multiplicity {mults.get(zero, 0)}"
        )
    return PathFamily(gamma, orbit, dips)


def _in_scaled_alcove(rs: RootSystem, x2, k: int) -> bool:
    """Membership of x2 / 2 in the closed region C^k."""
    return min(x2) >= 0 and rs.level_of(x2) <= 2 * k


def littelmann_counts(rs: RootSystem, lam, gamma, n: int, k: int) -> dict[Weight, int]:
    """Paths in pi_lam * (B pi_gamma)^{*n} staying in C^k, by endpoint.

    Every piece is linear between breakpoints and C^k is convex, so checking
    breakpoints (segment ends and dip midpoints) is exact.
    """
    lam = check_in_alcove(rs, lam, k, "lambda")
    fam = littelmann_module(rs, gamma)
    if n < 0:
        raise InvalidInputError("n must be >= 0")
    pieces = fam.paths()
    cur = {lam: 1}
    for _ in range(n):
        nxt: dict[Weight, int] = defaultdict(int)
        for x, c in cur.items():
            x2 = tuple(2 * a for a in x)
            for pts in pieces:
                if all(_in_scaled_alcove(rs, _shift(x2, p), k) for p in pts):
                    end = _shift(x2, pts[-1])
                    nxt[tuple(a // 2 for a in end)] += c
        cur = nxt
    return dict(sorted(cur.items()))


def count_littelmann_paths(rs: RootSystem, lam, beta, gamma, n: int, k: int) -> int:
    beta = check_in_alcove(rs, beta, k, "beta")
    return littelmann_counts(rs, lam, gamma, n, k).get(beta, 0)


def enumerate_littelmann_paths(rs: RootSystem, lam, gamma, n: int, k: int):
    """Yield every admissible sequence of module paths (exhaustive; small n only)."""
    lam = check_in_alcove(rs, lam, k, "lambda")
    fam = littelmann_module(rs, gamma)
    pieces = fam.paths()
    for seq in product(range(len(pieces)), repeat=n):
        x2 = tuple(2 * a for a in lam)
        ok = True
        for idx in seq:
            pts = pieces[idx]
            if not all(_in_scaled_alcove(rs, _shift(x2, p), k) for p in pts):
                ok = False
                break
            x2 = _shift(x2, pts[-1])
        if ok:
            yield seq, tuple(a // 2 for a in x2)


# ---------------------------------------------------------------------------
# closed-form constants for the classical walks


CLOSED_FORM_CASES = {
    ("A", "positive-standard"): "A-positive-standard",
    ("A", "exterior-powers"): "A-exterior-powers",
    ("C", "standard"): "C-standard",
    ("D", "standard"): "D-standard",
    ("D", "half-spins"): "D-half-spins",
    ("B", "standard-paths"): "B-standard-paths",
    ("B", "spin"): "B-spin",
}
GARBLED = {"C-standard", "D-standard"}


def closed_form_increments(rs: RootSystem, kind: str) -> list[Weight]:
    """Highest weights whose fusion kernels realise each classical walk."""
    if (rs.family, kind) not in CLOSED_FORM_CASES:
        raise InvalidInputError(f"unsupported combination ({rs.family}, {kind})")
    r = rs.rank

    def omega(i):
        return tuple(int(j == i - 1) for j in range(r))

    zero = (0,) * r
    if kind == "exterior-powers":
        return [zero] + [omega(m) for m in range(1, r + 1)] + [zero]
    if kind == "half-spins":
        return [omega(r - 1), omega(r)]
    if kind == "spin":
        return [omega(r)]
    return [omega(1)]


@dataclass(frozen=True)
class ClosedFormConstant:
    case: str
    growth: float
    boundary_x: float
    boundary_y: float
    residue: int | None
    period: int


def _s(t):
    return math.sin(math.pi * t)


def closed_form_constant(rs: RootSystem, kind: str, k: int, x, y) -> ClosedFormConstant:
    """Evaluate the closed-form sine products for the walk (family, kind) as stated.

    growth is the factor raised to the number of steps, boundary_x/boundary_y
    the x- and y-dependent products, residue the stated residue class of the
    step count (None if the stated rule does not apply to (x, y)).  The
    displays for the type C and type D standard walks are evaluated as
    literally stated.
    """
    case = CLOSED_FORM_CASES.get((rs.family, kind))
    if case is None:
        raise InvalidInputError(f"unsupported combination ({rs.family}, {kind})")
    x = check_in_alcove(rs, x, k, "x")
    y = check_in_alcove(rs, y, k, "y")
    ox = [float(c) for c in orthogonal_coords(rs, x)]
    oy = [float(c) for c in orthogonal_coords(rs, y)]
    diff = [a - b for a, b in zip(orthogonal_coords(rs, y), orthogonal_coords(rs, x))]
    pairs = lambda n: [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]  # noqa: E731

    if rs.family == "A":
        n = rs.rank + 1
        lk = k + n

        def bnd(z):
            return math.prod(_s((z[i - 1] - z[j - 1] + j - i) / lk) for i, j in pairs(n))

        if kind == "positive-standard":
            growth = math.prod(_s(i / lk) / _s((i - 1) / lk) for i in range(2, n + 1))
            residue = int((-diff[0] * n) % n)
            return ClosedFormConstant(case, growth, bnd(ox), bnd(oy), residue, n)
        growth = sum(
            math.prod(_s((1 + j - i) / lk) / _s((j - i) / lk) for i in range(1, m + 1) for j in range(m + 1, n + 1))
            for m in range(n + 1)
        )
        return ClosedFormConstant(case, growth, bnd(ox), bnd(oy), 0, 1)

    n = rs.rank
    if rs.family == "C":
        lk = k + n + 1
        r2 = math.sqrt(2.0)
        growth = _s((r2 + n) / lk) / _s(n / lk) * math.prod(
            _s((i - r2 + 1) / (2 * lk)) / _s((i - 1) / (2 * lk))
            * _s((r2 + 2 * n + 1 - i) / (2 * lk)) / _s((2 * n + 1 - i) / (2 * lk))
            for i in range(2, n + 1)
        )

        def bnd(z):  # z in the unnormalised basis; the stated x_i is z_i / sqrt 2
            xs = [c / r2 for c in z]
            out = 1.0
            for i, j in pairs(n):
                out *= _s(((xs[i - 1] - xs[j - 1]) / r2 + (j - i) / 2) / lk)
                out /= _s(((xs[i - 1] + xs[j - 1]) / r2 + (2 * n + 2 - j - i) / 2) / lk)
            for i in range(1, n + 1):
                out *= _s((r2 * xs[i - 1] + n - i + 1) / lk)
            return out

        residue = int(sum(diff)) % 2 if all(c.denominator == 1 for c in diff) else None
        return ClosedFormConstant(case, growth, bnd(ox), bnd(oy), residue, 2)

    if rs.family == "D":
        lk = k + 2 * n - 2
        if kind == "standard":
            growth = math.prod(
                _s(i / lk) / _s((i - 1) / lk) * _s((2 * n - i) / lk) / _s((2 * n - i - 1) / lk)
                for i in range(2, n + 1)
            )

            def bnd(z):
                return math.prod(
                    _s((z[i - 1] - z[j - 1] + j - i) / lk) / _s((z[i - 1] + z[j - 1] + 2 * n - j - i) / lk)
                    for i, j in pairs(n)
                )

            residue = int(sum(diff)) % 2 if all(c.denominator == 1 for c in diff) else None
            return ClosedFormConstant(case, growth, bnd(ox), bnd(oy), residue, 2)
        growth = math.prod(_s((1 + 2 * n - i - j) / lk) / _s((2 * n - i - j) / lk) for i, j in pairs(n)) + math.prod(
            _s((1 + 2 * n - i - j) / lk) / _s((2 * n - i - j) / lk) for i, j in pairs(n - 1)
        ) * math.prod(_s((1 + n - i) / lk) / _s((n - i) / lk) for i in range(1, n))

        def bnd(z):
            return math.prod(
                _s((z[i - 1] - z[j - 1] + j - i) / lk) * _s((z[i - 1] + z[j - 1] + 2 * n - j - i) / lk)
                for i, j in pairs(n)
            )

        residue = 1 if all(c.denominator == 2 for c in diff) else 0
        return ClosedFormConstant(case, growth, bnd(ox), bnd(oy), residue, 2)

    # type B
    lk = k + 2 * n - 1

    def bnd(z):
        out = math.prod(
            _s((z[i - 1] - z[j - 1] + j - i) / lk) * _s((z[i - 1] + z[j - 1] + 2 * n + 1 - i - j) / lk)
            for i, j in pairs(n)
        )
        return out * math.prod(_s((z[i - 1] + n - 0.5) / lk) for i in range(1, n + 1))

    if kind == "standard-paths":
        growth = _s((0.5 + n) / lk) / _s((n - 0.5) / lk) * math.prod(
            _s(i / lk) / _s((i - 1) / lk) * _s((2 * n + 1 - i) / lk) / _s((2 * n - i) / lk) for i in range(2, n + 1)
        )
        return ClosedFormConstant(case, growth, bnd(ox), bnd(oy), 0, 1)
    growth = math.prod(_s((n + 1 - i) / lk) / _s((n - i + 0.5) / lk) for i in range(1, n + 1)) * math.prod(
        _s((2 * n + 2 - i - j) / lk) / _s((2 * n - i - j) / (k + 2 * n - 2)) for i, j in pairs(n)
    )
    residue = 1 if all(c.denominator == 2 for c in diff) else 0
    return ClosedFormConstant(case, growth, bnd(ox), bnd(oy), residue, 2)


@dataclass(frozen=True)
class ClosedFormReport:
    case: str
    family: str
    rank: int
    level: int
    x: Weight
    y: Weight
    closed: ClosedFormConstant
    general_growth: float
    general_boundary_x: float
    general_boundary_y: float
    general_residue: int | None
    general_period: int
    tolerance: float

    @property
    def growth_ok(self) -> bool:
        return math.isclose(self.closed.growth, self.general_growth, rel_tol=self.tolerance, abs_tol=0)

    @property
    def boundary_ok(self) -> bool:
        return math.isclose(
            self.closed.boundary_x, self.general_boundary_x, rel_tol=self.tolerance, abs_tol=self.tolerance
        ) and math.isclose(self.closed.boundary_y, self.general_boundary_y, rel_tol=self.tolerance, abs_tol=self.tolerance)

    @property
    def residue_ok(self) -> bool:
        if self.general_residue is None:
            return True
        if self.closed.residue is None:
            return False
        return self.closed.residue % self.general_period == self.general_residue

    @property
    def agrees(self) -> bool:
        return self.growth_ok and self.boundary_ok and self.residue_ok

    def mismatches(self) -> list[str]:
        out = []
        if not self.growth_ok:
            out.append(f"growth closed={self.closed.growth!r} general={self.general_growth!r}")
        if not self.boundary_ok:
            out.append(
                f"boundary closed=({self.closed.boundary_x!r}, {self.closed.boundary_y!r}) "
                f"general=({self.general_boundary_x!r}, {self.general_boundary_y!r})"
            )
        if not self.residue_ok:
            out.append(f"residue closed={self.closed.residue} general={self.general_residue} (mod {self.general_period})")
        return out


def closed_form_kernel(rs: RootSystem, kind: str, k: int):
    from .alcove_markov import build_mixture_kernel

    return build_mixture_kernel(rs, closed_form_increments(rs, kind), k)


def closed_form_crosscheck(rs: RootSystem, kind: str, k: int, x, y, tolerance: float = 1e-9, kernel=None) -> ClosedFormReport:
    """Compare the closed-form constants with the general alcove-chain machinery.

    ``kernel`` may be passed to reuse the output of ``closed_form_kernel`` across pairs.
    """
    from .alcove_markov import residue_class

    closed = closed_form_constant(rs, kind, k, x, y)
    kern = kernel if kernel is not None else closed_form_kernel(rs, kind, k)
    try:
        r, d = residue_class(kern, x, y)
    except InvalidInputError:
        r, d = None, int(kern.state_period[kern.alcove.position[tuple(x)]])
    return ClosedFormReport(
        closed.case,
        rs.family,
        rs.rank,
        k,
        tuple(x),
        tuple(y),
        closed,
        kern.growth,
        sine_product(rs, x, k),
        sine_product(rs, y, k),
        r,
        d,
        tolerance,
    )


# ---------------------------------------------------------------------------


WALK_REPORT_FIELDS = [
    "family", "rank", "level", "lambda", "beta", "n",
    "exact_count", "fusion_count", "asymptotic_value", "ratio",
]


def walk_report_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=WALK_REPORT_FIELDS, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow(row)
    return buf.getvalue()
