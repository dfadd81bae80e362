"""Independent reference computations used only by the test suite.

None of these call the folding or Freudenthal code paths they check.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from itertools import product

import numpy as np
import sympy

from fusionwalk.rootsys import weyl_group


def to_simple_root_coords(rs, v) -> tuple[Fraction, ...]:
    """Coefficients c with v = sum c_i alpha_i (v in fundamental-weight coordinates)."""
    inv = sympy.Matrix(rs.cartan).inv()
    row = sympy.Matrix([list(v)]) * inv
    return tuple(Fraction(int(sympy.fraction(c)[0]), int(sympy.fraction(c)[1])) for c in row)


def kostant_multiplicity(rs, lam, mu) -> int:
    """Weight multiplicity by Kostant's alternating sum of partition functions."""
    roots = tuple(tuple(r) for r in rs.positive_roots_simple)

    @lru_cache(maxsize=None)
    def partitions(target: tuple[int, ...], start: int) -> int:
        if all(t == 0 for t in target):
            return 1
        if start == len(roots) or any(t < 0 for t in target):
            return 0
        total = 0
        r = roots[start]
        cur = target
        while all(t >= 0 for t in cur):
            total += partitions(cur, start + 1)
            cur = tuple(a - b for a, b in zip(cur, r))
        return total

    mats, dets = weyl_group(rs)
    lr = np.array(lam) + 1
    mr = np.array(mu) + 1
    out = 0
    for m, d in zip(mats, dets):
        c = to_simple_root_coords(rs, tuple(int(a) for a in lr @ m - mr))
        if all(x.denominator == 1 for x in c):
            out += int(d) * partitions(tuple(int(x) for x in c), 0)
    return out


def su2_character(i: int, m: int, k: int) -> float:
    lk = k + 2
    return math.sin(math.pi * (i + 1) * (m + 1) / lk) / math.sin(math.pi * (m + 1) / lk)


def alcove_bruteforce(rs, k: int) -> list[tuple[int, ...]]:
    comarks = rs.theta_coroot_pairing_vector
    return sorted(w for w in product(range(k + 1), repeat=rs.rank) if sum(a * c for a, c in zip(w, comarks)) <= k)


def lattice_index_det(rs, k: int) -> int:
    """|det| of the scaled coroot-lattice basis; equals the index of (k+h)M in P."""
    from fusionwalk.fusion import coroot_lattice_basis

    m = sympy.Matrix(coroot_lattice_basis(rs)) * (k + rs.dual_coxeter)
    return abs(int(m.det()))


def walk_enumeration(rs, lam, steps, n: int, k: int) -> dict:
    """Exhaustive enumeration of step sequences (tiny n only)."""
    from fusionwalk.charlib import in_alcove

    out: dict = {}
    for seq in product(steps, repeat=n):
        x = tuple(lam)
        ok = True
        for s in seq:
            x = tuple(a + b for a, b in zip(x, s))
            if not in_alcove(rs, x, k):
                ok = False
                break
        if ok:
            out[x] = out.get(x, 0) + 1
    return out
