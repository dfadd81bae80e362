"""Fit the exponent c in E[psi_sigma] ~ exp(-c t C(sigma)) for the rescaled walk.

Runs the fit at n and 4n and reports the drift in c, which should shrink as
n grows if the scaling limit holds.
"""

import argparse
import json
import time

from fusionwalk.rootsys import build_root_system
from fusionwalk.scaling import brownian_exponent_fit


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--family", default="A")
    ap.add_argument("--rank", type=int, default=1)
    ap.add_argument("--gamma", type=int, nargs="+", default=None)
    ap.add_argument("--n", type=int, nargs="+", default=[10_000, 40_000])
    ap.add_argument("--t", type=float, default=1.0)
    ap.add_argument("--sigmas", type=int, nargs="+", default=[1, 2, 3],
                    help="multiples m of the first fundamental weight")
    args = ap.parse_args()
    rs = build_root_system(args.family, args.rank)
    gamma = tuple(args.gamma) if args.gamma else (1,) + (0,) * (rs.rank - 1)
    sigmas = [(m,) + (0,) * (rs.rank - 1) for m in args.sigmas]
    fits = []
    for n in args.n:
        start = time.perf_counter()
        fit = brownian_exponent_fit(rs, gamma, n, args.t, sigmas)
        fits.append(fit)
        print(json.dumps(fit.to_json() | {"seconds": round(time.perf_counter() - start, 3)}))
    for a, b in zip(fits, fits[1:]):
        print(f"c drift n={a.n} -> {b.n}: {abs(b.c / a.c - 1):.3%}")


if __name__ == "__main__":
    main()
