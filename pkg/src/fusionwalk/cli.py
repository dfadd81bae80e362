"""Command-line interface: one subcommand per computation, JSON or CSV output.

Every run is determined by its RunConfig.  Options come from a JSON config
file (``--config``) overridden by explicit flags.  Without ``--output`` the
result goes to $FUSIONWALK_OUTPUT_DIR/<command>.<ext> when that variable is
set and to stdout otherwise.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from .alcove_markov import (
    FLOAT_FMT,
    asymptotic_estimate,
    build_kernel,
    enumerate_alcove,
    exact_counts,
    invariant_measure,
)
from .charlib import is_minuscule, is_quasi_minuscule
from .errors import FusionWalkError, InvalidInputError
from .fusion import build_fusion_table, fusion_coeffs, fusion_coeffs_group_sum, verify_fusion_identity
from .rootsys import FAMILIES, MIN_RANK, build_root_system
from .scaling import convolution_measure, moment_identity_residual, simulate_trajectory, su2_density_comparison
from .walks import WALK_REPORT_FIELDS, count_littelmann_paths, count_walks, step_set, walk_report_csv

OUTPUT_DIR_ENV = "FUSIONWALK_OUTPUT_DIR"
COMMANDS = ("fusion", "kernel", "spectrum", "measure", "count", "asymptotics", "simulate", "convolve", "verify")
STOCHASTIC = {"simulate"}


@dataclass
class RunConfig:
    command: str
    family: str | None = None
    rank: int | None = None
    level: int | None = None
    gamma: tuple[int, ...] | None = None
    lam: tuple[int, ...] | None = None
    beta: tuple[int, ...] | None = None
    n: int | None = None
    t: float | None = None
    seed: int | None = None
    tolerance: float = 1e-8
    output: str | None = None
    format: str = "json"
    max_rank: int = 2
    workers: int = 1

    def require(self, *names: str) -> None:
        missing = [n for n in names if getattr(self, n) is None]
        if missing:
            flags = ", ".join("--" + ("lambda" if n == "lam" else n) for n in missing)
            raise InvalidInputError(f"{self.command} needs {flags}")

    def root_system(self):
        self.require("family", "rank")
        return build_root_system(self.family, self.rank)


def _weight(text) -> tuple[int, ...]:
    if isinstance(text, (list, tuple)):
        parts = [p for t in text for p in str(t).replace(",", " ").split()]
    else:
        parts = str(text).replace(",", " ").split()
    try:
        return tuple(int(p) for p in parts)
    except ValueError as exc:
        raise InvalidInputError(f"weight {text!r} is not a list of integers") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fusionwalk", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, argument_default=argparse.SUPPRESS)
        p.add_argument("--config", help="JSON file with RunConfig fields; flags win")
        p.add_argument("--family", choices=FAMILIES)
        p.add_argument("--rank", type=int)
        p.add_argument("--level", "-k", type=int)
        p.add_argument("--gamma", nargs="+")
        p.add_argument("--lambda", dest="lam", nargs="+")
        p.add_argument("--beta", nargs="+")
        p.add_argument("--n", type=int)
        p.add_argument("--t", type=float)
        p.add_argument("--seed", type=int)
        p.add_argument("--tolerance", type=float)
        p.add_argument("--output", "-o")
        p.add_argument("--format", choices=("json", "csv"))
        if name == "verify":
            p.add_argument("--max-rank", dest="max_rank", type=int)
            p.add_argument("--workers", type=int)
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    data: dict = {}
    given = vars(args).copy()
    path = given.pop("config", None)
    if path:
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise InvalidInputError(f"cannot read config {path}: {exc}") from exc
        if "lambda" in data:
            data["lam"] = data.pop("lambda")
        known = {f.name for f in fields(RunConfig)}
        unknown = set(data) - known
        if unknown:
            raise InvalidInputError(f"unknown config keys: {sorted(unknown)}")
    data.update(given)
    for key in ("gamma", "lam", "beta"):
        if data.get(key) is not None:
            data[key] = _weight(data[key])
    cfg = RunConfig(**data)
    if cfg.command in STOCHASTIC and cfg.seed is None:
        raise InvalidInputError(f"{cfg.command} requires --seed")
    return cfg


# ---------------------------------------------------------------------------


def _csv(rows, header) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _f(x: float) -> str:
    return format(float(x), FLOAT_FMT)


def _w(w) -> str:
    return " ".join(map(str, w))


def cmd_fusion(cfg: RunConfig) -> str:
    rs = cfg.root_system()
    cfg.require("level", "gamma")
    lams = [cfg.lam] if cfg.lam is not None else None
    n = 1 if cfg.n is None else cfg.n
    table = build_fusion_table(rs, cfg.gamma, cfg.level, lams, (n,))
    return table.to_csv() if cfg.format == "csv" else _dumps(table.to_json())


def cmd_kernel(cfg: RunConfig) -> str:
    rs = cfg.root_system()
    cfg.require("level", "gamma")
    kern = build_kernel(rs, cfg.gamma, cfg.level)
    if cfg.format == "csv":
        return kern.to_csv()
    return _dumps(
        {
            "family": rs.family,
            "rank": rs.rank,
            "level": kern.level,
            "gamma": list(cfg.gamma),
            "alcove": [list(w) for w in kern.alcove.weights],
            "counts": kern.counts.tolist(),
            "matrix": kern.matrix.tolist(),
            "period": kern.period,
            "irreducible": kern.irreducible,
            "classes": [[list(w) for w in c] for c in kern.classes],
        }
    )


def cmd_spectrum(cfg: RunConfig) -> str:
    rs = cfg.root_system()
    cfg.require("level", "gamma")
    kern = build_kernel(rs, cfg.gamma, cfg.level)
    if cfg.format == "csv":
        rows = [[_w(p.sigma), _f(p.eigenvalue.real), _f(p.eigenvalue.imag)] for p in kern.spectrum]
        return _csv(rows, ["sigma", "eigenvalue", "eigenvalue_imag"])
    return _dumps(kern.spectrum_to_json())


def cmd_measure(cfg: RunConfig) -> str:
    rs = cfg.root_system()
    cfg.require("level")
    m = invariant_measure(rs, cfg.level)
    if cfg.format == "csv":
        return _csv([[_w(w), _f(v)] for w, v in m.values.items()], ["weight", "mass"])
    return _dumps(m.to_json())


def _count_rows(cfg: RunConfig) -> list[dict]:
    rs = cfg.root_system()
    cfg.require("level", "gamma", "lam", "n")
    k = cfg.level
    kern = build_kernel(rs, cfg.gamma, k)
    fusion = exact_counts(kern, cfg.lam, cfg.n)
    betas = [cfg.beta] if cfg.beta is not None else [b for b, c in fusion.items() if c]
    if is_minuscule(rs, cfg.gamma):
        steps = step_set(rs, cfg.gamma)
        brute = lambda b: count_walks(rs, cfg.lam, b, steps, cfg.n, k)  # noqa: E731
    elif is_quasi_minuscule(rs, cfg.gamma):
        brute = lambda b: count_littelmann_paths(rs, cfg.lam, b, cfg.gamma, cfg.n, k)  # noqa: E731
    else:
        brute = None
    rows = []
    for b in betas:
        est = asymptotic_estimate(kern, cfg.lam, b, cfg.n)
        rows.append(
            {
                "family": rs.family,
                "rank": rs.rank,
                "level": k,
                "lambda": _w(cfg.lam),
                "beta": _w(b),
                "n": cfg.n,
                "exact_count": "" if brute is None else brute(b),
                "fusion_count": fusion[tuple(b)],
                "asymptotic_value": _f(est.value),
                "ratio": _f(est.ratio),
            }
        )
    return rows


def cmd_count(cfg: RunConfig) -> str:
    rows = _count_rows(cfg)
    if cfg.format == "csv":
        return walk_report_csv(rows)
    out = []
    for r in rows:
        r = dict(r)
        r["asymptotic_value"] = float(r["asymptotic_value"])
        r["ratio"] = float(r["ratio"])
        out.append({k: r[k] for k in WALK_REPORT_FIELDS})
    return _dumps(out)


def cmd_asymptotics(cfg: RunConfig) -> str:
    rs = cfg.root_system()
    cfg.require("level", "gamma", "lam", "beta", "n")
    est = asymptotic_estimate(build_kernel(rs, cfg.gamma, cfg.level), cfg.lam, cfg.beta, cfg.n)
    data = est.to_json()
    if cfg.format == "csv":
        keys = list(data)
        return _csv([[_w(v) if isinstance(v, list) else v for v in data.values()]], keys)
    return _dumps(data)


def cmd_simulate(cfg: RunConfig) -> str:
    rs = cfg.root_system()
    cfg.require("gamma", "n", "t", "seed")
    tr = simulate_trajectory(rs, cfg.gamma, cfg.n, cfg.t, cfg.seed)
    if cfg.format == "csv":
        return _csv([[m, _w(w)] for m, w in enumerate(tr.samples)], ["m", "weight"])
    return tr.to_jsonl()


def cmd_convolve(cfg: RunConfig) -> str:
    rs = cfg.root_system()
    cfg.require("level", "gamma", "lam")
    k = cfg.level
    mu = convolution_measure(rs, cfg.lam, cfg.gamma, k)
    data = mu.to_json()
    data["moment_identity_residual"] = moment_identity_residual(rs, mu)
    cmp = None
    if rs.family == "A" and rs.rank == 1:
        cmp = su2_density_comparison(cfg.lam[0], cfg.gamma[0], k)
        data.update(cmp.to_json())
    if cfg.format == "csv":
        if cmp is not None:
            return cmp.to_csv()
        rows = [[_w(b), " ".join(_f(c) for c in p), _f(m)] for b, p, m in zip(mu.weights, mu.points, mu.masses)]
        return _csv(rows, ["beta", "point", "mass"])
    return _dumps(data)


# ---------------------------------------------------------------------------
# verify


def _verify_system(task: tuple[str, int, int, float]) -> list[dict]:
    """All invariant checks for one (family, rank, level)."""
    family, rank, k, tol = task
    rs = build_root_system(family, rank)
    alc = enumerate_alcove(rs, k)
    out = []

    def record(name, ok, value=None):
        out.append({"family": family, "rank": rank, "level": k, "check": name, "ok": bool(ok), "value": value})

    pi = invariant_measure(rs, k).as_array()
    record("measure_normalised", abs(pi.sum() - 1) < tol, float(abs(pi.sum() - 1)))
    for g in alc.weights:
        if not any(g):
            continue
        tag = f"gamma={_w(g)}"
        res = verify_fusion_identity(rs, g, k)
        record(f"fusion_identity {tag}", res < tol, res)
        kern = build_kernel(rs, g, k)
        rows = np.abs(kern.matrix.sum(axis=1) - 1).max()
        record(f"kernel_stochastic {tag}", rows < tol, float(rows))
        inv = float(np.abs(pi @ kern.matrix - pi).max())
        record(f"measure_invariant {tag}", inv < tol, inv)
        sres = kern.spectral_residual()
        record(f"spectral_residual {tag}", sres < tol, sres)
        lam = alc.weights[-1]
        direct = fusion_coeffs(rs, lam, g, k)
        oracle = {b: fusion_coeffs_group_sum(rs, lam, g, b, k) for b in alc.weights}
        record(f"group_sum_oracle {tag}", direct == {b: c for b, c in oracle.items() if c})
        if is_minuscule(rs, g):
            steps = step_set(rs, g)
            ok = all(
                count_walks(rs, l, b, steps, 3, k) == int(exact_counts(kern, l, 3)[b])
                for l in alc.weights
                for b in alc.weights
            )
            record(f"walk_counts {tag}", ok)
    return out


def cmd_verify(cfg: RunConfig) -> str:
    cfg.require("level")
    families = [cfg.family] if cfg.family else list(FAMILIES)
    tasks = []
    for fam in families:
        ranks = [cfg.rank] if cfg.rank else range(MIN_RANK[fam], cfg.max_rank + 1)
        for r in ranks:
            for k in range(1, cfg.level + 1):
                tasks.append((fam, r, k, cfg.tolerance))
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(_verify_system, tasks))
    else:
        results = [_verify_system(t) for t in tasks]
    checks = [c for block in results for c in block]
    ok = all(c["ok"] for c in checks)
    if cfg.format == "csv":
        rows = [[c["family"], c["rank"], c["level"], c["check"], c["ok"], "" if c["value"] is None else _f(c["value"])] for c in checks]
        text = _csv(rows, ["family", "rank", "level", "check", "ok", "value"])
    else:
        text = _dumps({"ok": ok, "checks": checks})
    if not ok:
        raise VerifyFailed(text)
    return text


class VerifyFailed(FusionWalkError):
    exit_code = 4

    def __init__(self, report: str):
        super().__init__("one or more invariant checks failed")
        self.report = report


# ---------------------------------------------------------------------------


def _dumps(data) -> str:
    return json.dumps(data, indent=1, sort_keys=False) + "\n"


HANDLERS = {
    "fusion": cmd_fusion,
    "kernel": cmd_kernel,
    "spectrum": cmd_spectrum,
    "measure": cmd_measure,
    "count": cmd_count,
    "asymptotics": cmd_asymptotics,
    "simulate": cmd_simulate,
    "convolve": cmd_convolve,
    "verify": cmd_verify,
}


def _output_path(cfg: RunConfig) -> Path | None:
    if cfg.output:
        return Path(cfg.output)
    env = os.environ.get(OUTPUT_DIR_ENV)
    if env:
        ext = "jsonl" if (cfg.command == "simulate" and cfg.format == "json") else cfg.format
        return Path(env) / f"{cfg.command}.{ext}"
    return None


def _emit(cfg: RunConfig, text: str) -> None:
    path = _output_path(cfg)
    if path is None:
        sys.stdout.write(text)
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = None
    try:
        cfg = resolve_config(args)
        _emit(cfg, HANDLERS[cfg.command](cfg))
    except VerifyFailed as exc:
        _emit(cfg, exc.report)
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except FusionWalkError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    return 0


def config_to_json(cfg: RunConfig) -> str:
    return json.dumps(asdict(cfg), sort_keys=True)


if __name__ == "__main__":
    raise SystemExit(main())
