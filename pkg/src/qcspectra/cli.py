"""Command-line front end: ``qcspectra {beta,region,verify,twist,spectra}``.

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 numerical failure.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import __version__
from .config import ConfigError, MapConfig, RunConfig, format_real
from .errors import QCError

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3
DISK_FAMILIES = ("identity", "disk_power", "disk_power_normalized")


class NumericalFailure(Exception):
    pass


def _cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return format_real(x)
    return str(x)


def _csv(columns, rows) -> str:
    lines = [",".join(columns)]
    lines += [",".join(_cell(r.get(c)) for c in columns) for r in rows]
    return "\n".join(lines) + "\n"


def provenance(cfg: RunConfig, command: str, extra: dict | None = None) -> list[str]:
    lines = [
        f"tool: qcspectra {__version__}",
        f"command: {command}",
        f"config_sha256: {cfg.sha256()}",
        f"config: {cfg.canonical()}",
    ]
    lines += [f"tolerance.{k}: {format_real(v)}" for k, v in sorted(cfg.tolerances.items())]
    for k, v in (extra or {}).items():
        lines.append(f"{k}: {v}")
    return lines


def _with_header(cfg, command, body: str, extra=None) -> str:
    head = "".join(f"# {line}\n" for line in provenance(cfg, command, extra))
    return head + body


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _build_map(map_cfg: MapConfig):
    try:
        return map_cfg.build()
    except (QCError, ValueError) as exc:
        raise ConfigError(f"map rejected: {exc}") from None


def _map_k(fmap):
    """Distortion constant, or None where the extension degenerates (``k = 1``)."""
    from .errors import NotExtendable

    try:
        return fmap.distortion_k()
    except NotExtendable:
        return None


def _pool_map(func, tasks, jobs: int):
    if jobs <= 1 or len(tasks) <= 1:
        return [func(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=min(jobs, len(tasks))) as pool:
        # map() yields in submission order whatever the completion order
        return list(pool.map(func, tasks))


# beta -------------------------------------------------------------------

BETA_COLUMNS = [
    "row_type", "t_re", "t_im", "j", "r", "integral", "local_slope", "samples", "closure_defect",
    "beta_limsup", "beta_lsq", "exact_beta", "k", "trivial_lower", "trivial_upper",
    "theorem_value", "linear_zone", "hedenmalm", "disproved_conjecture", "integrability",
]


def _exact_beta(map_cfg: MapConfig, t: complex):
    from .maps import power_spectrum

    if map_cfg.family == "identity":
        return 0.0
    if map_cfg.bounded:
        return power_spectrum(map_cfg.params["sigma"], t)
    return None


def _beta_task(task):
    map_cfg, t, j_min, j_max, tail, tol = task
    from .means import RadiusSchedule, beta_estimate

    try:
        est = beta_estimate(map_cfg.build(), t, RadiusSchedule(j_min, j_max), tail, tol)
    except (QCError, ArithmeticError, ValueError) as exc:
        return None, f"{type(exc).__name__}: {exc}"
    return est, None


def cmd_beta(cfg: RunConfig, jobs: int) -> str:
    from .means import integrability_region, reference_spectra

    if cfg.map.family not in DISK_FAMILIES:
        raise ConfigError(f"beta needs a conformal map of the disk ({', '.join(DISK_FAMILIES)})")
    k = _map_k(_build_map(cfg.map))
    s = cfg.schedule
    tasks = [(cfg.map, t, s.j_min, s.j_max, s.tail_length, cfg.tolerances["quadrature"]) for t in cfg.grid.t]
    rows = []
    for t, (est, err) in zip(cfg.grid.t, _pool_map(_beta_task, tasks, jobs)):
        if err is not None:
            raise NumericalFailure(f"t = {t.real:.17g}{t.imag:+.17g}j: {err}")
        base = {"t_re": t.real, "t_im": t.imag}
        for i, (j, (r, integral)) in enumerate(zip(est.levels, est.integrals)):
            rows.append(dict(base, row_type="level", j=j, r=r, integral=integral,
                             local_slope=est.local_slopes[i - 1] if i else None,
                             samples=est.sample_counts[i], closure_defect=est.closure_defects[i]))
        summary = dict(base, row_type="summary", beta_limsup=est.beta_limsup, beta_lsq=est.beta_lsq,
                       exact_beta=_exact_beta(cfg.map, t), k=k)
        if k is not None and 0 < k < 1:
            ref = reference_spectra(k, t)
            summary.update(trivial_lower=ref.trivial_lower, trivial_upper=ref.trivial_upper,
                           theorem_value=ref.theorem_value, linear_zone=ref.linear_zone,
                           hedenmalm=ref.hedenmalm, disproved_conjecture=ref.disproved_conjecture,
                           integrability=integrability_region(k, t).value)
        rows.append(summary)
    return _with_header(cfg, "beta", _csv(BETA_COLUMNS, rows))


# region -----------------------------------------------------------------

def region_svg(verts) -> str:
    """Single closed path in a unit-square view box (y axis pointing up)."""
    xs, ys = verts.real, verts.imag
    cx, cy = (xs.max() + xs.min()) / 2, (ys.max() + ys.min()) / 2
    span = 1.1 * max(xs.max() - xs.min(), ys.max() - ys.min())
    px = (xs - cx) / span + 0.5
    py = 0.5 - (ys - cy) / span
    pts = [f"{format_real(float(x))} {format_real(float(y))}" for x, y in zip(px, py)]
    d = "M " + " L ".join(pts) + " Z"
    return ('<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 1 1">\n'
            f'<path d="{d}" fill="none" stroke="black" stroke-width="0.002"/>\n'
            "</svg>\n")


def cmd_region(cfg: RunConfig, fmt: str) -> str:
    from .pick import boundary_polyline

    k, n = cfg.region.k, cfg.region.n
    if not 0 < k < 1:
        raise ConfigError(f"k must lie in (0, 1), got {k}")
    verts = boundary_polyline(k, n)
    if fmt == "svg":
        lines = provenance(cfg, "region", {"vertices": len(verts)})
        comment = "<!--\n" + "".join(f"  {l.replace('--', '- -')}\n" for l in lines) + "-->\n"
        return comment + region_svg(verts)
    rows = [{"index": i, "re": float(v.real), "im": float(v.imag)} for i, v in enumerate(verts)]
    return _with_header(cfg, "region", _csv(["index", "re", "im"], rows))


# verify -----------------------------------------------------------------

def cmd_verify(cfg: RunConfig):
    from .verify import run_suites

    results = run_suites(cfg)
    body = "".join(r.line() + "\n" for r in results)
    failed = [r for r in results if not r.passed]
    summary = f"{len(results) - len(failed)} of {len(results)} invariants passed\n"
    return _with_header(cfg, "verify", body + summary), failed


# twist ------------------------------------------------------------------

TWIST_COLUMNS = ["j", "tau_j", "one_minus_tau", "ratio_j", "gamma_hat", "analytic_gamma",
                 "converged", "k", "dim_bound", "dim_bound_analytic"]


def cmd_twist(cfg: RunConfig) -> str:
    from .twist import spiral_exponent, twist_csv_rows

    if cfg.map.family not in DISK_FAMILIES:
        raise ConfigError(f"twist needs a conformal map of the disk ({', '.join(DISK_FAMILIES)})")
    fmap = _build_map(cfg.map)
    k = cfg.twist.k if cfg.twist.k is not None else _map_k(fmap)
    try:
        rep = spiral_exponent(fmap, cfg.twist.zeta, cfg.twist.j_max)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    except (QCError, ArithmeticError) as exc:
        raise NumericalFailure(f"zeta = {cfg.twist.zeta}: {exc}") from None
    return _with_header(cfg, "twist", _csv(TWIST_COLUMNS, twist_csv_rows(rep, k)))


# spectra ----------------------------------------------------------------

SPECTRA_COLUMNS = ["t_re", "t_im", "k", "trivial_lower", "trivial_upper", "theorem_value",
                   "linear_zone", "hedenmalm", "disproved_conjecture", "integrability"]


def cmd_spectra(cfg: RunConfig) -> str:
    from .means import integrability_region, reference_spectra

    k = cfg.spectra_k
    if not 0 < k < 1:
        raise ConfigError(f"spectra.k must lie in (0, 1), got {k}")
    rows = []
    for t in cfg.grid.t:
        ref = reference_spectra(k, t)
        rows.append({"t_re": t.real, "t_im": t.imag, "k": k,
                     "trivial_lower": ref.trivial_lower, "trivial_upper": ref.trivial_upper,
                     "theorem_value": ref.theorem_value, "linear_zone": ref.linear_zone,
                     "hedenmalm": ref.hedenmalm, "disproved_conjecture": ref.disproved_conjecture,
                     "integrability": integrability_region(k, t).value})
    return _with_header(cfg, "spectra", _csv(SPECTRA_COLUMNS, rows))


# entry point ------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run configuration")
    common.add_argument("--out", help="output file (default: standard output)")
    common.add_argument("--jobs", type=int, default=os.cpu_count() or 1, help="worker processes")
    common.add_argument("--seed", type=int, help="overrides the configured seed")
    common.add_argument("--format", choices=("csv", "svg"), default="csv")
    parser = argparse.ArgumentParser(prog="qcspectra", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"qcspectra {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("beta", parents=[common], help="integral means spectrum over a t-grid")
    region = sub.add_parser("region", parents=[common], help="boundary of the feasibility region W_k")
    region.add_argument("--k", type=float)
    region.add_argument("--n", type=int)
    sub.add_parser("verify", parents=[common], help="run the invariant suites")
    sub.add_parser("twist", parents=[common], help="spiraling rate at a boundary point")
    spectra = sub.add_parser("spectra", parents=[common], help="reference values of B_k(t)")
    spectra.add_argument("--k", type=float)
    return parser


def _effective_config(args) -> RunConfig:
    cfg = RunConfig.load(args.config) if args.config else RunConfig()
    cfg = cfg.with_seed(args.seed)
    from dataclasses import replace

    from .config import RegionConfig

    if args.command == "region" and (args.k is not None or args.n is not None):
        k = cfg.region.k if args.k is None else args.k
        n = cfg.region.n if args.n is None else args.n
        if not math.isfinite(k):
            raise ConfigError("--k must be finite")
        if n < 64:
            raise ConfigError("--n must be at least 64")
        cfg = replace(cfg, region=RegionConfig(k, n))
    if args.command == "spectra" and args.k is not None:
        cfg = replace(cfg, spectra_k=args.k)
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.jobs < 1:
            raise ConfigError("--jobs must be at least 1")
        if args.format == "svg" and args.command != "region":
            raise ConfigError("--format svg is only available for region")
        cfg = _effective_config(args)
        if args.command == "beta":
            text = cmd_beta(cfg, args.jobs)
        elif args.command == "region":
            text = cmd_region(cfg, args.format)
        elif args.command == "twist":
            text = cmd_twist(cfg)
        elif args.command == "spectra":
            text = cmd_spectra(cfg)
        else:
            text, failed = cmd_verify(cfg)
            _emit(text, args.out)
            if failed:
                print(f"first failing invariant: {failed[0].name} ({failed[0].detail})", file=sys.stderr)
                return EXIT_VERIFY
            return EXIT_OK
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (QCError, ArithmeticError) as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        # constructor rejections of configured parameters
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    _emit(text, args.out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
