"""Batch command-line front end.

Subcommands: `star` (pointwise products), `verify` (named check suites),
`sweep` (semiclassical residual sweeps and the norm-continuity curve).
Outputs are deterministic delimited tables (csv or structured-text JSON
lines) plus, on the report paths, matplotlib figures rendered next to the
table.  Exit codes: 0 ok, 1 verification failure, 2 config error,
3 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import engine
from .exprs import FunctionExpr
from .grids import GridSpec
from .haar import HaarSpec
from .models import (
    PoissonModel,
    constant_poisson,
    heisenberg_dual,
    su2_dual,
    symplectic_r2,
    torus2,
    zero_model,
)
from .quad import NonDecayingError, OscillationPolicyError, QuadratureSpec
from .serialize import load_expr
from .suites import run_suite, suite_names
from .verify import SweepReport, norm_curve, semiclassical_sweep

CSV_VERSION = "starprod-csv v1"

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


class ConfigError(ValueError):
    pass


def _parse_point(s: str) -> np.ndarray:
    try:
        return np.array([float(x) for x in s.split(",")], dtype=float)
    except ValueError as e:
        raise ConfigError(f"bad --point {s!r}: {e}") from None


def _parse_bivector(s: str) -> list:
    try:
        return [[float(x) for x in row.split(",")] for row in s.split(";")]
    except ValueError as e:
        raise ConfigError(f"bad --bivector {s!r}: {e}") from None


def _parse_haar(s: str, seed: int) -> HaarSpec:
    kind, _, rest = s.partition(":")
    if kind == "euler":
        counts = tuple(int(x) for x in rest.split(",")) if rest else (12, 12, 12)
        if len(counts) == 1:
            counts = counts * 3
        return HaarSpec("su2-euler-grid", counts, seed=seed)
    if kind == "qmc":
        n = int(rest) if rest else 4096
        return HaarSpec("su2-qmc", n_points=n, seed=seed)
    raise ConfigError(f"unknown --haar-scheme {s!r} (use euler:na,nb,ng or qmc:N)")


def _load_model(args) -> PoissonModel:
    name = args.model
    if name == "zero":
        return zero_model(2)
    if name in ("moyal", "good"):
        return symplectic_r2()
    if name == "torus":
        return torus2()
    if name == "heisenberg":
        return heisenberg_dual()
    if name == "constant":
        if not args.bivector:
            raise ConfigError("model=constant requires --bivector 'a,b;c,d'")
        return constant_poisson(_parse_bivector(args.bivector))
    if name == "su2":
        return su2_dual()
    raise ConfigError(f"unknown model {name!r}")


def _load_fn(path: str | None, what: str) -> FunctionExpr:
    if not path:
        raise ConfigError(f"missing required function file --{what}")
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"function file {path} does not exist")
    return load_expr(p)


def _write_rows(path: str, fmt: str, command: str, seed: int, header: list[str], rows: list[list]):
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "csv":
        lines = [f"# {CSV_VERSION} {command} seed={seed}", ",".join(header)]
        for r in rows:
            lines.append(",".join(_fmt_cell(x) for x in r))
        out.write_text("\n".join(lines) + "\n")
    elif fmt == "structured-text":
        lines = [json.dumps({"format": CSV_VERSION, "command": command, "seed": seed, "columns": header})]
        for r in rows:
            lines.append(json.dumps({k: _json_cell(v) for k, v in zip(header, r)}))
        out.write_text("\n".join(lines) + "\n")
    else:
        raise ConfigError(f"unknown --format {fmt!r}")


def _fmt_cell(x):
    if isinstance(x, float):
        return repr(x)
    if x is None:
        return ""
    return str(x)


def _json_cell(x):
    if isinstance(x, float) and not np.isfinite(x):
        return str(x)
    return x


def _figure_path(out: str) -> str:
    p = Path(out)
    return str(p.with_suffix(".png"))


# ---------------------------------------------------------------------
# star
# ---------------------------------------------------------------------


def cmd_star(args) -> int:
    model = _load_model(args)
    if args.hbar is None:
        raise ConfigError("star requires --hbar")
    if args.hbar < 0:
        raise ConfigError("hbar must be nonnegative (0 selects the classical branch)")
    f = _load_fn(args.f, "f")
    g = _load_fn(args.g, "g")
    haar = _parse_haar(args.haar_scheme, args.seed) if args.haar_scheme else None
    quad = None
    if args.grid_R and args.grid_n and args.model != "torus":
        lam = args.hbar if args.model in ("good", "constant", "su2") else (
            2 * args.hbar if args.model == "moyal" else abs(args.z or 1.0) * args.hbar
        )
        n = args.grid_n + 1 if args.grid_n % 2 == 0 else args.grid_n
        quad = QuadratureSpec(args.grid_R, n, lam if lam else 1.0)

    if args.point:
        points = [_parse_point(args.point)]
    else:
        R = args.grid_R or (np.pi if args.model == "torus" else 2.0)
        n = args.grid_n or 9
        ax = np.linspace(-R, R, n)
        points = [np.array([a, b]) for a in ax for b in ax]

    rows = []
    for pt in points:
        full_pt = pt
        if args.model == "heisenberg":
            if args.z is None and len(pt) < 3:
                raise ConfigError("model=heisenberg needs --z or a 3-component --point")
            full_pt = pt if len(pt) == 3 else np.array([pt[0], pt[1], args.z])
        eps = args.epsilon or 0.0
        if args.model == "good" and args.epsilon is None:
            raise ConfigError("model=good requires --epsilon")
        r = engine.star_point(model, f, g, full_pt, args.hbar, quad=quad, eps=eps, haar=haar)
        C = r.normalization
        rows.append(
            [float(full_pt[0]), float(full_pt[1] if len(full_pt) > 1 else 0.0)]
            + [float(np.real(r.value)), float(np.imag(r.value)), float(r.error), float(abs(C)), r.method]
        )
    header = ["coord1", "coord2", "re", "im", "error", "abs_norm", "method"]
    _write_rows(args.out, args.format, "star", args.seed, header, rows)
    if args.figures:
        from .figures import save_star_figure

        save_star_figure(_figure_path(args.out), [r[:6] for r in rows])
    return EXIT_OK


# ---------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------


def cmd_verify(args) -> int:
    if args.suite not in suite_names():
        raise ConfigError(f"unknown suite {args.suite!r}; choose from {', '.join(suite_names())}")
    kwargs = {}
    if args.haar_scheme and args.suite in ("associativity", "equivariance"):
        spec = _parse_haar(args.haar_scheme, args.seed)
        kwargs["haar_counts"] = spec.counts if spec.scheme == "su2-euler-grid" else (12, 12, 12)
    rows = run_suite(args.suite, seed=args.seed, **kwargs)
    table = [[r.name, r.residual, "" if r.tolerance is None else r.tolerance, r.status, r.provenance] for r in rows]
    _write_rows(args.out, args.format, f"verify:{args.suite}", args.seed, ["check", "residual", "tolerance", "status", "provenance"], table)
    if args.figures:
        from .figures import save_verify_figure

        save_verify_figure(_figure_path(args.out), rows)
    n_fail = sum(1 for r in rows if r.status == "fail")
    for r in rows:
        print(f"[{r.status:>6}] {r.name}: residual {r.residual:.3e}" + ("" if r.tolerance is None else f" tol {r.tolerance:.3e}"))
    return EXIT_VERIFY_FAIL if n_fail else EXIT_OK


# ---------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------


def cmd_sweep(args) -> int:
    if not args.hbar_list:
        raise ConfigError("sweep requires --hbar-list")
    hbars = [float(x) for x in args.hbar_list.split(",")]
    if len(hbars) < 4:
        raise ConfigError("sweep needs at least 4 hbar samples")
    if not all(b < a for a, b in zip(hbars, hbars[1:])):
        raise ConfigError("hbar list must be strictly decreasing")
    f = _load_fn(args.f, "f")
    g = _load_fn(args.g, "g")
    header = ["hbar", "residual", "slope", "slope_halfwidth", "provenance"]
    if args.norm_curve:
        grid = GridSpec.square(2, args.grid_R or 6.0, args.grid_n or 33)
        norms = norm_curve(f, hbars, grid)
        rows = [[h, float(v), "", "", "galerkin"] for h, v in zip(hbars, norms)]
        _write_rows(args.out, args.format, "sweep:norm-curve", args.seed, ["hbar", "norm", "c1", "c2", "provenance"], rows)
        if args.figures:
            from .figures import save_sweep_figure

            save_sweep_figure(_figure_path(args.out), hbars, norms, float("nan"))
        return EXIT_OK
    model = _load_model(args)
    pt = _parse_point(args.point) if args.point else np.zeros(2)
    if args.model == "heisenberg" and len(pt) == 2:
        pt = np.array([pt[0], pt[1], args.z if args.z is not None else 1.0])
    report = semiclassical_sweep(model, f, g, pt, hbars, eps=args.epsilon or 0.0)
    rows = [[h, r, "", "", "quadrature"] for h, r in zip(report.hbars, report.residuals)]
    rows.append(["summary", "", report.slope, report.slope_halfwidth, "fit"])
    _write_rows(args.out, args.format, "sweep", args.seed, header, rows)
    if args.figures:
        from .figures import save_sweep_figure

        save_sweep_figure(_figure_path(args.out), report.hbars, report.residuals, report.slope)
    return EXIT_OK


# ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="starprod", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--model", default="moyal", help="zero|moyal|good|torus|heisenberg|constant|su2")
        sp.add_argument("--hbar", type=float)
        sp.add_argument("--hbar-list", dest="hbar_list")
        sp.add_argument("--f")
        sp.add_argument("--g")
        sp.add_argument("--h", dest="h3")
        sp.add_argument("--point")
        sp.add_argument("--grid-R", dest="grid_R", type=float)
        sp.add_argument("--grid-n", dest="grid_n", type=int)
        sp.add_argument("--haar-scheme", dest="haar_scheme")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--epsilon", type=float)
        sp.add_argument("--z", type=float)
        sp.add_argument("--bivector")
        sp.add_argument("--suite")
        sp.add_argument("--out", required=True)
        sp.add_argument("--format", default="csv", choices=["csv", "structured-text"])
        sp.add_argument("--figures", action="store_true", help="render matplotlib figures next to the output")

    s = sub.add_parser("star", help="evaluate (f*g) pointwise or on a grid")
    common(s)
    s.set_defaults(fn=cmd_star)
    v = sub.add_parser("verify", help="run a named check suite")
    common(v)
    v.set_defaults(fn=cmd_verify)
    w = sub.add_parser("sweep", help="semiclassical residual sweep or norm curve")
    common(w)
    w.add_argument("--norm-curve", action="store_true", dest="norm_curve")
    w.set_defaults(fn=cmd_sweep)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (OscillationPolicyError, NonDecayingError, engine.NormalizationError, engine.LeafCollapseError) as e:
        print(f"numerical failure ({type(e).__name__}): {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    except FileNotFoundError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
