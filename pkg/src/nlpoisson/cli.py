"""Command-line front end.

Configuration files are flat UTF-8 ``key = value`` lines; ``#`` starts a
comment; list-valued keys may be repeated or given as comma lists.  Flags
given on the command line override the file.

    nlpoisson verify --n 1 --p 4 --data gaussian:1.0 --output verify.csv
    nlpoisson divergence --n 1 --cutoffs 10,100,1000,10000
    nlpoisson verify --config run.cfg --format json

Exit status: 0 pass, 1 verification failure, 2 usage/config/runtime error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
import warnings
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .core import Field, Regime, classify_regime, make_grid, make_params, sample
from .gaussian import gaussian, lhs_integrand_gaussian
from .operators import ResolutionWarning, check_commutation
from .quadrature import QuadratureSpec
from .verifier import (
    bound_check,
    divergence_scan,
    lhs_field,
    pointwise_check,
    resolving_grid,
    uniform_xi,
    verify_identity,
)

SCHEMA_VERSION = 1
COMMANDS = ("verify", "pointwise", "divergence", "bounds", "commutation")

class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    n: int = 1
    p: Optional[float] = None
    data: str = "gaussian:1.0"
    grid: Optional[tuple] = (512, 20.0)  # None means "auto"
    xi_max: float = 4.0
    xi_points: int = 65
    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    pass_tol: Optional[float] = None
    cutoffs: tuple = (10.0, 100.0, 1000.0, 10000.0)
    times: Optional[tuple] = None
    widths: tuple = (0.25, 1.0, 4.0)
    scales: tuple = (0.5, 1.0, 2.0)
    output: Optional[str] = None
    format: str = "csv"

    def resolved(self) -> dict:
        d = asdict(self)
        d["grid"] = "auto" if self.grid is None else f"{self.grid[0]}:{_fmt(self.grid[1])}"
        return d


# ---------------------------------------------------------------------------
# parsing


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _as_int(key, text):
    try:
        return int(text)
    except ValueError:
        raise ConfigError(f"{key}: expected an integer, got {text!r}") from None


def _as_float(key, text):
    try:
        value = float(text)
    except ValueError:
        raise ConfigError(f"{key}: expected a number, got {text!r}") from None
    if not math.isfinite(value):
        raise ConfigError(f"{key}: value must be finite")
    return value


def _float_list(key, values):
    out = []
    for v in values:
        out.extend(_as_float(key, part) for part in v.split(",") if part.strip())
    return tuple(out)


def _pair(key, text, conv_a, conv_b):
    parts = text.split(":")
    if len(parts) != 2:
        raise ConfigError(f"{key}: expected '<a>:<b>', got {text!r}")
    return conv_a(key, parts[0].strip()), conv_b(key, parts[1].strip())


_SCALAR_KEYS = {"command", "n", "p", "data", "grid", "xi", "xi_max", "xi_points", "tol", "abs_tol",
                "rel_tol", "pass_tol", "output", "format"}
_LIST_KEYS = {"cutoffs", "times", "widths", "scales"}


def _read_pairs(text: str) -> list[tuple[str, str]]:
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        pairs.append((key, value))
    return pairs


def build_config(pairs: Sequence[tuple[str, str]]) -> RunConfig:
    """Validate ``(key, value)`` pairs; later scalar keys override earlier ones."""
    scalars: dict[str, str] = {}
    lists: dict[str, list[str]] = {}
    for key, value in pairs:
        if key in _SCALAR_KEYS:
            scalars[key] = value
        elif key in _LIST_KEYS:
            lists.setdefault(key, []).append(value)
        else:
            raise ConfigError(f"unknown key {key!r}")

    if "command" not in scalars:
        raise ConfigError("missing required key 'command'")
    command = scalars["command"]
    if command not in COMMANDS:
        raise ConfigError(f"command: expected one of {COMMANDS}, got {command!r}")

    kw: dict = {"command": command}
    if "n" in scalars:
        kw["n"] = _as_int("n", scalars["n"])
    elif command != "divergence" and command != "commutation":
        raise ConfigError("missing required key 'n'")
    if "p" in scalars:
        kw["p"] = _as_float("p", scalars["p"])
    if "data" in scalars:
        kw["data"] = scalars["data"]
    if "grid" in scalars:
        g = scalars["grid"]
        kw["grid"] = None if g == "auto" else _pair("grid", g, _as_int, _as_float)
    if "xi" in scalars:
        kw["xi_max"], kw["xi_points"] = _pair("xi", scalars["xi"], _as_float, _as_int)
    if "xi_max" in scalars:
        kw["xi_max"] = _as_float("xi_max", scalars["xi_max"])
    if "xi_points" in scalars:
        kw["xi_points"] = _as_int("xi_points", scalars["xi_points"])
    if "tol" in scalars:
        kw["abs_tol"], kw["rel_tol"] = _pair("tol", scalars["tol"], _as_float, _as_float)
    for key in ("abs_tol", "rel_tol", "pass_tol"):
        if key in scalars:
            kw[key] = _as_float(key, scalars[key])
    for key in _LIST_KEYS:
        if key in lists:
            kw[key] = _float_list(key, lists[key])
    if "output" in scalars:
        kw["output"] = scalars["output"]
    if "format" in scalars:
        kw["format"] = scalars["format"]
    if command in ("pointwise", "commutation") and "grid" not in scalars:
        kw["grid"] = None
    cfg = RunConfig(**kw)
    validate(cfg)
    return cfg


def parse_config(text: str) -> RunConfig:
    return build_config(_read_pairs(text))


def _parse_data(spec: str):
    kind, _, arg = spec.partition(":")
    if kind == "gaussian":
        a = float(arg) if arg else 1.0
        if not a > 0:
            raise ConfigError("data: Gaussian width must be positive")
        return "gaussian", a
    if kind == "rational_decay" and not arg:
        return "rational_decay", None
    if kind == "file" and arg:
        return "file", arg
    raise ConfigError(f"data: expected gaussian:<a>, rational_decay or file:<path>, got {spec!r}")


def validate(cfg: RunConfig) -> None:
    if cfg.n not in (1, 2, 3):
        raise ConfigError(f"n: unsupported dimension {cfg.n}")
    if cfg.format not in ("csv", "json"):
        raise ConfigError(f"format: expected csv or json, got {cfg.format!r}")
    kind, _ = _parse_data(cfg.data)
    if cfg.grid is not None:
        try:
            make_grid(cfg.n, cfg.grid[0], cfg.grid[1])
        except ValueError as exc:
            raise ConfigError(f"grid: {exc}") from None
    if cfg.xi_max <= 0 or cfg.xi_points < 2:
        raise ConfigError("xi: need xi_max > 0 and at least 2 points")
    if cfg.abs_tol <= 0 or cfg.rel_tol <= 0:
        raise ConfigError("tol: tolerances must be positive")
    if cfg.command in ("verify", "pointwise", "bounds"):
        if cfg.p is None:
            raise ConfigError("missing required key 'p'")
        if not cfg.p > 1:
            raise ConfigError(f"p: must exceed 1, got {cfg.p}")
        regime = classify_regime(cfg.n, cfg.p)
        if regime is Regime.LONG_RANGE:
            raise ConfigError(f"p: {cfg.p} is in the long-range regime (p <= 1+2/n); identity not verifiable")
        if regime is Regime.OUT_OF_RANGE:
            raise ConfigError(f"p: {cfg.p} exceeds the energy-critical power for n={cfg.n}")
    if cfg.command in ("pointwise", "verify", "bounds") and cfg.grid is None and cfg.command != "pointwise":
        raise ConfigError("grid: 'auto' is only available for pointwise and commutation")
    if cfg.command in ("divergence", "bounds") and kind != "gaussian":
        raise ConfigError(f"data: {cfg.command} needs Gaussian data")
    if cfg.command == "divergence":
        if len(cfg.cutoffs) < 2 or any(T <= 1 for T in cfg.cutoffs):
            raise ConfigError("cutoffs: need at least two values, all > 1")
        if any(b <= a for a, b in zip(cfg.cutoffs, cfg.cutoffs[1:])):
            raise ConfigError("cutoffs: must be strictly increasing")
    if cfg.times is not None and any(t <= 0 for t in cfg.times):
        raise ConfigError("times: must be positive")


# ---------------------------------------------------------------------------
# reports


@dataclass
class Report:
    columns: list
    rows: list
    summary: dict
    footer: list = field(default_factory=list)
    passed: bool = True


def write_report(report: Report, cfg: RunConfig, stream) -> None:
    if cfg.format == "json":
        doc = {
            "schema_version": SCHEMA_VERSION,
            "config": cfg.resolved(),
            "columns": report.columns,
            "rows": report.rows,
            "footer": report.footer,
            "summary": report.summary,
        }
        json.dump(doc, stream, indent=1, allow_nan=True)
        stream.write("\n")
        return
    stream.write(f"# schema_version = {SCHEMA_VERSION}\n")
    for key, value in cfg.resolved().items():
        if isinstance(value, (tuple, list)):
            value = ",".join(_fmt(v) for v in value)
        stream.write(f"# {key} = {_fmt(value) if value is not None else ''}\n")
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(report.columns)
    for row in report.rows:
        writer.writerow([_fmt(v) for v in row])
    for row in report.footer:
        writer.writerow([_fmt(v) for v in row])


def _load_data(cfg: RunConfig, grid):
    kind, arg = _parse_data(cfg.data)
    if kind == "gaussian":
        return gaussian(arg, cfg.n)
    if kind == "rational_decay":
        return sample(lambda *x: (1.0 + sum(c * c for c in x)) ** -2.0, grid)
    return Field(grid, np.load(arg))


def _spec(cfg: RunConfig) -> QuadratureSpec:
    return QuadratureSpec(abs_tol=cfg.abs_tol, rel_tol=cfg.rel_tol)


def _run_verify(cfg: RunConfig) -> Report:
    params = make_params(cfg.n, cfg.p)
    grid = make_grid(cfg.n, *cfg.grid)
    phi = _load_data(cfg, grid)
    gaussian_data = not hasattr(phi, "grid")
    tol = cfg.pass_tol if cfg.pass_tol is not None else (1e-6 if gaussian_data else 1e-4)
    axes = uniform_xi(cfg.n, cfg.xi_max, cfg.xi_points)
    rep = verify_identity(phi, params, axes, _spec(cfg), tolerance=tol)
    diagnostics = list(rep.quadrature_warnings)
    passed = rep.passed
    cross = None
    if gaussian_data:
        # the closed form does not see the grid; check the FFT pipeline against it there
        a = phi.width.real
        field = sample(phi, grid)
        fft = lhs_field(field, cfg.p, 1.0).samples
        exact = lhs_integrand_gaussian(a, cfg.p, cfg.n, 1.0, grid.freq_coords())
        cross = float(np.max(np.abs(fft - exact)))
        if not cross < 1e-9:
            passed = False
            diagnostics.append(
                f"FFT pipeline differs from the closed form by {cross:.3e} at t=1: grid "
                f"N={grid.points_per_dim}, L={grid.half_width:g} is under-resolved"
            )
    mesh = np.meshgrid(*axes, indexing="ij")
    xi_cols = ["xi"] if cfg.n == 1 else [f"xi_{k + 1}" for k in range(cfg.n)]
    rows = []
    flat = [m.ravel() for m in mesh]
    lv, rv = rep.lhs_values.ravel(), rep.rhs_values.ravel()
    ar, rr = rep.abs_residual.ravel(), rep.rel_residual.ravel()
    for i in range(lv.size):
        rows.append([float(c[i]) for c in flat] + [
            float(lv[i].real), float(lv[i].imag), float(rv[i].real), float(rv[i].imag),
            float(ar[i]), float(rr[i]),
        ])
    summary = {
        "regime": params.regime.value,
        "max_rel_residual": rep.max_rel_residual,
        "error_estimate": rep.error_estimate,
        "tolerance": tol,
        "l2_lhs": rep.l2_lhs,
        "l2_rhs": rep.l2_rhs,
        "fft_cross_check": cross,
        "passed": passed,
        "diagnostics": diagnostics,
    }
    cols = xi_cols + ["lhs_re", "lhs_im", "rhs_re", "rhs_im", "abs_res", "rel_res"]
    return Report(cols, rows, summary, passed=passed)


def _run_pointwise(cfg: RunConfig) -> Report:
    params = make_params(cfg.n, cfg.p)
    times = cfg.times or (0.1, 0.5, 1.0, 2.0, 10.0)
    tol = cfg.pass_tol if cfg.pass_tol is not None else 1e-8
    kind, a = _parse_data(cfg.data)
    rows, diagnostics = [], []
    passed = True
    for t in times:
        if cfg.grid is None:
            if kind != "gaussian":
                raise ConfigError("grid: 'auto' needs Gaussian data")
            grid = resolving_grid(cfg.n, t, cfg.p, a)
        else:
            grid = make_grid(cfg.n, *cfg.grid)
        phi = _load_data(cfg, grid)
        field = sample(phi, grid) if kind == "gaussian" else phi
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", ResolutionWarning)
            res = pointwise_check(field, params, t)
        diagnostics.extend(str(w.message) for w in caught)
        closed = pointwise_check(phi, params, t, uniform_xi(cfg.n, cfg.xi_max, cfg.xi_points)) \
            if kind == "gaussian" else float("nan")
        ok = res < tol
        passed = passed and ok
        rows.append([t, grid.points_per_dim, grid.half_width, res, closed])
    summary = {"max_residual": max(r[3] for r in rows), "tolerance": tol, "passed": passed,
               "diagnostics": diagnostics}
    return Report(["t", "N", "L", "residual", "closed_form_residual"], rows, summary, passed=passed)


def _run_divergence(cfg: RunConfig) -> Report:
    _, a = _parse_data(cfg.data)
    rep = divergence_scan(a, cfg.n, cfg.cutoffs, spec=_spec(cfg))
    comp = rep.companion
    rows = [[T, m, c] for T, m, c in zip(rep.cutoffs, rep.partial_magnitudes, comp.partial_magnitudes)]
    diverges = rep.fitted_slope > 0 and rep.relative_fit_residual < 0.02
    converges = all(r > 1.0 for r in comp.increment_ratios)
    footer = [["fit_slope", rep.fitted_slope, comp.fitted_slope]]
    summary = {
        "p": rep.p,
        "fit_slope": rep.fitted_slope,
        "fit_intercept": rep.fitted_intercept,
        "relative_fit_residual": rep.relative_fit_residual,
        "companion_p": comp.p,
        "companion_increment_ratios": list(comp.increment_ratios),
        "passed": diverges and converges,
    }
    return Report(["T", "partial_magnitude", "companion_partial_magnitude"], rows, summary, footer,
                  passed=diverges and converges)


def _run_bounds(cfg: RunConfig) -> Report:
    params = make_params(cfg.n, cfg.p)
    grid = make_grid(cfg.n, *cfg.grid)
    family = [(gaussian(w, cfg.n), lam) for w in cfg.widths for lam in cfg.scales]
    rep = bound_check(family, params, _spec(cfg), data_grid=grid)
    rows = [[m.label, m.scale, m.f_norm_lhs, m.f_norm_rhs, m.bound, m.ratio] for m in rep.members]
    summary = {
        "regime": params.regime.value,
        "max_ratio": rep.max_ratio,
        "min_ratio": rep.min_ratio,
        "homogeneity_spread": rep.homogeneity_spread,
        "exponent_identity_residual": rep.exponent_identity_residual,
        "notes": list(rep.notes),
        "passed": rep.passed,
    }
    return Report(["member", "scale", "f_norm_lhs", "f_norm_rhs", "bound", "ratio"], rows, summary,
                  passed=rep.passed)


def _run_commutation(cfg: RunConfig) -> Report:
    times = cfg.times or (0.125, 0.5, 1.0, 2.0, 8.0)
    kind, a = _parse_data(cfg.data)
    if kind != "gaussian":
        raise ConfigError("data: commutation checks need Gaussian data")
    rows = []
    passed = True
    tol = cfg.pass_tol if cfg.pass_tol is not None else 1e-10
    for t in times:
        grid = make_grid(cfg.n, 128, 12.0 * t) if cfg.grid is None else make_grid(cfg.n, *cfg.grid)
        rep = check_commutation(t, sample(gaussian(a, cfg.n), grid), tol)
        passed = passed and rep.resolved
        rows.append([t, grid.points_per_dim, grid.half_width, *rep.residuals])
    summary = {"max_residual": max(max(r[3:]) for r in rows), "tolerance": tol, "passed": passed}
    return Report(["t", "N", "L", "res_fourier_dilation", "res_dilation_inverse",
                   "res_inverse_fourier_dilation"], rows, summary, passed=passed)


_RUNNERS = {
    "verify": _run_verify,
    "pointwise": _run_pointwise,
    "divergence": _run_divergence,
    "bounds": _run_bounds,
    "commutation": _run_commutation,
}


def run(cfg: RunConfig, out=None) -> int:
    out = sys.stdout if out is None else out
    start = time.perf_counter()
    try:
        report = _RUNNERS[cfg.command](cfg)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    path = Path(cfg.output) if cfg.output else Path(f"{cfg.command}_report.{cfg.format}")
    try:
        buf = io.StringIO()
        write_report(report, cfg, buf)
        path.write_text(buf.getvalue(), encoding="utf-8")
    except OSError as exc:
        print(f"error: cannot write report: {exc}", file=sys.stderr)
        return 2
    elapsed = time.perf_counter() - start
    status = "PASS" if report.passed else "FAIL"
    print(f"{cfg.command}: {status}  ({elapsed:.2f} s)  report -> {path}", file=out)
    for key, value in report.summary.items():
        if key == "diagnostics" or key == "notes":
            for line in value:
                print(f"  ! {line}", file=out)
        else:
            print(f"  {key}: {value}", file=out)
    return 0 if report.passed else 1


# ---------------------------------------------------------------------------
# argument handling


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nlpoisson", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="key = value configuration file")
        p.add_argument("--output", help="report path")
        p.add_argument("--format", choices=("csv", "json"))
        p.add_argument("--n", help="dimension")
        p.add_argument("--p", help="nonlinearity power")
        p.add_argument("--data", help="gaussian:<a> | rational_decay | file:<path.npy>")
        p.add_argument("--grid", help="<N>:<L> or auto")
        p.add_argument("--xi", help="<max>:<points>")
        p.add_argument("--tol", help="<abs>:<rel> quadrature tolerances")
        p.add_argument("--pass-tol", dest="pass_tol", help="verification tolerance")
        p.add_argument("--cutoffs", help="comma list of T values")
        p.add_argument("--times", help="comma list of t values")
        p.add_argument("--widths", help="comma list of Gaussian widths (bounds)")
        p.add_argument("--scales", help="comma list of amplitude scalings (bounds)")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    pairs: list[tuple[str, str]] = []
    try:
        if args.config:
            pairs.extend(_read_pairs(Path(args.config).read_text(encoding="utf-8")))
        # the subcommand and flags take precedence over the file
        overrides = {k: v for k, v in vars(args).items() if k not in ("config", "command") and v is not None}
        list_overrides = {k for k in overrides if k in _LIST_KEYS}
        pairs = [(k, v) for k, v in pairs if k not in list_overrides and k != "command"]
        pairs.append(("command", args.command))
        pairs.extend(overrides.items())
        cfg = build_config(pairs)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
