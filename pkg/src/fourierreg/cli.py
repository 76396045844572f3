"""Command-line experiment runner.

Subcommands:
  theory    closed-form error components for one configuration
  simulate  Monte Carlo estimate with a z-score against the closed form
  sweep     theory (optionally plus simulation) along a one-variable grid, to CSV
  spectrum  kernel eigenvalue tables, to CSV
  svd       singular values of the weighted unlearned feature block, to CSV

Configuration precedence: command-line flags override config-file entries,
which override built-in defaults. Exit codes: 0 success, 2 invalid
configuration, 3 numerical failure, 4 statistical assertion failure.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .model import (OVER, ConfigError, ExperimentConfig, RegimeError, rff_entries)
from .simulate import SimulationReport, simulate_generalization
from .spectra import (KernelSpectrum, algebraic_decay_spectrum,
                      gaussian_sphere_spectrum, ntk_decay_spectrum,
                      polynomial_sphere_spectrum)
from .theory import (error_clean_over, error_clean_under, error_noise_over,
                     error_noise_under)

CSV_HEADER = ("swept_value", "regime", "e_clean", "e_noise", "var_noise",
              "e_total", "mc_mean", "mc_stderr", "z_score")
SWEEPABLE = ("p", "alpha", "beta", "gamma", "sigma")
CONFIG_KEYS = ("n", "mu", "p", "alpha", "beta", "gamma", "sigma", "seed")
INT_KEYS = ("n", "mu", "p", "seed")
DEFAULTS = {"n": 16, "mu": 2, "p": None, "alpha": 0.0, "beta": 0.0,
            "gamma": 0.0, "sigma": 0.0, "seed": 0}
Z_THRESHOLD = 5.0

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_STATISTICAL = 4


def _fmt(value: float) -> str:
    """Shortest round-trip decimal; '.' separator, no grouping."""
    return repr(float(value))


# =============================================================================
# CONFIG RESOLUTION
# =============================================================================

def parse_config_file(path: str) -> dict:
    """Flat `key = value` file; keys are the config flag names."""
    values: dict = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value, got {raw!r}")
        key, _, val = (part.strip() for part in line.partition("="))
        if key not in CONFIG_KEYS:
            raise ConfigError(
                f"{path}:{lineno}: unknown key {key!r} (allowed: {', '.join(CONFIG_KEYS)})")
        try:
            values[key] = int(val) if key in INT_KEYS else float(val)
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: bad value for {key}: {val!r}") from exc
    return values


def resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    """Merge defaults, config file, and explicit flags into a validated config."""
    resolved = dict(DEFAULTS)
    if getattr(args, "config", None):
        resolved.update(parse_config_file(args.config))
    for key in CONFIG_KEYS:
        flag_value = getattr(args, key, None)
        if flag_value is not None:
            resolved[key] = flag_value
    if resolved["mu"] < 1:
        raise ConfigError(f"mu must be >= 1, got {resolved['mu']}")
    if resolved["p"] is None:
        resolved["p"] = resolved["n"]  # formally determined by default
    return ExperimentConfig(n=resolved["n"], p_total=resolved["mu"] * resolved["n"],
                            p=resolved["p"], alpha=resolved["alpha"],
                            beta=resolved["beta"], gamma=resolved["gamma"],
                            sigma=resolved["sigma"], seed=resolved["seed"])


def _config_line(config: ExperimentConfig) -> str:
    return (f"config: n={config.n} mu={config.mu} p={config.p} "
            f"alpha={_fmt(config.alpha)} beta={_fmt(config.beta)} "
            f"gamma={_fmt(config.gamma)} sigma={_fmt(config.sigma)} "
            f"seed={config.seed}")


# =============================================================================
# GRIDS AND SWEEPS
# =============================================================================

def parse_grid(spec: str, integer: bool = False) -> list:
    """`start:stop:step` (stop exclusive, arange-style) or a comma-separated list."""
    spec = spec.strip()
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3:
            raise ConfigError(f"grid must be start:stop:step, got {spec!r}")
        try:
            start, stop, step = (float(x) for x in parts)
        except ValueError as exc:
            raise ConfigError(f"non-numeric grid bound in {spec!r}") from exc
        if step <= 0 or stop < start:
            raise ConfigError(f"grid needs step > 0 and stop >= start, got {spec!r}")
        count = int(math.ceil((stop - start) / step - 1e-9))
        values = [start + i * step for i in range(count)]
    else:
        try:
            values = [float(x) for x in spec.split(",") if x.strip() != ""]
        except ValueError as exc:
            raise ConfigError(f"non-numeric grid value in {spec!r}") from exc
    if not values:
        raise ConfigError("grid is empty")
    if integer:
        rounded = [round(v) for v in values]
        if any(abs(v - r) > 1e-9 for v, r in zip(values, rounded)):
            raise ConfigError(f"grid for an integer variable has non-integers: {spec!r}")
        return [int(r) for r in rounded]
    return values


@dataclass(frozen=True)
class SweepSpec:
    base: ExperimentConfig
    swept: str
    values: tuple
    out: str
    n_theta: int = 0
    n_noise: int = 0
    workers: int = 1
    grid_text: str = ""


def build_sweep_spec(args: argparse.Namespace) -> SweepSpec:
    if args.sweep not in SWEEPABLE:
        raise ConfigError(f"sweepable variables are {', '.join(SWEEPABLE)}")
    base = resolve_config(args)
    values = parse_grid(args.grid, integer=(args.sweep == "p"))
    return SweepSpec(base=base, swept=args.sweep, values=tuple(values),
                     out=args.out, n_theta=args.n_theta, n_noise=args.n_noise,
                     workers=args.workers, grid_text=args.grid)


def _theory_fields(config: ExperimentConfig) -> tuple[dict, str]:
    """Closed-form columns for one row; partial results plus message on failure."""
    row = {key: "" for key in CSV_HEADER}
    row["regime"] = config.regime
    over = config.regime == OVER
    try:
        e_clean = error_clean_over(config) if over else error_clean_under(config)
    except RegimeError as exc:
        return row, str(exc)
    row["e_clean"] = _fmt(e_clean)
    if config.sigma == 0.0:
        e_noise, var_noise = 0.0, 0.0
    else:
        try:
            e_noise, var_noise = (error_noise_over(config) if over
                                  else error_noise_under(config))
        except RegimeError as exc:
            return row, str(exc)
    row["e_noise"] = _fmt(e_noise)
    row["var_noise"] = _fmt(var_noise)
    row["e_total"] = _fmt(e_clean + e_noise)
    return row, ""


def _attach_simulation(row: dict, report: SimulationReport) -> None:
    row["mc_mean"] = _fmt(report.mean_error)
    row["mc_stderr"] = _fmt(report.std_error)
    row["z_score"] = "" if report.z_score is None else _fmt(report.z_score)


def run_sweep(spec: SweepSpec) -> tuple[list[dict], bool]:
    """Rows in grid order plus a flag telling whether any row failed.

    A grid value the config machinery rejects (a p neither <= n nor a multiple
    of n, a negative sigma, ...) becomes an error row citing the violated
    constraint; the sweep itself continues.
    """
    def one_row(value) -> dict:
        label = str(value) if spec.swept == "p" else _fmt(value)
        try:
            config = spec.base.replace(**{spec.swept: value})
        except ConfigError as exc:
            row = {key: "" for key in CSV_HEADER}
            row.update(swept_value=label, error=str(exc))
            return row
        row, error = _theory_fields(config)
        row["swept_value"] = label
        if not error and spec.n_theta > 0 and spec.n_noise > 0:
            report = simulate_generalization(config, spec.n_theta, spec.n_noise,
                                             theory_total=float(row["e_total"]))
            _attach_simulation(row, report)
        row["error"] = error
        return row

    if spec.workers > 1:
        with ThreadPoolExecutor(max_workers=spec.workers) as pool:
            rows = list(pool.map(one_row, spec.values))
    else:
        rows = [one_row(value) for value in spec.values]
    return rows, any(row["error"] for row in rows)


# =============================================================================
# CSV OUTPUT
# =============================================================================

def write_csv(path: str, comments: list[str], header: tuple, rows: list[list]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        for line in comments:
            fh.write(f"# {line}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _provenance(command: str, config: ExperimentConfig | None,
                extras: list[str]) -> list[str]:
    lines = [f"fourierreg {__version__}", f"command: {command}"]
    if config is not None:
        lines.append(_config_line(config))
    lines.extend(extras)
    return lines


def _write_report_rows(path: str, comments: list[str], rows: list[dict],
                       with_error_column: bool) -> None:
    header = CSV_HEADER + ("error",) if with_error_column else CSV_HEADER
    data = [[row.get(col, "") for col in header] for row in rows]
    write_csv(path, comments, header, data)


# =============================================================================
# SUBCOMMANDS
# =============================================================================

def cmd_theory(args: argparse.Namespace) -> int:
    config = resolve_config(args)
    row, error = _theory_fields(config)
    if error:
        print(f"error: {error}", file=sys.stderr)
        return EXIT_CONFIG
    print(f"regime: {row['regime']}")
    for key in ("e_clean", "e_noise", "var_noise", "e_total"):
        print(f"{key}: {row[key]}")
    if args.out:
        row["swept_value"] = str(config.p)
        comments = _provenance("theory", config, [])
        _write_report_rows(args.out, comments, [row], with_error_column=False)
        print(f"wrote 1 row -> {args.out}")
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    config = resolve_config(args)
    if args.n_theta < 1 or args.n_noise < 1:
        raise ConfigError(
            f"need n_theta, n_noise >= 1, got {args.n_theta}, {args.n_noise}")
    row, error = _theory_fields(config)
    if error:
        print(f"error: {error}", file=sys.stderr)
        return EXIT_CONFIG
    report = simulate_generalization(config, args.n_theta, args.n_noise,
                                     theory_total=float(row["e_total"]),
                                     n_workers=args.workers)
    _attach_simulation(row, report)

    print(f"regime: {row['regime']}")
    for key in ("e_clean", "e_noise", "var_noise", "e_total"):
        print(f"{key}: {row[key]}")
    print(f"mc_mean: {row['mc_mean']}")
    print(f"mc_stderr: {row['mc_stderr']}")
    print(f"noise_var_estimate: {_fmt(report.noise_var_estimate)}")
    if report.z_score is None:
        print("z_score: n/a (exact match)")
    else:
        print(f"z_score: {row['z_score']}")

    if args.out:
        row["swept_value"] = str(config.p)
        extras = [f"samples: n_theta={args.n_theta} n_noise={args.n_noise}"]
        comments = _provenance("simulate", config, extras)
        _write_report_rows(args.out, comments, [row], with_error_column=False)
        print(f"wrote 1 row -> {args.out}")

    if args.assert_z and report.z_score is not None and abs(report.z_score) > Z_THRESHOLD:
        print(f"statistical assertion failed: |z| = {abs(report.z_score):.2f} "
              f"> {Z_THRESHOLD}", file=sys.stderr)
        return EXIT_STATISTICAL
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    spec = build_sweep_spec(args)
    rows, any_error = run_sweep(spec)
    extras = [f"sweep: var={spec.swept} grid={spec.grid_text} "
              f"n_theta={spec.n_theta} n_noise={spec.n_noise}"]
    comments = _provenance("sweep", spec.base, extras)
    _write_report_rows(spec.out, comments, rows, with_error_column=any_error)
    print(f"wrote {len(rows)} rows -> {spec.out}")
    if args.plot:
        figure_path = str(Path(spec.out).with_suffix(".png"))
        from . import plotting
        plotting.render_sweep(rows, spec.swept, figure_path)
        print(f"wrote figure -> {figure_path}")
    return EXIT_OK


def _build_spectrum(args: argparse.Namespace) -> KernelSpectrum:
    kind = args.kind
    if kind == "gaussian":
        if args.sigma_k is None:
            raise ConfigError("gaussian spectrum needs --sigma-k")
        return gaussian_sphere_spectrum(args.dim, args.sigma_k, args.k_max)
    if kind == "polynomial":
        if args.degree is None:
            raise ConfigError("polynomial spectrum needs --degree")
        return polynomial_sphere_spectrum(args.dim, args.degree, args.k_max)
    if kind == "ntk":
        return ntk_decay_spectrum(args.dim, args.k_max)
    if kind == "algebraic":
        if args.zeta is None:
            raise ConfigError("algebraic spectrum needs --zeta")
        return algebraic_decay_spectrum(args.zeta, args.k_max)
    raise ConfigError(f"unknown spectrum kind {kind!r}")


def cmd_spectrum(args: argparse.Namespace) -> int:
    spectrum = _build_spectrum(args)
    params = [f"kind={spectrum.kind}", f"dim={args.dim}", f"k_max={args.k_max}"]
    if args.sigma_k is not None:
        params.append(f"sigma_k={_fmt(args.sigma_k)}")
    if args.degree is not None:
        params.append(f"degree={args.degree}")
    if args.zeta is not None:
        params.append(f"zeta={_fmt(args.zeta)}")
    comments = _provenance("spectrum", None, [" ".join(params)])
    rows = [[str(int(k)), str(int(m)), _fmt(v)]
            for k, m, v in zip(spectrum.orders, spectrum.multiplicities,
                               spectrum.values)]
    write_csv(args.out, comments, ("k", "multiplicity", "eigenvalue"), rows)
    print(f"wrote {len(rows)} rows -> {args.out}")
    if args.plot:
        figure_path = str(Path(args.out).with_suffix(".png"))
        from . import plotting
        plotting.render_spectrum(spectrum.orders, spectrum.multiplicities,
                                 spectrum.values, spectrum.kind, figure_path)
        print(f"wrote figure -> {figure_path}")
    return EXIT_OK


def cmd_svd(args: argparse.Namespace) -> int:
    config = resolve_config(args)
    if config.p >= config.n:
        raise ConfigError(
            f"the unlearned block needs p < n, got p={config.p}, n={config.n}")
    alphas = parse_grid(args.grid)
    t = np.arange(1, config.n + 1, dtype=float)
    tail = rff_entries(config.n, config.n)[:, config.p:]

    curves: dict[float, np.ndarray] = {}
    rows = []
    for alpha in alphas:
        weighted = (t ** alpha)[:, None] * tail
        singular = np.linalg.svd(weighted, compute_uv=False)
        curves[alpha] = singular
        rows.extend([[_fmt(alpha), str(i), _fmt(s)] for i, s in enumerate(singular)])

    extras = [f"svd: grid={args.grid}"]
    comments = _provenance("svd", config, extras)
    write_csv(args.out, comments, ("alpha", "index", "singular_value"), rows)
    print(f"wrote {len(rows)} rows -> {args.out}")
    if args.plot:
        figure_path = str(Path(args.out).with_suffix(".png"))
        from . import plotting
        plotting.render_singular_values(curves, figure_path)
        print(f"wrote figure -> {figure_path}")
    return EXIT_OK


# =============================================================================
# PARSER
# =============================================================================

def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="key = value configuration file")
    parser.add_argument("--n", type=int, help="number of data points")
    parser.add_argument("--mu", type=int, help="true width as a multiple of n")
    parser.add_argument("--p", type=int, help="learned width (default: n)")
    parser.add_argument("--alpha", type=float, help="data-side weight exponent")
    parser.add_argument("--beta", type=float, help="parameter-side weight exponent")
    parser.add_argument("--gamma", type=float, help="prior decay exponent")
    parser.add_argument("--sigma", type=float, help="noise standard deviation")
    parser.add_argument("--seed", type=int, help="master RNG seed")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fourierreg",
        description="Weighted least-squares regression on Fourier features: "
                    "closed-form errors, simulation, sweeps, and kernel spectra.")
    parser.add_argument("--version", action="version",
                        version=f"fourierreg {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_theory = sub.add_parser("theory", help="closed-form error components")
    _add_config_flags(p_theory)
    p_theory.add_argument("--out", help="optional CSV output path")
    p_theory.set_defaults(func=cmd_theory)

    p_sim = sub.add_parser("simulate", help="Monte Carlo validation")
    _add_config_flags(p_sim)
    p_sim.add_argument("--n-theta", type=int, default=8,
                       help="coefficient draws per noise draw (default 8)")
    p_sim.add_argument("--n-noise", type=int, default=1000,
                       help="noise draws (default 1000)")
    p_sim.add_argument("--workers", type=int, default=1,
                       help="worker threads (default 1)")
    p_sim.add_argument("--assert", dest="assert_z", action="store_true",
                       help=f"exit {EXIT_STATISTICAL} when |z| > {Z_THRESHOLD}")
    p_sim.add_argument("--out", help="optional CSV output path")
    p_sim.set_defaults(func=cmd_simulate)

    p_sweep = sub.add_parser("sweep", help="one-variable grid sweep to CSV")
    _add_config_flags(p_sweep)
    p_sweep.add_argument("--sweep", required=True, choices=SWEEPABLE,
                         help="variable to sweep")
    p_sweep.add_argument("--grid", required=True,
                         help="start:stop:step (stop exclusive) or v1,v2,...")
    p_sweep.add_argument("--n-theta", type=int, default=0,
                         help="coefficient draws; 0 disables simulation")
    p_sweep.add_argument("--n-noise", type=int, default=0,
                         help="noise draws; 0 disables simulation")
    p_sweep.add_argument("--workers", type=int, default=1,
                         help="worker threads across grid points (default 1)")
    p_sweep.add_argument("--out", required=True, help="CSV output path")
    p_sweep.add_argument("--plot", action="store_true",
                         help="also render a .png next to the CSV")
    p_sweep.set_defaults(func=cmd_sweep)

    p_spec = sub.add_parser("spectrum", help="kernel eigenvalue table to CSV")
    p_spec.add_argument("--kind", required=True,
                        choices=("gaussian", "polynomial", "ntk", "algebraic"))
    p_spec.add_argument("--dim", type=int, default=3,
                        help="ambient dimension of the sphere (default 3)")
    p_spec.add_argument("--sigma-k", type=float, help="gaussian kernel width")
    p_spec.add_argument("--degree", type=int, help="polynomial kernel degree")
    p_spec.add_argument("--zeta", type=float, help="algebraic decay exponent")
    p_spec.add_argument("--k-max", type=int, default=20,
                        help="largest harmonic degree (default 20)")
    p_spec.add_argument("--out", required=True, help="CSV output path")
    p_spec.add_argument("--plot", action="store_true",
                        help="also render a .png next to the CSV")
    p_spec.set_defaults(func=cmd_spectrum)

    p_svd = sub.add_parser(
        "svd", help="singular values of the weighted unlearned block to CSV")
    _add_config_flags(p_svd)
    p_svd.add_argument("--grid", required=True,
                       help="alpha grid: start:stop:step or v1,v2,...")
    p_svd.add_argument("--out", required=True, help="CSV output path")
    p_svd.add_argument("--plot", action="store_true",
                       help="also render a .png next to the CSV")
    p_svd.set_defaults(func=cmd_svd)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, RegimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (np.linalg.LinAlgError, FloatingPointError, OverflowError,
            RuntimeError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
