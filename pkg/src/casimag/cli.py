"""Command-line front end.

Subcommands ``pressure``, ``metrics``, ``locus``, ``sweep`` and
``approx-compare`` read a flat key-value config file, run the engine,
and emit CSV (default) or JSON datasets.  CSV files carry the fully
resolved configuration in their ``# config:`` header block, so any
emitted file can be re-run bit-identically.

Exit codes: 0 success, 2 configuration error, 3 convergence error,
4 no attraction-to-repulsion transition.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor

from . import analysis, approx
from .config import (
    LENGTH_UNITS,
    RunConfig,
    TEMPERATURE_UNITS,
    build_cavity,
    build_material,
    build_settings,
    parse_config,
    parse_config_text,
)
from .errors import (
    ConfigurationError,
    ConvergenceError,
    LocusRangeError,
    NoTransitionError,
)
from .lifshitz import CavityConfig, ideal_pressure, total_pressure
from .materials import (
    Lorentz,
    Material,
    Plasma,
    QuasistaticMagnetic,
    default_yig_like,
    gold_plasma,
    rescale_to_eps0,
    static_limits,
)
from .reflection import TE, TM

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CONVERGENCE = 3
EXIT_NO_TRANSITION = 4


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.9g}"
    if value is None:
        return ""
    return str(value)


def _separation_grid(cfg: RunConfig) -> list[float]:
    grid = cfg.get_list("d_grid", LENGTH_UNITS)
    if grid is not None:
        return grid
    d_min = cfg.get_length("d_min", required=True)
    d_max = cfg.get_length("d_max", required=True)
    n = cfg.get_int("d_points", 25)
    scale = cfg.get_str("d_scale", "log")
    if not 0 < d_min < d_max:
        raise ConfigurationError("need 0 < d_min < d_max", "d_min")
    if n < 2:
        raise ConfigurationError("d_points must be >= 2", "d_points")
    if scale == "log":
        ratio = (d_max / d_min) ** (1.0 / (n - 1))
        return [d_min * ratio**i for i in range(n)]
    if scale == "linear":
        step = (d_max - d_min) / (n - 1)
        return [d_min + step * i for i in range(n)]
    raise ConfigurationError(f"d_scale must be log or linear, got {scale!r}",
                             "d_scale")


def _map_rows(worker, items, threads: int):
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(worker, items))
    return [worker(item) for item in items]


# ---------------------------------------------------------------------------
# commands: each returns (columns, rows) with rows as dicts


def cmd_pressure(cfg: RunConfig, settings, threads: int):
    cav = build_cavity(cfg)
    grid = _separation_grid(cfg)

    def row(d: float) -> dict:
        dec = total_pressure(d, cav, settings)
        return {
            "d": d,
            "total": dec.total,
            "te_zero": dec.te_zero,
            "tm_zero": dec.tm_zero,
            "te_pos": dec.te_pos,
            "tm_pos": dec.tm_pos,
            "total_over_pc": dec.total / ideal_pressure(d),
            "n_terms": dec.n_terms_used,
        }

    columns = ["d", "total", "te_zero", "tm_zero", "te_pos", "tm_pos",
               "total_over_pc", "n_terms"]
    return columns, _map_rows(row, grid, threads)


def cmd_metrics(cfg: RunConfig, settings, threads: int):
    cav = build_cavity(cfg)
    d_lo = cfg.get_length("d_lo")
    d_hi = cfg.get_length("d_hi")
    d_start = cfg.get_length("d_start")
    metrics = analysis.find_max_repulsion(cav, d_start=d_start,
                                          settings=settings,
                                          d_lo=d_lo, d_hi=d_hi)
    row = {"d_T": metrics.d_transition,
           "d_at_max": metrics.d_at_max_repulsion,
           "p_max": metrics.p_max}
    return ["d_T", "d_at_max", "p_max"], [row]


def _require_plasma_left(left: Material) -> float:
    if not isinstance(left.epsilon, Plasma):
        raise ConfigurationError(
            "this command needs a plasma-model metal plate on the left "
            "(the analytic relation expands its static TE reflection)"
        )
    return left.epsilon.omega_p


def cmd_locus(cfg: RunConfig, settings, threads: int):
    if cfg.has("left_material") or cfg.has("left_epsilon_model"):
        left = build_material(cfg, "left")
    else:
        left = gold_plasma()
    omega_p = _require_plasma_left(left)
    if cfg.has("right_material") or cfg.has("right_epsilon_model"):
        template = build_material(cfg, "right")
    else:
        template = default_yig_like()
    if not isinstance(template.epsilon, Lorentz):
        raise ConfigurationError(
            "the locus template permittivity must be a Lorentz model "
            "(its strengths are rescaled to hit each eps0)"
        )
    d_T = cfg.get_length("d_T", required=True)
    b = cfg.get_length_or_inf("right_thickness", required=True)
    T = cfg.get_temperature("temperature", required=True)
    eps_grid = cfg.get_list("eps0_grid", required=True)

    def row(eps0: float) -> dict:
        out = {"eps0": eps0, "mu0_numeric": None, "mu0_analytic": None,
               "rel_diff": None, "error": None}
        try:
            point = analysis.solve_locus(
                eps0, d_T, b, T,
                eps_model_template=template.epsilon,
                left=left, settings=settings,
            )
            eps_model = (Lorentz(tuple()) if eps0 == 1.0
                         else rescale_to_eps0(template.epsilon, eps0))
            cav1 = CavityConfig(left, Material(eps_model, QuasistaticMagnetic(1.0)),
                                b, T)
            dec = total_pressure(d_T, cav1, settings.tightened())
            mu_ana = approx.analytic_mu_for_eps(
                eps0, d_T, b, T, omega_p, dec.te_pos + dec.tm_pos
            )
            out.update(
                mu0_numeric=point.mu0,
                mu0_analytic=mu_ana,
                rel_diff=abs(mu_ana - point.mu0) / abs(point.mu0),
            )
        except (LocusRangeError, ConvergenceError, ConfigurationError) as exc:
            out["error"] = str(exc)
        return out

    columns = ["eps0", "mu0_numeric", "mu0_analytic", "rel_diff", "error"]
    return columns, _map_rows(row, eps_grid, threads)


_SWEEP_UNITS = {
    "separation": LENGTH_UNITS,
    "thickness": LENGTH_UNITS,
    "temperature": TEMPERATURE_UNITS,
    "mu0": None,
    "eps0": None,
}


def cmd_sweep(cfg: RunConfig, settings, threads: int):
    parameter = cfg.get_str("sweep_parameter", required=True)
    if parameter not in analysis.SWEEP_PARAMETERS:
        raise ConfigurationError(
            f"sweep_parameter must be one of {analysis.SWEEP_PARAMETERS}",
            "sweep_parameter",
        )
    grid = cfg.get_list("sweep_grid", _SWEEP_UNITS[parameter], required=True)
    cav = build_cavity(cfg)

    def row(value: float) -> dict:
        return analysis.sweep(parameter, [value], cav, settings)[0]

    rows = _map_rows(row, grid, threads)
    if parameter == "separation":
        columns = ["parameter", "value", "total", "te_zero", "tm_zero",
                   "te_pos", "tm_pos", "n_terms", "error"]
    else:
        columns = ["parameter", "value", "d_T", "d_at_max", "p_max", "error"]
    return columns, rows


def cmd_approx_compare(cfg: RunConfig, settings, threads: int):
    cav = build_cavity(cfg)
    omega_p = _require_plasma_left(cav.left)
    eps0, mu0, _ = static_limits(cav.right)
    grid = _separation_grid(cfg)
    solver = settings.tightened()

    def row(d: float) -> dict:
        dec = total_pressure(d, cav, solver)
        ctx = approx.make_context(d, cav.right_thickness, cav.temperature,
                                  eps0, mu0, omega_p,
                                  dec.te_pos + dec.tm_pos)
        return {
            "d": d,
            "te_zero": dec.te_zero,
            "tm_zero": dec.tm_zero,
            "te_pade": approx.pade_pressure_zero_freq(ctx, d, cav.temperature, TE),
            "tm_pade": approx.pade_pressure_zero_freq(ctx, d, cav.temperature, TM),
            "te_taylor": approx.taylor_pressure_zero_freq(ctx, d, cav.temperature, TE),
            "tm_taylor": approx.taylor_pressure_zero_freq(ctx, d, cav.temperature, TM),
        }

    columns = ["d", "te_zero", "tm_zero", "te_pade", "tm_pade",
               "te_taylor", "tm_taylor"]
    return columns, _map_rows(row, grid, threads)


COMMANDS = {
    "pressure": cmd_pressure,
    "metrics": cmd_metrics,
    "locus": cmd_locus,
    "sweep": cmd_sweep,
    "approx-compare": cmd_approx_compare,
}

CONFIG_HEADER_PREFIX = "# config: "


def write_csv(stream, command: str, cfg: RunConfig, columns, rows) -> None:
    stream.write(f"# casimag {command}\n")
    for key, value in cfg.entries.items():
        stream.write(f"{CONFIG_HEADER_PREFIX}{key} = {value}\n")
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row.get(c)) for c in columns])


def write_json(stream, command: str, cfg: RunConfig, columns, rows) -> None:
    json.dump(
        {"command": command, "config": dict(cfg.entries),
         "columns": list(columns), "records": rows},
        stream, indent=2, default=str,
    )
    stream.write("\n")


def config_from_csv(text: str) -> RunConfig:
    """Rebuild the run configuration embedded in an emitted CSV header."""
    lines = [line[len(CONFIG_HEADER_PREFIX):]
             for line in text.splitlines()
             if line.startswith(CONFIG_HEADER_PREFIX)]
    return parse_config_text("\n".join(lines), source="<csv header>")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="casimag",
        description="Casimir pressures between a metal and a thin "
                    "magnetodielectric plate",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("pressure", "pressure decomposition over a separation grid"),
        ("metrics", "transition separation and maximum repulsion"),
        ("locus", "zero-pressure static-response locus, numeric vs analytic"),
        ("sweep", "repulsion metrics over a parameter grid"),
        ("approx-compare", "static-pressure approximants vs full numerics"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="key-value config file")
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--tol", type=float, default=None,
                       help="override engine relative tolerance")
        p.add_argument("--threads", type=int, default=1,
                       help="parallel row evaluation (values are unchanged)")
        p.add_argument("--seedless", action="store_true",
                       help="assert the fully deterministic pipeline (always on)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = parse_config(args.config)
        if args.tol is not None:
            cfg.entries["rel_tol"] = repr(args.tol)
        settings = build_settings(cfg)
        if args.threads < 1:
            raise ConfigurationError("--threads must be >= 1")
        columns, rows = COMMANDS[args.command](cfg, settings, args.threads)
        cfg.check_unused()
    except ConfigurationError as exc:
        print(f"casimag: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NoTransitionError as exc:
        print(f"casimag: no transition: {exc}", file=sys.stderr)
        return EXIT_NO_TRANSITION
    except (ConvergenceError, LocusRangeError) as exc:
        print(f"casimag: convergence error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE

    failures = [r for r in rows if r.get("error")]
    buffer = io.StringIO()
    if args.format == "csv":
        write_csv(buffer, args.command, cfg, columns, rows)
    else:
        write_json(buffer, args.command, cfg, columns, rows)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(buffer.getvalue())
    else:
        sys.stdout.write(buffer.getvalue())

    if rows and len(failures) == len(rows) and "error" in columns:
        first = failures[0]["error"]
        print(f"casimag: every row failed; first error: {first}", file=sys.stderr)
        if "transition" in first or "attractive" in first:
            return EXIT_NO_TRANSITION
        return EXIT_CONVERGENCE
    return EXIT_OK


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
