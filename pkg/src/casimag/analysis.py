"""Repulsion metrics and parameter studies built on the pressure engine.

Transition separation (sign change of the total pressure), maximum
repulsion, the zero-pressure locus in the static response plane, and
one-parameter sweeps.  Solvers run the engine with tolerances tightened
100x so numerical noise stays below the bracketing tolerances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterable

from scipy.optimize import brentq

from .errors import (
    ConfigurationError,
    ConvergenceError,
    LocusRangeError,
    NoTransitionError,
)
from .lifshitz import (
    DEFAULT_SETTINGS,
    CavityConfig,
    EngineSettings,
    pressure_term,
    total_pressure,
)
from .materials import (
    Lorentz,
    Material,
    QuasistaticMagnetic,
    default_yig_like,
    gold_plasma,
    rescale_to_eps0,
    with_mu0,
)
from .reflection import TE

# Automatic bracket search: octave grid resolution and scan range in m.
POINTS_PER_OCTAVE = 8
SCAN_RANGE = (1e-8, 1e-4)

# A scan point only counts as genuinely repulsive when it clears this
# multiple of the engine's absolute tolerance; tiny positive lobes below
# solver resolution are reported as "no transition" instead of a root.
_SIGN_FLOOR_FACTOR = 10.0


@dataclass(frozen=True)
class RepulsionMetrics:
    """Transition separation and maximum repulsion of a pressure curve."""

    d_transition: float
    d_at_max_repulsion: float
    p_max: float

    def __post_init__(self):
        if not self.d_transition < self.d_at_max_repulsion:
            raise ValueError("maximum repulsion must lie beyond the transition")


@dataclass(frozen=True)
class LocusPoint:
    """A static-response pair (eps0, mu0) with zero pressure at d_T."""

    eps0: float
    mu0: float
    d_T: float
    b: float
    T: float


def _solver_settings(settings: EngineSettings | None) -> EngineSettings:
    return (settings or DEFAULT_SETTINGS).tightened()


def find_transition(cav: CavityConfig, d_lo: float | None = None,
                    d_hi: float | None = None,
                    settings: EngineSettings | None = None) -> float:
    """Separation at which the pressure switches from attraction to repulsion.

    If (d_lo, d_hi) brackets a sign change it is refined directly;
    otherwise the range 10 nm - 100 um is scanned on a logarithmic grid
    with 8 points per octave (from large separations down, where the
    engine is cheapest and repulsion, if any, lives).

    Returns the root of the total pressure to relative tolerance 1e-6 in
    separation.

    Raises
    ------
    NoTransitionError
        If no sign change is found (e.g. a Drude-metal plate, or a slab
        whose static permeability cannot overcome the attraction).
    """
    eng = _solver_settings(settings)
    pressure = lambda d: total_pressure(d, cav, eng).total
    floor = _SIGN_FLOOR_FACTOR * eng.abs_tol

    if d_lo is not None and d_hi is not None:
        p_lo, p_hi = pressure(d_lo), pressure(d_hi)
        if p_lo < -floor and p_hi > floor:
            return brentq(pressure, d_lo, d_hi, rtol=1e-6, xtol=1e-15)

    lo, hi = SCAN_RANGE
    n_steps = int(math.ceil(math.log2(hi / lo) * POINTS_PER_OCTAVE))
    saw_positive = False
    last = None  # (d, p) of the last decisively signed scan point
    for j in range(n_steps + 1):
        d = hi * 2.0 ** (-j / POINTS_PER_OCTAVE)
        d = max(d, lo)
        p = pressure(d)
        if abs(p) <= floor:
            continue
        if p > 0:
            saw_positive = True
        if last is not None and (p > 0) != (last[1] > 0):
            # scanning downward: the attractive->repulsive root is bracketed
            return brentq(pressure, d, last[0], rtol=1e-6, xtol=1e-15)
        last = (d, p)
    if saw_positive:
        raise NoTransitionError(
            "pressure is repulsive over the whole scanned range; no "
            "attraction-to-repulsion transition between 10 nm and 100 um"
        )
    raise NoTransitionError(
        "pressure is attractive over the whole scanned range: the "
        "interaction is purely attractive"
    )


def _golden_max(f, a: float, b: float, rel_tol: float) -> tuple[float, float]:
    """Golden-section search for the maximum of f on [a, b]."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    invphi2 = invphi * invphi
    h = b - a
    c = a + invphi2 * h
    d = a + invphi * h
    fc, fd = f(c), f(d)
    while h > rel_tol * (abs(a) + abs(b)):
        if fc > fd:
            b, d, fd = d, c, fc
            h = b - a
            c = a + invphi2 * h
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            h = b - a
            d = a + invphi * h
            fd = f(d)
    return (c, fc) if fc > fd else (d, fd)


def find_max_repulsion(cav: CavityConfig, d_start: float | None = None,
                       settings: EngineSettings | None = None,
                       d_lo: float | None = None,
                       d_hi: float | None = None) -> RepulsionMetrics:
    """Locate the strongest repulsion beyond the transition separation.

    Expands a bracket geometrically from the transition (or from
    ``d_start``) until the pressure falls again, then refines the maximum
    by golden-section search to relative tolerance 1e-4 in separation.
    ``d_lo``/``d_hi`` are forwarded to the transition search.
    """
    eng = _solver_settings(settings)
    d_t = find_transition(cav, d_lo, d_hi, settings=settings)
    pressure = lambda d: total_pressure(d, cav, eng).total

    a = max(d_start, d_t * 1.01) if d_start is not None else d_t * 1.02
    step = 1.35
    b = a * step
    pa, pb = pressure(a), pressure(b)
    while pb > pa:
        a, pa = b, pb
        b *= step
        pb = pressure(b)
        if b > 1e-2:
            raise ConvergenceError("no repulsion maximum found below 1 cm")
    lo = max(d_t, a / step)
    d_best, p_best = _golden_max(pressure, lo, b, rel_tol=1e-4)
    return RepulsionMetrics(d_transition=d_t, d_at_max_repulsion=d_best, p_max=p_best)


def solve_locus(eps0: float, d_T: float, b: float, T: float,
                eps_model_template: Lorentz | None = None,
                mu_model_template: QuasistaticMagnetic | None = None,
                left: Material | None = None,
                settings: EngineSettings | None = None) -> LocusPoint:
    """Static permeability that nulls the pressure at a prescribed setup.

    The template permittivity is rescaled so its static value equals
    ``eps0``; the permeability is quasistatic, so it enters only the
    static TE term, which grows monotonically with mu0 and guarantees a
    unique root.  All other contributions are computed once, exactly.

    Raises
    ------
    LocusRangeError
        If no root exists in mu0 within [1, 1e6] (asymptotic regime where
        the saturated TE term cannot null the attraction, or a cavity that
        is already repulsive at mu0 = 1).
    """
    if eps0 < 1:
        raise ConfigurationError("eps0 must be >= 1", "eps0")
    eng = _solver_settings(settings)
    left = left if left is not None else gold_plasma()
    template = eps_model_template if eps_model_template is not None \
        else default_yig_like().epsilon
    mu_template = mu_model_template if mu_model_template is not None \
        else QuasistaticMagnetic(1.0)
    if not isinstance(mu_template, QuasistaticMagnetic):
        raise ConfigurationError(
            "locus solving requires a quasistatic permeability template"
        )
    if eps0 == 1.0:
        eps_model = Lorentz(tuple())
    else:
        eps_model = rescale_to_eps0(template, eps0)

    def cavity(mu0: float) -> CavityConfig:
        return CavityConfig(left, Material(eps_model, QuasistaticMagnetic(mu0)),
                            b, T)

    # mu0 = 1 kills the static TE term, so this is every mu0-independent
    # contribution in one call (mu(xi>0) = 1 for quasistatic responses).
    rest = total_pressure(d_T, cavity(1.0), eng).total

    def residual(mu0: float) -> float:
        return pressure_term(0, d_T, cavity(mu0), TE, eng) + rest

    lo, hi = 1.0, 1e6
    r_lo, r_hi = residual(lo), residual(hi)
    if r_lo > 0 or r_hi < 0:
        raise LocusRangeError(
            f"no zero-pressure permeability in [{lo:g}, {hi:g}] for "
            f"eps0={eps0:g}, d_T={d_T:g} m, b={b:g} m, T={T:g} K",
            r_lo, r_hi,
        )
    if r_lo == 0.0:
        mu0 = lo
    else:
        mu0 = brentq(residual, lo, hi, rtol=1e-11)
    return LocusPoint(eps0=eps0, mu0=mu0, d_T=d_T, b=b, T=T)


SWEEP_PARAMETERS = ("separation", "mu0", "thickness", "temperature", "eps0")


def _cavity_for(parameter: str, value: float, base: CavityConfig) -> CavityConfig:
    if parameter == "mu0":
        return replace(base, right=with_mu0(base.right, value))
    if parameter == "thickness":
        return replace(base, right_thickness=value)
    if parameter == "temperature":
        return replace(base, temperature=value)
    if parameter == "eps0":
        right = Material(rescale_to_eps0(base.right.epsilon, value), base.right.mu)
        return replace(base, right=right)
    raise ConfigurationError(f"unknown sweep parameter {parameter!r}")


def sweep(parameter: str, grid: Iterable[float], cav_base: CavityConfig,
          settings: EngineSettings | None = None) -> list[dict]:
    """Evaluate metrics (or the pressure curve) over a parameter grid.

    ``parameter`` is one of ``separation, mu0, thickness, temperature,
    eps0``.  Separation sweeps record the pressure decomposition per grid
    point; the others record repulsion metrics.  Rows are independent, so
    evaluation order cannot affect any value; per-row failures are
    recorded in the ``error`` field and the sweep continues.
    """
    if parameter not in SWEEP_PARAMETERS:
        raise ConfigurationError(
            f"sweep parameter must be one of {SWEEP_PARAMETERS}, got {parameter!r}"
        )
    grid = list(grid)
    if not grid:
        raise ConfigurationError("sweep grid must be nonempty")
    if any(b >= a for a, b in zip(grid[1:], grid)):
        raise ConfigurationError("sweep grid must be strictly ascending")
    eng = settings or DEFAULT_SETTINGS

    records = []
    for value in grid:
        row: dict = {"parameter": parameter, "value": value, "error": None}
        try:
            if parameter == "separation":
                dec = total_pressure(value, cav_base, eng)
                row.update(
                    total=dec.total, te_zero=dec.te_zero, tm_zero=dec.tm_zero,
                    te_pos=dec.te_pos, tm_pos=dec.tm_pos,
                    n_terms=dec.n_terms_used,
                )
            else:
                cav = _cavity_for(parameter, value, cav_base)
                metrics = find_max_repulsion(cav, settings=eng)
                row.update(
                    d_T=metrics.d_transition,
                    d_at_max=metrics.d_at_max_repulsion,
                    p_max=metrics.p_max,
                )
        except (NoTransitionError, ConvergenceError, LocusRangeError,
                ConfigurationError, ValueError) as exc:
            row["error"] = str(exc)
        records.append(row)
    return records
