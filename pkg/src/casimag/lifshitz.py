"""Finite-temperature Casimir pressure between a metal and a slab.

The total pressure is a Matsubara sum over imaginary frequencies of
wave-vector integrals weighted by the plates' reflection coefficients.
The engine evaluates every term with the substitution y = 2 rho_gap d,
which turns each integral into an integral of a smooth e^(-y)-decaying
function over [y_min, y_min + span], and batches blocks of Matsubara
indices through the vectorized Gauss-Kronrod rule.

Sign convention: negative pressure means attraction, positive repulsion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .constants import C, HBAR, K_B
from .errors import ConvergenceError
from .materials import Material, response_on_grid, static_limits
from .quadrature import integrate_rows
from .reflection import TE, TM, POLARIZATIONS


@dataclass(frozen=True)
class CavityConfig:
    """Physical description of the cavity.

    left : semi-infinite plate material.
    right : slab material of thickness ``right_thickness`` (may be
        ``math.inf`` for a second half-space).
    temperature : system temperature in K.
    The gap between the plates is vacuum.
    """

    left: Material
    right: Material
    right_thickness: float
    temperature: float

    def __post_init__(self):
        if not self.right_thickness > 0:
            raise ValueError("right_thickness must be > 0 (math.inf allowed)")
        if not self.temperature > 0:
            raise ValueError("temperature must be > 0")


@dataclass(frozen=True)
class EngineSettings:
    """Convergence targets for the pressure engine.

    rel_tol and abs_tol (Pa) control both the per-term quadrature and the
    Matsubara truncation; the sum stops once three consecutive terms each
    fall below max(rel_tol * |partial sum|, abs_tol), after which a
    geometric tail estimate from the last two terms is added.
    """

    rel_tol: float = 1e-9
    abs_tol: float = 1e-10
    max_matsubara_terms: int = 100_000
    quad_span: float = 60.0
    quad_max_refine: int = 8

    def __post_init__(self):
        if not 0 < self.rel_tol < 1:
            raise ValueError("rel_tol must lie in (0, 1)")
        if self.abs_tol < 0:
            raise ValueError("abs_tol must be >= 0")
        if self.max_matsubara_terms < 1:
            raise ValueError("max_matsubara_terms must be >= 1")
        if not self.quad_span > 1:
            raise ValueError("quad_span must exceed 1")

    def tightened(self, factor: float = 100.0) -> "EngineSettings":
        """Settings with tolerances shrunk by ``factor`` (for solvers)."""
        return replace(self, rel_tol=self.rel_tol / factor, abs_tol=self.abs_tol / factor)


DEFAULT_SETTINGS = EngineSettings()


@dataclass(frozen=True)
class PressureDecomposition:
    """Total pressure and its four mode contributions, in Pa.

    ``total`` is exactly the sum of the four mode fields.  te_pos/tm_pos
    include a geometric estimate of the truncated Matsubara tail.
    """

    total: float
    te_zero: float
    tm_zero: float
    te_pos: float
    tm_pos: float
    n_terms_used: int
    quadrature_error_estimate: float

    def scaled(self, factor: float) -> "PressureDecomposition":
        return PressureDecomposition(
            self.total * factor,
            self.te_zero * factor,
            self.tm_zero * factor,
            self.te_pos * factor,
            self.tm_pos * factor,
            self.n_terms_used,
            self.quadrature_error_estimate * abs(factor),
        )


def matsubara_frequency(n: int, temperature: float) -> float:
    """n-th thermal Matsubara angular frequency 2 pi n k_B T / hbar."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if not temperature > 0:
        raise ValueError("temperature must be > 0")
    return 2.0 * math.pi * n * K_B * temperature / HBAR


def ideal_pressure(separation: float) -> float:
    """Pressure of a perfectly conducting cavity: -hbar c pi^2 / (240 d^4)."""
    if not separation > 0:
        raise ValueError("separation must be > 0")
    return -HBAR * C * math.pi**2 / (240.0 * separation**4)


def _round_trip_factor(p: np.ndarray, y: np.ndarray) -> np.ndarray:
    """y^2 p e^-y / (1 - p e^-y), with the denominator formed stably."""
    emy = np.exp(-y)
    den = (1.0 - p) - p * np.expm1(-y)
    return y * y * p * emy / den


def _zero_freq_integrand(separation, cav, pol):
    """Vectorized integrand of the n = 0 term as a function of y = 2 k d."""
    eps_l, mu_l, curv_l = static_limits(cav.left)
    eps_r, mu_r, curv_r = static_limits(cav.right)
    b = cav.right_thickness

    def f(rows, y):
        k = y / (2.0 * separation)
        rho_l = np.sqrt(k * k + curv_l / C**2)
        rho_r = np.sqrt(k * k + curv_r / C**2)
        if pol == TM:
            r_l = np.ones_like(k) if math.isinf(eps_l) else \
                (k * eps_l - rho_l) / (k * eps_l + rho_l)
            r_r = np.ones_like(k) if math.isinf(eps_r) else \
                (k * eps_r - rho_r) / (k * eps_r + rho_r)
        else:
            r_l = (k * mu_l - rho_l) / (k * mu_l + rho_l)
            r_r = (k * mu_r - rho_r) / (k * mu_r + rho_r)
        if b == math.inf:
            r_eff = r_r
        else:
            decay = np.exp(-2.0 * rho_r * b)
            r_eff = r_r * (1.0 - decay) / (1.0 - r_r * r_r * decay)
        return _round_trip_factor(r_l * r_eff, y)

    return f


def _zero_freq_term(separation, cav, pol, settings) -> tuple[float, float]:
    """Zero-frequency Matsubara term (weight 1/2 included) and its error."""
    pref = -K_B * cav.temperature / (16.0 * math.pi * separation**3)
    values, errors = integrate_rows(
        _zero_freq_integrand(separation, cav, pol),
        np.array([0.0]),
        span=settings.quad_span,
        rel_tol=max(0.1 * settings.rel_tol, 1e-13),
        abs_tol=0.01 * settings.abs_tol / abs(pref),
        max_refine=settings.quad_max_refine,
    )
    return pref * float(values[0]), abs(pref) * float(errors[0])


def _positive_block(separation, cav, n_start, count, settings):
    """Pressure terms for Matsubara indices n_start .. n_start+count-1.

    Returns per-index TE values, TM values and their quadrature errors,
    all already in Pa (weight 1 terms).
    """
    T = cav.temperature
    b = cav.right_thickness
    pref = -K_B * T / (8.0 * math.pi * separation**3)
    ns = np.arange(n_start, n_start + count)
    xis = 2.0 * math.pi * ns * K_B * T / HBAR

    eps_l = response_on_grid(cav.left.epsilon, xis)
    mu_l = response_on_grid(cav.left.mu, xis)
    eps_r = response_on_grid(cav.right.epsilon, xis)
    mu_r = response_on_grid(cav.right.mu, xis)

    # rows 0..count-1: TE; rows count..2count-1: TM
    xi_row = np.concatenate([xis, xis])
    resp_l = np.concatenate([mu_l, eps_l])
    resp_r = np.concatenate([mu_r, eps_r])
    # eps*mu - 1 enters rho_i = sqrt(rho_gap^2 + (eps mu - 1) xi^2/c^2)
    em_l = np.concatenate([eps_l * mu_l, eps_l * mu_l]) - 1.0
    em_r = np.concatenate([eps_r * mu_r, eps_r * mu_r]) - 1.0
    q_row = (xi_row / C) ** 2

    def f(rows, y):
        rho_m = y / (2.0 * separation)
        rho2 = rho_m * rho_m
        qr = q_row[rows, None]
        rho_l = np.sqrt(rho2 + em_l[rows, None] * qr)
        rho_r = np.sqrt(rho2 + em_r[rows, None] * qr)
        gl = rho_m * resp_l[rows, None]
        gr = rho_m * resp_r[rows, None]
        r_l = (gl - rho_l) / (gl + rho_l)
        r_r = (gr - rho_r) / (gr + rho_r)
        if b == math.inf:
            r_eff = r_r
        else:
            decay = np.exp(-2.0 * rho_r * b)
            r_eff = r_r * (1.0 - decay) / (1.0 - r_r * r_r * decay)
        return _round_trip_factor(r_l * r_eff, y)

    lower = 2.0 * xi_row * separation / C
    values, errors = integrate_rows(
        f,
        lower,
        span=settings.quad_span,
        rel_tol=max(0.1 * settings.rel_tol, 1e-13),
        abs_tol=0.01 * settings.abs_tol / abs(pref),
        max_refine=settings.quad_max_refine,
    )
    te = pref * values[:count]
    tm = pref * values[count:]
    te_err = abs(pref) * errors[:count]
    tm_err = abs(pref) * errors[count:]
    return te, tm, te_err, tm_err


def pressure_term(n: int, separation: float, cav: CavityConfig, pol: str,
                  settings: EngineSettings = DEFAULT_SETTINGS) -> float:
    """Single Matsubara pressure contribution for one polarization, in Pa.

    The n = 0 term carries its 1/2 weight here, uses the static reflection
    coefficients (rho collapses to k) and handles plasma/Drude metals by
    their limiting forms, so the returned values are directly the physical
    mode contributions.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if not separation > 0:
        raise ValueError("separation must be > 0")
    if pol not in POLARIZATIONS:
        raise ValueError(f"polarization must be 'TE' or 'TM', got {pol!r}")
    if n == 0:
        return _zero_freq_term(separation, cav, pol, settings)[0]
    te, tm, _, _ = _positive_block(separation, cav, n, 1, settings)
    return float(te[0] if pol == TE else tm[0])


def _geometric_tail(terms: list[float], fallback_ratio: float) -> float:
    """Tail estimate sum_{m>0} t_{N+m} from the last two computed terms."""
    if not terms or terms[-1] == 0.0:
        return 0.0
    last = terms[-1]
    if len(terms) < 2 or terms[-2] == 0.0:
        ratio = fallback_ratio
    else:
        ratio = last / terms[-2]
    if not 0.0 < ratio < 1.0:
        return 0.0
    ratio = min(ratio, 0.999)
    return last * ratio / (1.0 - ratio)


def total_pressure(separation: float, cav: CavityConfig,
                   settings: EngineSettings = DEFAULT_SETTINGS) -> PressureDecomposition:
    """Total Casimir pressure with its four-mode decomposition.

    Sums Matsubara terms in index order until three consecutive terms each
    contribute less than max(rel_tol * |partial sum|, abs_tol), then adds a
    geometric tail estimate per polarization.  Deterministic for fixed
    settings.

    Raises
    ------
    ConvergenceError
        If the truncation rule is not met within max_matsubara_terms; the
        partial decomposition is attached as ``partial``.
    """
    if not separation > 0:
        raise ValueError("separation must be > 0")
    te0, te0_err = _zero_freq_term(separation, cav, TE, settings)
    tm0, tm0_err = _zero_freq_term(separation, cav, TM, settings)

    te_terms: list[float] = []
    tm_terms: list[float] = []
    err_sum = te0_err + tm0_err
    partial = te0 + tm0
    streak = 0
    stopped = False
    n = 1
    block = 8
    while n <= settings.max_matsubara_terms and not stopped:
        count = min(block, settings.max_matsubara_terms - n + 1)
        te_v, tm_v, te_e, tm_e = _positive_block(separation, cav, n, count, settings)
        for j in range(count):
            te_terms.append(float(te_v[j]))
            tm_terms.append(float(tm_v[j]))
            err_sum += float(te_e[j]) + float(tm_e[j])
            partial += te_terms[-1] + tm_terms[-1]
            magnitude = abs(te_terms[-1]) + abs(tm_terms[-1])
            if magnitude < max(settings.rel_tol * abs(partial), settings.abs_tol):
                streak += 1
                if streak >= 3:
                    stopped = True
                    break
            else:
                streak = 0
        n += count
        block = min(block * 2, 512)

    n_used = len(te_terms) + 1  # including n = 0
    if not stopped:
        partial_dec = PressureDecomposition(
            partial, te0, tm0, sum(te_terms), sum(tm_terms), n_used, err_sum
        )
        raise ConvergenceError(
            f"Matsubara sum not converged after {len(te_terms)} terms "
            f"(partial total {partial:.6g} Pa)",
            partial=partial_dec,
            diagnostics={
                "n_terms": len(te_terms),
                "last_te": te_terms[-1] if te_terms else 0.0,
                "last_tm": tm_terms[-1] if tm_terms else 0.0,
            },
        )

    fallback = math.exp(-2.0 * matsubara_frequency(1, cav.temperature) * separation / C)
    te_tail = _geometric_tail(te_terms, fallback)
    tm_tail = _geometric_tail(tm_terms, fallback)
    te_pos = math.fsum(te_terms) + te_tail
    tm_pos = math.fsum(tm_terms) + tm_tail
    err_sum += 0.5 * (abs(te_tail) + abs(tm_tail))
    total = te0 + tm0 + te_pos + tm_pos
    return PressureDecomposition(total, te0, tm0, te_pos, tm_pos, n_used, err_sum)


def normalized_decomposition(separation: float, cav: CavityConfig,
                             settings: EngineSettings = DEFAULT_SETTINGS) -> PressureDecomposition:
    """Decomposition with every pressure divided by the ideal-cavity value.

    The ideal value is negative, so attractive contributions map to
    positive normalized numbers and repulsive ones to negative.
    """
    dec = total_pressure(separation, cav, settings)
    return dec.scaled(1.0 / ideal_pressure(separation))
