"""Analytic approximations to the static pressure contributions.

A chain of closed forms valid for a thin, strongly responding slab facing
a high-plasma-frequency metal: the metal's static TE reflection expanded
in ck/omega_p, the slab reflection resummed through its effective
thickness, and second-order Taylor plus [1/1] Pade approximants of the
static TE/TM pressures in beta = b_eff/d.  Combining the Pade forms with
the exact nonzero-frequency pressure yields a closed-form relation
between the static permittivity and the permeability that nulls the
total pressure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .constants import C, K_B
from .errors import ConfigurationError
from .reflection import TE, TM, effective_thickness

# Static TM coefficients: the metal reflects TM perfectly at zero
# frequency, so the TM series carries no alpha correction.
_TM_C1 = 3.0 / 8.0
_TM_C2 = 99.0 / 128.0


@dataclass(frozen=True)
class ExpansionContext:
    """Dimensionless inputs of the static-pressure approximants.

    alpha : c/(d omega_p), the metal's TE softness at the separation scale.
    beta_te, beta_tm : effective slab thickness over separation, per
        polarization.
    delta : -2 pi d^3 P(xi>0) / (k_B T), the exact nonzero-frequency
        pressure folded into the same dimensionless scale (positive for
        attraction).
    """

    alpha: float
    beta_te: float
    beta_tm: float
    delta: float

    def __post_init__(self):
        if self.alpha < 0:
            raise ValueError("alpha must be >= 0")
        if self.beta_te < 0 or self.beta_tm < 0:
            raise ValueError("beta values must be >= 0")


def make_context(separation: float, thickness: float, temperature: float,
                 eps0: float, mu0: float, omega_p: float,
                 p_nonzero: float) -> ExpansionContext:
    """Build an ExpansionContext from physical cavity parameters.

    The beta coefficients use the exact effective thickness of the static
    slab coefficients (mu0-1)/(mu0+1) and (eps0-1)/(eps0+1).
    """
    r_te = (mu0 - 1.0) / (mu0 + 1.0)
    r_tm = (eps0 - 1.0) / (eps0 + 1.0)
    return ExpansionContext(
        alpha=C / (separation * omega_p),
        beta_te=effective_thickness(r_te, thickness) / separation,
        beta_tm=effective_thickness(r_tm, thickness) / separation,
        delta=-2.0 * math.pi * separation**3 * p_nonzero / (K_B * temperature),
    )


def gamma_coefficients(alpha: float) -> tuple[float, float]:
    """Series coefficients of the static TE pressure in beta.

    gamma1 = (3/8)(1 - 4 alpha + 10 alpha^2),
    gamma2 = (99/128)(1 - (495/99) alpha + 15 alpha^2); both positive for
    the separations of interest (alpha well below 1).
    """
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    gamma1 = _TM_C1 * (1.0 - 4.0 * alpha + 10.0 * alpha**2)
    gamma2 = _TM_C2 * (1.0 - (495.0 / 99.0) * alpha + 15.0 * alpha**2)
    return gamma1, gamma2


def _prefactor(separation: float, temperature: float) -> float:
    return K_B * temperature / (2.0 * math.pi * separation**3)


def taylor_pressure_zero_freq(ctx: ExpansionContext, separation: float,
                              temperature: float, pol: str) -> float:
    """Second-order Taylor approximant of a static mode pressure, in Pa.

    TE: +(k_B T / 2 pi d^3) (gamma1 beta - gamma2 beta^2);
    TM: -(k_B T / 2 pi d^3) ((3/8) beta - (99/128) beta^2).
    Accurate only for beta well below 1.
    """
    pref = _prefactor(separation, temperature)
    if pol == TE:
        g1, g2 = gamma_coefficients(ctx.alpha)
        return pref * (g1 * ctx.beta_te - g2 * ctx.beta_te**2)
    if pol == TM:
        return -pref * (_TM_C1 * ctx.beta_tm - _TM_C2 * ctx.beta_tm**2)
    raise ValueError(f"polarization must be 'TE' or 'TM', got {pol!r}")


def pade_pressure_zero_freq(ctx: ExpansionContext, separation: float,
                            temperature: float, pol: str) -> float:
    """[1/1] Pade approximant of a static mode pressure, in Pa.

    TE: +(k_B T / 2 pi d^3) gamma1^2 beta / (gamma2 beta + gamma1);
    TM: -(k_B T / 2 pi d^3) 6 beta / (33 beta + 16).
    Shares the Taylor series through second order but stays accurate for
    beta of order one.
    """
    pref = _prefactor(separation, temperature)
    if pol == TE:
        g1, g2 = gamma_coefficients(ctx.alpha)
        return pref * g1**2 * ctx.beta_te / (g2 * ctx.beta_te + g1)
    if pol == TM:
        return -pref * 6.0 * ctx.beta_tm / (33.0 * ctx.beta_tm + 16.0)
    raise ValueError(f"polarization must be 'TE' or 'TM', got {pol!r}")


def expanded_metal_te_reflection(k: float, omega_p: float) -> float:
    """Static TE metal reflection expanded to second order in ck/omega_p."""
    t = C * k / omega_p
    return -1.0 + 2.0 * t - 2.0 * t * t


def thin_slab_reflection(k: float, b_eff: float) -> float:
    """Leading-order static slab reflection for a thin, strong reflector:
    k b_eff / (k b_eff + 1)."""
    return k * b_eff / (k * b_eff + 1.0)


def analytic_mu_for_eps(eps0: float, separation: float, thickness: float,
                        temperature: float, omega_p: float,
                        p_nonzero: float) -> float:
    """Closed-form static permeability nulling the pressure at ``separation``.

    mu0 = (2d/b) (A eps0 + B) / (C eps0 + D) with
    A = (6 + 33 delta) gamma1 b/(2d), B = 16 gamma1 delta,
    C = [33 gamma1^2 - (6 + 33 delta) gamma2] b/(2d),
    D = 16 (gamma1^2 - gamma2 delta),
    derived from the Pade forms with the large-contrast effective
    thicknesses b eps0/2 and b mu0/2 and the exact nonzero-frequency
    pressure ``p_nonzero``.
    """
    alpha = C / (separation * omega_p)
    g1, g2 = gamma_coefficients(alpha)
    delta = -2.0 * math.pi * separation**3 * p_nonzero / (K_B * temperature)
    half_ratio = thickness / (2.0 * separation)
    a_c = (6.0 + 33.0 * delta) * g1 * half_ratio
    b_c = 16.0 * g1 * delta
    c_c = (33.0 * g1**2 - (6.0 + 33.0 * delta) * g2) * half_ratio
    d_c = 16.0 * (g1**2 - g2 * delta)
    den = c_c * eps0 + d_c
    num = a_c * eps0 + b_c
    if den == 0:
        raise ConfigurationError(
            "singular permeability relation: C eps0 + D vanishes for these "
            "parameters"
        )
    return num / den / half_ratio
