"""Fresnel reflection coefficients on the imaginary frequency axis.

Half-space coefficients, the effective coefficient of a finite-thickness
slab, the dedicated static (zero Matsubara frequency) limiting forms, and
the effective-thickness quantity controlling thin-slab reflection.

Everything here is a pure function of real inputs; all z-wave-vectors are
imaginary-axis magnitudes, so no branch cuts arise.  The scalar formulas
accept numpy arrays transparently where noted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import C
from .errors import UnsupportedModelError
from .materials import Drude, Plasma, ResponseModel

TE = "TE"
TM = "TM"
POLARIZATIONS = (TE, TM)


def _check_pol(pol: str) -> None:
    if pol not in POLARIZATIONS:
        raise ValueError(f"polarization must be 'TE' or 'TM', got {pol!r}")


@dataclass(frozen=True)
class Kinematics:
    """Transverse wave-vector magnitude k (1/m) and frequency xi (rad/s)."""

    k: float
    xi: float

    def __post_init__(self):
        if self.k < 0 or self.xi < 0:
            raise ValueError("k and xi must be >= 0")


@dataclass(frozen=True)
class LayerOptics:
    """Response values and imaginary z-wave-vector of one medium."""

    epsilon: float
    mu: float
    rho: float

    @classmethod
    def from_kinematics(cls, kin: Kinematics, epsilon: float, mu: float) -> "LayerOptics":
        return cls(epsilon, mu, rho(kin, epsilon, mu))


def rho(kin: Kinematics, epsilon: float, mu: float) -> float:
    """Magnitude of the imaginary z-component of the wave-vector in a medium.

    rho = sqrt(k^2 + eps mu xi^2 / c^2); at xi = 0 this collapses to k.
    """
    return math.sqrt(kin.k**2 + epsilon * mu * (kin.xi / C) ** 2)


def vacuum_layer(kin: Kinematics) -> LayerOptics:
    """The gap medium: eps = mu = 1."""
    return LayerOptics(1.0, 1.0, rho(kin, 1.0, 1.0))


def fresnel_interface(rho_gap, rho_medium, response):
    """Reflection coefficient at a single interface seen from the gap.

    ``response`` is the medium's permittivity for TM and permeability for
    TE.  Accepts scalars or numpy arrays.
    """
    return (rho_gap * response - rho_medium) / (rho_gap * response + rho_medium)


def fresnel_halfspace(kin: Kinematics, medium: LayerOptics, gap: LayerOptics, pol: str) -> float:
    """Half-space Fresnel coefficient for polarization ``pol``.

    TM: (rho_gap eps - rho_medium)/(rho_gap eps + rho_medium);
    TE: same with mu.  The result lies in (-1, 1) and vanishes when the
    medium matches the gap.
    """
    _check_pol(pol)
    response = medium.epsilon if pol == TM else medium.mu
    return fresnel_interface(gap.rho, medium.rho, response)


def fresnel_left_zero_freq(k, model: ResponseModel, pol: str):
    """Static-limit reflection coefficient of a semi-infinite metal plate.

    For the plasma model the TE coefficient keeps a finite penetration
    scale, (k - sqrt(k^2 + omega_p^2/c^2)) / (k + sqrt(k^2 + omega_p^2/c^2)),
    while TM saturates at 1.  The Drude model loses the TE response
    entirely (returns 0) but keeps TM = 1.

    ``k`` may be a scalar or a numpy array.
    """
    _check_pol(pol)
    if isinstance(model, Plasma):
        if pol == TM:
            return np.ones_like(k) if isinstance(k, np.ndarray) else 1.0
        kappa = np.sqrt(k * k + (model.omega_p / C) ** 2)
        return (k - kappa) / (k + kappa)
    if isinstance(model, Drude):
        if pol == TM:
            return np.ones_like(k) if isinstance(k, np.ndarray) else 1.0
        return np.zeros_like(k) if isinstance(k, np.ndarray) else 0.0
    raise UnsupportedModelError(
        f"zero-frequency metal coefficients exist only for plasma/Drude "
        f"models, got {type(model).__name__}"
    )


def effective_reflection(r, rho_medium, thickness):
    """Effective reflection coefficient of a slab of finite thickness.

    r (1 - e^(-2 rho b)) / (1 - r^2 e^(-2 rho b)); equals the sum of the
    two-interface multiple-reflection geometric series.  ``thickness`` may
    be ``math.inf``, recovering the half-space coefficient exactly.
    Accepts arrays in ``r`` and ``rho_medium``.
    """
    if thickness == math.inf:
        return r
    decay = np.exp(-2.0 * rho_medium * thickness)
    return r * (1.0 - decay) / (1.0 - r * r * decay)


def effective_thickness(r0, thickness):
    """Optical-vs-physical thickness scale of a thin slab: 2 b r/(1 - r^2).

    For static coefficients of a strongly responding slab this approaches
    b eps(0)/2 (TM) or b mu(0)/2 (TE).
    """
    return 2.0 * thickness * r0 / (1.0 - r0 * r0)
