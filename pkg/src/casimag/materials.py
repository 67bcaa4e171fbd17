"""Dielectric and magnetic response models on the imaginary frequency axis.

Every model evaluates to a real number >= 1 at any imaginary angular
frequency xi >= 0 and is non-increasing in xi, as required for causal
response functions expressed through the Kramers-Kronig transform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Union

import numpy as np

from .constants import GAMMA_GOLD, OMEGA_P_GOLD
from .errors import (
    ConfigurationError,
    OpticalDataError,
    ZeroFrequencyEvaluationError,
)


@dataclass(frozen=True)
class Plasma:
    """Dissipationless metal: eps(i xi) = 1 + (omega_p/xi)^2."""

    omega_p: float

    def __post_init__(self):
        if not self.omega_p > 0:
            raise ConfigurationError("plasma frequency must be positive", "omega_p")


@dataclass(frozen=True)
class Drude:
    """Dissipative metal: eps(i xi) = 1 + omega_p^2 / (xi (xi + gamma))."""

    omega_p: float
    gamma: float = GAMMA_GOLD

    def __post_init__(self):
        if not self.omega_p > 0:
            raise ConfigurationError("plasma frequency must be positive", "omega_p")
        if not self.gamma > 0:
            raise ConfigurationError("relaxation rate must be positive", "gamma")


@dataclass(frozen=True)
class Oscillator:
    """One undamped resonance: contributes strength / (1 + (xi/omega)^2)."""

    strength: float
    omega: float

    def __post_init__(self):
        if self.strength < 0:
            raise ConfigurationError("oscillator strength must be >= 0", "strength")
        if not self.omega > 0:
            raise ConfigurationError("resonance frequency must be positive", "omega")


@dataclass(frozen=True)
class Lorentz:
    """Sum of undamped oscillators: eps(i xi) = 1 + sum_j C_j/(1+(xi/w_j)^2)."""

    oscillators: tuple[Oscillator, ...]


@dataclass(frozen=True)
class Tabulated:
    """Absorption data Im eps(omega) transformed to the imaginary axis.

    Outside the sampled grid the absorption is extrapolated as a power law
    omega**a with the configured exponents.  Integrability of the
    Kramers-Kronig integrand requires a > 0 below and a < -1 above.
    """

    omegas: tuple[float, ...]
    im_eps: tuple[float, ...]
    low_tail_exponent: float = 1.0
    high_tail_exponent: float = -3.0

    def __post_init__(self):
        if len(self.omegas) == 0:
            raise OpticalDataError("no samples supplied")
        if len(self.omegas) != len(self.im_eps):
            raise OpticalDataError("omega and Im eps lists differ in length")
        prev = 0.0
        for i, (w, v) in enumerate(zip(self.omegas, self.im_eps)):
            if not w > 0:
                raise OpticalDataError(f"row {i}: omega must be positive, got {w!r}")
            if w <= prev:
                raise OpticalDataError(
                    f"row {i}: omega grid must be strictly ascending "
                    f"({w!r} after {prev!r})"
                )
            if v < 0:
                raise OpticalDataError(f"row {i}: Im eps must be >= 0, got {v!r}")
            prev = w
        if not self.low_tail_exponent > 0:
            raise OpticalDataError("low_tail_exponent must be > 0")
        if not self.high_tail_exponent < -1:
            raise OpticalDataError("high_tail_exponent must be < -1")


@dataclass(frozen=True)
class Constant:
    """Nondispersive response with a fixed value >= 1."""

    value: float

    def __post_init__(self):
        if self.value < 1:
            raise ConfigurationError("constant response must be >= 1", "value")


@dataclass(frozen=True)
class QuasistaticMagnetic:
    """Magnetic response frozen at its static value: mu(0) = mu0, mu(xi>0) = 1.

    Ferromagnetic permeabilities relax far below the first thermal Matsubara
    frequency at laboratory temperatures, so only the static term sees them.
    """

    mu0: float

    def __post_init__(self):
        if self.mu0 < 1:
            raise ConfigurationError("static permeability must be >= 1", "mu0")


ResponseModel = Union[Plasma, Drude, Lorentz, Tabulated, Constant, QuasistaticMagnetic]

VACUUM = Constant(1.0)


@dataclass(frozen=True)
class Material:
    """Permittivity/permeability pair describing one plate."""

    epsilon: ResponseModel
    mu: ResponseModel


def eval_response(model: ResponseModel, xi: float) -> float:
    """Evaluate a response model at imaginary angular frequency xi >= 0.

    Parameters
    ----------
    model : ResponseModel
        Any of the model variants defined in this module.
    xi : float
        Imaginary angular frequency in rad/s, >= 0.

    Returns
    -------
    float
        eps(i xi) or mu(i xi), always >= 1.

    Raises
    ------
    ZeroFrequencyEvaluationError
        For plasma/Drude models at xi = 0; those diverge and the static
        Matsubara term must use the dedicated zero-frequency reflection
        coefficients instead.
    """
    if xi < 0:
        raise ValueError(f"xi must be >= 0, got {xi!r}")
    if isinstance(model, Plasma):
        if xi == 0:
            raise ZeroFrequencyEvaluationError(
                "plasma permittivity diverges at xi=0; use the zero-frequency "
                "reflection coefficients"
            )
        return 1.0 + (model.omega_p / xi) ** 2
    if isinstance(model, Drude):
        if xi == 0:
            raise ZeroFrequencyEvaluationError(
                "Drude permittivity diverges at xi=0; use the zero-frequency "
                "reflection coefficients"
            )
        return 1.0 + model.omega_p**2 / (xi * (xi + model.gamma))
    if isinstance(model, Lorentz):
        return 1.0 + sum(
            osc.strength / (1.0 + (xi / osc.omega) ** 2) for osc in model.oscillators
        )
    if isinstance(model, Constant):
        return model.value
    if isinstance(model, QuasistaticMagnetic):
        return model.mu0 if xi == 0 else 1.0
    if isinstance(model, Tabulated):
        return kk_to_imaginary_axis(model, xi)
    raise ConfigurationError(f"unknown response model {type(model).__name__}")


def response_on_grid(model: ResponseModel, xis: np.ndarray) -> np.ndarray:
    """Vectorized ``eval_response`` over an array of strictly positive xi."""
    xis = np.asarray(xis, dtype=float)
    if isinstance(model, Plasma):
        return 1.0 + (model.omega_p / xis) ** 2
    if isinstance(model, Drude):
        return 1.0 + model.omega_p**2 / (xis * (xis + model.gamma))
    if isinstance(model, Lorentz):
        out = np.ones_like(xis)
        for osc in model.oscillators:
            out += osc.strength / (1.0 + (xis / osc.omega) ** 2)
        return out
    if isinstance(model, Constant):
        return np.full_like(xis, model.value)
    if isinstance(model, QuasistaticMagnetic):
        return np.ones_like(xis)
    if isinstance(model, Tabulated):
        return np.array([kk_to_imaginary_axis(model, float(x)) for x in xis])
    raise ConfigurationError(f"unknown response model {type(model).__name__}")


# Dense grid resolution for the Kramers-Kronig quadrature and span of the
# power-law tail extensions, in decades.
_KK_POINTS_PER_DECADE = 160
_KK_TAIL_DECADES = 3.0


@lru_cache(maxsize=64)
def _kk_dense_grid(model: Tabulated) -> tuple[np.ndarray, np.ndarray]:
    """Log-spaced absorption grid spanning the samples plus both tails."""
    w = np.array(model.omegas)
    v = np.array(model.im_eps)
    lo = math.log10(w[0]) - _KK_TAIL_DECADES
    hi = math.log10(w[-1]) + _KK_TAIL_DECADES
    n = max(1500, int((hi - lo) * _KK_POINTS_PER_DECADE))
    grid = np.logspace(lo, hi, n)
    dense = np.interp(np.log(grid), np.log(w), v)
    below = grid < w[0]
    above = grid > w[-1]
    dense[below] = v[0] * (grid[below] / w[0]) ** model.low_tail_exponent
    dense[above] = v[-1] * (grid[above] / w[-1]) ** model.high_tail_exponent
    return grid, dense


@lru_cache(maxsize=100_000)
def _kk_cached(model: Tabulated, xi: float) -> float:
    grid, dense = _kk_dense_grid(model)
    integrand = grid * dense / (grid**2 + xi**2)
    # integrate in log omega: f domega = f * omega dln(omega)
    value = np.trapezoid(integrand * grid, np.log(grid))
    return 1.0 + 2.0 / math.pi * float(value)


def kk_to_imaginary_axis(model: Tabulated, xi: float) -> float:
    """Kramers-Kronig transform of tabulated absorption data.

    Evaluates 1 + (2/pi) * integral_0^inf omega Im eps(omega) /
    (omega^2 + xi^2) domega with the absorption interpolated linearly in
    log omega between samples and extrapolated as power laws beyond them.

    Parameters
    ----------
    model : Tabulated
        Sorted absorption samples with tail exponents.
    xi : float
        Imaginary angular frequency in rad/s, >= 0.

    Returns
    -------
    float
        eps(i xi) >= 1.
    """
    if xi < 0:
        raise ValueError(f"xi must be >= 0, got {xi!r}")
    return _kk_cached(model, float(xi))


def lorentz(pairs) -> Lorentz:
    """Build a Lorentz model from (strength, resonance rad/s) pairs."""
    return Lorentz(tuple(Oscillator(float(c), float(w)) for c, w in pairs))


# Stand-in for the garnet-type magnetodielectric used throughout: an
# infrared phonon-like and an ultraviolet electronic-like resonance with
# strengths summing to 3.02 so that eps(0) = 4.02, plus a quasistatic
# permeability of 160.  Most of the strength sits in the electronic
# resonance so that eps(i xi) stays near its static value across the first
# thermal Matsubara frequencies, as it does for garnet absorption spectra.
YIG_LIKE_OSCILLATORS = ((0.2, 1.0e14), (2.82, 7.5e15))
YIG_LIKE_MU0 = 160.0


def default_yig_like() -> Material:
    """Default magnetodielectric plate: eps(0) = 4.02, mu(0) = 160."""
    return Material(
        epsilon=lorentz(YIG_LIKE_OSCILLATORS),
        mu=QuasistaticMagnetic(YIG_LIKE_MU0),
    )


def gold_plasma(omega_p: float = OMEGA_P_GOLD) -> Material:
    """Semi-infinite nonmagnetic metal described by the plasma model."""
    return Material(epsilon=Plasma(omega_p), mu=VACUUM)


def gold_drude(omega_p: float = OMEGA_P_GOLD, gamma: float = GAMMA_GOLD) -> Material:
    """Semi-infinite nonmagnetic metal described by the Drude model."""
    return Material(epsilon=Drude(omega_p, gamma), mu=VACUUM)


def with_mu0(material: Material, mu0: float) -> Material:
    """Replace the quasistatic permeability value of a material."""
    if not isinstance(material.mu, QuasistaticMagnetic):
        raise ConfigurationError(
            "material permeability is not quasistatic; cannot override mu0"
        )
    return Material(epsilon=material.epsilon, mu=QuasistaticMagnetic(float(mu0)))


def rescale_to_eps0(model: Lorentz, eps0: float) -> Lorentz:
    """Scale all oscillator strengths by one factor so that eps(0) = eps0.

    Resonance positions are preserved; eps0 = 1 zeroes every strength.
    """
    if not isinstance(model, Lorentz):
        raise ConfigurationError("only Lorentz permittivities can be rescaled")
    if eps0 < 1:
        raise ConfigurationError("target eps(0) must be >= 1", "eps0")
    total = sum(osc.strength for osc in model.oscillators)
    if total == 0:
        raise ConfigurationError("template has zero total oscillator strength")
    factor = (eps0 - 1.0) / total
    return Lorentz(
        tuple(Oscillator(osc.strength * factor, osc.omega) for osc in model.oscillators)
    )


def static_limits(material: Material) -> tuple[float, float, float]:
    """Zero-frequency behavior of a material: (eps0, mu0, curvature).

    Returns eps(0) (``math.inf`` for plasma/Drude), mu(0), and the limit of
    eps(xi) mu(xi) xi^2 as xi -> 0, which is nonzero only for the plasma
    model and sets the static penetration scale of the metal.
    """
    mu0 = eval_response(material.mu, 0.0)
    eps = material.epsilon
    if isinstance(eps, Plasma):
        return math.inf, mu0, eps.omega_p**2 * mu0
    if isinstance(eps, Drude):
        return math.inf, mu0, 0.0
    return eval_response(eps, 0.0), mu0, 0.0


def load_optical_data(path) -> Tabulated:
    """Read absorption data from a text file into a Tabulated model.

    Format: UTF-8 text; ``#`` starts a comment; optional header lines
    ``low_tail_exponent = <float>`` / ``high_tail_exponent = <float>``;
    then rows ``omega_rad_per_s, im_eps`` in strictly ascending omega.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise OpticalDataError(f"cannot read {path}: {exc}") from exc
    kwargs = {}
    omegas: list[float] = []
    values: list[float] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" in line:
            key, _, val = line.partition("=")
            key = key.strip()
            if key not in ("low_tail_exponent", "high_tail_exponent"):
                raise OpticalDataError(f"line {lineno}: unknown header {key!r}")
            try:
                kwargs[key] = float(val)
            except ValueError as exc:
                raise OpticalDataError(
                    f"line {lineno}: bad value for {key}: {val.strip()!r}"
                ) from exc
            continue
        parts = [p for p in line.replace(",", " ").split() if p]
        if len(parts) != 2:
            raise OpticalDataError(
                f"line {lineno}: expected 'omega, im_eps', got {raw.strip()!r}"
            )
        try:
            w, v = float(parts[0]), float(parts[1])
        except ValueError as exc:
            raise OpticalDataError(f"line {lineno}: non-numeric row {raw.strip()!r}") from exc
        if omegas and w <= omegas[-1]:
            raise OpticalDataError(
                f"line {lineno}: omega {w!r} is not above the previous "
                f"sample {omegas[-1]!r}; grid must be strictly ascending"
            )
        omegas.append(w)
        values.append(v)
    if not omegas:
        raise OpticalDataError(f"{path} contains no data rows")
    return Tabulated(tuple(omegas), tuple(values), **kwargs)
