"""Casimir pressures between a metal plate and a thin magnetodielectric plate.

Core entry points:

- :mod:`casimag.materials` -- response models on the imaginary axis
- :mod:`casimag.lifshitz` -- the pressure engine and mode decomposition
- :mod:`casimag.analysis` -- repulsion metrics, locus solver, sweeps
- :mod:`casimag.approx` -- analytic static-pressure approximants
- :mod:`casimag.cli` -- the ``casimag`` command-line tool
"""

from .analysis import (
    LocusPoint,
    RepulsionMetrics,
    find_max_repulsion,
    find_transition,
    solve_locus,
    sweep,
)
from .errors import (
    CasimagError,
    ConfigurationError,
    ConvergenceError,
    LocusRangeError,
    NoTransitionError,
    OpticalDataError,
    QuadratureError,
    UnsupportedModelError,
    ZeroFrequencyEvaluationError,
)
from .lifshitz import (
    DEFAULT_SETTINGS,
    CavityConfig,
    EngineSettings,
    PressureDecomposition,
    ideal_pressure,
    matsubara_frequency,
    normalized_decomposition,
    pressure_term,
    total_pressure,
)
from .materials import (
    Constant,
    Drude,
    Lorentz,
    Material,
    Oscillator,
    Plasma,
    QuasistaticMagnetic,
    Tabulated,
    default_yig_like,
    eval_response,
    gold_drude,
    gold_plasma,
    kk_to_imaginary_axis,
    load_optical_data,
    rescale_to_eps0,
    with_mu0,
)
from .reflection import (
    TE,
    TM,
    Kinematics,
    LayerOptics,
    effective_reflection,
    effective_thickness,
    fresnel_halfspace,
    fresnel_left_zero_freq,
    rho,
)

__version__ = "0.1.0"
