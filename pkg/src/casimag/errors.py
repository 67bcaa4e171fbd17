"""Exception types shared across the package."""


class CasimagError(Exception):
    """Base class for all package-specific errors."""


class ConfigurationError(CasimagError, ValueError):
    """Invalid model, cavity, or run configuration."""

    def __init__(self, message: str, field: str | None = None):
        self.field = field
        if field is not None:
            message = f"{field}: {message}"
        super().__init__(message)


class OpticalDataError(ConfigurationError):
    """Tabulated optical data could not be ingested."""


class ZeroFrequencyEvaluationError(CasimagError, ValueError):
    """A divergent model was evaluated at zero frequency.

    Plasma and Drude permittivities diverge as the imaginary frequency
    vanishes; the zero-frequency Matsubara term must go through the
    dedicated static reflection coefficients instead.
    """


class UnsupportedModelError(CasimagError, ValueError):
    """A response model outside the supported set was supplied."""


class ConvergenceError(CasimagError, RuntimeError):
    """A numerical procedure failed to reach its tolerance.

    The partial result (when meaningful) is attached as ``partial``.
    """

    def __init__(self, message: str, partial=None, diagnostics: dict | None = None):
        super().__init__(message)
        self.partial = partial
        self.diagnostics = diagnostics or {}


class QuadratureError(ConvergenceError):
    """Adaptive quadrature did not converge within the refinement budget."""


class NoTransitionError(CasimagError, RuntimeError):
    """The pressure does not change sign anywhere in the scanned range."""


class LocusRangeError(CasimagError, RuntimeError):
    """No zero-pressure permeability exists inside the search interval."""

    def __init__(self, message: str, pressure_lo: float, pressure_hi: float):
        super().__init__(
            f"{message} (pressure at interval ends: {pressure_lo:.6g} Pa, "
            f"{pressure_hi:.6g} Pa)"
        )
        self.pressure_lo = pressure_lo
        self.pressure_hi = pressure_hi
