"""Physical constants and unit conversions.

All frequencies inside the package are angular frequencies in rad/s.
Constants are pinned to the 2019 SI exact values so that results are
reproducible bit-for-bit across platforms and library versions.
"""

HBAR = 1.054571817e-34  # reduced Planck constant, J s
K_B = 1.380649e-23      # Boltzmann constant, J/K
C = 299792458.0         # speed of light in vacuum, m/s

# Angular frequency of a photon with 1 eV energy, rad/s.
EV_TO_RAD_S = 1.519267e15

# Gold plasma frequency (9.0 eV) and a common literature Drude relaxation
# rate (0.035 eV), both as angular frequencies.
OMEGA_P_GOLD = 9.0 * EV_TO_RAD_S
GAMMA_GOLD = 0.035 * EV_TO_RAD_S


def ev_to_rad_s(energy_ev: float) -> float:
    """Convert a photon energy in eV to an angular frequency in rad/s."""
    return energy_ev * EV_TO_RAD_S
