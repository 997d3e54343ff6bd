"""Unit system eV / Angstrom / u / fs, derived from CODATA 2018 constants."""

ELEMENTARY_CHARGE = 1.602176634e-19  # J per eV
ATOMIC_MASS = 1.66053906660e-27  # kg per u

# Boltzmann constant, eV/K
K_B = 8.617333262e-5

# 1 eV/(Angstrom u) expressed in Angstrom/fs^2 (~9.648533e-3)
ACCEL = ELEMENTARY_CHARGE / (1e-10 * ATOMIC_MASS) * 1e10 / 1e30

ARGON_MASS = 39.948  # u
ARGON_EPSILON_KELVIN = 120.0
ARGON_R0 = 3.4  # Angstrom
