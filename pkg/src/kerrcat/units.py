"""Unit conventions used throughout the package.

Configs quote every circuit energy as E/h in MHz (the convention of the
source literature).  Internally all Hamiltonian coefficients are angular
frequencies in rad/us (omega = 2*pi*f, f in MHz == 1/us), and times are
reported in us.

Rates follow the documented convention: a configured "gamma/h = 8 kHz"
becomes a plain Lindblad rate 8e3 s^-1 = 8e-3 us^-1 with *no* factor of
2*pi.  This is what reproduces the tens-of-milliseconds single-photon
plateau T = 1/(gamma * n_th).
"""

from __future__ import annotations

import math

import scipy.constants as _const

TWO_PI = 2.0 * math.pi

HBAR = _const.hbar  # J s
K_B = _const.k  # J / K


def mhz_to_angular(f_mhz: float) -> float:
    """E/h in MHz -> angular frequency in rad/us."""
    return TWO_PI * f_mhz


def angular_to_mhz(omega: float) -> float:
    """Angular frequency in rad/us -> E/h in MHz."""
    return omega / TWO_PI


def khz_rate_to_per_us(f_khz: float) -> float:
    """A rate quoted as f/h in kHz -> plain rate in us^-1 (no 2*pi)."""
    return f_khz * 1e-3


def bose_occupation(omega: float, temperature_k: float) -> float:
    """Bose-Einstein occupation n(omega) = 1 / (exp(hbar*omega/kB*T) - 1).

    ``omega`` in rad/us, ``temperature_k`` in kelvin.  Raises ValueError for
    nonpositive arguments (the distribution is not defined there).
    """
    if omega <= 0.0:
        raise ValueError(f"bose_occupation needs omega > 0, got {omega}")
    if temperature_k <= 0.0:
        raise ValueError(f"bose_occupation needs T > 0, got {temperature_k}")
    x = HBAR * (omega * 1e6) / (K_B * temperature_k)
    if x > 40.0:  # 1/(e^x - 1) ~ e^-x, and expm1 overflows past ~709
        return math.exp(-x) if x < 745.0 else 0.0
    return 1.0 / math.expm1(x)
