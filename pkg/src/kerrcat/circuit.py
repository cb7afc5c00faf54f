"""Circuit parameters -> static effective Hamiltonian coefficients.

Maps physical STS / single-SQUID circuit descriptions (per-junction
energies quoted as E/h in MHz, modulation depth, junction counts) to the
coefficients of the static effective Kerr-cat Hamiltonian and the drive
coefficients G1, G1~, G2, G3, G4 that feed the dissipator catalogs.

Conventions
-----------
* Configs specify *per-junction* Josephson energies plus (M, N); the
  effective series energies are derived: E_J2 -> E_J2/N (transmon branch,
  N junctions total), E_J_sigma -> E_J_sigma/M (M STS in series).
* All returned coefficients are angular frequencies in rad/us.
* ``omega_d = None`` asks for the self-consistent resonant drive frequency
  (the one that makes the effective detuning hit its target); a number
  pins it (the simulation default is 2*pi*12 GHz).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from scipy.special import jv

from .errors import NotATransmonError, TopologyError
from .units import mhz_to_angular

STS = "STS"
SQUID = "SQUID"


@dataclass(frozen=True)
class CircuitParams:
    """Physical circuit description.  Energies are E/h in MHz."""

    E_J1: float
    E_J2: float
    E_J3: float
    E_C: float
    delta_phi: float
    omega_d: float | None = None  # rad/us; None -> resonance-solved
    M: int = 1
    N: int = 1
    topology: str = STS

    def __post_init__(self):
        if min(self.E_J1, self.E_J2, self.E_J3, self.E_C) <= 0:
            raise TopologyError("all junction/charging energies must be > 0")
        if not 0.0 <= self.delta_phi < math.pi / 2:
            raise TopologyError(f"modulation depth {self.delta_phi} outside [0, pi/2)")
        if self.omega_d is not None and self.omega_d <= 0:
            raise TopologyError("omega_d must be > 0")
        if self.M < 1 or self.N < self.M:
            raise TopologyError(f"need N >= M >= 1, got M={self.M}, N={self.N}")
        if self.N % self.M != 0:
            raise TopologyError(f"N = {self.N} must be divisible by M = {self.M}")
        if self.topology not in (STS, SQUID):
            raise TopologyError(f"unknown topology {self.topology!r}")
        if self.topology == SQUID and (self.M != 1 or self.N != 1):
            raise TopologyError("a single SQUID has no junction array to dilute with")
        if abs(self.E_J_delta) > self.E_J_sigma:
            raise TopologyError("|E_J_delta| must not exceed E_J_sigma")

    @property
    def E_J_sigma(self) -> float:
        return 0.5 * (self.E_J1 + self.E_J3)

    @property
    def E_J_delta(self) -> float:
        return 0.5 * (self.E_J1 - self.E_J3)

    @staticmethod
    def symmetric(E_J: float, E_C: float, delta_phi: float, **kw) -> "CircuitParams":
        """All three junctions at the same per-junction energy."""
        return CircuitParams(E_J, E_J, E_J, E_C, delta_phi, **kw)


@dataclass(frozen=True)
class EffectiveParams:
    """Static effective Hamiltonian and drive coefficients, rad/us."""

    Delta: float
    eps2: float
    K: float
    Lambda: float
    Theta: float
    eps_c: float
    phi_zps: float
    G1: float
    G1t: float
    G2: float
    G3: float
    G4: float
    delta_ext: float
    omega_d: float
    topology: str = STS


def _sts_pieces(c: CircuitParams):
    """Diluted angular-frequency building blocks for the STS."""
    e_c = mhz_to_angular(c.E_C)
    e_j2 = mhz_to_angular(c.E_J2) / c.N  # effective transmon-branch energy
    e_sig = mhz_to_angular(c.E_J_sigma) / c.M
    e_del = mhz_to_angular(c.E_J_delta) / c.M
    if e_c >= e_j2:
        raise NotATransmonError(
            f"E_C = {c.E_C} MHz >= effective E_J2 = {c.E_J2 / c.N} MHz: not a transmon"
        )
    phi_zps = (2.0 * e_c / e_j2) ** 0.25
    eps_c = math.sqrt(8.0 * e_c * e_j2)
    K = e_c / (2.0 * c.N**2)
    dphi = c.delta_phi
    G2 = dphi * e_sig * phi_zps**2 / 2.0
    G4 = -dphi * e_sig * phi_zps**4 / (24.0 * c.M**2)
    G1 = -2.0 * e_del * phi_zps * (1.0 - dphi**2 / 4.0)
    G1t = e_del * phi_zps * dphi**2 / 4.0
    G3 = e_del * phi_zps**3 / (3.0 * c.M**2)
    return e_c, eps_c, phi_zps, K, G1, G1t, G2, G3, G4


def _sts_delta(eps_c, K, G1, G2, G3, omega_d, delta_ext):
    return eps_c - omega_d / 2.0 - 2.0 * K - 2.0 * G2**2 / omega_d - 24.0 * G1 * G3 / omega_d + delta_ext


def resolve_drive_frequency(c: CircuitParams, target_delta: float = 0.0, delta_ext: float = 0.0) -> float:
    """Drive frequency that places the effective detuning at ``target_delta``.

    Solves omega_d/2 = eps_c - 2K - 2 G2^2/omega_d - 24 G1 G3/omega_d
    - target + delta_ext by fixed-point iteration (the correction terms are
    tiny against eps_c, so this converges in a few steps).
    """
    if c.topology == SQUID:
        p = squid_effective_params(replace(c, omega_d=1.0), delta_ext=delta_ext)
        # Delta(omega) = eps_c - omega/2 - 2K + drive_corr(omega) + delta_ext
        drive = p.Delta - (p.eps_c - 0.5 - 2.0 * p.K + delta_ext)  # correction at omega=1
        base = p.eps_c - 2.0 * p.K + delta_ext - target_delta
        omega = 2.0 * base
        for _ in range(60):
            new = 2.0 * (base + drive / omega)
            if abs(new - omega) < 1e-12 * abs(new):
                return new
            omega = new
        return omega
    _, eps_c, _, K, G1, _, G2, G3, _ = _sts_pieces(c)
    base = eps_c - 2.0 * K + delta_ext - target_delta
    omega = 2.0 * base
    for _ in range(60):
        new = 2.0 * (base - (2.0 * G2**2 + 24.0 * G1 * G3) / omega)
        if abs(new - omega) < 1e-12 * abs(new):
            return new
        omega = new
    return omega


def sts_effective_params(c: CircuitParams, delta_ext: float = 0.0) -> EffectiveParams:
    """Effective Hamiltonian coefficients for the STS (first order in the
    modulation depth):

        eps2   = G2 + 6 G4
        Lambda = 4 G4
        Delta  = eps_c - omega_d/2 - 2K - 2 G2^2/omega_d - 24 G1 G3/omega_d + delta_ext
    """
    if c.topology != STS:
        raise TopologyError(f"sts_effective_params needs an STS circuit, got {c.topology}")
    _, eps_c, phi_zps, K, G1, G1t, G2, G3, G4 = _sts_pieces(c)
    omega_d = c.omega_d if c.omega_d is not None else resolve_drive_frequency(c, 0.0, delta_ext)
    return EffectiveParams(
        Delta=_sts_delta(eps_c, K, G1, G2, G3, omega_d, delta_ext),
        eps2=G2 + 6.0 * G4,
        K=K,
        Lambda=4.0 * G4,
        Theta=0.0,
        eps_c=eps_c,
        phi_zps=phi_zps,
        G1=G1,
        G1t=G1t,
        G2=G2,
        G3=G3,
        G4=G4,
        delta_ext=delta_ext,
        omega_d=omega_d,
        topology=STS,
    )


def squid_effective_params(c: CircuitParams, delta_ext: float = 0.0) -> EffectiveParams:
    """Effective coefficients for a flux-pumped single SQUID biased at pi/4.

    The SQUID sees the effective potential sqrt(2) E_J_sigma cos(phi), so
    its zero-point spread and oscillator frequency are built from
    E_eff = sqrt(2) E_J_sigma.  Leading order this gives K~ = E_C/2 = K and
    eps2~ = -eps2/sqrt(2) at equal parameters.
    """
    if c.topology != SQUID:
        raise TopologyError(f"squid_effective_params needs a SQUID circuit, got {c.topology}")
    e_c = mhz_to_angular(c.E_C)
    e_sig = mhz_to_angular(c.E_J_sigma)
    e_eff = math.sqrt(2.0) * e_sig
    if e_c >= e_eff:
        raise NotATransmonError("E_C >= sqrt(2) E_J_sigma: SQUID is not a transmon at pi/4")
    phi_zps = (2.0 * e_c / e_eff) ** 0.25
    eps_c = math.sqrt(8.0 * e_c * e_eff)
    K = e_c / 2.0
    dphi = c.delta_phi
    omega_d = c.omega_d if c.omega_d is not None else resolve_drive_frequency(c, 0.0, delta_ext)
    eps2 = -(dphi / (2.0 * math.sqrt(2.0))) * (math.sqrt(2.0 * e_c * e_sig) - e_c) \
        + dphi**3 * e_c * e_sig / (4.0 * omega_d)
    Lambda = math.sqrt(2.0) * dphi * e_sig * phi_zps**4 / 12.0
    Theta = math.sqrt(2.0) * dphi**2 * e_sig * phi_zps**4 / 192.0
    drive_detuning = (dphi**2 * e_c * e_sig / omega_d) * (-1.0 + dphi**2 / 12.0)
    Delta = eps_c - omega_d / 2.0 - 2.0 * K + drive_detuning + delta_ext
    # drive quadratic coefficient; the master-equation mixing ratio is 2 G2 / omega_d
    G2 = dphi * eps_c / 8.0
    return EffectiveParams(
        Delta=Delta,
        eps2=eps2,
        K=K,
        Lambda=Lambda,
        Theta=Theta,
        eps_c=eps_c,
        phi_zps=phi_zps,
        G1=0.0,
        G1t=0.0,
        G2=G2,
        G3=0.0,
        G4=0.0,
        delta_ext=delta_ext,
        omega_d=omega_d,
        topology=SQUID,
    )


def effective_params(c: CircuitParams, delta_ext: float = 0.0) -> EffectiveParams:
    """Dispatch on topology."""
    if c.topology == SQUID:
        return squid_effective_params(c, delta_ext)
    return sts_effective_params(c, delta_ext)


def dilution_scaling(base: EffectiveParams, M: int, N: int) -> EffectiveParams:
    """Apply the junction-array dilution scalings to single-junction
    coefficients:

        K -> K/N^2,  G2 -> (sqrt(N)/M) G2,  G4 -> (N/M^3) G4,
        phi_zps -> N^(1/4) phi_zps,  eps_c -> eps_c/sqrt(N),

    with the asymmetry coefficients following their phi_zps/M content
    (G1 -> N^(1/4)/M, G1t -> N^(1/4)/M, G3 -> N^(3/4)/M^3).  Derived
    quantities (eps2, Lambda, Delta) are recomputed from the scaled
    primitives.  Identity at M = N = 1.
    """
    if M < 1 or N < M or N % M != 0:
        raise TopologyError(f"need N >= M >= 1 with M | N, got M={M}, N={N}")
    K = base.K / N**2
    G1 = base.G1 * N**0.25 / M
    G1t = base.G1t * N**0.25 / M
    G2 = base.G2 * math.sqrt(N) / M
    G3 = base.G3 * N**0.75 / M**3
    G4 = base.G4 * N / M**3
    eps_c = base.eps_c / math.sqrt(N)
    return replace(
        base,
        K=K,
        G1=G1,
        G1t=G1t,
        G2=G2,
        G3=G3,
        G4=G4,
        eps_c=eps_c,
        phi_zps=base.phi_zps * N**0.25,
        eps2=G2 + 6.0 * G4,
        Lambda=4.0 * G4,
        Delta=_sts_delta(eps_c, K, G1, G2, G3, base.omega_d, base.delta_ext),
    )


def drive_harmonics(delta_phi: float, n_max: int) -> tuple[list[float], float]:
    """Jacobi-Anger amplitudes of sin(dphi cos(w t)) per odd harmonic,
    dphi^(n) = 2 (-1)^n J_{2n+1}(dphi), plus the corrected squeeze
    amplitude factor (1 - dphi^2/8 + dphi^4/192)."""
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    amps = [2.0 * (-1.0) ** n * float(jv(2 * n + 1, delta_phi)) for n in range(n_max + 1)]
    correction = 1.0 - delta_phi**2 / 8.0 + delta_phi**4 / 192.0
    return amps, correction


@dataclass(frozen=True)
class ValidityReport:
    """Perturbative-validity diagnostics; each ratio < 0.1 passes."""

    phi_zps: float
    delta_phi: float
    sixth_order_kerr_ratio: float
    squeeze_correction_2: float
    squeeze_correction_4: float
    sixth_harmonic_ratio: float
    phi_zps_ok: bool
    sixth_order_ok: bool
    modulation_ok: bool
    sixth_harmonic_ok: bool

    @property
    def all_ok(self) -> bool:
        return self.phi_zps_ok and self.sixth_order_ok and self.modulation_ok and self.sixth_harmonic_ok


def validity_report(c: CircuitParams, cat_n: float, threshold: float = 0.1) -> ValidityReport:
    """Bounds set by the zero-point spread and the modulation depth.

    * sixth-order Kerr competition: (cat_n/9) sqrt(2 E_C / E_J2_eff)
    * squeeze-amplitude corrections dphi^2/8 and dphi^4/192
    * sixth-harmonic drive leakage (4 E_C / 3 E_J2_eff) dphi^2 / 8,
      the /8 being the 3 omega_d harmonic suppression of the drive series.
    """
    if c.topology == SQUID:
        e_j2_eff = math.sqrt(2.0) * c.E_J_sigma
    else:
        e_j2_eff = c.E_J2 / c.N
    ratio_zps2 = math.sqrt(2.0 * c.E_C / e_j2_eff)
    sixth = (cat_n / 9.0) * ratio_zps2
    sq2 = c.delta_phi**2 / 8.0
    sq4 = c.delta_phi**4 / 192.0
    harm6 = (4.0 * c.E_C / (3.0 * e_j2_eff)) * c.delta_phi**2 / 8.0
    return ValidityReport(
        phi_zps=(2.0 * c.E_C / e_j2_eff) ** 0.25,
        delta_phi=c.delta_phi,
        sixth_order_kerr_ratio=sixth,
        squeeze_correction_2=sq2,
        squeeze_correction_4=sq4,
        sixth_harmonic_ratio=harm6,
        phi_zps_ok=ratio_zps2 < threshold,
        sixth_order_ok=sixth < threshold,
        modulation_ok=sq2 < threshold,
        sixth_harmonic_ok=harm6 < threshold,
    )


def compensation_detuning(p: EffectiveParams) -> float:
    """Drive-dependent detuning -2 Lambda eps2 / K that cancels the mean
    detuning introduced by the cubic term."""
    if p.K == 0.0:
        raise ZeroDivisionError("compensation detuning needs K != 0")
    return -2.0 * p.Lambda * p.eps2 / p.K
