"""Bath model and the jump-operator catalog for every master equation in
the source model: the O(phi_zps^2) single-photon set, the O(phi_zps^3/4)
multi-photon extension, dephasing, the strong-modulation set, and the
single-SQUID set.

Rates are plain Lindblad rates in us^-1 (incoming gamma(w) = kappa(w) n(w),
outgoing Upsilon(w) = kappa(w) (1 + n(w))).  Composite jump operators are
kept as single operators exactly as grouped in the source equations;
D[x + y] != D[x] + D[y].
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .circuit import SQUID, STS, CircuitParams, EffectiveParams, squid_effective_params, sts_effective_params
from .errors import BathSpecError
from .fock import FockSpace, Operator, ladder_ops
from .units import bose_occupation

# canonical frequency labels, as multiples of omega_d/2
FREQ_LABELS = ("wd2", "wd", "3wd2", "5wd2", "7wd2")
_LABEL_MULT = {"wd2": 0.5, "wd": 1.0, "3wd2": 1.5, "5wd2": 2.5, "7wd2": 3.5}


def bose_einstein(omega: float, temperature_k: float) -> float:
    """n(omega) = [exp(hbar omega / kB T) - 1]^-1, omega in rad/us."""
    return bose_occupation(omega, temperature_k)


@dataclass(frozen=True)
class BathSpec:
    """Spectral densities and temperatures per sampling frequency.

    ``kappa_table`` maps the labels wd2, wd, 3wd2, 5wd2, 7wd2 (multiples of
    omega_d/2) to plain rates in us^-1; missing entries fall back to
    ``kappa_default`` when set (the spectral function is energy independent
    by default).  ``temperature_table`` works the same way against
    ``temperature_default`` in kelvin.
    """

    omega_d: float
    kappa_default: float | None = None
    temperature_default: float | None = None
    kappa_table: dict = field(default_factory=dict)
    temperature_table: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.omega_d <= 0:
            raise BathSpecError("omega_d must be > 0")
        for k, v in self.kappa_table.items():
            if k not in FREQ_LABELS:
                raise BathSpecError(f"unknown frequency label {k!r}")
            if v < 0:
                raise BathSpecError(f"kappa[{k}] must be >= 0")
        for k, v in self.temperature_table.items():
            if k not in FREQ_LABELS:
                raise BathSpecError(f"unknown frequency label {k!r}")
            if v <= 0:
                raise BathSpecError(f"temperature[{k}] must be > 0")
        if self.kappa_default is not None and self.kappa_default < 0:
            raise BathSpecError("kappa_default must be >= 0")

    def omega(self, label: str) -> float:
        return _LABEL_MULT[label] * self.omega_d

    def kappa(self, label: str) -> float:
        if label in self.kappa_table:
            return self.kappa_table[label]
        if self.kappa_default is None:
            raise BathSpecError(f"no kappa for {label} and no default")
        return self.kappa_default

    def temperature(self, label: str) -> float:
        if label in self.temperature_table:
            return self.temperature_table[label]
        if self.temperature_default is None:
            raise BathSpecError(f"no temperature for {label} and no default")
        return self.temperature_default

    def occupation(self, label: str) -> float:
        return bose_occupation(self.omega(label), self.temperature(label))

    def incoming(self, label: str) -> float:
        """gamma(w) = kappa(w) n(w)."""
        return self.kappa(label) * self.occupation(label)

    def outgoing(self, label: str) -> float:
        """Upsilon(w) = kappa(w) (1 + n(w))."""
        return self.kappa(label) * (1.0 + self.occupation(label))


@dataclass(frozen=True)
class DissipatorTerm:
    """One Lindblad channel: rate * D[jump]."""

    rate: float
    jump: Operator
    label: str

    def __post_init__(self):
        if self.rate < 0:
            raise BathSpecError(f"negative rate for {self.label}: {self.rate}")


def _term(rate, matrix, space, label, out):
    if rate != 0.0 and np.any(matrix):
        out.append(DissipatorTerm(rate, Operator(space, matrix), label))


def sts_dissipators_o2(
    p: EffectiveParams, bath: BathSpec, space: FockSpace, rwa_only: bool = False
) -> list[DissipatorTerm]:
    """O(phi_zps^2) STS master equation:

        gamma(wd/2) D[a^dag + (2 G2/wd) a] + Upsilon(wd/2) D[a + (2 G2/wd) a^dag]
        + (3 G2/wd)^2 {gamma(3wd/2) D[a^dag] + Upsilon(3wd/2) D[a]}

    With ``rwa_only`` the mixing drops (abar -> a) and the 3wd/2 pair is
    omitted (single-photon RWA).
    """
    a, adag, _ = (op.data for op in ladder_ops(space))
    mix = 0.0 if rwa_only else 2.0 * p.G2 / bath.omega_d
    terms: list[DissipatorTerm] = []
    _term(bath.incoming("wd2"), adag + mix * a, space, "o2:wd2:heat", terms)
    _term(bath.outgoing("wd2"), a + mix * adag, space, "o2:wd2:loss", terms)
    if not rwa_only:
        pre = (3.0 * p.G2 / bath.omega_d) ** 2
        _term(pre * bath.incoming("3wd2"), adag, space, "o2:3wd2:heat", terms)
        _term(pre * bath.outgoing("3wd2"), a, space, "o2:3wd2:loss", terms)
    return terms


def sts_dissipators_o34(p: EffectiveParams, bath: BathSpec, space: FockSpace) -> list[DissipatorTerm]:
    """The additional O(phi_zps^3) and O(phi_zps^4) dissipator lines.

    Two-photon terms at wd (proportional to the junction asymmetry through
    G3), composite single/multi-photon jumps at wd/2, 3wd/2, 5wd/2.  The
    full beyond-RWA model is the union with :func:`sts_dissipators_o2`.
    """
    a, adag, _ = (op.data for op in ladder_ops(space))
    a2 = a @ a
    a3 = a2 @ a
    adag2 = adag @ adag
    adag3 = adag2 @ adag
    w = bath.omega_d
    terms: list[DissipatorTerm] = []

    # O(phi^3): two-photon pair at omega_d
    _term(bath.incoming("wd"), (8.0 * p.G3 / w) * adag2, space, "o34:wd:2ph-heat", terms)
    _term(bath.outgoing("wd"), (8.0 * p.G3 / w) * a2, space, "o34:wd:2ph-loss", terms)

    # O(phi^4): composite jumps at omega_d/2
    c_g22 = 3.0 * p.G2**2 / (2.0 * w**2)
    c_g13 = 24.0 * p.G1 * p.G3 / w**2
    c_12 = 12.0 * p.G4 / w
    c_4 = 4.0 * p.G4 / w
    heat_wd2 = (c_g22 - c_g13) * adag + c_12 * a + c_4 * adag3 + c_12 * (adag @ a2)
    loss_wd2 = (c_g22 - c_g13) * a + c_12 * adag + c_4 * a3 + c_12 * (adag2 @ a)
    _term(bath.incoming("wd2"), heat_wd2, space, "o34:wd2:heat", terms)
    _term(bath.outgoing("wd2"), loss_wd2, space, "o34:wd2:loss", terms)

    # 3 omega_d / 2 set
    c_18 = 18.0 * p.G4 / w
    c_11 = 11.0 * p.G2**2 / w**2
    c_g1t3 = 12.0 * p.G1t * p.G3 / (5.0 * w**2)
    heat_3wd2 = c_18 * adag + (-c_11 + c_g1t3) * a + c_12 * (adag2 @ a)
    loss_3wd2 = c_18 * a + (-c_11 + c_g1t3) * adag + c_12 * (adag @ a2)
    _term(bath.incoming("3wd2"), heat_3wd2, space, "o34:3wd2:heat", terms)
    _term(bath.outgoing("3wd2"), loss_3wd2, space, "o34:3wd2:loss", terms)

    # 5 omega_d / 2 set
    c_53 = 5.0 * p.G2**2 / (3.0 * w**2)
    c_43 = 4.0 * p.G1t * p.G3 / (3.0 * w**2)
    c_g43 = 4.0 * p.G4 / (3.0 * w)
    heat_5wd2 = (c_53 + c_43) * adag + c_g43 * adag3
    loss_5wd2 = (c_53 + c_43) * a + c_g43 * a3
    _term(bath.incoming("5wd2"), heat_5wd2, space, "o34:5wd2:heat", terms)
    _term(bath.outgoing("5wd2"), loss_5wd2, space, "o34:5wd2:loss", terms)
    return terms


def dephasing_term(gamma_phi: float, space: FockSpace) -> list[DissipatorTerm]:
    """Pure dephasing gamma_phi D[n]."""
    if gamma_phi < 0:
        raise BathSpecError(f"dephasing rate must be >= 0, got {gamma_phi}")
    if gamma_phi == 0.0:
        return []
    _, _, num = ladder_ops(space)
    return [DissipatorTerm(gamma_phi, num, "dephasing")]


def strong_modulation_set(
    c: CircuitParams, bath: BathSpec, space: FockSpace
) -> tuple[EffectiveParams, list[DissipatorTerm]]:
    """Third-order-in-modulation corrections for symmetric junctions.

    The drive coefficients acquire primed counterparts G2' = dphi^2/8 G2 and
    G4' = (phi_zps^2/12) G2', modifying the effective parameters

        eps2   -> (G2 - G2') + 6 (G4 - G4')
        Lambda -> 4 (G4 - G4')
        Delta  -> eps_c - wd/2 - 2K - 2 (G2 - G2')^2/wd + G2'^2/(9 wd)

    and the master equation gains 5wd/2 and 7wd/2 channels; the 5wd/2 line
    pairs n(5wd/2) with D[a] (heating and cooling roles swapped), kept
    verbatim.
    """
    if c.topology != STS:
        raise BathSpecError("strong-modulation set is defined for the STS")
    if c.E_J_delta != 0.0:
        raise BathSpecError("strong-modulation set assumes symmetric junctions")
    p = sts_effective_params(c)
    g2p = c.delta_phi**2 / 8.0 * p.G2
    g4p = p.phi_zps**2 / 12.0 * g2p
    g2m = p.G2 - g2p
    g4m = p.G4 - g4p
    w = bath.omega_d
    from dataclasses import replace

    p_mod = replace(
        p,
        eps2=g2m + 6.0 * g4m,
        Lambda=4.0 * g4m,
        Delta=p.eps_c - w / 2.0 - 2.0 * p.K - 2.0 * g2m**2 / w + g2p**2 / (9.0 * w) + p.delta_ext,
        G2=g2m,
        G4=g4m,
    )
    a, adag, _ = (op.data for op in ladder_ops(space))
    mix = 2.0 * g2m / w
    terms: list[DissipatorTerm] = []
    _term(bath.incoming("wd2"), adag + mix * a, space, "smod:wd2:heat", terms)
    _term(bath.outgoing("wd2"), a + mix * adag, space, "smod:wd2:loss", terms)
    pre3 = (3.0 * g2m / w) ** 2
    _term(pre3 * bath.incoming("3wd2"), adag, space, "smod:3wd2:heat", terms)
    _term(pre3 * bath.outgoing("3wd2"), a, space, "smod:3wd2:loss", terms)
    pre5 = (5.0 * g2p / (8.0 * w)) ** 2
    # anomalous ordering: occupation factor rides the loss operator
    _term(pre5 * bath.incoming("5wd2"), a, space, "smod:5wd2:n-loss", terms)
    _term(pre5 * bath.outgoing("5wd2"), adag, space, "smod:5wd2:np1-heat", terms)
    pre7 = (11.0 * g2p / (36.0 * w)) ** 2
    _term(pre7 * bath.incoming("7wd2"), adag, space, "smod:7wd2:heat", terms)
    _term(pre7 * bath.outgoing("7wd2"), a, space, "smod:7wd2:loss", terms)
    return p_mod, terms


def squid_dissipators(c: CircuitParams, bath: BathSpec, space: FockSpace) -> list[DissipatorTerm]:
    """Single-SQUID master equation: the wd/2 mixing enters with sign
    opposite to the STS, the 3wd/2 jump mixes a and a^dag with weight ratio
    3 : dphi, and a (dphi sqrt2 G2 / 3wd)^2 single-photon pair sits at 5wd/2.
    """
    if c.topology != SQUID:
        raise BathSpecError("squid_dissipators needs a SQUID circuit")
    p = squid_effective_params(c)
    a, adag, _ = (op.data for op in ladder_ops(space))
    w = bath.omega_d
    dphi = c.delta_phi
    mix = 2.0 * p.G2 / w  # = sqrt(2) G_{2,S} / wd in source notation
    terms: list[DissipatorTerm] = []
    _term(bath.incoming("wd2"), adag - mix * a, space, "squid:wd2:heat", terms)
    _term(bath.outgoing("wd2"), a - mix * adag, space, "squid:wd2:loss", terms)
    pre3 = (p.G2 / w) ** 2
    _term(pre3 * bath.incoming("3wd2"), 3.0 * adag + dphi * a, space, "squid:3wd2:heat", terms)
    _term(pre3 * bath.outgoing("3wd2"), 3.0 * a + dphi * adag, space, "squid:3wd2:loss", terms)
    pre5 = (dphi * 2.0 * p.G2 / (3.0 * w)) ** 2
    _term(pre5 * bath.incoming("5wd2"), adag, space, "squid:5wd2:heat", terms)
    _term(pre5 * bath.outgoing("5wd2"), a, space, "squid:5wd2:loss", terms)
    return terms


def catalog(
    name: str,
    c: CircuitParams,
    bath: BathSpec,
    space: FockSpace,
    gamma_phi: float = 0.0,
) -> tuple[EffectiveParams, list[DissipatorTerm]]:
    """Named dissipator models used by sweeps and the CLI.

    o2-rwa     single-photon RWA terms only
    o2         O(phi_zps^2) beyond-RWA set
    o34        o2 plus the O(phi_zps^3/4) lines
    strong-mod third order in the modulation depth
    squid      the single-SQUID master equation
    """
    if name == "squid":
        p = squid_effective_params(c)
        terms = squid_dissipators(c, bath, space)
    elif name == "strong-mod":
        p, terms = strong_modulation_set(c, bath, space)
    elif name in ("o2-rwa", "o2", "o34"):
        p = sts_effective_params(c)
        terms = sts_dissipators_o2(p, bath, space, rwa_only=(name == "o2-rwa"))
        if name == "o34":
            terms = terms + sts_dissipators_o34(p, bath, space)
    else:
        raise BathSpecError(f"unknown dissipator set {name!r}")
    return p, terms + dephasing_term(gamma_phi, space)
