"""Coherent-state lifetime T_alpha from the coherence-block Liouvillian.

The generator is restricted to the same-index coherences
{ |psi_m+><psi_m-| , |psi_m-><psi_m+| } of the parity-paired eigenbasis.
Stacking the two halves as [rho_m^pm ; rho_m^mp] gives

    L_eff = blockdiag(-i delta, +i delta)
            + sum_channels rate * [[-A, F+], [F-, -A]]        (odd jumps)
            + sum_channels rate * [[-A + E+, 0], [0, -A + E-]] (even jumps)

with A_m = (<m+|J^dag J|m+> + <m-|J^dag J|m->)/2 and feed matrices built
from products of single matrix elements of J; heating channels are simply
channels whose jump raises (J = abar^dag etc.), no special casing needed.
T_alpha = -1/Re(lambda) for the slowest mode carrying dominant weight on
the ground coherence pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np
from scipy.linalg import eig

from . import dissipation as dis
from .circuit import (
    SQUID,
    CircuitParams,
    compensation_detuning,
    squid_effective_params,
    sts_effective_params,
)
from .dissipation import BathSpec, DissipatorTerm
from .errors import ModeIdentificationError
from .fock import FockSpace, Operator, truncation_diagnostic
from .hamiltonian import SQUID_EFFECTIVE, STS_EFFECTIVE, HamiltonianSpec, build_static
from .spectra import paired_spectrum

T_ALPHA_CAP_US = 1e9


@dataclass(frozen=True)
class CoherenceBlock:
    n_pairs: int
    deltas: np.ndarray  # splittings delta_m (rad/us)
    matrix: np.ndarray  # assembled 2 n_pairs x 2 n_pairs generator
    channel_labels: tuple[str, ...]


def coherence_block(H: Operator, terms: Sequence[DissipatorTerm], n_pairs: int) -> CoherenceBlock:
    ps = paired_spectrum(H, n_pairs)
    d = H.space.dim
    par = (-1) ** np.arange(d)
    vp = ps.vectors_even  # columns |psi_m+>
    vm = ps.vectors_odd  # columns |psi_m->
    m2 = 2 * n_pairs
    lmat = np.zeros((m2, m2), dtype=complex)
    deltas = ps.splittings.astype(complex)
    lmat[:n_pairs, :n_pairs] += np.diag(-1j * deltas)
    lmat[n_pairs:, n_pairs:] += np.diag(+1j * deltas)
    labels = []
    for t in terms:
        j = t.jump.data
        odd = np.allclose(par[:, None] * j * par[None, :], -j, atol=1e-12)
        jdj = j.conj().T @ j
        a_m = 0.5 * (
            np.einsum("im,ij,jm->m", vp.conj(), jdj, vp)
            + np.einsum("im,ij,jm->m", vm.conj(), jdj, vm)
        ).real
        decay = np.concatenate([a_m, a_m])
        lmat -= t.rate * np.diag(decay)
        if odd:
            # d rho_m^pm/dt <- <m+|J|p-> <p+|J^dag|m-> rho_p^mp  (upper-right)
            # and <p+|J^dag|m-> = conj(<m-|J|p+>), elementwise in (m, p)
            jp = vp.conj().T @ j @ vm  # [m,p] = <m+|J|p->
            jq = vm.conj().T @ j @ vp  # [m,p] = <m-|J|p+>
            lmat[:n_pairs, n_pairs:] += t.rate * (jp * jq.conj())
            lmat[n_pairs:, :n_pairs] += t.rate * (jq * jp.conj())
        else:
            jpp = vp.conj().T @ j @ vp  # [m,p] = <m+|J|p+>
            jmm = vm.conj().T @ j @ vm  # [m,p] = <m-|J|p->
            lmat[:n_pairs, :n_pairs] += t.rate * (jpp * jmm.conj())
            lmat[n_pairs:, n_pairs:] += t.rate * (jmm * jpp.conj())
        labels.append(t.label)
    return CoherenceBlock(n_pairs, ps.splittings, lmat, tuple(labels))


@dataclass(frozen=True)
class BlockMode:
    eigenvalue: complex
    ground_weight: float


def slowest_ground_mode(block: CoherenceBlock, weight_threshold: float = 0.5) -> BlockMode:
    """Slowest eigenmode with dominant weight on the m = 0 coherence pair."""
    vals, vecs = eig(block.matrix)
    m = block.n_pairs
    best = None
    for k in range(len(vals)):
        v = vecs[:, k]
        w = (abs(v[0]) ** 2 + abs(v[m]) ** 2) / np.linalg.norm(v) ** 2
        if w > weight_threshold:
            if best is None or vals[k].real > best[0].real:
                best = (vals[k], w)
    if best is None:
        raise ModeIdentificationError(
            "no coherence-block mode has dominant ground-pair weight", spectrum=vals
        )
    return BlockMode(complex(best[0]), float(best[1]))


def t_alpha(block: CoherenceBlock) -> float:
    """T_alpha = 1 / (-Re lambda) of the ground coherence mode, capped."""
    lam = slowest_ground_mode(block).eigenvalue
    if lam.real >= -1.0 / T_ALPHA_CAP_US:
        return T_ALPHA_CAP_US
    return min(-1.0 / lam.real, T_ALPHA_CAP_US)


@dataclass(frozen=True)
class SweepConfig:
    """Everything needed to rebuild the model at one sweep point."""

    circuit: CircuitParams
    bath: BathSpec
    dissipators: str = "o2-rwa"  # o2-rwa | o2 | o34 | strong-mod | squid
    detuning_ratio: float = 0.0
    compensate_lambda: bool = False
    zero_lambda: bool = False
    gamma_phi: float = 0.0  # plain rate, us^-1
    eps2_ratio: float | None = None  # fixed eps2/K for non-eps2 axes
    m_lv_start: int = 4
    m_lv_step: int = 2
    m_lv_tol: float = 0.01
    m_lv_max: int = 16
    dim_min: int = 30
    dim_max: int = 120


@dataclass(frozen=True)
class SweepPoint:
    axis_value: float
    t_alpha_us: float
    lambda_re: float
    m_lv: int
    dim: int
    eps2_ratio: float
    delta_phi: float
    failed: bool = False
    note: str = ""


@dataclass(frozen=True)
class SweepResult:
    axis: str
    values: np.ndarray
    points: tuple[SweepPoint, ...]
    config: SweepConfig

    @property
    def t_alpha_us(self) -> np.ndarray:
        return np.array([p.t_alpha_us for p in self.points])


AXES = ("eps2_ratio", "detuning_ratio", "modulation_depth", "gamma_phi")


def _solve_modulation_depth(cfg: SweepConfig, eps2_target: float) -> float:
    """Modulation depth giving |eps2| = |eps2_target| (Newton; the STS
    relation is linear, the SQUID one has a small cubic correction)."""
    target = abs(eps2_target)
    if target == 0.0:
        return 0.0
    squid = cfg.circuit.topology == SQUID

    def eps2_abs(dphi):
        c = replace(cfg.circuit, delta_phi=dphi)
        p = squid_effective_params(c) if squid else sts_effective_params(c)
        return abs(p.eps2)

    probe = 0.01
    x = target * probe / eps2_abs(probe)
    for _ in range(40):
        f = eps2_abs(x) - target
        fp = (eps2_abs(x + 1e-7) - eps2_abs(x - 1e-7)) / 2e-7
        step = f / fp
        x -= step
        if abs(step) < 1e-14 + 1e-12 * abs(x):
            break
    return abs(x)


def _effective_at(cfg: SweepConfig, delta_phi: float, detuning_ratio: float, squid: bool):
    c = replace(cfg.circuit, delta_phi=delta_phi)
    p = squid_effective_params(c) if squid else sts_effective_params(c)
    if cfg.zero_lambda:
        p = replace(p, Lambda=0.0)
    delta = detuning_ratio * p.K
    if cfg.compensate_lambda:
        delta += compensation_detuning(p)
    return c, replace(p, Delta=delta)


def lifetime_point(cfg: SweepConfig, axis: str, value: float) -> SweepPoint:
    """T_alpha at one sweep point, with adaptive truncation and block size.

    The swept quantity fixes the modulation depth (eps2_ratio axis inverts
    eps2(dphi)); the detuning is pinned at detuning_ratio * K plus the
    optional Lambda compensation; dim starts at max(dim_min, 8 eps2/K) and
    grows until the cat-pair eigenvectors are truncation-adequate; M_lv
    grows until T_alpha moves by less than m_lv_tol.
    """
    squid = cfg.circuit.topology == SQUID
    detuning_ratio = cfg.detuning_ratio
    gamma_phi = cfg.gamma_phi
    if axis == "eps2_ratio":
        eps2_ratio = value
        ref = squid_effective_params(cfg.circuit) if squid else sts_effective_params(cfg.circuit)
        dphi = _solve_modulation_depth(cfg, value * ref.K)
    elif axis == "modulation_depth":
        dphi = value
        eps2_ratio = None
    elif axis == "detuning_ratio":
        detuning_ratio = value
        eps2_ratio = cfg.eps2_ratio if cfg.eps2_ratio is not None else 0.0
        ref = squid_effective_params(cfg.circuit) if squid else sts_effective_params(cfg.circuit)
        dphi = _solve_modulation_depth(cfg, eps2_ratio * ref.K)
    elif axis == "gamma_phi":
        gamma_phi = value
        eps2_ratio = cfg.eps2_ratio if cfg.eps2_ratio is not None else 0.0
        ref = squid_effective_params(cfg.circuit) if squid else sts_effective_params(cfg.circuit)
        dphi = _solve_modulation_depth(cfg, eps2_ratio * ref.K)
    else:
        raise ValueError(f"unknown sweep axis {axis!r}")

    c_probe, p_probe = _effective_at(cfg, dphi, detuning_ratio, squid)
    if eps2_ratio is None:
        eps2_ratio = abs(p_probe.eps2 / p_probe.K)

    dim = int(max(cfg.dim_min, math.ceil(8.0 * abs(eps2_ratio))))
    dim += dim % 2  # keep parity sectors balanced
    while True:
        space = FockSpace(dim)
        c_run = replace(cfg.circuit, delta_phi=dphi)
        p_run, terms = dis.catalog(cfg.dissipators, c_run, cfg.bath, space, gamma_phi=gamma_phi)
        if cfg.zero_lambda:
            p_run = replace(p_run, Lambda=0.0)
        delta = detuning_ratio * p_run.K
        if cfg.compensate_lambda:
            delta += compensation_detuning(p_run)
        p_run = replace(p_run, Delta=delta)
        kind = SQUID_EFFECTIVE if squid else STS_EFFECTIVE
        H = build_static(HamiltonianSpec(kind, p_run, space))
        ps = paired_spectrum(H, 1)
        tail = max(
            truncation_diagnostic(ps.vectors_even[:, 0]).tail_population,
            truncation_diagnostic(ps.vectors_odd[:, 0]).tail_population,
        )
        if tail < 1e-8 or dim >= cfg.dim_max:
            break
        dim = min(cfg.dim_max, dim + 10)

    m_lv = cfg.m_lv_start
    m_lv_cap = min(cfg.m_lv_max, dim // 2 - 1)
    t_prev = None
    lam = None
    while True:
        block = coherence_block(H, terms, m_lv)
        mode = slowest_ground_mode(block)
        t_now = T_ALPHA_CAP_US if mode.eigenvalue.real >= -1 / T_ALPHA_CAP_US else min(
            -1.0 / mode.eigenvalue.real, T_ALPHA_CAP_US
        )
        lam = mode.eigenvalue
        if t_prev is not None and (
            abs(t_now - t_prev) <= cfg.m_lv_tol * abs(t_prev) or m_lv >= m_lv_cap
        ):
            break
        if m_lv >= m_lv_cap:
            break
        t_prev = t_now
        m_lv += cfg.m_lv_step
    return SweepPoint(
        axis_value=value,
        t_alpha_us=t_now,
        lambda_re=lam.real,
        m_lv=m_lv,
        dim=dim,
        eps2_ratio=float(eps2_ratio),
        delta_phi=dphi,
    )


def sweep(axis: str, values, config: SweepConfig) -> SweepResult:
    """Deterministic sweep; per-point failures become gap rows, not aborts."""
    if axis not in AXES:
        raise ValueError(f"axis must be one of {AXES}, got {axis!r}")
    values = np.asarray(values, dtype=float)
    points = []
    for v in values:
        try:
            points.append(lifetime_point(config, axis, float(v)))
        except Exception as exc:  # record the gap, keep sweeping
            points.append(
                SweepPoint(float(v), math.nan, math.nan, 0, 0, math.nan, math.nan, True, str(exc))
            )
    return SweepResult(axis, values, tuple(points), config)


@dataclass(frozen=True)
class StaircaseFeatures:
    plateaus: tuple[tuple[float, float, float], ...]  # (start, end, mean T_alpha)
    rise_onsets: tuple[float, ...]
    first_plateau_level: float | None


def staircase_features(
    sr: SweepResult,
    slope_tol: float = 0.05,
    min_width: float = 0.5,
) -> StaircaseFeatures:
    """Plateau/rise detection on a log-T_alpha staircase.

    A plateau is a maximal run with |d log10 T / d axis| < slope_tol
    spanning at least min_width in the axis; a rise onset is the axis value
    where the slope first exceeds 4 * slope_tol after a plateau (or at the
    start).
    """
    if sr.axis != "eps2_ratio":
        raise ValueError("staircase features are defined for eps2_ratio sweeps")
    x = np.array([p.axis_value for p in sr.points if not p.failed])
    t = np.array([p.t_alpha_us for p in sr.points if not p.failed])
    if len(x) < 3:
        return StaircaseFeatures((), (), None)
    logt = np.log10(t)
    slope = np.gradient(logt, x)
    flat = np.abs(slope) < slope_tol
    plateaus = []
    i = 0
    while i < len(x):
        if flat[i]:
            j = i
            while j + 1 < len(x) and flat[j + 1]:
                j += 1
            if x[j] - x[i] >= min_width:
                plateaus.append((float(x[i]), float(x[j]), float(np.mean(t[i : j + 1]))))
            i = j + 1
        else:
            i += 1
    onsets = []
    rising = slope > 4 * slope_tol
    sustained = rising.copy()
    sustained[:-1] &= rising[1:]  # suppress single-point wiggles
    for k in range(len(x)):
        if sustained[k] and (k == 0 or not sustained[k - 1]):
            onsets.append(float(x[k]))
    level = plateaus[0][2] if plateaus else None
    return StaircaseFeatures(tuple(plateaus), tuple(onsets), level)
