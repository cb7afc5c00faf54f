"""Eigenstructure analysis: parity-paired spectra, degeneracy detection,
Floquet quasienergies of the driven circuit, and adiabatic drive ramps.

Pairing convention: eigenstates are computed separately in the even and
odd photon-parity sectors (this keeps parity labels exact through
degeneracies) and sorted so that pair m = 0 is the cat manifold, i.e. the
top of the double-well metapotential; the pair index then counts
excitations into the well.  Splittings are delta_m = w_m(+) - w_m(-).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import eig, eigh

from .circuit import CircuitParams, resolve_drive_frequency, sts_effective_params
from .errors import IntegratorError, ParityError, PropagatorAccuracyError
from .fock import FockSpace, Operator, cat_state, ladder_ops
from .hamiltonian import STS_EFFECTIVE, HamiltonianSpec, build_static, lab_frame_parts


@dataclass(frozen=True)
class PairedSpectrum:
    """Parity-paired eigenstructure relative to the cat-pair energy.

    ``levels_even[m]``/``levels_odd[m]`` are eigenvalues minus the even
    ground-pair energy; ``vectors_even``/``vectors_odd`` hold the full-space
    eigenvectors as columns, pair index m along columns.
    """

    levels_even: np.ndarray
    levels_odd: np.ndarray
    vectors_even: np.ndarray
    vectors_odd: np.ndarray

    @property
    def splittings(self) -> np.ndarray:
        return self.levels_even - self.levels_odd

    @property
    def n_pairs(self) -> int:
        return len(self.levels_even)


def _parity_blocks(h: np.ndarray):
    d = h.shape[0]
    even = np.arange(0, d, 2)
    odd = np.arange(1, d, 2)
    return even, odd


def paired_spectrum(H: Operator, n_pairs: int, parity_tol: float = 1e-6) -> PairedSpectrum:
    """Diagonalize within parity sectors and pair by index.

    The m-th even eigenstate is paired with the m-th odd one, both sorted
    from the well top downward (descending eigenvalue); this is exact even
    at degeneracies.  Raises ParityError if H fails to commute with parity.
    """
    h = H.data
    d = h.shape[0]
    scale = np.max(np.abs(h))
    signs = (-1.0) ** np.arange(d)
    comm = h * (1.0 - np.outer(signs, signs))  # [H, P] content: parity-odd entries
    if scale > 0 and np.max(np.abs(comm)) > parity_tol * scale:
        raise ParityError("Hamiltonian does not commute with photon parity")
    even, odd = _parity_blocks(h)
    if n_pairs > len(odd):
        raise ValueError(f"asked for {n_pairs} pairs; dim {d} supports {len(odd)}")
    vals_e, vecs_e = eigh(0.5 * (h[np.ix_(even, even)] + h[np.ix_(even, even)].conj().T))
    vals_o, vecs_o = eigh(0.5 * (h[np.ix_(odd, odd)] + h[np.ix_(odd, odd)].conj().T))
    order_e = np.argsort(vals_e)[::-1][:n_pairs]
    order_o = np.argsort(vals_o)[::-1][:n_pairs]
    ve = np.zeros((d, n_pairs), dtype=complex)
    vo = np.zeros((d, n_pairs), dtype=complex)
    ve[even, :] = vecs_e[:, order_e]
    vo[odd, :] = vecs_o[:, order_o]
    ref = vals_e[order_e[0]]
    return PairedSpectrum(
        levels_even=vals_e[order_e] - ref,
        levels_odd=vals_o[order_o] - ref,
        vectors_even=ve,
        vectors_odd=vo,
    )


@dataclass(frozen=True)
class Crossing:
    pair_index: int
    axis_value: float
    splitting: float


def degeneracy_scan(
    h_of: Callable[[float], Operator],
    axis_values: Sequence[float],
    n_pairs: int,
    tol_cross: float,
    refine_iters: int = 60,
) -> list[Crossing]:
    """Locate axis values where a pair splitting crosses zero.

    ``h_of`` maps the swept value (Delta or eps2) to a Hamiltonian.  Sign
    changes of the index-paired splitting between consecutive grid points
    are refined by bisection; grid points already inside |delta| < tol
    are kept directly.
    """
    axis_values = np.asarray(axis_values, dtype=float)
    splits = np.array([paired_spectrum(h_of(v), n_pairs).splittings for v in axis_values])
    crossings: list[Crossing] = []
    for m in range(n_pairs):
        s = splits[:, m]
        for k in range(len(axis_values) - 1):
            lo, hi = axis_values[k], axis_values[k + 1]
            slo, shi = s[k], s[k + 1]
            if abs(slo) < tol_cross:
                if not crossings or not any(
                    c.pair_index == m and abs(c.axis_value - lo) < 1e-9 for c in crossings
                ):
                    crossings.append(Crossing(m, float(lo), float(slo)))
                continue
            if slo * shi >= 0.0:
                continue
            a, b, fa = lo, hi, slo
            for _ in range(refine_iters):
                mid = 0.5 * (a + b)
                fm = paired_spectrum(h_of(mid), n_pairs).splittings[m]
                if abs(fm) < tol_cross or (b - a) < 1e-12 * max(1.0, abs(mid)):
                    break
                if fa * fm < 0:
                    b = mid
                else:
                    a, fa = mid, fm
            crossings.append(Crossing(m, float(0.5 * (a + b)), float(fm)))
        if abs(s[-1]) < tol_cross:
            crossings.append(Crossing(m, float(axis_values[-1]), float(s[-1])))
    # merge near-identical detections of the same pair (the splitting is
    # exponentially flat around a crossing, so several grid points can hit
    # |delta| < tol); keep the one with the smallest residual splitting
    step = float(np.min(np.diff(axis_values))) if len(axis_values) > 1 else 0.0
    merged: list[Crossing] = []
    for m in range(n_pairs):
        group: list[Crossing] = []
        for c in sorted((c for c in crossings if c.pair_index == m), key=lambda c: c.axis_value):
            if group and c.axis_value - group[-1].axis_value <= 1.5 * step:
                group.append(c)
            else:
                if group:
                    merged.append(min(group, key=lambda c: abs(c.splitting)))
                group = [c]
        if group:
            merged.append(min(group, key=lambda c: abs(c.splitting)))
    merged.sort(key=lambda c: (c.axis_value, c.pair_index))
    return merged


@dataclass(frozen=True)
class FloquetResult:
    """Quasienergy-vs-effective comparison for the first excited levels.

    ``quasi`` and ``effective`` hold |e_n - e_0| in rad/us for n = 1..n_levels,
    with the quasienergy branch chosen nearest the effective value (folding
    is only defined mod omega_d).
    """

    quasi: np.ndarray
    effective: np.ndarray
    quasi_folded: np.ndarray
    omega_d: float
    n_steps: int


def _one_period_propagator(parts, omega_d: float, n_steps: int, period_mult: int = 1) -> np.ndarray:
    """Time-ordered product of midpoint exponentials over one drive period,
    evaluated in the rotating frame at omega_d/2.

    Steps are processed in batched chunks (vectorized Hamiltonian assembly
    and batched eigh) to keep the per-step overhead down.
    """
    d = parts.transmon.shape[0]
    space_n = np.arange(d)
    t_period = period_mult * 2.0 * math.pi / omega_d
    dt = t_period / n_steps
    half = 0.5 * omega_d
    frame_shift = np.diag(half * space_n)
    u = np.eye(d, dtype=complex)
    chunk = 512
    for start in range(0, n_steps, chunk):
        kk = np.arange(start, min(start + chunk, n_steps))
        t_mid = (kk + 0.5) * dt
        mod = parts.circuit.delta_phi * np.cos(omega_d * t_mid)
        s = np.sin(mod) if parts.exact_drive else mod
        h = parts.transmon[None, :, :] + s[:, None, None] * parts.drive_op[None, :, :]
        if parts.asym_op is not None:
            h = h + np.cos(mod)[:, None, None] * parts.asym_op[None, :, :]
        phase = np.exp(1j * half * t_mid[:, None] * space_n[None, :])
        h = phase[:, :, None] * h * phase.conj()[:, None, :] - frame_shift[None, :, :]
        vals, vecs = np.linalg.eigh(h)
        steps = np.matmul(vecs * np.exp(-1j * vals * dt)[:, None, :], vecs.conj().transpose(0, 2, 1))
        for k in range(len(kk)):
            u = steps[k] @ u
    return u


def floquet_quasienergies(
    c: CircuitParams,
    space: FockSpace,
    n_levels: int,
    target_delta: float = 0.0,
    n_steps_init: int = 256,
    conv_tol_factor: float = 1e-8,
    max_doublings: int = 6,
) -> FloquetResult:
    """Quasienergies of the driven lab-frame circuit vs the static effective
    spectrum.

    The drive frequency is ``c.omega_d`` if set, otherwise solved so the
    effective detuning equals ``target_delta``.  The one-period propagator
    U(T) is built from midpoint exponentials with the step count doubled
    until the tracked quasienergies move by less than
    ``conv_tol_factor * omega_d``.
    """
    omega_d = c.omega_d if c.omega_d is not None else resolve_drive_frequency(c, target_delta)
    c_run = CircuitParams(
        c.E_J1, c.E_J2, c.E_J3, c.E_C, c.delta_phi, omega_d, c.M, c.N, c.topology
    )
    eff = sts_effective_params(c_run)
    h_eff = build_static(HamiltonianSpec(STS_EFFECTIVE, eff, space))
    evals, evecs = eigh(h_eff.data)
    order = np.argsort(evals)[::-1][: n_levels + 1]  # well top downward
    eff_states = evecs[:, order]
    eff_diffs = np.abs(evals[order][1:] - evals[order][0])

    parts = lab_frame_parts(c_run, space, exact_drive=False, omega_d=omega_d)
    period_mult = 1 if c_run.E_J_delta == 0.0 else 2
    fold = omega_d / period_mult
    t_period = period_mult * 2.0 * math.pi / omega_d

    def run(n_steps: int):
        u = _one_period_propagator(parts, omega_d, n_steps, period_mult)
        defect = np.max(np.abs(u @ u.conj().T - np.eye(u.shape[0])))
        if defect > 1e-8:
            raise PropagatorAccuracyError(f"||U U^dag - I|| = {defect:.2e}; increase n_steps")
        lam, modes = eig(u)
        quasi = (-np.angle(lam) / t_period) % fold
        # match Floquet modes to effective eigenstates by overlap
        overlaps = np.abs(eff_states.conj().T @ modes) ** 2
        idx = np.argmax(overlaps, axis=1)
        ref = quasi[idx[0]]
        diffs = np.empty(n_levels)
        for n in range(1, n_levels + 1):
            raw = quasi[idx[n]] - ref
            # differences are defined mod the folding zone; report the
            # branch whose magnitude is nearest the effective |E_n - E_0|
            target = eff_diffs[n - 1]
            cands = []
            for k0 in (round((target - raw) / fold), round((-target - raw) / fold)):
                for k in (k0 - 1, k0, k0 + 1):
                    cands.append(abs(raw + k * fold))
            diffs[n - 1] = min(cands, key=lambda v: abs(v - target))
        return diffs, quasi[idx]

    n_steps = n_steps_init
    diffs, folded = run(n_steps)
    for _ in range(max_doublings):
        n_steps *= 2
        new_diffs, folded = run(n_steps)
        if np.max(np.abs(new_diffs - diffs)) < conv_tol_factor * omega_d:
            diffs = new_diffs
            break
        diffs = new_diffs
    return FloquetResult(diffs, eff_diffs, folded, omega_d, n_steps)


@dataclass(frozen=True)
class RampSchedule:
    """tanh-shaped rise of the two-photon drive from 0 to its target."""

    eps2_ratio_final: float
    duration: float  # us
    sharpness: float = 2.5

    def fraction(self, t: float) -> float:
        a = self.sharpness
        lo = math.tanh(-a)
        return (math.tanh(a * (2.0 * t / self.duration - 1.0)) - lo) / (math.tanh(a) - lo)


@dataclass(frozen=True)
class RampResult:
    times: np.ndarray
    overlap: np.ndarray
    photon_number: np.ndarray
    eps2_ratio_final: float


def adiabatic_ramp(
    c: CircuitParams,
    schedule: RampSchedule,
    space: FockSpace,
    n_records: int = 161,
    rtol: float = 1e-9,
    atol: float = 1e-11,
) -> RampResult:
    """Integrate the Schroedinger equation from |0> while eps2 (and with it
    Lambda) tracks the modulation-depth ramp; Delta stays pinned at 0.

    Records the overlap with the instantaneous even cat |C_alpha(t)+>,
    alpha(t) = sqrt(eps2(t)/K), and the photon number.
    """
    eff0 = sts_effective_params(c)
    # eps2 is linear in delta_phi; get slopes at the final modulation depth
    ref = sts_effective_params(
        CircuitParams(c.E_J1, c.E_J2, c.E_J3, c.E_C, 0.1, eff0.omega_d, c.M, c.N, c.topology)
    )
    eps2_slope = ref.eps2 / 0.1
    lambda_slope = ref.Lambda / 0.1
    K = ref.K
    eps2_final = schedule.eps2_ratio_final * K

    a, adag, num = (op.data for op in ladder_ops(space))
    h_kerr = -K * (adag @ adag @ a @ a)
    h_sq = adag @ adag + a @ a
    h_cub = adag @ a @ a @ a + adag @ adag @ adag @ a

    def h_at(t):
        eps2 = eps2_final * schedule.fraction(t)
        lam = lambda_slope * (eps2 / eps2_slope)
        return h_kerr + eps2 * h_sq + lam * h_cub

    def rhs(t, y):
        return -1j * (h_at(t) @ y)

    psi0 = np.zeros(space.dim, dtype=complex)
    psi0[0] = 1.0
    times = np.linspace(0.0, schedule.duration, n_records)
    sol = solve_ivp(rhs, (0.0, schedule.duration), psi0, t_eval=times, rtol=rtol, atol=atol)
    if not sol.success:
        raise IntegratorError(f"ramp integration failed: {sol.message}")
    norms = np.linalg.norm(sol.y, axis=0)
    if np.max(np.abs(norms - 1.0)) > 1e-8:
        raise IntegratorError(f"ramp norm drifted by {np.max(np.abs(norms - 1.0)):.2e}")

    overlap = np.empty(n_records)
    nbar = np.empty(n_records)
    for i, t in enumerate(times):
        psi = sol.y[:, i]
        eps2 = eps2_final * schedule.fraction(t)
        alpha = math.sqrt(max(eps2, 0.0) / K)
        target = cat_state(alpha, "+", space)
        overlap[i] = abs(np.vdot(target.amplitudes, psi)) ** 2
        nbar[i] = float(np.vdot(psi, num @ psi).real)
    return RampResult(times, overlap, nbar, schedule.eps2_ratio_final)
