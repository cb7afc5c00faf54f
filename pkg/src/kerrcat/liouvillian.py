"""Dense vectorized master-equation engine.

Vectorization is row-major: vec(rho)[i*d + j] = rho[i, j], under which

    L = -i (H (x) I - I (x) H^T)
        + sum_l r_l [ O (x) O* - 1/2 (O^dag O (x) I + I (x) (O^dag O)^T) ]

acting on vec(rho) reproduces the GKLS equation.  This is the project-wide
convention; only internal consistency depends on it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import eig, lu_factor, lu_solve

from .dissipation import DissipatorTerm
from .errors import IntegratorError, ResourceGuardError
from .fock import DensityMatrix, FockSpace, Operator

_DIM_GUARD_SUPEROP = 128
_DIM_GUARD_EIG = 40


@dataclass(frozen=True)
class MasterEquation:
    H: Operator
    terms: tuple[DissipatorTerm, ...]
    space: FockSpace

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        for t in self.terms:
            if t.jump.space.dim != self.space.dim:
                raise ResourceGuardError("dissipator jump lives on a different space")
        if self.H.space.dim != self.space.dim:
            raise ResourceGuardError("Hamiltonian lives on a different space")


def build_superoperator(me: MasterEquation, allow_large: bool = False) -> np.ndarray:
    """Dense d^2 x d^2 Liouvillian matrix."""
    d = me.space.dim
    if d > _DIM_GUARD_SUPEROP and not allow_large:
        raise ResourceGuardError(f"dim {d} > {_DIM_GUARD_SUPEROP}; pass allow_large=True to override")
    eye = np.eye(d)
    h = me.H.data
    lio = -1j * (np.kron(h, eye) - np.kron(eye, h.T))
    for t in me.terms:
        o = t.jump.data
        odo = o.conj().T @ o
        lio += t.rate * (
            np.kron(o, o.conj()) - 0.5 * (np.kron(odo, eye) + np.kron(eye, odo.T))
        )
    return lio


def apply_me(me: MasterEquation, rho: np.ndarray) -> np.ndarray:
    """Action of the generator on a density matrix without forming L."""
    h = me.H.data
    out = -1j * (h @ rho - rho @ h)
    for t in me.terms:
        o = t.jump.data
        orho = o @ rho
        odo = o.conj().T @ o
        out += t.rate * (orho @ o.conj().T - 0.5 * (odo @ rho + rho @ odo))
    return out


def evolve(
    me: MasterEquation,
    rho0: DensityMatrix,
    t_grid,
    rtol: float = 1e-9,
    atol: float = 1e-12,
) -> list[DensityMatrix]:
    """Integrate rho(t) on the given time grid (us)."""
    d = me.space.dim
    t_grid = np.asarray(t_grid, dtype=float)

    def rhs(_t, y):
        rho = y.reshape(d, d)
        return apply_me(me, rho).reshape(-1)

    y0 = rho0.data.reshape(-1).astype(complex)
    sol = solve_ivp(rhs, (t_grid[0], t_grid[-1]), y0, t_eval=t_grid, rtol=rtol, atol=atol)
    if not sol.success:
        raise IntegratorError(f"master-equation integration failed: {sol.message}")
    out = []
    for k in range(sol.y.shape[1]):
        rho = sol.y[:, k].reshape(d, d)
        tr = rho.trace().real
        herm = np.max(np.abs(rho - rho.conj().T))
        if abs(tr - 1.0) > 1e-6 or herm > 1e-6:
            raise IntegratorError(f"trace/hermiticity drift: dtr={tr - 1.0:.2e}, herm={herm:.2e}")
        rho = 0.5 * (rho + rho.conj().T)
        out.append(DensityMatrix(me.space, rho / rho.trace().real, validate=False))
    return out


@dataclass(frozen=True)
class SteadyAnalysis:
    rho_ss: DensityMatrix
    probabilities: np.ndarray  # descending
    p_leak: float
    kernel_residual: float


def steady_state(me: MasterEquation, allow_large: bool = False) -> SteadyAnalysis:
    """Null vector of L with unit trace, via shifted inverse iteration with
    a least-squares fallback; then the spectrum of rho_ss."""
    d = me.space.dim
    lio = build_superoperator(me, allow_large=allow_large)
    n2 = d * d
    scale = np.max(np.abs(lio))
    shift = 1e-12 * scale
    rng = np.random.default_rng(7)
    v = np.eye(d, dtype=complex).reshape(-1) / d + 1e-3 * rng.standard_normal(n2)
    v /= np.linalg.norm(v)
    try:
        lufac = lu_factor(lio - shift * np.eye(n2))
        for _ in range(40):
            v_new = lu_solve(lufac, v)
            v_new /= np.linalg.norm(v_new)
            if np.linalg.norm(v_new - v * np.vdot(v, v_new)) < 1e-14:
                v = v_new
                break
            v = v_new
        residual = float(np.linalg.norm(lio @ v) / max(scale, 1e-300))
    except np.linalg.LinAlgError:
        residual = math.inf
    if not residual < 1e-8:
        # least squares with the trace constraint appended
        tr_row = np.eye(d, dtype=complex).reshape(1, -1)
        aug = np.vstack([lio, tr_row])
        rhs_vec = np.zeros(n2 + 1, dtype=complex)
        rhs_vec[-1] = 1.0
        v, *_ = np.linalg.lstsq(aug, rhs_vec, rcond=None)
        residual = float(np.linalg.norm(lio @ v) / max(scale, 1e-300))
    rho = v.reshape(d, d)
    rho = 0.5 * (rho + rho.conj().T)
    rho = rho / rho.trace().real
    probs = np.sort(np.linalg.eigvalsh(rho).real)[::-1]
    p_leak = float(1.0 - probs[0] - probs[1])
    return SteadyAnalysis(
        DensityMatrix(me.space, rho, validate=False), probs, p_leak, residual
    )


def coherence_sector_matrix(me: MasterEquation, allow_large: bool = False) -> np.ndarray:
    """Restriction of L to the odd-parity superoperator sector, the span of
    |even><odd| and |odd><even|.  Valid because every catalog jump operator
    has definite photon parity, so L commutes with rho -> P rho P."""
    d = me.space.dim
    par = (-1) ** np.arange(d)
    for t in me.terms:
        j = t.jump.data
        sym = par[:, None] * j * par[None, :]
        if not (np.allclose(sym, j, atol=1e-12) or np.allclose(sym, -j, atol=1e-12)):
            raise ResourceGuardError(
                f"jump {t.label} has indefinite parity; sector restriction invalid"
            )
    lio = build_superoperator(me, allow_large=allow_large)
    mask = (par[:, None] * par[None, :]).reshape(-1) < 0
    idx = np.where(mask)[0]
    return lio[np.ix_(idx, idx)]


def slowest_coherence_rate(
    me: MasterEquation,
    allow_large: bool = False,
    ground_weighted: bool = True,
    weight_threshold: float = 0.5,
) -> complex:
    """Least-negative-real-part eigenvalue of L restricted to the coherence
    (odd-parity) sector; T = 1 / (-Re lambda).  Dense eigensolve, guarded at
    dim <= 40.

    With ``ground_weighted`` (default) only modes carrying dominant weight
    on the ground-pair coherence |psi_0+><psi_0-| are considered, matching
    the mode the coherence-block T_alpha tracks; detuned systems can have
    excited-pair coherences that decay even more slowly, and those are not
    the cat observable.  ``ground_weighted=False`` returns the raw slowest
    coherence-sector eigenvalue.
    """
    if me.space.dim > _DIM_GUARD_EIG and not allow_large:
        raise ResourceGuardError(
            f"dim {me.space.dim} > {_DIM_GUARD_EIG}; use the coherence-block method instead"
        )
    block = coherence_sector_matrix(me, allow_large=allow_large)
    if not ground_weighted:
        vals = eig(block, right=False)
        return complex(vals[np.argmax(vals.real)])
    from .spectra import paired_spectrum  # deferred: spectra imports nothing from here

    d = me.space.dim
    par = (-1) ** np.arange(d)
    idx = np.where((par[:, None] * par[None, :]).reshape(-1) < 0)[0]
    ps = paired_spectrum(me.H, 1)
    e_up = np.outer(ps.vectors_even[:, 0], ps.vectors_odd[:, 0].conj()).reshape(-1)[idx]
    e_dn = np.outer(ps.vectors_odd[:, 0], ps.vectors_even[:, 0].conj()).reshape(-1)[idx]
    vals, vecs = eig(block)
    best = None
    for k in range(len(vals)):
        v = vecs[:, k]
        w = (abs(np.vdot(e_up, v)) ** 2 + abs(np.vdot(e_dn, v)) ** 2) / np.vdot(v, v).real
        if w > weight_threshold and (best is None or vals[k].real > best.real):
            best = vals[k]
    if best is None:
        raise ResourceGuardError("no coherence mode with dominant ground-pair weight")
    return complex(best)
