"""Truncated Fock-space linear algebra: operators, states, Wigner functions.

Everything is dense double-precision complex.  All values are immutable
after construction and safe to share across threads; callers parallelize
over independent instances.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .errors import (
    DegenerateCatError,
    HermiticityError,
    InvalidSpaceError,
    SpaceMismatchError,
    TruncationRiskError,
)

_HERM_TOL = 1e-12
_NORM_TOL = 1e-10


@dataclass(frozen=True)
class FockSpace:
    """A bosonic Hilbert space truncated to ``dim`` Fock levels."""

    dim: int

    def __post_init__(self):
        if not isinstance(self.dim, (int, np.integer)) or self.dim < 2:
            raise InvalidSpaceError(f"Fock dimension must be an integer >= 2, got {self.dim!r}")


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr, dtype=complex)
    arr.setflags(write=False)
    return arr


def _check_same_space(a, b):
    if a.space.dim != b.space.dim:
        raise SpaceMismatchError(f"dimension mismatch: {a.space.dim} vs {b.space.dim}")


@dataclass(frozen=True)
class Operator:
    """Dense operator on a truncated Fock space."""

    space: FockSpace
    data: np.ndarray

    def __post_init__(self):
        d = self.space.dim
        data = np.asarray(self.data, dtype=complex)
        if data.shape != (d, d):
            raise InvalidSpaceError(f"operator shape {data.shape} does not match dim {d}")
        object.__setattr__(self, "data", _freeze(data))

    def dagger(self) -> "Operator":
        return Operator(self.space, self.data.conj().T)

    def is_hermitian(self, tol: float = _HERM_TOL) -> bool:
        scale = np.max(np.abs(self.data))
        if scale == 0.0:
            return True
        return np.max(np.abs(self.data - self.data.conj().T)) <= tol * scale

    def require_hermitian(self, tol: float = _HERM_TOL) -> "Operator":
        if not self.is_hermitian(tol):
            raise HermiticityError("operator failed the Hermiticity check")
        return self

    def __matmul__(self, other):
        if isinstance(other, Operator):
            _check_same_space(self, other)
            return Operator(self.space, self.data @ other.data)
        if isinstance(other, StateVector):
            _check_same_space(self, other)
            return np.asarray(self.data @ other.amplitudes)
        return NotImplemented

    def __add__(self, other):
        _check_same_space(self, other)
        return Operator(self.space, self.data + other.data)

    def __sub__(self, other):
        _check_same_space(self, other)
        return Operator(self.space, self.data - other.data)

    def __mul__(self, scalar):
        return Operator(self.space, self.data * scalar)

    __rmul__ = __mul__


@dataclass(frozen=True)
class StateVector:
    """Pure state; constructors always leave it unit-normalized."""

    space: FockSpace
    amplitudes: np.ndarray

    def __post_init__(self):
        d = self.space.dim
        amp = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amp.shape != (d,):
            raise InvalidSpaceError(f"state length {amp.shape} does not match dim {d}")
        nrm = float(np.linalg.norm(amp))
        if not math.isfinite(nrm) or nrm < 1e-300:
            raise DegenerateCatError("state vector has zero norm")
        object.__setattr__(self, "amplitudes", _freeze(amp / nrm))

    def overlap(self, other: "StateVector") -> complex:
        _check_same_space(self, other)
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def expectation(self, op: Operator) -> complex:
        _check_same_space(self, op)
        return complex(np.vdot(self.amplitudes, op.data @ self.amplitudes))

    def to_density_matrix(self) -> "DensityMatrix":
        return DensityMatrix(self.space, np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, (numerically) positive operator."""

    space: FockSpace
    data: np.ndarray
    validate: bool = field(default=True, repr=False)

    def __post_init__(self):
        d = self.space.dim
        data = np.asarray(self.data, dtype=complex)
        if data.shape != (d, d):
            raise InvalidSpaceError(f"density matrix shape {data.shape} does not match dim {d}")
        if self.validate:
            scale = max(np.max(np.abs(data)), 1e-300)
            if np.max(np.abs(data - data.conj().T)) > 1e-9 * scale:
                raise HermiticityError("density matrix is not Hermitian")
            tr = data.trace().real
            if abs(tr - 1.0) > 1e-9:
                raise HermiticityError(f"density matrix trace {tr} != 1")
            evals = np.linalg.eigvalsh(0.5 * (data + data.conj().T))
            if evals.min() < -1e-9:
                raise HermiticityError(f"density matrix has eigenvalue {evals.min()} < 0")
        object.__setattr__(self, "data", _freeze(data))

    def expectation(self, op: Operator) -> complex:
        _check_same_space(self, op)
        return complex(np.trace(self.data @ op.data))

    def purity(self) -> float:
        return float(np.trace(self.data @ self.data).real)


def ladder_ops(space: FockSpace) -> tuple[Operator, Operator, Operator]:
    """Return (a, a_dagger, n) with a[n-1, n] = sqrt(n)."""
    d = space.dim
    a = np.zeros((d, d), dtype=complex)
    ns = np.arange(1, d)
    a[ns - 1, ns] = np.sqrt(ns)
    adag = a.conj().T
    num = np.diag(np.arange(d).astype(complex))
    return Operator(space, a), Operator(space, adag), Operator(space, num)


def parity_operator(space: FockSpace) -> Operator:
    """Photon parity P = (-1)^n; an involution that commutes with every
    Hamiltonian built from even products of (a, a_dagger)."""
    signs = (-1.0) ** np.arange(space.dim)
    return Operator(space, np.diag(signs.astype(complex)))


def suggested_dim(alpha: complex) -> int:
    """Smallest dimension satisfying the |alpha|^2 <= dim/4 adequacy rule."""
    return max(2, int(math.ceil(4.0 * abs(alpha) ** 2)) + 1)


def coherent_state(alpha: complex, space: FockSpace) -> StateVector:
    """Coherent state |alpha>, c_n = exp(-|a|^2/2) a^n / sqrt(n!), renormalized
    after truncation.  Requires |alpha|^2 <= dim/4."""
    d = space.dim
    if abs(alpha) ** 2 > d / 4.0:
        raise TruncationRiskError(
            f"|alpha|^2 = {abs(alpha)**2:.3f} exceeds dim/4 = {d / 4}",
            suggested_dim=suggested_dim(alpha),
        )
    ns = np.arange(d)
    # log-domain to stay finite for moderate alpha
    if alpha == 0:
        amp = np.zeros(d, dtype=complex)
        amp[0] = 1.0
        return StateVector(space, amp)
    log_mag = ns * math.log(abs(alpha)) - 0.5 * np.array([math.lgamma(n + 1) for n in ns])
    phase = np.exp(1j * np.angle(alpha) * ns)
    amp = np.exp(log_mag - 0.5 * abs(alpha) ** 2) * phase
    return StateVector(space, amp)


def cat_state(alpha: complex, parity, space: FockSpace) -> StateVector:
    """Even/odd cat (|alpha> +/- |-alpha>) / sqrt(2(1 +/- exp(-2 alpha^2)))."""
    sign = {"+": 1, "-": -1, 1: 1, -1: -1}.get(parity)
    if sign is None:
        raise ValueError(f"parity must be '+' or '-', got {parity!r}")
    if alpha == 0 and sign == -1:
        raise DegenerateCatError("odd cat at alpha = 0 is the zero vector")
    plus = coherent_state(alpha, space)
    minus = coherent_state(-alpha, space)
    amp = plus.amplitudes + sign * minus.amplitudes
    return StateVector(space, amp)


@dataclass(frozen=True)
class TruncationReport:
    """Adequacy diagnostic: population in the top 10% of Fock levels."""

    tail_population: float
    adequate: bool
    dim: int


def truncation_diagnostic(obj, threshold: float = 1e-8) -> TruncationReport:
    """Population of the top 10% of Fock levels; adequate when < threshold."""
    if isinstance(obj, StateVector):
        pops = np.abs(obj.amplitudes) ** 2
    elif isinstance(obj, DensityMatrix):
        pops = np.abs(np.diag(obj.data))
    else:
        pops = np.abs(np.asarray(obj).reshape(-1)) ** 2
        pops = pops / pops.sum()
    d = len(pops)
    cut = max(1, d - max(1, d // 10))
    tail = float(np.sum(pops[cut:]))
    return TruncationReport(tail, tail < threshold, d)


def displacement_operator(beta: complex, space: FockSpace) -> np.ndarray:
    """D(beta) = exp(beta a_dag - beta* a), exact on the truncated space."""
    a, adag, _ = ladder_ops(space)
    return expm(beta * adag.data - np.conj(beta) * a.data)


def _exp_ladder_block(z: complex, rows: int, cols: int, lgam: np.ndarray) -> np.ndarray:
    """Rows 0..rows-1, columns 0..cols-1 of exp(z a_dag) times exp(-|z|^2/4):

        <m| e^{z a_dag} |n> = z^(m-n) sqrt(m!/n!) / (m-n)!   for m >= n.

    Built in the log domain so large working dimensions stay finite.
    """
    if z == 0:
        out = np.zeros((rows, cols), dtype=complex)
        np.fill_diagonal(out, 1.0)
        return out
    m = np.arange(rows)[:, None]
    n = np.arange(cols)[None, :]
    k = m - n
    valid = k >= 0
    kk = np.where(valid, k, 0)
    log_mag = kk * math.log(abs(z)) + 0.5 * (lgam[m] - lgam[n]) - lgam[kk] - abs(z) ** 2 / 4.0
    phase = np.exp(1j * np.angle(z) * kk)
    return np.where(valid, np.exp(log_mag) * phase, 0.0)


def wigner(rho: DensityMatrix, xs, ps, check_mass: bool = True) -> np.ndarray:
    """Displaced-parity Wigner function on a rectangular grid.

    W(beta) = (2/pi) Tr[rho D(beta) P D(beta)^dag] with beta = x + i p, so
    the blobs of |+/-alpha> (real alpha) sit at x = +/-alpha.  Returns an
    array of shape (len(xs), len(ps)).

    The displacement is evaluated through its exact factored form
    D(beta) = e^{-|beta|^2/2} e^{beta a_dag} e^{-beta* a} on a working
    dimension large enough that it is faithful out to the grid corners
    (displacing a state of support n_eff by beta needs roughly
    (|beta| + sqrt(n_eff))^2 levels); the values are then exact for the
    stored state.  If the grid misses enough mass that the sampled
    integral deviates from 1 by more than 5%, a warning is emitted.
    """
    xs = np.asarray(xs, dtype=float)
    ps = np.asarray(ps, dtype=float)
    d = rho.space.dim
    pops = np.abs(np.diag(rho.data))
    csum = np.cumsum(pops)
    n_eff = int(np.searchsorted(csum, csum[-1] * (1.0 - 1e-12))) + 1
    b_max = math.hypot(max(abs(xs[0]), abs(xs[-1])), max(abs(ps[0]), abs(ps[-1])))
    d_work = max(d, int(math.ceil((b_max + math.sqrt(n_eff) + 2.0) ** 2)) + 4)
    signs = (-1.0) ** np.arange(d_work)
    lgam = np.array([math.lgamma(i + 1) for i in range(d_work + 1)])
    rho_t = rho.data.T.copy()
    w = np.empty((len(xs), len(ps)))
    for i, x in enumerate(xs):
        for j, p in enumerate(ps):
            beta = x + 1j * p
            up = _exp_ladder_block(beta, d, d, lgam)  # e^{beta a_dag} block
            dn = _exp_ladder_block(-np.conj(beta), d_work, d, lgam).T  # e^{-beta* a}
            rows = up @ dn  # D(beta)[:d, :]
            m = (rows * signs[None, :]) @ rows.conj().T
            w[i, j] = (2.0 / math.pi) * np.sum(rho_t * m).real
    if check_mass and len(xs) > 2 and len(ps) > 2:
        mass = np.trapezoid(np.trapezoid(w, ps, axis=1), xs)
        if abs(mass - 1.0) > 0.05:
            warnings.warn(
                f"Wigner grid captures integral {mass:.4f}; enlarge the grid "
                "to enclose the state's support",
                stacklevel=2,
            )
    return w
