"""Hamiltonian construction: static effective operators, the lab-frame
time-dependent operator, and the classical phase-space energy surface.

Static kinds
------------
DKC             Delta n + eps2 (a^dag^2 + a^2) - K a^dag^2 a^2
RKC             DKC at Delta = 0
STS_EFFECTIVE   DKC + Lambda (a^dag a^3 + a^dag^3 a)
SQUID_EFFECTIVE DKC + Lambda (...) + Theta (a^dag^4 + a^4)

The lab-frame operator keeps the transmon cosine expanded to quartic order
*including* its normal-ordering content, so that its quasienergies are
consistent with the -2K term carried by the effective detuning.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .circuit import SQUID, STS, CircuitParams, EffectiveParams
from .errors import HermiticityError, TopologyError
from .fock import FockSpace, Operator, ladder_ops
from .units import mhz_to_angular

DKC = "DKC"
RKC = "RKC"
STS_EFFECTIVE = "STS_EFFECTIVE"
SQUID_EFFECTIVE = "SQUID_EFFECTIVE"
LAB_FRAME = "LAB_FRAME"

_STATIC_KINDS = (DKC, RKC, STS_EFFECTIVE, SQUID_EFFECTIVE)


@dataclass(frozen=True)
class HamiltonianSpec:
    kind: str
    params: object  # EffectiveParams for static kinds, CircuitParams for LAB_FRAME
    space: FockSpace
    exact_drive: bool = False

    def __post_init__(self):
        if self.kind in _STATIC_KINDS and not isinstance(self.params, EffectiveParams):
            raise TypeError(f"{self.kind} needs EffectiveParams")
        if self.kind == LAB_FRAME and not isinstance(self.params, CircuitParams):
            raise TypeError("LAB_FRAME needs CircuitParams")
        if self.kind not in _STATIC_KINDS + (LAB_FRAME,):
            raise ValueError(f"unknown Hamiltonian kind {self.kind!r}")


def _static_matrix(kind: str, p: EffectiveParams, space: FockSpace) -> np.ndarray:
    a, adag, n = (op.data for op in ladder_ops(space))
    sq = adag @ adag + a @ a
    kerr = adag @ adag @ a @ a
    delta = 0.0 if kind == RKC else p.Delta
    h = delta * n + p.eps2 * sq - p.K * kerr
    if kind in (STS_EFFECTIVE, SQUID_EFFECTIVE):
        h = h + p.Lambda * (adag @ a @ a @ a + adag @ adag @ adag @ a)
    if kind == SQUID_EFFECTIVE:
        a4 = a @ a @ a @ a
        h = h + p.Theta * (a4.conj().T + a4)
    return h


def build_static(spec: HamiltonianSpec) -> Operator:
    """Hermitian static effective Hamiltonian for the requested kind."""
    if spec.kind not in _STATIC_KINDS:
        raise ValueError(f"build_static cannot build {spec.kind}")
    h = _static_matrix(spec.kind, spec.params, spec.space)
    op = Operator(spec.space, h)
    if not op.is_hermitian(1e-12):
        raise HermiticityError("static Hamiltonian came out non-Hermitian")
    return op


@dataclass(frozen=True)
class LabFrameParts:
    """Cached matrices so H(t) evaluation is a cheap linear combination.

    transmon:  (eps_c - 2K) n - K a^dag^2 a^2
               (the normal-ordered quartic content of -E_J2 cos(phi); the
               off-diagonal quartic pieces only enter observables at
               O(phi_zps^8) and are dropped, consistent with the -2K the
               effective detuning carries)
    drive(t):  -2 E_Jsig_eff s(t) [ -phi2/2 (a+a^dag)^2
                                    + phi4/(24 M^2) (a+a^dag)^4 ]
    asym(t):   -2 E_Jdel_eff cos(dphi cos w t) [phi (a+a^dag)
                                                - phi^3/(6 M^2) (a+a^dag)^3]
    with s(t) = dphi cos(w t) (linearized) or sin(dphi cos(w t)) (exact).
    """

    circuit: CircuitParams
    space: FockSpace
    exact_drive: bool
    transmon: np.ndarray
    drive_op: np.ndarray
    asym_op: np.ndarray | None
    omega_d: float

    def at(self, t: float) -> np.ndarray:
        mod = self.circuit.delta_phi * math.cos(self.omega_d * t)
        s = math.sin(mod) if self.exact_drive else mod
        h = self.transmon + s * self.drive_op
        if self.asym_op is not None:
            h = h + math.cos(mod) * self.asym_op
        return h


def lab_frame_parts(
    c: CircuitParams,
    space: FockSpace,
    exact_drive: bool = False,
    omega_d: float | None = None,
    include_asymmetry: bool = True,
) -> LabFrameParts:
    if c.topology != STS:
        raise TopologyError("the lab-frame builder covers the STS circuit")
    if omega_d is None:
        if c.omega_d is None:
            raise TopologyError("lab frame needs a concrete omega_d")
        omega_d = c.omega_d
    a, adag, n = (op.data for op in ladder_ops(space))
    x = a + adag
    x2 = x @ x
    x3 = x2 @ x
    x4 = x2 @ x2
    e_c = mhz_to_angular(c.E_C)
    e_j2 = mhz_to_angular(c.E_J2) / c.N
    e_sig = mhz_to_angular(c.E_J_sigma) / c.M
    e_del = mhz_to_angular(c.E_J_delta) / c.M
    phi = (2.0 * e_c / e_j2) ** 0.25
    eps_c = math.sqrt(8.0 * e_c * e_j2)
    kerr = e_c / (2.0 * c.N**2)
    transmon = (eps_c - 2.0 * kerr) * n - kerr * (adag @ adag @ a @ a)
    drive = -2.0 * e_sig * (-(phi**2 / 2.0) * x2 + (phi**4 / (24.0 * c.M**2)) * x4)
    asym = None
    if include_asymmetry and e_del != 0.0:
        asym = -2.0 * e_del * (phi * x - (phi**3 / (6.0 * c.M**2)) * x3)
    return LabFrameParts(c, space, exact_drive, transmon, drive, asym, omega_d)


def build_lab_frame(spec: HamiltonianSpec, t: float) -> Operator:
    """Lab-frame Hamiltonian at time ``t`` (cache LabFrameParts for sweeps)."""
    if spec.kind != LAB_FRAME:
        raise ValueError("build_lab_frame needs kind = LAB_FRAME")
    parts = lab_frame_parts(spec.params, spec.space, spec.exact_drive)
    op = Operator(spec.space, parts.at(t))
    if not op.is_hermitian(1e-12):
        raise HermiticityError("lab-frame Hamiltonian came out non-Hermitian")
    return op


@dataclass(frozen=True)
class SurfaceExtremum:
    x: float
    p: float
    energy: float
    kind: str  # "well" (local max of E_cl), "saddle", "min"


def classical_energy(p: EffectiveParams, x, pp):
    """Classical substitution a -> x + i p (no ordering corrections):

    E_cl = Delta r^2 + 2 eps2 (x^2 - p^2) - K r^4
           + 2 Lambda r^2 (x^2 - p^2) + 2 Theta (x^4 - 6 x^2 p^2 + p^4),
    r^2 = x^2 + p^2.
    """
    x = np.asarray(x, dtype=float)
    pp = np.asarray(pp, dtype=float)
    r2 = x**2 + pp**2
    quad = x**2 - pp**2
    e = p.Delta * r2 + 2.0 * p.eps2 * quad - p.K * r2**2 + 2.0 * p.Lambda * r2 * quad
    if p.Theta:
        e = e + 2.0 * p.Theta * (x**4 - 6.0 * x**2 * pp**2 + pp**4)
    return e


def _grad_hess(p: EffectiveParams, x: float, q: float, h: float = 1e-6):
    def f(u, v):
        return float(classical_energy(p, u, v))

    gx = (f(x + h, q) - f(x - h, q)) / (2 * h)
    gq = (f(x, q + h) - f(x, q - h)) / (2 * h)
    hxx = (f(x + h, q) - 2 * f(x, q) + f(x - h, q)) / h**2
    hqq = (f(x, q + h) - 2 * f(x, q) + f(x, q - h)) / h**2
    hxq = (f(x + h, q + h) - f(x + h, q - h) - f(x - h, q + h) + f(x - h, q - h)) / (4 * h**2)
    return np.array([gx, gq]), np.array([[hxx, hxq], [hxq, hqq]])


def classical_surface(
    p: EffectiveParams, xs: Sequence[float], ps: Sequence[float]
) -> tuple[np.ndarray, list[SurfaceExtremum]]:
    """Energy field on the grid plus located, Newton-refined extrema.

    Wells of the rotating-frame metapotential are local *maxima* of E_cl;
    ties are broken by lowest (x, p) lexicographic order.
    """
    xs = np.asarray(xs, dtype=float)
    ps = np.asarray(ps, dtype=float)
    X, P = np.meshgrid(xs, ps, indexing="ij")
    field = classical_energy(p, X, P)

    # candidates: grid points where |grad E| is a 3x3-neighborhood minimum
    gx, gp = np.gradient(field, xs, ps)
    gmag = np.hypot(gx, gp)
    extrema: list[SurfaceExtremum] = []
    scale = max(abs(p.K), abs(p.eps2), abs(p.Delta), 1e-12)
    for i in range(1, len(xs) - 1):
        for j in range(1, len(ps) - 1):
            if gmag[i, j] > gmag[i - 1 : i + 2, j - 1 : j + 2].min():
                continue
            pt = np.array([X[i, j], P[i, j]])
            for _ in range(60):
                g, hess = _grad_hess(p, pt[0], pt[1])
                try:
                    step = np.linalg.solve(hess, g)
                except np.linalg.LinAlgError:
                    break
                pt = pt - step
                if np.linalg.norm(step) < 1e-12:
                    break
            g, hess = _grad_hess(p, pt[0], pt[1])
            if np.linalg.norm(g) > 1e-5 * scale:
                continue
            if not (xs[0] - 1e-9 <= pt[0] <= xs[-1] + 1e-9 and ps[0] - 1e-9 <= pt[1] <= ps[-1] + 1e-9):
                continue
            if any(abs(pt[0] - e.x) < 1e-6 and abs(pt[1] - e.p) < 1e-6 for e in extrema):
                continue
            evals = np.linalg.eigvalsh(hess)
            if evals[0] > 1e-9 * scale:
                kind = "min"
            elif evals[1] < -1e-9 * scale:
                kind = "well"
            else:
                kind = "saddle"
            e_val = float(classical_energy(p, pt[0], pt[1]))
            extrema.append(SurfaceExtremum(float(pt[0]), float(pt[1]), e_val, kind))
    extrema.sort(key=lambda e: (round(e.x, 9), round(e.p, 9)))
    return field, extrema
