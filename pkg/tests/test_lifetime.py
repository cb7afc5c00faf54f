import math
from dataclasses import replace

import numpy as np
import pytest

from kerrcat.circuit import CircuitParams, sts_effective_params
from kerrcat.dissipation import BathSpec, DissipatorTerm, catalog
from kerrcat.fock import FockSpace, ladder_ops
from kerrcat.hamiltonian import STS_EFFECTIVE, HamiltonianSpec, build_static
from kerrcat.lifetime import (
    SweepConfig,
    T_ALPHA_CAP_US,
    coherence_block,
    lifetime_point,
    slowest_ground_mode,
    staircase_features,
    sweep,
    t_alpha,
)
from kerrcat.liouvillian import MasterEquation, slowest_coherence_rate
from kerrcat.units import TWO_PI

WD = TWO_PI * 12000.0


def bath(kappa=8e-3, T=0.05):
    return BathSpec(omega_d=WD, kappa_default=kappa, temperature_default=T)


def circuit(dphi=0.01, M=10, N=10):
    return CircuitParams.symmetric(80000.0, 250.0, dphi, omega_d=WD, M=M, N=N)


def h_and_terms(e2k, dset="o2-rwa", M=10, N=10, space=None, gamma_phi=0.0):
    base = circuit(M=M, N=N)
    pref = sts_effective_params(base)
    dphi = e2k * pref.K / (pref.eps2 / 0.01)
    c = replace(base, delta_phi=dphi)
    p, terms = catalog(dset, c, bath(), space, gamma_phi=gamma_phi)
    p = replace(p, Delta=0.0)
    H = build_static(HamiltonianSpec(STS_EFFECTIVE, p, space))
    return H, terms


def test_closed_block_eigenvalues_are_rotations():
    sp = FockSpace(30)
    H, _ = h_and_terms(2.0, space=sp)
    blk = coherence_block(H, [], 4)
    vals = np.linalg.eigvals(blk.matrix)
    expect = np.sort(np.concatenate([blk.deltas, -blk.deltas]))
    assert np.max(np.abs(vals.real)) <= 1e-12 * max(np.max(np.abs(blk.deltas)), 1.0)
    assert np.allclose(np.sort(vals.imag), expect, atol=1e-10)


def test_zero_drive_matches_fock_superposition_lifetime():
    # eps2 -> 0: T_alpha is the (|0>+|1>)/sqrt(2) coherence lifetime; the
    # analytic 2-level rate is Ups/2 + 3 gamma/2 (loss and heating
    # anticommutators), and the cross feeds vanish on the ground pair
    sp = FockSpace(20)
    a, adag, _ = ladder_ops(sp)
    ups, gam = 8e-3 * (1 + 0.003), 8e-3 * 0.003
    terms = (DissipatorTerm(ups, a, "loss"), DissipatorTerm(gam, adag, "heat"))
    H, _ = h_and_terms(1e-7, space=sp)
    blk = coherence_block(H, terms, 2)
    rate = -slowest_ground_mode(blk).eigenvalue.real
    analytic = ups / 2.0 + 3.0 * gam / 2.0
    assert rate == pytest.approx(analytic, rel=2e-2)
    me = MasterEquation(H, terms, sp)
    assert rate == pytest.approx(-slowest_coherence_rate(me).real, rel=1e-6)


@pytest.mark.parametrize("dset", ["o2-rwa", "o2", "o34"])
def test_block_matches_full_oracle(dset):
    sp = FockSpace(20)
    H, terms = h_and_terms(1.8, dset=dset, space=sp)
    blk = coherence_block(H, terms, 8)
    lam_blk = slowest_ground_mode(blk).eigenvalue
    lam_full = slowest_coherence_rate(MasterEquation(H, tuple(terms), sp))
    assert lam_blk.real == pytest.approx(lam_full.real, rel=1e-2)


def test_t_alpha_caps_closed_system():
    sp = FockSpace(24)
    H, _ = h_and_terms(2.0, space=sp)
    blk = coherence_block(H, [], 4)
    assert t_alpha(blk) == T_ALPHA_CAP_US


def test_lifetime_point_converges_m_lv_and_dim():
    cfg = SweepConfig(circuit=circuit(), bath=bath())
    pt = lifetime_point(cfg, "eps2_ratio", 6.0)
    assert pt.dim >= 48
    assert pt.m_lv >= 4
    assert 30000 < pt.t_alpha_us < 45000


def test_sweep_is_deterministic_and_ordered():
    cfg = SweepConfig(circuit=circuit(), bath=bath())
    xs = [0.5, 1.5, 2.5]
    a = sweep("eps2_ratio", xs, cfg)
    b = sweep("eps2_ratio", xs, cfg)
    assert a.t_alpha_us.tolist() == b.t_alpha_us.tolist()
    assert [p.axis_value for p in a.points] == xs


def test_sweep_records_gaps_without_aborting():
    cfg = SweepConfig(circuit=circuit(), bath=bath())
    sr = sweep("gamma_phi", [1e-5, -1.0, 2e-5], cfg)
    assert sr.points[1].failed and math.isnan(sr.points[1].t_alpha_us)
    assert not sr.points[0].failed and not sr.points[2].failed


def test_scale_covariance_of_plateau():
    c = 3.0
    cfg1 = SweepConfig(circuit=circuit(), bath=bath(kappa=8e-3))
    cfg2 = SweepConfig(circuit=circuit(), bath=bath(kappa=8e-3 * c))
    t1 = lifetime_point(cfg1, "eps2_ratio", 6.0).t_alpha_us
    t2 = lifetime_point(cfg2, "eps2_ratio", 6.0).t_alpha_us
    assert t2 == pytest.approx(t1 / c, rel=1e-2)


def test_eps2_ratio_universality_with_lambda_off():
    # with Lambda = 0, Delta = 0, RWA: equal eps2/K and (gamma, n_th) give
    # equal T_alpha regardless of the absolute Kerr scale
    t = {}
    for M, N in ((10, 10), (2, 2)):
        cfg = SweepConfig(circuit=circuit(M=M, N=N), bath=bath(), zero_lambda=True)
        t[(M, N)] = lifetime_point(cfg, "eps2_ratio", 2.5).t_alpha_us
    assert t[(10, 10)] == pytest.approx(t[(2, 2)], rel=1e-2)


def test_dephasing_monotonicity_pointwise():
    prev = None
    for gphi_k in (0.0, 1e-6, 1e-5, 1e-4):
        cfg = SweepConfig(
            circuit=circuit(), bath=bath(), gamma_phi=gphi_k * TWO_PI * 1.25
        )
        t = lifetime_point(cfg, "eps2_ratio", 5.0).t_alpha_us
        if prev is not None:
            assert t <= prev * (1 + 1e-9)
        prev = t


def test_detuning_spike_at_even_integer():
    cfg = SweepConfig(circuit=circuit(), bath=bath(), dissipators="o2-rwa", eps2_ratio=4.0)
    on = lifetime_point(cfg, "detuning_ratio", 2.0).t_alpha_us
    off = lifetime_point(cfg, "detuning_ratio", 1.0).t_alpha_us
    assert on > 5.0 * off


def test_staircase_features_flat_and_synthetic():
    cfg = SweepConfig(circuit=circuit(), bath=bath())
    xs = np.linspace(0.1, 3.0, 7)

    class FakePoint:
        def __init__(self, x, t):
            self.axis_value = x
            self.t_alpha_us = t
            self.failed = False

    from kerrcat.lifetime import SweepResult

    flat = SweepResult("eps2_ratio", xs, tuple(FakePoint(x, 100.0) for x in xs), cfg)
    feats = staircase_features(flat)
    assert feats.rise_onsets == ()
    assert len(feats.plateaus) == 1
    rising = SweepResult(
        "eps2_ratio", xs, tuple(FakePoint(x, 10.0 ** (2 + x)) for x in xs), cfg
    )
    feats2 = staircase_features(rising)
    assert feats2.plateaus == ()
    assert len(feats2.rise_onsets) >= 1
