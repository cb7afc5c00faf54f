import numpy as np
import pytest
from scipy.linalg import eigh

from kerrcat.circuit import CircuitParams, EffectiveParams, sts_effective_params
from kerrcat.errors import ParityError
from kerrcat.fock import FockSpace, ladder_ops
from kerrcat.hamiltonian import STS_EFFECTIVE, HamiltonianSpec, build_static
from kerrcat.spectra import (
    RampSchedule,
    adiabatic_ramp,
    degeneracy_scan,
    floquet_quasienergies,
    paired_spectrum,
)
from kerrcat.units import TWO_PI

K = TWO_PI * 1.25


def params(delta=0.0, eps2=0.0, lam=0.0):
    return EffectiveParams(
        Delta=delta * K, eps2=eps2 * K, K=K, Lambda=lam * K, Theta=0.0,
        eps_c=0.0, phi_zps=0.3, G1=0.0, G1t=0.0, G2=0.0, G3=0.0, G4=0.0,
        delta_ext=0.0, omega_d=TWO_PI * 12000.0,
    )


def h_static(sp, **kw):
    return build_static(HamiltonianSpec(STS_EFFECTIVE, params(**kw), sp))


def test_kerr_only_ground_pair_degenerate():
    # n = 0 and n = 1 both sit at -K n(n-1) = 0
    ps = paired_spectrum(h_static(FockSpace(20)), 3)
    assert ps.splittings[0] == pytest.approx(0.0, abs=1e-14)


def test_rkc_ground_splitting_exponentially_small():
    ps = paired_spectrum(h_static(FockSpace(40), eps2=2.0), 3)
    assert abs(ps.splittings[0]) / K < 1e-6


def test_paired_spectrum_matches_full_diagonalization():
    # oracle: the union of the parity-block levels equals a brute-force
    # dense diagonalization of the full matrix, to 1e-10 relative
    sp = FockSpace(30)
    H = h_static(sp, delta=1.3, eps2=1.7, lam=0.05)
    ps = paired_spectrum(H, sp.dim // 2)
    full = np.sort(eigh(H.data, eigvals_only=True))
    e_ref = eigh(H.data[::2, ::2], eigvals_only=True).max()
    ours = np.sort(np.concatenate([ps.levels_even, ps.levels_odd]) + e_ref)
    scale = np.max(np.abs(full))
    assert np.allclose(ours, full, atol=1e-10 * scale)


def test_paired_spectrum_vectors_have_definite_parity():
    sp = FockSpace(24)
    ps = paired_spectrum(h_static(sp, eps2=2.0), 5)
    par = (-1.0) ** np.arange(24)
    for m in range(5):
        ve = ps.vectors_even[:, m]
        vo = ps.vectors_odd[:, m]
        assert np.vdot(ve, par * ve).real == pytest.approx(1.0, abs=1e-8)
        assert np.vdot(vo, par * vo).real == pytest.approx(-1.0, abs=1e-8)


def test_paired_spectrum_rejects_parity_breaking():
    sp = FockSpace(10)
    a, adag, _ = ladder_ops(sp)
    H = h_static(sp, eps2=1.0) + 0.3 * K * (a + adag)
    with pytest.raises(ParityError):
        paired_spectrum(H, 2)


@pytest.mark.parametrize("m", [0, 1, 2, 3])
def test_exact_degeneracies_at_even_detuning(m):
    # Delta = 2mK: pairs 0..m exactly degenerate, independent of eps2
    sp = FockSpace(40)
    for e2k in (0.5, 2.0, 3.5):
        ps = paired_spectrum(h_static(sp, delta=2.0 * m, eps2=e2k), m + 2)
        zeros = np.sum(np.abs(ps.splittings) < 1e-6 * K)
        assert zeros == m + 1


def test_degeneracy_scan_cluster_counting():
    sp = FockSpace(40)

    def h_of(dk):
        return h_static(sp, delta=dk, eps2=2.0)

    crossings = degeneracy_scan(h_of, np.arange(-0.5, 8.55, 0.1), 5, tol_cross=1e-6 * K)
    clusters = {}
    for c in crossings:
        clusters.setdefault(round(c.axis_value), set()).add(c.pair_index)
    for m in range(4):
        assert len(clusters[2 * m]) == m + 1
        for c in crossings:
            if round(c.axis_value) == 2 * m:
                assert abs(c.axis_value - 2 * m) < 1e-3


def test_degeneracy_scan_bare_kerr_even_integers():
    # eps2 = 0: level coincidences of Delta n - K n(n-1) at even Delta/K
    sp = FockSpace(30)

    def h_of(dk):
        return h_static(sp, delta=dk, eps2=0.0)

    crossings = degeneracy_scan(h_of, np.arange(0.5, 6.6, 0.25), 3, tol_cross=1e-6 * K)
    for c in crossings:
        nearest_even = 2 * round(c.axis_value / 2)
        assert c.axis_value == pytest.approx(nearest_even, abs=1e-6)


def test_degeneracy_shift_grows_with_eps2():
    sp = FockSpace(40)
    locs = []
    for e2k in (1.0, 2.0, 3.0):
        def h_of(dk, e=e2k):
            return h_static(sp, delta=dk, eps2=e, lam=0.12)

        crossings = degeneracy_scan(h_of, np.arange(0.8, 2.6, 0.05), 2, tol_cross=1e-6 * K)
        first = [c.axis_value for c in crossings if c.pair_index == 0]
        locs.append(first[0])
    shifts = [abs(2.0 - x) for x in locs]
    assert shifts[0] < shifts[1] < shifts[2]


def circuit_7p81(dphi):
    return CircuitParams.symmetric(80000.0, 250.0, dphi, M=4, N=4)


def test_floquet_zero_drive_matches_static():
    c = circuit_7p81(0.0)
    res = floquet_quasienergies(c, FockSpace(40), 5)
    assert np.max(np.abs(res.quasi - res.effective)) <= 1e-8 * np.max(res.effective)
    assert res.n_steps >= 512


def test_floquet_agreement_at_strong_drive():
    pref = sts_effective_params(circuit_7p81(0.01))
    dphi = 4.0 * pref.K / (pref.eps2 / 0.01)
    res = floquet_quasienergies(circuit_7p81(dphi), FockSpace(50), 6)
    assert np.max(np.abs(res.quasi - res.effective)) / pref.K < 0.1


def test_floquet_self_convergence():
    pref = sts_effective_params(circuit_7p81(0.01))
    dphi = 2.0 * pref.K / (pref.eps2 / 0.01)
    c = circuit_7p81(dphi)
    res_a = floquet_quasienergies(c, FockSpace(40), 4, n_steps_init=256)
    res_b = floquet_quasienergies(c, FockSpace(40), 4, n_steps_init=res_a.n_steps)
    assert np.max(np.abs(res_a.quasi - res_b.quasi)) < 1e-8 * res_a.omega_d


def test_ramp_zero_length_identity():
    c = circuit_7p81(1e-9)
    res = adiabatic_ramp(c, RampSchedule(0.0, 1e-6), FockSpace(20), n_records=3)
    assert res.overlap[-1] == pytest.approx(1.0, abs=1e-9)
    assert res.photon_number[-1] == pytest.approx(0.0, abs=1e-9)


def test_ramp_slower_is_better():
    pref = sts_effective_params(circuit_7p81(0.01))
    dphi = 4.0 * pref.K / (pref.eps2 / 0.01)
    c = circuit_7p81(dphi)
    base = 4.0 / pref.K
    finals = []
    for mult in (1.0, 2.0, 4.0):
        res = adiabatic_ramp(c, RampSchedule(4.0, base * mult), FockSpace(30), n_records=5)
        finals.append(res.overlap[-1])
    assert finals[0] < finals[1] < finals[2]
