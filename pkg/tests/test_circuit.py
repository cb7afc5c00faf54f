import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kerrcat.circuit import (
    CircuitParams,
    compensation_detuning,
    dilution_scaling,
    drive_harmonics,
    resolve_drive_frequency,
    squid_effective_params,
    sts_effective_params,
    validity_report,
)
from kerrcat.errors import NotATransmonError, TopologyError
from kerrcat.units import TWO_PI, angular_to_mhz

E_J = 80000.0  # 80 GHz per junction
E_C = 250.0


def circuit(dphi=0.1, M=1, N=1, **kw):
    return CircuitParams.symmetric(E_J, E_C, dphi, M=M, N=N, **kw)


def test_single_junction_kerr_is_125_mhz():
    p = sts_effective_params(circuit(dphi=1e-6))
    assert angular_to_mhz(p.K) == pytest.approx(125.0, rel=1e-12)


def test_diluted_kerr_10x10_is_1p25_mhz():
    p = sts_effective_params(circuit(M=10, N=10))
    assert angular_to_mhz(p.K) == pytest.approx(1.25, rel=1e-12)


def test_fig6_caption_m2_n4_kerr():
    p = sts_effective_params(circuit(M=2, N=4))
    assert angular_to_mhz(p.K) == pytest.approx(7.8125, rel=1e-12)
    assert round(angular_to_mhz(p.K), 2) == 7.81


def test_zero_modulation_kills_drive_coefficients():
    p = sts_effective_params(circuit(dphi=0.0))
    assert p.eps2 == 0.0
    assert p.Lambda == 0.0
    assert p.G2 == 0.0


def test_lambda_closed_form_consistency():
    # 4 G4 == -dphi E_C / 3 for the symmetric single-junction STS
    p = sts_effective_params(circuit(dphi=0.1))
    assert p.Lambda == pytest.approx(-0.1 * TWO_PI * E_C / 3.0, rel=1e-12)


def test_eps2_closed_form_consistency():
    p = sts_effective_params(circuit(dphi=0.1))
    closed = 0.1 / 4.0 * (p.eps_c - 2.0 * TWO_PI * E_C)
    assert p.eps2 == pytest.approx(closed, rel=1e-12)


def test_dilution_identity():
    base = sts_effective_params(circuit())
    same = dilution_scaling(base, 1, 1)
    assert same == base


def test_dilution_kerr_quarters_at_n2():
    base = sts_effective_params(circuit())
    d2 = dilution_scaling(base, 1, 2)
    assert d2.K == pytest.approx(base.K / 4.0, rel=1e-12)


def test_dilution_matches_direct_construction():
    base = sts_effective_params(circuit())
    via_scaling = dilution_scaling(base, 2, 4)
    direct = sts_effective_params(circuit(M=2, N=4, omega_d=base.omega_d))
    for field in ("K", "G1", "G2", "G3", "G4", "eps2", "Lambda", "phi_zps", "eps_c"):
        assert getattr(via_scaling, field) == pytest.approx(getattr(direct, field), rel=1e-10)


@settings(max_examples=30, deadline=None)
@given(
    m1=st.integers(1, 3),
    nt1=st.integers(1, 3),
    m2=st.integers(1, 3),
    nt2=st.integers(1, 3),
)
def test_dilution_composition_law(m1, nt1, m2, nt2):
    base = sts_effective_params(circuit())
    once = dilution_scaling(dilution_scaling(base, m1, m1 * nt1), m2, m2 * nt2)
    combined = dilution_scaling(base, m1 * m2, m1 * nt1 * m2 * nt2)
    for field in ("K", "G1", "G2", "G3", "G4", "eps2", "Lambda", "phi_zps"):
        assert getattr(once, field) == pytest.approx(getattr(combined, field), rel=1e-10)


def test_squid_leading_order_relations():
    dphi = 0.02
    sts = sts_effective_params(circuit(dphi=dphi))
    sq = squid_effective_params(circuit(dphi=dphi, topology="SQUID"))
    assert sq.K == pytest.approx(sts.K, rel=1e-12)  # K~ = K
    # eps2~ = -eps2/sqrt(2) up to the cubic-in-dphi correction
    assert sq.eps2 / sts.eps2 == pytest.approx(-1.0 / math.sqrt(2.0), rel=2e-4)
    leading = -(dphi / (2 * math.sqrt(2))) * (math.sqrt(2 * TWO_PI * E_C * TWO_PI * E_J) - TWO_PI * E_C)
    cubic = dphi**3 * TWO_PI * E_C * TWO_PI * E_J / (4.0 * sq.omega_d)
    assert sq.eps2 == pytest.approx(leading + cubic, rel=1e-12)


def test_squid_zero_modulation():
    sq = squid_effective_params(circuit(dphi=0.0, topology="SQUID"))
    assert sq.eps2 == 0.0
    assert sq.Theta == 0.0
    assert sq.Lambda == 0.0


def test_squid_rejects_dilution():
    with pytest.raises(TopologyError):
        CircuitParams.symmetric(E_J, E_C, 0.1, M=2, N=2, topology="SQUID")


def test_drive_harmonics_bessel_values():
    amps, corr = drive_harmonics(0.2, 2)
    assert amps[0] == pytest.approx(0.19900, abs=5e-6)  # 2 J1(0.2)
    assert corr == pytest.approx(1.0 - 0.005 + 8.3333e-6, rel=1e-6)
    zeros, corr0 = drive_harmonics(0.0, 3)
    assert all(a == 0.0 for a in zeros)
    assert corr0 == 1.0


def test_validity_paper_example():
    rep = validity_report(circuit(dphi=0.2), cat_n=10.0)
    assert rep.sixth_order_kerr_ratio == pytest.approx((10.0 / 9.0) * math.sqrt(2 * E_C / E_J), rel=1e-12)
    assert rep.sixth_order_kerr_ratio == pytest.approx(0.0879, abs=5e-4)
    assert rep.sixth_order_ok
    # sixth-harmonic leakage around 1e-5 of eps2 at dphi = 0.2
    assert 5e-6 < rep.sixth_harmonic_ratio < 5e-5


def test_validity_deep_transmon_limit():
    rep = validity_report(CircuitParams.symmetric(1e9, 1.0, 0.01), cat_n=4.0)
    assert rep.all_ok
    assert rep.sixth_order_kerr_ratio < 1e-3


def test_compensation_detuning():
    p = sts_effective_params(circuit(dphi=0.1))
    assert compensation_detuning(p) == pytest.approx(-2.0 * p.Lambda * p.eps2 / p.K, rel=1e-15)
    import dataclasses

    flat = dataclasses.replace(p, Lambda=0.12 * p.K, eps2=2.0 * p.K)
    assert compensation_detuning(flat) / p.K == pytest.approx(-0.48, rel=1e-12)
    zero = dataclasses.replace(p, Lambda=0.0)
    assert compensation_detuning(zero) == 0.0
    with pytest.raises(ZeroDivisionError):
        compensation_detuning(dataclasses.replace(p, K=0.0))


def test_resolve_drive_frequency_places_detuning():
    c = circuit(dphi=0.05, M=2, N=4)
    wd = resolve_drive_frequency(c, target_delta=0.0)
    p = sts_effective_params(CircuitParams.symmetric(E_J, E_C, 0.05, omega_d=wd, M=2, N=4))
    assert abs(p.Delta) < 1e-9 * p.K


def test_not_a_transmon_error():
    with pytest.raises(NotATransmonError):
        sts_effective_params(CircuitParams.symmetric(100.0, 250.0, 0.1))


def test_topology_validation():
    with pytest.raises(TopologyError):
        CircuitParams.symmetric(E_J, E_C, 0.1, M=2, N=3)  # N not divisible by M
    with pytest.raises(TopologyError):
        CircuitParams.symmetric(E_J, E_C, -0.1)
    with pytest.raises(TopologyError):
        CircuitParams.symmetric(E_J, E_C, 0.1, omega_d=-1.0)


def test_asymmetry_derived_quantities():
    c = CircuitParams(82000.0, 80000.0, 78000.0, E_C, 0.1)
    assert c.E_J_sigma == pytest.approx(80000.0)
    assert c.E_J_delta == pytest.approx(2000.0)
    p = sts_effective_params(c)
    assert p.G1 != 0.0 and p.G3 != 0.0 and p.G1t != 0.0


def test_deterministic_pure_functions():
    c = circuit(dphi=0.037, M=2, N=4)
    assert sts_effective_params(c) == sts_effective_params(c)
