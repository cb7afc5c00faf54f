import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kerrcat.errors import (
    DegenerateCatError,
    HermiticityError,
    InvalidSpaceError,
    TruncationRiskError,
)
from kerrcat.fock import (
    DensityMatrix,
    FockSpace,
    cat_state,
    coherent_state,
    ladder_ops,
    parity_operator,
    truncation_diagnostic,
    wigner,
)


def test_space_requires_dim_2():
    with pytest.raises(InvalidSpaceError):
        FockSpace(1)
    with pytest.raises(InvalidSpaceError):
        FockSpace(0)


def test_ladder_dim2():
    a, adag, n = ladder_ops(FockSpace(2))
    assert np.allclose(a.data, [[0, 1], [0, 0]])
    assert np.allclose(adag.data, a.data.conj().T)
    assert np.allclose(n.data, np.diag([0, 1]))


def test_ladder_matrix_element():
    a, _, _ = ladder_ops(FockSpace(4))
    assert a.data[2, 3] == pytest.approx(math.sqrt(3), abs=1e-15)


@pytest.mark.parametrize("dim", [2, 5, 16, 40])
def test_commutator_truncation_artifact(dim):
    a, adag, _ = ladder_ops(FockSpace(dim))
    comm = a.data @ adag.data - adag.data @ a.data
    diag = np.diag(comm).real
    assert np.allclose(diag[:-1], 1.0, atol=1e-12)
    assert diag[-1] == pytest.approx(-(dim - 1), abs=1e-12)


def test_coherent_vacuum():
    st0 = coherent_state(0.0, FockSpace(10))
    assert st0.amplitudes[0] == pytest.approx(1.0)
    assert np.allclose(st0.amplitudes[1:], 0.0)


def test_coherent_mean_photon():
    sp = FockSpace(30)
    _, _, n = ladder_ops(sp)
    st1 = coherent_state(1.0, sp)
    assert st1.expectation(n).real == pytest.approx(1.0, abs=1e-10)


def test_coherent_eigenrelation():
    sp = FockSpace(40)
    a, _, _ = ladder_ops(sp)
    st2 = coherent_state(2.0, sp)
    assert st2.expectation(a) == pytest.approx(2.0, abs=1e-8)


def test_coherent_truncation_guard():
    with pytest.raises(TruncationRiskError) as exc:
        coherent_state(3.0, FockSpace(20))  # |a|^2 = 9 > 5
    assert exc.value.suggested_dim >= 36


def test_cat_even_alpha0_is_vacuum():
    st0 = cat_state(0.0, "+", FockSpace(8))
    assert abs(st0.amplitudes[0]) == pytest.approx(1.0)


def test_cat_odd_alpha0_degenerate():
    with pytest.raises(DegenerateCatError):
        cat_state(0.0, "-", FockSpace(8))


def test_cat_orthogonality_and_parity():
    sp = FockSpace(40)
    plus = cat_state(2.0, "+", sp)
    minus = cat_state(2.0, "-", sp)
    assert abs(plus.overlap(minus)) <= 1e-12
    P = parity_operator(sp)
    assert plus.expectation(P).real == pytest.approx(1.0, abs=1e-12)
    assert minus.expectation(P).real == pytest.approx(-1.0, abs=1e-12)


def test_cat_matches_closed_form():
    sp = FockSpace(40)
    alpha = 1.3
    plus = cat_state(alpha, "+", sp)
    a_plus = coherent_state(alpha, sp).amplitudes + coherent_state(-alpha, sp).amplitudes
    norm = math.sqrt(2.0 * (1.0 + math.exp(-2.0 * alpha**2)))
    assert np.allclose(plus.amplitudes, a_plus / np.linalg.norm(a_plus))
    # closed-form normalization against the truncated construction
    raw = coherent_state(alpha, sp)
    c_n = raw.amplitudes
    assert np.linalg.norm(a_plus) == pytest.approx(norm, rel=1e-10)


def test_parity_operator_form():
    P = parity_operator(FockSpace(3))
    assert np.allclose(P.data, np.diag([1, -1, 1]))
    sp = FockSpace(12)
    P = parity_operator(sp)
    assert np.allclose(P.data @ P.data, np.eye(12))
    a, _, _ = ladder_ops(sp)
    assert np.allclose(P.data @ a.data @ P.data, -a.data, atol=1e-14)


@settings(max_examples=25, deadline=None)
@given(
    re=st.floats(-2.2, 2.2, allow_nan=False),
    im=st.floats(-2.2, 2.2, allow_nan=False),
)
def test_constructed_states_unit_norm(re, im):
    sp = FockSpace(40)
    alpha = complex(re, im)
    st_c = coherent_state(alpha, sp)
    assert np.linalg.norm(st_c.amplitudes) == pytest.approx(1.0, abs=1e-10)
    if abs(alpha) > 1e-6:
        for par in ("+", "-"):
            st_cat = cat_state(alpha, par, sp)
            assert np.linalg.norm(st_cat.amplitudes) == pytest.approx(1.0, abs=1e-10)


def test_density_matrix_validation():
    sp = FockSpace(4)
    good = np.diag([0.5, 0.5, 0.0, 0.0]).astype(complex)
    DensityMatrix(sp, good)
    with pytest.raises(HermiticityError):
        DensityMatrix(sp, good * 2.0)  # trace 2
    bad = good.copy()
    bad[0, 1] = 1j
    with pytest.raises(HermiticityError):
        DensityMatrix(sp, bad)


def test_wigner_vacuum_peak():
    sp = FockSpace(20)
    rho = coherent_state(0.0, sp).to_density_matrix()
    w = wigner(rho, [0.0], [0.0], check_mass=False)
    assert w[0, 0] == pytest.approx(2.0 / math.pi, abs=1e-6)


def test_wigner_mixture_positive_two_blobs():
    sp = FockSpace(40)
    plus = coherent_state(2.0, sp).to_density_matrix()
    minus = coherent_state(-2.0, sp).to_density_matrix()
    mix = DensityMatrix(sp, 0.5 * (plus.data + minus.data), validate=False)
    xs = np.linspace(-4, 4, 41)
    ps = np.linspace(-3, 3, 31)
    w = wigner(mix, xs, ps)
    assert w.min() >= -1e-9
    ip0 = len(ps) // 2
    peaks = xs[np.argsort(w[:, ip0])[-2:]]
    assert sorted(np.round(np.abs(peaks), 1)) == [2.0, 2.0]


def test_wigner_cat_fringes_negative():
    sp = FockSpace(40)
    rho = cat_state(2.0, "+", sp).to_density_matrix()
    ps = np.linspace(-1.5, 1.5, 21)
    w = wigner(rho, [0.0], ps, check_mass=False)
    assert w.min() < -0.05


def test_wigner_normalization_and_linearity():
    sp = FockSpace(30)
    xs = np.linspace(-4.5, 4.5, 61)
    ps = np.linspace(-4.5, 4.5, 61)
    rho1 = coherent_state(1.0, sp).to_density_matrix()
    rho2 = cat_state(1.5, "+", sp).to_density_matrix()
    w1 = wigner(rho1, xs, ps)
    w2 = wigner(rho2, xs, ps)
    for w in (w1, w2):
        mass = np.trapezoid(np.trapezoid(w, ps, axis=1), xs)
        assert mass == pytest.approx(1.0, abs=1e-3)
    mix = DensityMatrix(sp, 0.3 * rho1.data + 0.7 * rho2.data, validate=False)
    assert np.allclose(wigner(mix, xs[::10], ps[::10], check_mass=False),
                       0.3 * w1[::10, ::10] + 0.7 * w2[::10, ::10], atol=1e-12)


def test_wigner_small_grid_warns():
    sp = FockSpace(40)
    rho = coherent_state(2.0, sp).to_density_matrix()
    with pytest.warns(UserWarning, match="enlarge the grid"):
        wigner(rho, np.linspace(-0.5, 0.5, 5), np.linspace(-0.5, 0.5, 5))


def test_truncation_diagnostic():
    sp = FockSpace(40)
    ok = truncation_diagnostic(coherent_state(1.0, sp))
    assert ok.adequate
    tight = truncation_diagnostic(coherent_state(3.1, FockSpace(40)))
    assert tight.tail_population > ok.tail_population


def test_operator_space_mismatch():
    a2, _, _ = ladder_ops(FockSpace(2))
    a3, _, _ = ladder_ops(FockSpace(3))
    from kerrcat.errors import SpaceMismatchError

    with pytest.raises(SpaceMismatchError):
        _ = a2 @ a3
