"""Closed-form fidelity between the two families at frozen values."""

import math

import pytest

from qdecay.errors import NumericalConsistencyError, UnsupportedRegimeError
from qdecay.fidelity import OverlapTriple, fidelity_css_gss, zeta_eta
from qdecay.params import CssParams, GssParams, ReservoirParams

RES = ReservoirParams(omega=1.0, k=0.1, nbar=0.0)
EVEN = CssParams(beta0=0.8, theta=0.0)
ODD = CssParams(beta0=0.8, theta=math.pi)
SQUEEZED_VAC = GssParams(r0=1.0)


def test_initial_fidelity_frozen():
    assert fidelity_css_gss(EVEN, SQUEEZED_VAC, RES, 0.0) == pytest.approx(
        0.933075214048846, rel=1e-13)


def test_late_time_approach_to_unity():
    value = fidelity_css_gss(EVEN, SQUEEZED_VAC, RES, 60.0)
    assert value == pytest.approx(0.9999989880927275, rel=1e-13)
    assert 1.0 - value < 1e-4


def test_odd_state_orthogonal_to_even_squeezed_vacuum():
    # opposite parity, exactly zero overlap
    assert fidelity_css_gss(ODD, SQUEEZED_VAC, RES, 0.0) == 0.0


def test_mixed_thermal_target_frozen():
    gauss = GssParams(r0=0.5, phi0=1.2, nu0=0.7)
    assert fidelity_css_gss(EVEN, gauss, RES, 3.0) == pytest.approx(
        0.8864217163380245, rel=1e-12)


def test_displaced_target_frozen():
    cat = CssParams(beta0=1.2, theta=math.pi)
    gauss = GssParams(alpha0=0.4 + 0.3j, r0=0.8, phi0=-0.7, nu0=1.5)
    assert fidelity_css_gss(cat, gauss, RES, 1.7) == pytest.approx(
        0.6779170388030009, rel=1e-12)


def test_bounds_hold_over_a_sweep():
    gauss = GssParams(alpha0=0.2 - 0.5j, r0=0.6, phi0=0.3, nu0=0.9)
    for t in (0.0, 0.4, 1.1, 2.9, 7.0, 20.0):
        value = fidelity_css_gss(EVEN, gauss, RES, t)
        assert 0.0 <= value <= 1.0


def test_warm_reservoir_rejected():
    warm = ReservoirParams(omega=1.0, k=0.1, nbar=0.4)
    with pytest.raises(UnsupportedRegimeError):
        fidelity_css_gss(EVEN, SQUEEZED_VAC, warm, 1.0)


def test_overlap_triple_rejects_schwarz_violation():
    with pytest.raises(NumericalConsistencyError):
        OverlapTriple(bb=0.1, mm=0.1, mb=0.5)


def test_overlap_triple_rejects_negative_diagonal():
    with pytest.raises(NumericalConsistencyError):
        OverlapTriple(bb=-0.2, mm=0.1, mb=0.0)


def test_overlap_triple_rejects_imaginary_diagonal():
    with pytest.raises(NumericalConsistencyError):
        OverlapTriple(bb=0.1 + 1e-6j, mm=0.1, mb=0.0)


def test_zeta_eta_antisymmetry():
    pair = zeta_eta(0.7 + 0.2j, 0.1 - 0.4j, 0.9)
    swapped = zeta_eta(0.1 - 0.4j, 0.7 + 0.2j, 0.9)
    assert swapped.eta == pytest.approx(-pair.eta)
    assert swapped.zeta == pytest.approx(pair.zeta)
