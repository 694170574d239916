"""Superposition-state closed forms at frozen reference values."""

import math

import numpy as np
import pytest

from qdecay.css import (
    covariance_css,
    decoherence_time,
    entropy_css,
    mandel_q,
    photon_pdf_css,
    snapshot,
    squeeze_time_css,
    vacuum_fidelity,
    wigner_css,
)
from qdecay.errors import UnsupportedRegimeError
from qdecay.oracle import build_css, wigner_point
from qdecay.params import CssParams, ReservoirParams

RES = ReservoirParams(omega=1.0, k=0.1, nbar=0.0)
EVEN = CssParams(beta0=0.8, theta=0.0)
ODD = CssParams(beta0=0.8, theta=math.pi)


def test_squeeze_time_frozen_value():
    assert squeeze_time_css(EVEN, RES.k) == pytest.approx(
        2.1680535052016316, rel=1e-14)


def test_det_maximum_at_squeeze_time():
    t_c = squeeze_time_css(EVEN, RES.k)
    assert covariance_css(EVEN, RES, t_c).det == pytest.approx(
        0.367167314, abs=1e-9)
    eps = 1e-4
    assert covariance_css(EVEN, RES, t_c).det > covariance_css(
        EVEN, RES, t_c - eps).det
    assert covariance_css(EVEN, RES, t_c).det > covariance_css(
        EVEN, RES, t_c + eps).det


def test_squeeze_time_absent_cases():
    assert squeeze_time_css(ODD, RES.k) is None
    # ratio > 1 kills the interior maximum at large amplitude
    assert squeeze_time_css(CssParams(beta0=2.5, theta=0.0), RES.k) is None


def test_decoherence_time_is_quarter_rate():
    assert decoherence_time(EVEN, RES.k) == pytest.approx(3.90625, rel=1e-15)
    assert decoherence_time(EVEN, RES.k) == pytest.approx(
        1.0 / (4.0 * RES.k * abs(EVEN.beta0) ** 2), rel=1e-15)


def test_vacuum_fidelity_frozen_endpoints():
    assert vacuum_fidelity(EVEN, RES, 0.0) == pytest.approx(
        0.9083830021550209, rel=1e-14)
    assert vacuum_fidelity(ODD, RES, 0.0) == 0.0
    assert vacuum_fidelity(EVEN, RES, 200.0) == pytest.approx(1.0, abs=1e-12)
    assert vacuum_fidelity(ODD, RES, 200.0) == pytest.approx(1.0, abs=1e-6)


def test_mandel_q_signs_and_frozen_values():
    q_even = mandel_q(photon_pdf_css(EVEN, RES, 0.0))
    q_odd = mandel_q(photon_pdf_css(ODD, RES, 0.0))
    assert q_even == pytest.approx(0.771409066848509, rel=1e-12)
    assert q_odd == pytest.approx(-0.7714090668485091, rel=1e-12)
    assert q_even > 0.0 > q_odd


def test_parity_split_sums_to_one():
    for theta in (0.0, math.pi, 2.1):
        params = CssParams(beta0=1.1, theta=theta)
        for t in (0.0, 1.0, 7.0):
            snap = snapshot(params, RES, t)
            assert snap.p_even + snap.p_odd == pytest.approx(1.0, abs=1e-14)
            assert snap.p_even >= 0.0 and snap.p_odd >= 0.0


def test_branch_amplitude_spirals_in():
    snap = snapshot(EVEN, RES, 3.0)
    assert snap.beta == pytest.approx(
        0.8 * np.exp(-(1j * RES.omega + RES.k) * 3.0), rel=1e-14)


def test_entropy_starts_pure_and_ends_pure():
    assert entropy_css(EVEN, RES, 0.0) == pytest.approx(0.0, abs=1e-12)
    assert entropy_css(EVEN, RES, 200.0) == pytest.approx(0.0, abs=1e-9)
    assert entropy_css(EVEN, RES, 5.0) > 1e-3


def test_photon_pdf_parity_structure():
    even_pdf = photon_pdf_css(EVEN, RES, 0.0)
    odd_pdf = photon_pdf_css(ODD, RES, 0.0)
    assert even_pdf.sum() == pytest.approx(1.0, abs=1e-12)
    assert odd_pdf.sum() == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_allclose(even_pdf[1::2], 0.0, atol=1e-16)
    np.testing.assert_allclose(odd_pdf[0::2], 0.0, atol=1e-16)


def test_generic_phase_matches_displaced_parity():
    # pins the sign convention of the interference term at theta not 0, pi
    params = CssParams(beta0=0.8, theta=math.pi / 2.0)
    rho = build_css(params)
    lam = np.array([0.4 + 0.2j, -0.3 + 0.7j, 0.9])
    want = wigner_point(rho, lam, RES)
    got = wigner_css(params, RES, 0.0, lam)
    np.testing.assert_allclose(got, want, atol=1e-9)


def test_wigner_negativity_at_origin_for_odd_state():
    value = wigner_css(ODD, RES, 0.0, np.array([0.0j]))[0]
    assert value < 0.0
    # a pure odd state has parity expectation exactly -1
    assert value == pytest.approx(-RES.omega / math.pi, rel=1e-12)


def test_warm_reservoir_rejected():
    warm = ReservoirParams(omega=1.0, k=0.1, nbar=0.3)
    with pytest.raises(UnsupportedRegimeError):
        snapshot(EVEN, warm, 1.0)
    with pytest.raises(UnsupportedRegimeError):
        vacuum_fidelity(EVEN, warm, 1.0)


def test_mandel_q_none_for_vacuum_pdf():
    assert mandel_q(np.array([1.0, 0.0, 0.0])) is None
