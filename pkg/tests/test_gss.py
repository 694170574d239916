"""Gaussian-family closed forms: parameter flow, witnesses, frozen values."""

import math

import numpy as np
import pytest

from qdecay.errors import TruncationError
from qdecay.gss import (
    char_time_gss,
    determinant_gss,
    energy_match_r0,
    entropy_gss,
    evolve_gss,
    g2_witness,
    mean_photon_gss,
    photon_pdf_gss,
    visibility_gss,
    wigner_gss_closed,
    wigner_gss_series,
)
from qdecay.params import CssParams, GssParams, ReservoirParams

RES = ReservoirParams(omega=1.0, k=0.1, nbar=0.0)


def test_char_time_is_five_ln_two():
    value = char_time_gss(GssParams(r0=1.0), RES)
    assert value == pytest.approx(5.0 * math.log(2.0), abs=1e-12)


def test_char_time_ignores_squeeze_strength_at_zero_temperature():
    # E* = 1/2 algebraically whenever nu0 = 0 and nbar = 0
    for r0 in (0.3, 0.73, 1.7):
        assert char_time_gss(GssParams(r0=r0), RES) == pytest.approx(
            5.0 * math.log(2.0), abs=1e-12)


def test_char_time_absent_without_squeezing_or_visibility():
    assert char_time_gss(GssParams(r0=0.0), RES) is None
    assert char_time_gss(GssParams(r0=1.0, nu0=3.0), RES) is None


def test_visibility_predicates():
    state_ok, bath_ok = visibility_gss(GssParams(r0=1.0), RES)
    assert state_ok and bath_ok
    state_ok, _ = visibility_gss(GssParams(r0=1.0, nu0=3.0), RES)
    assert not state_ok
    hot = ReservoirParams(omega=1.0, k=0.1, nbar=5.0)
    _, bath_ok = visibility_gss(GssParams(r0=1.0), hot)
    assert not bath_ok


def test_evolution_endpoints():
    params = GssParams(alpha0=0.4 + 0.3j, r0=0.8, phi0=-0.7, nu0=1.5)
    start = evolve_gss(params, RES, 0.0)
    assert start.alpha == params.alpha0
    assert start.r == params.r0
    assert start.phi == params.phi0
    assert start.nu == params.nu0
    late = evolve_gss(params, RES, 400.0)
    assert late.nu == pytest.approx(RES.nbar, abs=1e-12)
    assert late.r == pytest.approx(0.0, abs=1e-12)
    assert abs(late.alpha) == pytest.approx(0.0, abs=1e-12)


def test_displacement_spirals_and_angle_precesses():
    params = GssParams(alpha0=1.0, r0=0.5, phi0=0.4)
    snap = evolve_gss(params, RES, 2.0)
    assert snap.alpha == pytest.approx(
        np.exp(-(1j * RES.omega + RES.k) * 2.0), rel=1e-14)
    assert snap.phi == pytest.approx(0.4 - 2.0 * RES.omega * 2.0, rel=1e-14)


def test_determinant_and_entropy_track_nu():
    snap = evolve_gss(GssParams(r0=1.0, nu0=0.5), RES, 3.0)
    nu = snap.nu
    assert determinant_gss(snap) == pytest.approx((nu + 0.5) ** 2, rel=1e-13)
    plus, base = nu + 1.0, nu
    want = plus * math.log(plus) - base * math.log(base) if base > 0 else 0.0
    assert entropy_gss(snap) == pytest.approx(want, rel=1e-12)


def test_warm_bath_heats_toward_reservoir():
    hot = ReservoirParams(omega=1.0, k=0.1, nbar=2.0)
    snap = evolve_gss(GssParams(), hot, 500.0)
    assert snap.nu == pytest.approx(2.0, abs=1e-10)
    assert determinant_gss(snap) == pytest.approx(6.25, abs=1e-9)


def test_squeezed_vacuum_photon_pairs():
    snap = evolve_gss(GssParams(r0=1.0), RES, 0.0)
    pdf = photon_pdf_gss(snap)
    assert pdf[2] == pytest.approx(0.1879440533758696, rel=1e-12)
    np.testing.assert_allclose(pdf[1::2], 0.0, atol=1e-16)
    assert pdf.sum() == pytest.approx(1.0, abs=1e-11)
    assert pdf[0] == pytest.approx(1.0 / math.cosh(1.0), rel=1e-12)


def test_photon_pdf_explicit_cutoff_rejected_when_too_small():
    snap = evolve_gss(GssParams(r0=1.5), RES, 0.0)
    with pytest.raises(TruncationError) as err:
        photon_pdf_gss(snap, n_max=6)
    assert err.value.suggested > 6


def test_mean_photon_matches_parameter_flow():
    params = GssParams(alpha0=0.6 - 0.2j, r0=0.9, nu0=0.4)
    snap = evolve_gss(params, RES, 1.3)
    pdf = photon_pdf_gss(snap)
    from_pdf = float(np.sum(np.arange(pdf.size) * pdf))
    assert mean_photon_gss(snap) == pytest.approx(from_pdf, abs=1e-8)


def test_thermal_wigner_origin_value():
    snap = evolve_gss(GssParams(nu0=2.0), RES, 0.0)
    assert wigner_gss_closed(snap, 0.0, 0.0) == pytest.approx(
        1.0 / (5.0 * math.pi), rel=1e-14)


def test_series_and_closed_wigner_agree():
    params = GssParams(alpha0=0.5 + 0.1j, r0=0.7, phi0=0.9, nu0=1.2)
    xs = np.linspace(-2.0, 2.0, 5)
    for t in (0.0, 2.0, 9.0):
        snap = evolve_gss(params, RES, t)
        for x in xs:
            for p in (-1.0, 0.3, 1.5):
                closed = wigner_gss_closed(snap, float(x), float(p))
                series = wigner_gss_series(snap, float(x), float(p))
                assert series == pytest.approx(closed, abs=1e-11)


def test_legacy_shear_sign_breaks_agreement():
    # sheared state: the alternate sign convention must be distinguishable
    snap = evolve_gss(GssParams(r0=0.9, phi0=0.8, nu0=0.6), RES, 1.0)
    x, p = 0.9, -0.7
    good = wigner_gss_series(snap, x, p)
    bad = wigner_gss_series(snap, x, p, legacy_shear_sign=True)
    closed = wigner_gss_closed(snap, x, p)
    assert good == pytest.approx(closed, abs=1e-11)
    assert abs(bad - closed) > 1e-4


def test_g2_frozen_values():
    squeezed = g2_witness(evolve_gss(GssParams(r0=1.0), RES, 0.0))
    assert squeezed.value == pytest.approx(3.724061660966176, rel=1e-12)
    assert squeezed.value == pytest.approx(3.0 + 1.0 / math.sinh(1.0) ** 2,
                                           rel=1e-13)
    assert squeezed.quantum
    thermal = g2_witness(evolve_gss(GssParams(nu0=2.0), RES, 0.0))
    assert thermal.value == pytest.approx(2.0, rel=1e-13)
    assert not thermal.quantum
    coherent = g2_witness(evolve_gss(GssParams(alpha0=1.1), RES, 0.0))
    assert coherent.value == pytest.approx(1.0, rel=1e-13)
    assert not coherent.quantum
    assert g2_witness(evolve_gss(GssParams(), RES, 0.0)) is None


def test_energy_match_frozen_value():
    r0 = energy_match_r0(CssParams(beta0=0.8, theta=0.0), GssParams())
    assert r0 == pytest.approx(0.56992080816417, abs=1e-10)
    matched = GssParams(r0=r0)
    assert matched.mean_photon() == pytest.approx(
        CssParams(beta0=0.8, theta=0.0).mean_photon(), abs=1e-12)


def test_energy_match_respects_displacement_floor():
    with pytest.raises(ValueError):
        energy_match_r0(CssParams(beta0=0.1, theta=math.pi / 2),
                        GssParams(alpha0=3.0))
