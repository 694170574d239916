"""Acceptance gate: one test, and one verdict line, per shipped criterion.

Run with ``pytest -v tests/test_acceptance.py`` to get the per-criterion
pass/fail listing; each test also prints the measured worst errors.
"""

import hashlib
import time

import numpy as np
import pytest

from qdecay import validation
from qdecay.cli import _emit_figure
from qdecay.figures import figure_tags
from qdecay.oracle import IntegrationPolicy, build_gss, integrate
from qdecay.params import GssParams, ReservoirParams


def _verdict(num: int, label: str, result) -> None:
    state = "PASS" if result.passed else "FAIL"
    print(f"criterion {num} ({label}): {state} -- {result.summary()}")
    assert result.passed, result.summary()


@pytest.fixture(scope="module")
def css_suite():
    return validation.css_oracle_suite()


@pytest.fixture(scope="module")
def gss_suite():
    return validation.gss_oracle_suite()


@pytest.fixture(scope="module")
def fid_suite():
    return validation.fidelity_suite()


def test_criterion_1_css_oracle_equivalence(css_suite):
    _verdict(1, "css vs oracle, 1e-6", css_suite)
    assert css_suite.elapsed <= 300.0
    assert css_suite.tolerance == 1e-6


def test_criterion_2_gss_oracle_equivalence(gss_suite):
    _verdict(2, "gss vs oracle incl. temperature, 1e-6", gss_suite)
    assert gss_suite.elapsed <= 300.0
    assert gss_suite.tolerance == 1e-6


def test_criterion_3_characteristic_times():
    result = validation.char_time_suite(n_sets=50)
    _verdict(3, "closed-form times vs golden-section argmax", result)


def test_criterion_4_time_ordering():
    result = validation.ordering_suite()
    _verdict(4, "0 < t_squeeze < t_gauss < t_coherence", result)


def test_criterion_5_intensity_independence():
    result = validation.intensity_suite(tolerance=1e-12)
    _verdict(5, "displacement-independent witnesses, 1e-12", result)


def test_criterion_6_fidelity(fid_suite):
    _verdict(6, "closed-form fidelity vs oracle, 1e-6", fid_suite)
    assert fid_suite.elapsed <= 120.0


def test_criterion_7_structural_suites():
    result = validation.structural_suite()
    _verdict(7, "structural property battery", result)
    assert result.elapsed <= 120.0


def test_criterion_8_integrator_self_convergence():
    res = ReservoirParams(omega=1.0, k=0.1, nbar=0.0)
    beta0, t_end = 1.2, 4.0

    def error_at(dt: float) -> float:
        start = build_gss(GssParams(alpha0=beta0), res, dim=28,
                          tail_budget=1e-7)
        end = integrate(start, res, t_end,
                        IntegrationPolicy(dt=dt, tail_budget=1e-7))
        beta_t = beta0 * np.exp(-(1j * res.omega + res.k) * t_end)
        exact = build_gss(GssParams(alpha0=beta_t), res, dim=end.dim,
                          tail_budget=1e-7)
        return float(np.linalg.norm(end.elements - exact.elements))

    ratio = error_at(0.25) / error_at(0.125)
    order_ok = 8.0 <= ratio <= 32.0

    from qdecay.oracle import build_css, integrate_checkpoints
    from qdecay.params import CssParams
    snaps = integrate_checkpoints(build_css(CssParams(beta0=0.8, theta=0.0)),
                                  res, [10.0, 30.0, 50.0])
    drift = max(abs(np.trace(s.elements).real - 1.0) for s in snaps)
    drift_ok = drift <= 1e-9

    state = "PASS" if (order_ok and drift_ok) else "FAIL"
    print(f"criterion 8 (step halving in [8,32], trace drift <= 1e-9): "
          f"{state} -- ratio={ratio:.2f}, drift={drift:.2e}")
    assert order_ok and drift_ok


def test_criterion_9_figure_reproduction(tmp_path):
    worst_elapsed = 0.0
    mismatched = []
    for tag in figure_tags():
        digests = []
        for attempt in ("a", "b"):
            out = tmp_path / attempt
            out.mkdir(exist_ok=True)
            started = time.perf_counter()
            digests.append(_emit_figure(tag, out))
            worst_elapsed = max(worst_elapsed,
                                time.perf_counter() - started)
        if digests[0] != digests[1]:
            mismatched.append(tag)
        raw = (tmp_path / "a" / f"{tag}.csv").read_bytes()
        assert hashlib.sha256(raw).hexdigest() == digests[0]
    ok = not mismatched and worst_elapsed <= 60.0
    state = "PASS" if ok else "FAIL"
    print(f"criterion 9 (deterministic figures, <= 60 s each): {state} -- "
          f"{len(figure_tags())} tags, slowest {worst_elapsed:.2f} s, "
          f"unstable: {mismatched or 'none'}")
    assert ok
