"""Special-function kernels against scipy and direct recurrences."""

import math

import numpy as np
import pytest
import scipy.special

from qdecay.errors import OrderLimitError
from qdecay.numutil import golden_section_max, signed_logsumexp
from qdecay.specfun import (
    hermite,
    hermite_log_sequence,
    laguerre,
    laguerre_sequence,
    log_factorial,
    log_poisson_weight,
    poisson_tail_cutoff,
)


def test_log_factorial_matches_lgamma():
    for n in (0, 1, 2, 5, 17, 170, 1000):
        assert log_factorial(n) == pytest.approx(math.lgamma(n + 1), rel=1e-14)


def test_log_factorial_rejects_out_of_table():
    with pytest.raises(OrderLimitError):
        log_factorial(10 ** 9)


def test_laguerre_matches_scipy():
    xs = np.linspace(0.0, 12.0, 7)
    for order in (0, 1, 3, 10, 40):
        for x in xs:
            ref = scipy.special.eval_laguerre(order, x)
            assert laguerre(order, float(x)) == pytest.approx(ref, rel=1e-11,
                                                              abs=1e-11)


def test_laguerre_sequence_consistent_with_scalar():
    seq = laguerre_sequence(25, 3.7)
    for order in range(26):
        assert seq[order] == pytest.approx(laguerre(order, 3.7), rel=1e-13,
                                           abs=1e-300)


def test_hermite_matches_scipy_on_reals():
    for order in (0, 1, 2, 7, 15):
        for x in (-2.0, -0.3, 0.0, 1.1, 4.0):
            ref = scipy.special.eval_hermite(order, x)
            assert hermite(order, x) == pytest.approx(ref, rel=1e-12,
                                                      abs=1e-12)


def test_hermite_recurrence_at_complex_argument():
    z = 0.8 - 1.3j
    for order in range(1, 12):
        lhs = hermite(order + 1, z)
        rhs = 2 * z * hermite(order, z) - 2 * order * hermite(order - 1, z)
        assert lhs == pytest.approx(rhs, rel=1e-12)


def test_hermite_log_sequence_rescaling_reaches_high_order():
    z = 1.4 + 0.6j
    logmag, unit = hermite_log_sequence(400, z)
    np.testing.assert_allclose(np.abs(unit), 1.0, atol=1e-12)
    for order in (0, 3, 11):
        direct = hermite(order, z)
        rebuilt = math.exp(logmag[order]) * unit[order]
        assert rebuilt == pytest.approx(direct, rel=1e-12)
    # beyond float range for the plain recurrence, still finite here
    assert math.isfinite(logmag[400])
    assert logmag[400] > 700.0


def test_log_poisson_weight_normalizes():
    mean = 6.3
    n = np.arange(0, 200)
    total = np.exp(log_poisson_weight(n, mean)).sum()
    assert total == pytest.approx(1.0, abs=1e-14)


def test_poisson_tail_cutoff_bounds_the_tail():
    for mean, budget in ((0.5, 1e-10), (4.0, 1e-12), (30.0, 1e-13)):
        cut = poisson_tail_cutoff(mean, budget)
        n = np.arange(0, cut + 400)
        pdf = np.exp(log_poisson_weight(n, mean))
        assert pdf[cut:].sum() <= budget


def test_golden_section_max_quadratic():
    argmax, value = golden_section_max(lambda x: -(x - 2.3) ** 2 + 5.0,
                                       0.0, 10.0, tol=1e-12)
    assert argmax == pytest.approx(2.3, abs=1e-6)
    assert value == pytest.approx(5.0, abs=1e-12)


def test_signed_logsumexp_cancellation_flag():
    logmag, sign, ratio = signed_logsumexp(np.array([0.0, 0.0]),
                                           np.array([1.0, -1.0]))
    assert logmag == -math.inf and math.isinf(ratio)
    logmag, sign, ratio = signed_logsumexp(np.array([2.0, 1.0]),
                                           np.array([-1.0, 1.0]))
    expected = -(math.exp(2.0) - math.exp(1.0))
    assert sign == -1.0
    assert math.exp(logmag) * sign == pytest.approx(expected, rel=1e-13)
