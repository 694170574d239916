"""Closed-form damped dynamics of two-component coherent superpositions.

Everything here assumes a zero-temperature reservoir: the superposition
of two coherent states stays a rank-2 mixture of decayed branches, so all
witnesses reduce to elementary functions of the decayed amplitude and the
interference weight ``f``.  Finite reservoir occupation breaks that closure
and is rejected up front; use the Fock-space integrator for warm baths.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import TruncationError, UnsupportedRegimeError
from .params import CssParams, ReservoirParams, decayed_amplitude
from .specfun import log_poisson_weight, poisson_tail_cutoff

__all__ = [
    "CssSnapshot",
    "CovarianceSnapshot",
    "snapshot",
    "wigner_css",
    "vacuum_fidelity",
    "covariance_css",
    "squeeze_time_css",
    "decoherence_time",
    "photon_pdf_css",
    "mandel_q",
    "entropy_css",
]

_PDF_TAIL_BUDGET = 1e-12


def _require_cold(res: ReservoirParams) -> None:
    if res.nbar != 0.0:
        raise UnsupportedRegimeError(
            "superposition witnesses are closed-form only for nbar = 0; "
            "use the Fock-space integrator for a warm reservoir"
        )


@dataclass(frozen=True)
class CssSnapshot:
    """State of a decayed superposition at one instant.

    ``beta`` is the decayed branch amplitude, ``f`` the interference weight
    multiplying the cross terms, ``p_even``/``p_odd`` the populations of the
    even and odd cat components with normalisations ``n_even``/``n_odd``.
    """

    t: float
    beta: complex
    f: float
    p_even: float
    p_odd: float
    n_even: float
    n_odd: float

    def __post_init__(self) -> None:
        if not 0.0 < self.f <= 1.0:
            raise ValueError(f"interference weight out of range: {self.f}")
        if abs(self.p_even + self.p_odd - 1.0) > 1e-12:
            raise ValueError("even/odd populations must sum to one")


@dataclass(frozen=True)
class CovarianceSnapshot:
    """Symmetrised second moments and their determinant."""

    sigma_qq: float
    sigma_pp: float
    sigma_qp: float
    det: float

    def __post_init__(self) -> None:
        if self.sigma_qq <= 0.0 or self.sigma_pp <= 0.0:
            raise ValueError("diagonal covariances must be positive")
        residual = self.det - (self.sigma_qq * self.sigma_pp - self.sigma_qp**2)
        if abs(residual) > 1e-12:
            raise ValueError(f"determinant inconsistent with entries ({residual:.3e})")
        if self.det < 0.25 - 1e-9:
            raise ValueError(f"determinant {self.det} below the vacuum bound")


def _core(params: CssParams, res: ReservoirParams, t: float):
    """Shared intermediates: beta(t), |beta|^2, f, N^2, cos(theta)."""
    if t < 0.0:
        raise ValueError("time must be non-negative")
    beta = decayed_amplitude(params.beta0, res, t)
    b = abs(params.beta0) ** 2
    s = abs(beta) ** 2
    f = math.exp(-2.0 * (b - s))
    return beta, b, s, f, params.norm_sq, math.cos(params.theta)


def snapshot(params: CssParams, res: ReservoirParams, t: float) -> CssSnapshot:
    """Decayed-state summary at time ``t``.

    The even/odd populations are exact eigenvalues for theta in {0, pi};
    for intermediate phases they are the parity-sector weights (the pair
    still sums to one, but an even-odd coherence survives).
    """
    _require_cold(res)
    beta, b, s, f, nsq, cth = _core(params, res, t)
    damp = math.exp(-2.0 * s)
    p_even = (1.0 + damp) * (1.0 + f * cth) / nsq
    p_odd = (1.0 - damp) * (1.0 - f * cth) / nsq
    return CssSnapshot(
        t=float(t),
        beta=beta,
        f=f,
        p_even=p_even,
        p_odd=p_odd,
        n_even=math.sqrt(2.0 * (1.0 + damp)),
        n_odd=math.sqrt(2.0 * (1.0 - damp)),
    )


def wigner_css(params: CssParams, res: ReservoirParams, t: float, lam):
    """Wigner density at phase-space point(s) ``lam``.

    ``lam`` is the complex coordinate sqrt(omega/2)(x + i p); scalars give a
    float, arrays map elementwise.  Normalised so the density integrates to
    one over dx dp.  The two branch Gaussians are evaluated as full squared
    distances |lam -+ beta|^2, which keeps the expression finite for large
    amplitudes where the cosh splitting overflows.
    """
    _require_cold(res)
    beta, b, s, f, nsq, _ = _core(params, res, t)
    lam_arr = np.asarray(lam, dtype=complex)
    plus = np.exp(-2.0 * np.abs(lam_arr - beta) ** 2)
    minus = np.exp(-2.0 * np.abs(lam_arr + beta) ** 2)
    phase = params.theta + 4.0 * (lam_arr * np.conj(beta)).imag
    cross = 2.0 * f * np.exp(-2.0 * np.abs(lam_arr) ** 2) * np.cos(phase)
    value = (res.omega / math.pi) * (plus + minus + cross) / nsq
    if np.isscalar(lam) or np.ndim(lam) == 0:
        return float(value)
    return value


def vacuum_fidelity(params: CssParams, res: ReservoirParams, t: float) -> float:
    """F(rho(t), |0><0|) = sqrt(<0|rho|0>)."""
    _require_cold(res)
    _, b, s, f, nsq, cth = _core(params, res, t)
    overlap = 2.0 * math.exp(-s) * (1.0 + f * cth) / nsq
    return math.sqrt(max(overlap, 0.0))


def covariance_css(params: CssParams, res: ReservoirParams, t: float) -> CovarianceSnapshot:
    """Symmetrised quadrature covariances of the decayed superposition.

    Built from the exact first and second ladder moments, so the result is
    central (mean-subtracted) for every superposition phase.
    """
    _require_cold(res)
    beta, b, s, f, nsq, cth = _core(params, res, t)
    sth = math.sin(params.theta)
    mean_a = -2.0j * beta * math.exp(-2.0 * b) * sth / nsq
    mean_aa = beta * beta
    mean_n = 2.0 * s * (1.0 - math.exp(-2.0 * b) * cth) / nsq
    c_aa = mean_aa - mean_a * mean_a
    c_n = mean_n - abs(mean_a) ** 2
    omega = res.omega
    sigma_qq = (1.0 + 2.0 * c_aa.real + 2.0 * c_n) / (2.0 * omega)
    sigma_pp = 0.5 * omega * (1.0 - 2.0 * c_aa.real + 2.0 * c_n)
    sigma_qp = c_aa.imag
    det = sigma_qq * sigma_pp - sigma_qp**2
    return CovarianceSnapshot(sigma_qq=sigma_qq, sigma_pp=sigma_pp, sigma_qp=sigma_qp, det=det)


def squeeze_time_css(params: CssParams, k: float) -> float | None:
    """Time at which the covariance determinant peaks, or None.

    The peak exists only while the branch interference is strong enough:
    the argmax lands inside (0, inf) iff 0 < sinh(2b)/(4 b cos(theta)) < 1
    with b = |beta0|^2.  Phases with cos(theta) <= 0 never develop one.
    """
    if k <= 0.0:
        raise ValueError("decay rate must be positive")
    cth = math.cos(params.theta)
    if cth <= 0.0:
        return None
    b = abs(params.beta0) ** 2
    # b -> 0 limit of sinh(2b)/(4b) is 1/2
    ratio = 0.5 / cth if b == 0.0 else math.sinh(2.0 * b) / (4.0 * b * cth)
    if not 0.0 < ratio < 1.0:
        return None
    return -math.log(ratio) / (2.0 * k)


def decoherence_time(params: CssParams, k: float) -> float:
    """Interference-decay timescale 1/(4 |beta0|^2 k)."""
    if k <= 0.0:
        raise ValueError("decay rate must be positive")
    b = abs(params.beta0) ** 2
    if b == 0.0:
        raise ValueError("decoherence time is undefined for a zero-amplitude branch")
    return 1.0 / (4.0 * b * k)


def photon_pdf_css(
    params: CssParams, res: ReservoirParams, t: float, n_max: int | None = None
) -> np.ndarray:
    """Photon-number probabilities P_0..P_{n_max}.

    Leaving ``n_max`` unset picks the smallest cutoff whose tail mass stays
    below 1e-12 for every time (the initial amplitude bounds the mean).  An
    explicit cutoff is honoured but checked against the same budget.
    """
    _require_cold(res)
    _, b, s, f, nsq, cth = _core(params, res, t)
    if n_max is None:
        n_max = max(int(math.ceil(1.5 * poisson_tail_cutoff(b, 0.1 * _PDF_TAIL_BUDGET))), 8)
    elif n_max < 0:
        raise ValueError("n_max must be non-negative")
    n = np.arange(n_max + 1)
    weights = np.exp(log_poisson_weight(n, s))
    parity = np.where(n % 2 == 0, 1.0, -1.0)
    pdf = (2.0 / nsq) * weights * (1.0 + parity * f * cth)
    tail = 1.0 - float(pdf.sum())
    if tail > _PDF_TAIL_BUDGET:
        suggested = max(int(math.ceil(1.5 * poisson_tail_cutoff(b, 0.1 * _PDF_TAIL_BUDGET))), n_max + 16)
        raise TruncationError(
            f"photon tail mass {tail:.3e} exceeds {_PDF_TAIL_BUDGET:.0e} at n_max={n_max}",
            suggested=suggested,
        )
    return pdf


def mandel_q(pdf: np.ndarray) -> float | None:
    """(variance - mean)/mean of a photon distribution, None for vacuum."""
    pdf = np.asarray(pdf, dtype=float)
    if pdf.ndim != 1 or pdf.size == 0:
        raise ValueError("pdf must be a non-empty vector")
    if np.any(pdf < -1e-14):
        raise ValueError("pdf has negative entries")
    if abs(float(pdf.sum()) - 1.0) > 1e-10:
        raise ValueError("pdf must sum to one within 1e-10")
    n = np.arange(pdf.size)
    mean = float(np.dot(n, pdf))
    if mean <= 0.0:
        return None
    fact2 = float(np.dot(n * (n - 1), pdf))
    return (fact2 - mean * mean) / mean


def entropy_css(params: CssParams, res: ReservoirParams, t: float) -> float:
    """Von Neumann entropy of the rank-2 parity mixture (nats)."""
    snap = snapshot(params, res, t)
    total = 0.0
    for p in (snap.p_even, snap.p_odd):
        if p > 0.0:
            total -= p * math.log(p)
    return total
