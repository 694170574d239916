"""Damped displaced-squeezed-thermal states and their witnesses.

The damped single-mode Gaussian family is closed under the finite-temperature
master equation, so evolution reduces to updating the five defining numbers
(amplitude, squeeze magnitude and angle, thermal weight).  All witnesses below
are evaluated from those numbers; the photon distribution is the only place
where heavy special-function machinery is needed.
"""

from __future__ import annotations

import math
import cmath
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import TruncationError
from .numutil import signed_logsumexp
from .params import CssParams, GssParams, ReservoirParams
from .specfun import (
    laguerre_sequence,
    log_factorial,
    log_poisson_weight,
    hermite_log_sequence,
)

__all__ = [
    "GssSnapshot",
    "G2Witness",
    "evolve_gss",
    "determinant_gss",
    "entropy_gss",
    "char_time_gss",
    "visibility_gss",
    "wigner_gss_closed",
    "wigner_gss_series",
    "photon_pdf_gss",
    "mean_photon_gss",
    "energy_match_r0",
    "g2_witness",
]

_PDF_TAIL_TARGET = 1e-12
_PDF_TAIL_HARD = 1e-10
_PDF_N_CAP = 4000
_SERIES_TAIL = 1e-12
_NU_DUST = 1e-12


@dataclass(frozen=True)
class GssSnapshot:
    """Gaussian state at one instant: D(alpha) S(r, phi) rho_nu S+ D+.

    ``x_aux`` is the auxiliary first factor of the thermal-weight radicand
    (useful for diagnostics); ``omega`` is carried along so phase-space
    densities can be evaluated from the snapshot alone.
    """

    t: float
    alpha: complex
    r: float
    phi: float
    nu: float
    x_aux: float
    omega: float

    def __post_init__(self) -> None:
        if self.nu < 0.0:
            raise ValueError(f"thermal weight must be non-negative, got {self.nu}")
        if self.omega <= 0.0:
            raise ValueError("omega must be positive")


class G2Witness(NamedTuple):
    value: float
    quantum: bool


def evolve_gss(params: GssParams, res: ReservoirParams, t: float) -> GssSnapshot:
    """Exact parameter flow of the damped Gaussian state."""
    if t < 0.0:
        raise ValueError("time must be non-negative")
    if t == 0.0:
        # exact passthrough; avoids cosh^2 - sinh^2 rounding at the endpoint
        return GssSnapshot(
            t=0.0,
            alpha=complex(params.alpha0),
            r=params.r0,
            phi=params.phi0,
            nu=params.nu0,
            x_aux=(params.nu0 + 0.5) * math.cosh(2.0 * params.r0),
            omega=res.omega,
        )
    decay = math.exp(-2.0 * res.k * t)
    alpha = params.alpha0 * cmath.exp(-(1j * res.omega + res.k) * t)
    phi = params.phi0 - 2.0 * res.omega * t
    half0 = params.nu0 + 0.5
    bath = (res.nbar + 0.5) * (1.0 - decay)
    x_aux = half0 * math.cosh(2.0 * params.r0) * decay + bath
    shear = half0 * math.sinh(2.0 * params.r0) * decay
    radicand = x_aux * x_aux - shear * shear
    nu = math.sqrt(max(radicand, 0.0)) - 0.5
    if nu < 0.0:
        if nu < -_NU_DUST:
            raise ValueError(f"thermal weight fell below zero beyond rounding: {nu}")
        nu = 0.0
    # ratio of the covariance eigenvalues, written without e^{2kt} overflow
    num = half0 * math.exp(2.0 * params.r0) * decay + bath
    den = half0 * math.exp(-2.0 * params.r0) * decay + bath
    r = 0.25 * math.log(num / den)
    return GssSnapshot(t=float(t), alpha=alpha, r=r, phi=phi, nu=nu, x_aux=x_aux, omega=res.omega)


def determinant_gss(snap: GssSnapshot) -> float:
    """Covariance determinant (nu + 1/2)^2; 1/4 marks minimum uncertainty."""
    half = snap.nu + 0.5
    return half * half


def entropy_gss(snap: GssSnapshot) -> float:
    """Von Neumann entropy (nats); depends on the thermal weight alone."""
    nu = snap.nu
    if nu <= 0.0:
        return 0.0
    return (nu + 1.0) * math.log(nu + 1.0) - nu * math.log(nu)


def char_time_gss(params: GssParams, res: ReservoirParams) -> float | None:
    """Time of the interior maximum of the thermal weight, or None.

    The weight nu(t) follows sqrt(h(E)) with E = e^{-2kt}; h is quadratic in
    E, so an interior extremum exists only when its stationary point lands in
    (0, 1) and curves downward there (a true maximum; upward-curving
    stationary points occur in heating regimes and are minima of nu).
    """
    if res.k <= 0.0:
        raise ValueError("decay rate must be positive")
    a_c = (params.nu0 + 0.5) * math.cosh(2.0 * params.r0)
    b_c = res.nbar + 0.5
    c_s = (params.nu0 + 0.5) * math.sinh(2.0 * params.r0)
    curvature = c_s * c_s - (a_c - b_c) ** 2
    if curvature <= 0.0:
        return None
    e_star = b_c * (a_c - b_c) / curvature
    if not 0.0 < e_star < 1.0:
        return None
    return -math.log(e_star) / (2.0 * res.k)


def visibility_gss(params: GssParams, res: ReservoirParams) -> tuple[bool, bool]:
    """Strict visibility inequalities (thermal-weight side, reservoir side)."""
    cosh2r = math.cosh(2.0 * params.r0)
    first = params.nu0 < 0.5 * (2.0 * res.nbar * cosh2r + cosh2r - 1.0)
    second = res.nbar < 0.5 * (2.0 * params.nu0 * cosh2r + cosh2r - 1.0)
    return first, second


def _centers(snap: GssSnapshot) -> tuple[float, float]:
    return (
        math.sqrt(2.0 / snap.omega) * snap.alpha.real,
        math.sqrt(2.0 * snap.omega) * snap.alpha.imag,
    )


def wigner_gss_closed(snap: GssSnapshot, x, p):
    """Gaussian Wigner density at (x, p); integrates to one over dx dp."""
    half = snap.nu + 0.5
    cosh2r = math.cosh(2.0 * snap.r)
    sinh2r = math.sinh(2.0 * snap.r)
    cphi = math.cos(snap.phi)
    sphi = math.sin(snap.phi)
    omega = snap.omega
    sigma_qq = half * (cosh2r + cphi * sinh2r) / omega
    sigma_pp = omega * half * (cosh2r - cphi * sinh2r)
    sigma_qp = half * sphi * sinh2r
    det = half * half
    x_c, p_c = _centers(snap)
    dx = np.asarray(x, dtype=float) - x_c
    dp = np.asarray(p, dtype=float) - p_c
    quad = (sigma_pp * dx * dx - 2.0 * sigma_qp * dx * dp + sigma_qq * dp * dp) / det
    value = np.exp(-0.5 * quad) / (2.0 * math.pi * half)
    if np.ndim(x) == 0 and np.ndim(p) == 0:
        return float(value)
    return value


def _series_order(nu: float) -> int:
    if nu <= 0.0:
        return 0
    z = nu / (nu + 1.0)
    return int(math.ceil(math.log(_SERIES_TAIL * math.pi) / math.log(z))) + 1


def wigner_gss_series(
    snap: GssSnapshot, x, p, l_max: int | None = None, *, legacy_shear_sign: bool = False
) -> float | np.ndarray:
    """Wigner density as a thermal Laguerre series.

    Converges geometrically in nu/(nu+1); the automatic order caps the
    absolute tail below 1e-12.  ``legacy_shear_sign`` flips the sign of the
    phase-space shear term; it reproduces an alternate sign convention that
    fails the displaced-parity cross-check and exists only so the
    discrepancy can be demonstrated.
    """
    nu = snap.nu
    needed = _series_order(nu)
    if l_max is None:
        l_max = needed
    else:
        if l_max < 0:
            raise ValueError("l_max must be non-negative")
        if l_max < needed:
            raise TruncationError(
                f"series tail above budget at l_max={l_max}", suggested=needed
            )
    cosh2r = math.cosh(2.0 * snap.r)
    sinh2r = math.sinh(2.0 * snap.r)
    stretch = cosh2r + math.cos(snap.phi) * sinh2r
    shear = math.sin(snap.phi) * sinh2r / stretch
    if legacy_shear_sign:
        shear = -shear
    x_c, p_c = _centers(snap)
    xs = math.sqrt(snap.omega) * (np.asarray(x, dtype=float) - x_c)
    ps = (np.asarray(p, dtype=float) - p_c) / math.sqrt(snap.omega)
    quad = xs * xs / stretch + stretch * (ps - shear * xs) ** 2
    flat = np.atleast_1d(quad).ravel()
    table = laguerre_sequence(l_max, 2.0 * flat)  # shape (l_max+1, npts)
    z = nu / (nu + 1.0)
    weights = (-z) ** np.arange(l_max + 1)
    series = weights @ table
    value = series * np.exp(-flat) / (math.pi * (nu + 1.0))
    value = value.reshape(np.shape(quad))
    if np.ndim(quad) == 0:
        return float(value)
    return value


def mean_photon_gss(snap: GssSnapshot) -> float:
    """<n> from the defining parameters."""
    sh = math.sinh(snap.r)
    return abs(snap.alpha) ** 2 + snap.nu + (2.0 * snap.nu + 1.0) * sh * sh


def _pdf_core(snap: GssSnapshot):
    """Quadratic-form ingredients of the number distribution.

    Returns (log_prefactor, a_minus, a_plus, w_minus, w_plus) where the
    a's are the rotated inverse-covariance weights and the w's the rotated
    displacement components entering the Hermite arguments.
    """
    nu = snap.nu
    r = snap.r
    phi = math.remainder(snap.phi, 2.0 * math.pi)
    half = nu + 0.5
    cosh2r = math.cosh(2.0 * r)
    sinh2r = math.sinh(2.0 * r)
    one_plus_a = half * cosh2r + 0.5
    b_mag = half * sinh2r
    den = one_plus_a * one_plus_a - b_mag * b_mag
    a_tilde = nu * (nu + 1.0) / den
    b_tilde = b_mag / den
    a_minus = a_tilde - b_tilde
    a_plus = a_tilde + b_tilde
    amp = snap.alpha
    c_tilde = (amp * one_plus_a - amp.conjugate() * cmath.exp(1j * phi) * b_mag) / den
    rot = c_tilde * cmath.exp(-0.5j * phi)
    w_minus = rot.imag
    w_plus = rot.real
    quad = (
        one_plus_a * abs(amp) ** 2
        - b_mag * (cmath.exp(-1j * phi) * amp * amp).real
    ) / den
    log_pref = -0.5 * math.log(den) - quad
    return log_pref, a_minus, a_plus, w_minus, w_plus


def _pos_hermite_logs(j_max: int, y: float) -> np.ndarray:
    """ln of the positive-recurrence Hermite variant G_j(y) for y >= 0.

    G satisfies G_{j+1} = 2 y G_j + 2 j G_{j-1} with G_0 = 1; every value is
    positive, so the sequence carries no sign bookkeeping.
    """
    logs = np.empty(j_max + 1)
    logs[0] = 0.0
    if j_max == 0:
        return logs
    shift = 0.0
    prev, cur = 1.0, 2.0 * y
    logs[1] = shift + math.log(cur) if cur > 0.0 else -math.inf
    for j in range(1, j_max):
        prev, cur = cur, 2.0 * y * cur + 2.0 * j * prev
        if cur > 1e250:
            prev /= cur
            shift += math.log(cur)
            cur = 1.0
        logs[j + 1] = shift + (math.log(cur) if cur > 0.0 else -math.inf)
    return logs


def _pdf_mpmath(n: int, snap: GssSnapshot) -> float:
    """Exact-arithmetic fallback for one heavily cancelling coefficient."""
    import mpmath as mp

    with mp.workdps(max(60, 40 + n // 4)):
        nu = mp.mpf(snap.nu)
        r = mp.mpf(snap.r)
        phi = mp.mpf(math.remainder(snap.phi, 2.0 * math.pi))
        half = nu + mp.mpf("0.5")
        one_plus_a = half * mp.cosh(2 * r) + mp.mpf("0.5")
        b_mag = half * mp.sinh(2 * r)
        den = one_plus_a**2 - b_mag**2
        a_t = nu * (nu + 1) / den
        b_t = b_mag / den
        amp = mp.mpc(snap.alpha.real, snap.alpha.imag)
        c_t = (amp * one_plus_a - mp.conj(amp) * mp.exp(1j * phi) * b_mag) / den
        rot = c_t * mp.exp(-0.5j * phi)
        w_m, w_p = mp.im(rot), mp.re(rot)
        quad = (one_plus_a * abs(amp) ** 2 - b_mag * mp.re(mp.exp(-1j * phi) * amp * amp)) / den
        pref = mp.exp(-quad) / mp.sqrt(den)
        a_m, a_p = a_t - b_t, a_t + b_t
        total = mp.mpf(0)
        for k in range(n + 1):
            if a_m == 0:
                h_m = mp.mpf((-4) ** k) * w_m ** (2 * k) if w_m != 0 else (mp.mpf(1) if k == 0 else mp.mpf(0))
                lead = mp.mpf(1)
            else:
                u_m = 1j * w_m / mp.sqrt(mp.mpc(a_m))
                h_m = mp.hermite(2 * k, u_m)
                lead = a_m**k
            u_p = 1j * w_p / mp.sqrt(a_p)
            h_p = mp.hermite(2 * (n - k), u_p)
            term = (
                lead
                * a_p ** (n - k)
                * h_m
                * h_p
                / (mp.factorial(k) * mp.factorial(n - k))
            )
            total += mp.re(term)
        value = pref * (-1) ** n * mp.mpf(4) ** (-n) * total
        return float(value)


def _pdf_attempt(snap: GssSnapshot, n_max: int) -> np.ndarray:
    log_pref, a_minus, a_plus, w_minus, w_plus = _pdf_core(snap)
    ns = np.arange(n_max + 1)

    if a_plus == 0.0:
        # nu = r = 0: plain coherent state
        return np.exp(log_poisson_weight(ns, abs(snap.alpha) ** 2))

    if snap.nu <= 1e-14 and abs(snap.alpha) == 0.0 and a_minus < 0.0:
        # squeezed vacuum: odd weights vanish identically
        pdf = np.zeros(n_max + 1)
        th = abs(math.tanh(snap.r))
        lc = -math.log(math.cosh(snap.r))
        for m in range(0, n_max // 2 + 1):
            logp = lc + log_factorial(2 * m) - 2.0 * log_factorial(m) + 2.0 * m * (math.log(th) if th > 0 else -math.inf) - 2.0 * m * math.log(2.0)
            pdf[2 * m] = math.exp(logp) if logp > -745.0 else 0.0
        return pdf

    log_k = np.array([log_factorial(k) for k in range(n_max + 1)])
    log_ap = math.log(a_plus)
    y_plus = abs(w_plus) / math.sqrt(a_plus)
    logs_plus = _pos_hermite_logs(2 * n_max, y_plus)

    limit_minus = abs(a_minus) < 1e-14 * a_plus
    if limit_minus:
        # a_minus -> 0: (a_minus)^k H_2k(i w/sqrt(a_minus)) -> (4 w^2)^k
        if w_minus == 0.0:
            logs_lead = np.full(n_max + 1, -math.inf)
            logs_lead[0] = 0.0
        else:
            logs_lead = np.arange(n_max + 1) * math.log(4.0 * w_minus * w_minus)
        signs_minus = np.ones(n_max + 1)
        logs_minus_h = np.zeros(2 * n_max + 1)  # folded into logs_lead
    elif a_minus > 0.0:
        y_minus = abs(w_minus) / math.sqrt(a_minus)
        logs_minus_h = _pos_hermite_logs(2 * n_max, y_minus)
        logs_lead = np.arange(n_max + 1) * math.log(a_minus)
        signs_minus = np.ones(n_max + 1)
    else:
        y_minus = w_minus / math.sqrt(-a_minus)
        h_logmag, h_unit = hermite_log_sequence(2 * n_max, y_minus)
        logs_minus_h = h_logmag
        signs_minus = np.empty(n_max + 1)
        logs_lead = np.arange(n_max + 1) * math.log(-a_minus)
        # sign of a_minus^k * H_2k(real) * (-1)^k from H_2k(i y) parity: the
        # (-1)^n out front combines with the plus-side (-1)^{n-k}; what is
        # left per term is sign(H_2k(y_minus))
        signs_minus[:] = np.real(h_unit[0 :: 2][: n_max + 1])

    pdf = np.zeros(n_max + 1)
    flagged: list[int] = []
    ln4 = math.log(4.0)
    for n in ns:
        ks = np.arange(n + 1)
        common = (
            logs_lead[: n + 1]
            + (n - ks) * log_ap
            + logs_plus[2 * (n - ks)]
            - log_k[: n + 1]
            - log_k[n::-1]
        )
        if limit_minus:
            logmags = common
            signs = np.ones(n + 1)
        elif a_minus > 0.0:
            logmags = common + logs_minus_h[2 * ks]
            signs = np.ones(n + 1)
        else:
            logmags = common + logs_minus_h[2 * ks]
            signs = signs_minus[: n + 1]
        if np.all(signs > 0.0):
            peak = float(np.max(logmags))
            if peak == -math.inf:
                pdf[n] = 0.0
                continue
            pdf[n] = math.exp(log_pref - n * ln4 + peak) * float(
                np.sum(np.exp(logmags - peak))
            )
        else:
            log_abs, sign, ratio = signed_logsumexp(logmags, signs)
            if not math.isfinite(log_abs):
                pdf[n] = 0.0
                continue
            if ratio > 1e8:
                flagged.append(int(n))
                continue
            pdf[n] = sign * math.exp(log_pref - n * ln4 + log_abs)
    for n in flagged:
        pdf[n] = _pdf_mpmath(n, snap)
    tiny = pdf < 0.0
    if np.any(pdf[tiny] < -1e-13):
        raise ValueError(f"negative photon weight beyond rounding: {pdf[tiny].min()}")
    pdf[tiny] = 0.0
    return pdf


def _pdf_cutoff_guess(snap: GssSnapshot) -> int:
    mean = mean_photon_gss(snap)
    sigma_max = (snap.nu + 0.5) * math.exp(2.0 * abs(snap.r))
    q = (2.0 * sigma_max - 1.0) / (2.0 * sigma_max + 1.0)
    span = 30.0 / -math.log(q) if 0.0 < q < 1.0 else 0.0
    return int(math.ceil(mean + span + 20.0))


def photon_pdf_gss(snap: GssSnapshot, n_max: int | None = None) -> np.ndarray:
    """Photon-number probabilities P_0..P_{n_max}.

    With ``n_max`` unset the cutoff grows until the tail mass drops below
    1e-12.  An explicit cutoff is checked against the 1e-10 hard budget and
    rejected with a suggestion when the tail is still too heavy.
    """
    if n_max is not None:
        if n_max < 0:
            raise ValueError("n_max must be non-negative")
        pdf = _pdf_attempt(snap, n_max)
        deficit = 1.0 - float(pdf.sum())
        if deficit > _PDF_TAIL_HARD:
            raise TruncationError(
                f"photon tail mass {deficit:.3e} exceeds {_PDF_TAIL_HARD:.0e} at n_max={n_max}",
                suggested=max(_pdf_cutoff_guess(snap), 2 * n_max),
            )
        return pdf
    cutoff = _pdf_cutoff_guess(snap)
    while True:
        pdf = _pdf_attempt(snap, cutoff)
        deficit = 1.0 - float(pdf.sum())
        if deficit < _PDF_TAIL_TARGET:
            return pdf
        if cutoff >= _PDF_N_CAP:
            raise TruncationError(
                f"photon tail mass {deficit:.3e} still above {_PDF_TAIL_TARGET:.0e} "
                f"at the n_max cap {_PDF_N_CAP}",
                suggested=_PDF_N_CAP,
            )
        cutoff = min(int(math.ceil(1.6 * cutoff)) + 32, _PDF_N_CAP)


def energy_match_r0(css: CssParams, target: GssParams) -> float:
    """Squeeze magnitude matching the Gaussian <n> to a superposition's.

    Bisects on r at t = 0 (the other Gaussian parameters come from
    ``target``; its ``r0`` entry is ignored).  Raises when the target energy
    sits below the displacement-plus-thermal floor, where no squeeze can
    reach it.
    """
    n_target = css.mean_photon()
    floor = abs(target.alpha0) ** 2 + target.nu0
    excess = n_target - floor
    if excess < 0.0:
        raise ValueError(
            f"target energy {n_target} is below the floor {floor}; no squeeze matches it"
        )
    scale = 2.0 * target.nu0 + 1.0

    def gap(r: float) -> float:
        return floor + scale * math.sinh(r) ** 2 - n_target

    lo, hi = 0.0, 1.0
    while gap(hi) < 0.0:
        hi *= 2.0
        if hi > 1e3:
            raise ValueError("no bracket for the squeeze magnitude")
    while hi - lo > 1e-10:
        mid = 0.5 * (lo + hi)
        if gap(mid) <= 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def g2_witness(snap: GssSnapshot) -> G2Witness | None:
    """Second-order correlation from factorial moments of the photon pdf.

    None for the vacuum; the verdict flags the super-thermal bunching
    (g2 > 3) that only nonclassical Gaussian states reach.
    """
    pdf = photon_pdf_gss(snap)
    n = np.arange(pdf.size, dtype=float)
    mean = float(np.dot(n, pdf))
    if mean <= 1e-12:
        return None
    fact2 = float(np.dot(n * (n - 1.0), pdf))
    value = fact2 / (mean * mean)
    return G2Witness(value=value, quantum=value > 3.0)
