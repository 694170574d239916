"""Closed-form Uhlmann fidelity between the two decayed state families.

At zero reservoir temperature the superposition state stays a rank-2
mixture supported on its even/odd cat components, so the fidelity with any
other state reduces to the 2x2 problem in that basis.  The three coherent
matrix elements of the Gaussian state are available in closed form, which
makes the whole fidelity a handful of elementary evaluations.

The rank-2 reduction is exact at superposition phases 0 and pi (where the
cat components are eigenvectors); those are the phases the validation grid
samples.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass

from .css import CssSnapshot, snapshot
from .errors import NumericalConsistencyError, UnsupportedRegimeError
from .gss import GssSnapshot, evolve_gss
from .params import CssParams, GssParams, ReservoirParams

__all__ = ["ZetaEta", "OverlapTriple", "zeta_eta", "overlaps", "fidelity_css_gss"]

logger = logging.getLogger(__name__)

_IMAG_DUST = 1e-12
_SCHWARZ_SLACK = 1e-10
_EIGEN_SLACK = 1e-10
_UNITY_SLACK = 1e-9


@dataclass(frozen=True)
class ZetaEta:
    """Rotated branch coordinates feeding the overlap exponents.

    zeta collects the conjugated sum of the branch and Gaussian amplitudes,
    eta their difference, each rotated by half the squeeze angle so the
    squeeze contribution becomes diagonal.
    """

    zeta: complex
    eta: complex


@dataclass(frozen=True)
class OverlapTriple:
    """<beta|rho_B|beta>, <-beta|rho_B|-beta>, <-beta|rho_B|beta>."""

    bb: complex
    mm: complex
    mb: complex

    def __post_init__(self) -> None:
        for name, value in (("bb", self.bb), ("mm", self.mm)):
            if abs(value.imag) > _IMAG_DUST:
                raise NumericalConsistencyError(
                    f"diagonal overlap {name} has imaginary part {value.imag:.3e}"
                )
            if value.real < 0.0:
                raise NumericalConsistencyError(
                    f"diagonal overlap {name} is negative: {value.real:.3e}"
                )
        bound = math.sqrt(self.bb.real * self.mm.real) + _SCHWARZ_SLACK
        if abs(self.mb) > bound:
            raise NumericalConsistencyError(
                f"cross overlap |mb|={abs(self.mb):.6e} violates the "
                f"Cauchy-Schwarz bound {bound:.6e}"
            )


def zeta_eta(beta: complex, alpha: complex, phi: float) -> ZetaEta:
    """Half-angle-rotated sum and difference coordinates."""
    half = cmath.exp(0.5j * math.remainder(phi, 2.0 * math.pi))
    return ZetaEta(
        zeta=(beta.conjugate() + alpha.conjugate()) * half,
        eta=(beta - alpha) / half,
    )


def overlaps(css_snap: CssSnapshot, gss_snap: GssSnapshot) -> OverlapTriple:
    """Coherent-state matrix elements of the Gaussian state.

    Both snapshots must describe the same instant.  The displacement
    contributes a pure phase to the cross element only.
    """
    if abs(css_snap.t - gss_snap.t) > 1e-12 * max(1.0, abs(css_snap.t)):
        raise ValueError(
            f"snapshots describe different times: {css_snap.t} vs {gss_snap.t}"
        )
    nu = gss_snap.nu
    r = gss_snap.r
    alpha = gss_snap.alpha
    beta = css_snap.beta
    ze = zeta_eta(beta, alpha, gss_snap.phi)

    cosh_r = math.cosh(r)
    sinh_r = math.sinh(r)
    tanh_r = math.tanh(r)
    cap_k = ((nu + 1.0) * cosh_r) ** 2 - (nu * sinh_r) ** 2
    cap_kp = (nu + 1.0) ** 2 - (nu * tanh_r) ** 2
    pref = 1.0 / math.sqrt(cap_k)
    mix = 1.0 - nu * (nu + 1.0) / cap_k
    squeeze_scale = (2.0 * nu + 1.0) * tanh_r / cap_kp

    def diagonal(w: complex) -> complex:
        mag = abs(w) ** 2
        return complex(
            pref * math.exp(-mag * mix + squeeze_scale * (w * w).real)
        )

    bb = diagonal(ze.eta)
    mm = diagonal(ze.zeta)
    phase = cmath.exp(alpha.conjugate() * beta - alpha * beta.conjugate())
    cross = (
        -0.5 * (abs(ze.zeta) ** 2 + abs(ze.eta) ** 2)
        - nu * (nu + 1.0) * ze.zeta * ze.eta / cap_k
        + 0.5 * squeeze_scale * (ze.zeta**2 + ze.eta**2)
    )
    mb = phase * pref * cmath.exp(cross)
    return OverlapTriple(bb=bb, mm=mm, mb=mb)


def fidelity_css_gss(
    css: CssParams, gss: GssParams, res: ReservoirParams, t: float
) -> float:
    """Uhlmann fidelity F(rho_css(t), rho_gss(t)) at zero temperature."""
    if res.nbar != 0.0:
        raise UnsupportedRegimeError(
            "the rank-2 superposition reduction requires nbar = 0"
        )
    css_snap = snapshot(css, res, t)
    gss_snap = evolve_gss(gss, res, t)
    triple = overlaps(css_snap, gss_snap)

    fc = css_snap.f * math.cos(css.theta)
    nsq = css.norm_sq
    ratio_e = (1.0 + fc) / (2.0 * nsq)
    ratio_o = (1.0 - fc) / (2.0 * nsq)
    ratio_d = math.sqrt(max((1.0 + fc) * (1.0 - fc), 0.0)) / (2.0 * nsq)

    bb = triple.bb.real
    mm = triple.mm.real
    even = ratio_e * (bb + mm + 2.0 * triple.mb.real)
    odd = ratio_o * (bb + mm - 2.0 * triple.mb.real)
    cross = ratio_d * complex(bb - mm, 2.0 * triple.mb.imag)

    gap = math.hypot(even - odd, 2.0 * abs(cross))
    lam_hi = 0.5 * ((even + odd) + gap)
    lam_lo = 0.5 * ((even + odd) - gap)
    if lam_lo < 0.0:
        if lam_lo < -_EIGEN_SLACK:
            raise NumericalConsistencyError(
                f"fidelity eigenvalue {lam_lo:.3e} below zero beyond tolerance"
            )
        lam_lo = 0.0
    fid = math.sqrt(lam_hi) + math.sqrt(lam_lo)
    if fid > 1.0:
        if fid > 1.0 + _UNITY_SLACK:
            raise NumericalConsistencyError(
                f"fidelity {fid} exceeds 1 beyond tolerance"
            )
        logger.info("fidelity %.17g clamped to 1", fid)
        fid = 1.0
    return fid
