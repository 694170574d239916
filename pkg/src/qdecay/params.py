"""Parameter bundles for the two state families and the reservoir.

All quantities are dimensionless with hbar = 1; `omega` is the mode
frequency, `k` the energy relaxation rate and `nbar` the mean thermal
occupation of the bath.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass


def _require_finite(name: str, value: float) -> None:
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")


def _require_finite_complex(name: str, value: complex) -> None:
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise ValueError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class ReservoirParams:
    """Mode frequency and thermal-bath coupling."""

    omega: float = 1.0
    k: float = 0.1
    nbar: float = 0.0

    def __post_init__(self):
        for name in ("omega", "k", "nbar"):
            _require_finite(name, getattr(self, name))
        if self.omega <= 0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        if self.k <= 0:
            raise ValueError(f"k must be positive, got {self.k}")
        if self.nbar < 0:
            raise ValueError(f"nbar must be non-negative, got {self.nbar}")


@dataclass(frozen=True)
class CssParams:
    """Superposition of two opposite coherent amplitudes.

    The state is (|beta0> + e^{i theta} |-beta0>)/N with
    N^2 = 2 (1 + e^{-2|beta0|^2} cos theta).  theta = 0 gives the even
    superposition, theta = pi the odd one.
    """

    beta0: complex
    theta: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "beta0", complex(self.beta0))
        _require_finite_complex("beta0", self.beta0)
        _require_finite("theta", self.theta)
        if abs(self.beta0) > 50:
            raise ValueError("|beta0| > 50 exceeds the supported range")
        if self.norm_sq <= 0:
            raise ValueError(
                "degenerate superposition: the two branches cancel "
                f"(beta0={self.beta0}, theta={self.theta})"
            )

    @property
    def norm_sq(self) -> float:
        """Squared normalization N^2 of the superposition."""
        b = abs(self.beta0) ** 2
        return 2.0 * (1.0 + math.exp(-2.0 * b) * math.cos(self.theta))

    def mean_photon(self) -> float:
        """<n> of the initial superposition."""
        b = abs(self.beta0) ** 2
        return (2.0 * b / self.norm_sq) * (
            1.0 - math.exp(-2.0 * b) * math.cos(self.theta)
        )


@dataclass(frozen=True)
class GssParams:
    """Displaced squeezed thermal state D(alpha0) S(r0, phi0) rho_nu0 h.c."""

    alpha0: complex = 0j
    r0: float = 0.0
    phi0: float = 0.0
    nu0: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "alpha0", complex(self.alpha0))
        _require_finite_complex("alpha0", self.alpha0)
        for name in ("r0", "phi0", "nu0"):
            _require_finite(name, getattr(self, name))
        if self.r0 < 0:
            raise ValueError(f"r0 must be non-negative, got {self.r0}")
        if self.nu0 < 0:
            raise ValueError(f"nu0 must be non-negative, got {self.nu0}")

    def mean_photon(self) -> float:
        """<n> = |alpha0|^2 + nu0 + (2 nu0 + 1) sinh^2 r0."""
        return (
            abs(self.alpha0) ** 2
            + self.nu0
            + (2.0 * self.nu0 + 1.0) * math.sinh(self.r0) ** 2
        )


def decayed_amplitude(alpha0: complex, res: ReservoirParams, t: float) -> complex:
    """Coherent amplitude under damped rotation, alpha0 e^{-(i omega + k) t}."""
    return alpha0 * cmath.exp(-(1j * res.omega + res.k) * t)
