"""Small numeric helpers: golden-section search and signed log-sums."""

from __future__ import annotations

import math

import numpy as np

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section_max(f, lo: float, hi: float, tol: float = 1e-10,
                       max_iter: int = 400) -> tuple[float, float]:
    """Maximize a unimodal f on [lo, hi]; returns (argmax, max value)."""
    if hi <= lo:
        raise ValueError("need lo < hi")
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def signed_logsumexp(logmags: np.ndarray, signs: np.ndarray) -> tuple[float, float, float]:
    """Sum of signs*exp(logmags) in scaled form.

    Returns (log|sum|, sign of sum, cancellation ratio).  The ratio is
    max term magnitude over |sum| (inf when the sum vanishes); large values
    flag catastrophic cancellation.
    """
    logmags = np.asarray(logmags, dtype=float)
    signs = np.asarray(signs, dtype=float)
    finite = logmags > -np.inf
    if not np.any(finite):
        return -math.inf, 1.0, 1.0
    m = float(np.max(logmags[finite]))
    total = float(np.sum(signs[finite] * np.exp(logmags[finite] - m)))
    if total == 0.0:
        return -math.inf, 1.0, math.inf
    return m + math.log(abs(total)), math.copysign(1.0, total), 1.0 / abs(total)
