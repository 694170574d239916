"""Deterministic data grids behind each published plot.

Every builder evaluates closed forms only, on grids fixed here, so a tag
always produces identical numbers.  The CLI handles serialization; this
module just returns the matrix, its annotated header, and the resolved
parameters for the manifest.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from . import css, gss
from .errors import ConfigError
from .fidelity import fidelity_css_gss
from .params import CssParams, GssParams, ReservoirParams

__all__ = ["FigureData", "figure_tags", "build_figure"]

_RES = ReservoirParams(omega=1.0, k=0.1, nbar=0.0)
_THETA = {"even": 0.0, "odd": math.pi}


@dataclass(frozen=True)
class FigureData:
    tag: str
    header: tuple[str, ...]
    rows: np.ndarray
    params: dict

    def __post_init__(self) -> None:
        if self.rows.ndim != 2 or self.rows.shape[1] != len(self.header):
            raise ValueError("rows and header disagree")


def _time_columns(kt_end: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    kt = np.linspace(0.0, kt_end, n)
    return kt, kt / _RES.k


def _base_params(extra: dict) -> dict:
    return {"omega": _RES.omega, "k": _RES.k, "nbar": _RES.nbar, **extra}


def _css_wigner(kind: str, beta0: float) -> FigureData:
    params = CssParams(beta0=beta0, theta=_THETA[kind])
    axis = np.linspace(-4.0, 4.0, 101)
    lam = math.sqrt(0.5) * (axis[:, None] + 1j * axis[None, :])
    w = css.wigner_css(params, _RES, 0.0, lam)
    rows = np.column_stack([
        np.repeat(axis, axis.size),
        np.tile(axis, axis.size),
        np.asarray(w).ravel(),
    ])
    return FigureData(
        tag=f"css-wigner-{kind}-{beta0:g}",
        header=("x[quadrature]", "p[quadrature]", "wigner[dx dp density]"),
        rows=rows,
        params=_base_params({"family": "css", "beta0": beta0,
                             "theta": params.theta, "t": 0.0,
                             "grid": "101x101 over [-4, 4]^2"}),
    )


def _vacuum_fidelity() -> FigureData:
    kt, times = _time_columns(5.0, 251)
    even = CssParams(beta0=0.8, theta=0.0)
    odd = CssParams(beta0=0.8, theta=math.pi)
    rows = np.column_stack([
        kt, times,
        [css.vacuum_fidelity(even, _RES, t) for t in times],
        [css.vacuum_fidelity(odd, _RES, t) for t in times],
    ])
    return FigureData(
        tag="vacuum-fidelity",
        header=("kt[dimensionless]", "t[model units]",
                "fidelity_even[dimensionless]", "fidelity_odd[dimensionless]"),
        rows=rows,
        params=_base_params({"family": "css", "beta0": 0.8,
                             "theta": [0.0, math.pi]}),
    )


def _css_det(beta0: float) -> FigureData:
    kt, times = _time_columns(2.0, 401)
    even = CssParams(beta0=beta0, theta=0.0)
    odd = CssParams(beta0=beta0, theta=math.pi)
    rows = np.column_stack([
        kt, times,
        [css.covariance_css(even, _RES, t).det for t in times],
        [css.covariance_css(odd, _RES, t).det for t in times],
    ])
    return FigureData(
        tag=f"css-det-{beta0:g}",
        header=("kt[dimensionless]", "t[model units]",
                "det_even[dimensionless]", "det_odd[dimensionless]"),
        rows=rows,
        params=_base_params({"family": "css", "beta0": beta0,
                             "theta": [0.0, math.pi]}),
    )


def _css_entropy(beta0: float) -> FigureData:
    kt, times = _time_columns(4.0, 401)
    even = CssParams(beta0=beta0, theta=0.0)
    odd = CssParams(beta0=beta0, theta=math.pi)
    rows = np.column_stack([
        kt, times,
        [css.entropy_css(even, _RES, t) for t in times],
        [css.entropy_css(odd, _RES, t) for t in times],
    ])
    return FigureData(
        tag=f"css-entropy-{beta0:g}",
        header=("kt[dimensionless]", "t[model units]",
                "entropy_even[nats]", "entropy_odd[nats]"),
        rows=rows,
        params=_base_params({"family": "css", "beta0": beta0,
                             "theta": [0.0, math.pi]}),
    )


def _pn_rows(times: np.ndarray, kt: np.ndarray,
             pdf_at: Callable[[float, int], np.ndarray],
             width: int) -> np.ndarray:
    blocks = []
    for ktv, t in zip(kt, times):
        pdf = pdf_at(float(t), width - 1)
        blocks.append(np.column_stack([
            np.full(width, ktv), np.full(width, t),
            np.arange(width, dtype=float), pdf,
        ]))
    return np.concatenate(blocks)


def _css_pn(kind: str, beta0: float) -> FigureData:
    params = CssParams(beta0=beta0, theta=_THETA[kind])
    kt, times = _time_columns(2.0, 41)
    width = css.photon_pdf_css(params, _RES, 0.0).size
    rows = _pn_rows(
        times, kt,
        lambda t, n_max: css.photon_pdf_css(params, _RES, t, n_max=n_max),
        width)
    return FigureData(
        tag=f"css-pn-{kind}-{beta0:g}",
        header=("kt[dimensionless]", "t[model units]", "n[photon number]",
                "p[probability]"),
        rows=rows,
        params=_base_params({"family": "css", "beta0": beta0,
                             "theta": params.theta, "n_max": width - 1}),
    )


def _gss_pair_figure(tag: str, kt_end: float, n_points: int,
                     value, value_names: tuple[str, str]) -> FigureData:
    kt, times = _time_columns(kt_end, n_points)
    cols = []
    for nu0 in (0.0, 3.0):
        params = GssParams(alpha0=0.0, r0=1.0, phi0=0.0, nu0=nu0)
        cols.append([value(gss.evolve_gss(params, _RES, t)) for t in times])
    rows = np.column_stack([kt, times, cols[0], cols[1]])
    return FigureData(
        tag=tag,
        header=("kt[dimensionless]", "t[model units]") + value_names,
        rows=rows,
        params=_base_params({"family": "gss", "alpha0": 0.0, "r0": 1.0,
                             "phi0": 0.0, "nu0": [0.0, 3.0]}),
    )


def _gss_pn(nu0: float) -> FigureData:
    params = GssParams(alpha0=0.0, r0=1.0, phi0=0.0, nu0=nu0)
    kt, times = _time_columns(2.0, 41)
    pdf0 = gss.photon_pdf_gss(gss.evolve_gss(params, _RES, 0.0))
    # trim the stored grid where the initial distribution has fallen to dust;
    # the remaining tail must stay under the evaluator's explicit-cutoff bound
    width = int(np.searchsorted(np.cumsum(pdf0), 1.0 - 1e-11)) + 2
    width = min(width, pdf0.size)
    rows = _pn_rows(
        times, kt,
        lambda t, n_max: gss.photon_pdf_gss(
            gss.evolve_gss(params, _RES, t), n_max=n_max),
        width)
    return FigureData(
        tag=f"gss-pn-nu0-{nu0:g}",
        header=("kt[dimensionless]", "t[model units]", "n[photon number]",
                "p[probability]"),
        rows=rows,
        params=_base_params({"family": "gss", "alpha0": 0.0, "r0": 1.0,
                             "phi0": 0.0, "nu0": nu0, "n_max": width - 1}),
    )


def _fidelity_figure(nu0: float, beta0: float) -> FigureData:
    kt, times = _time_columns(6.0, 301)
    gauss = GssParams(alpha0=0.0, r0=1.0, phi0=0.0, nu0=nu0)
    cols = {}
    for kind, theta in _THETA.items():
        cat = CssParams(beta0=beta0, theta=theta)
        f = np.array([fidelity_css_gss(cat, gauss, _RES, t) for t in times])
        cols[kind] = f
    rows = np.column_stack([
        kt, times,
        cols["even"], cols["even"] ** 2,
        cols["odd"], cols["odd"] ** 2,
    ])
    return FigureData(
        tag=f"fidelity-nu0-{nu0:g}-beta-{beta0:g}",
        header=("kt[dimensionless]", "t[model units]",
                "fidelity_even[dimensionless]", "fidelity_sq_even[dimensionless]",
                "fidelity_odd[dimensionless]", "fidelity_sq_odd[dimensionless]"),
        rows=rows,
        params=_base_params({"family": "fidelity", "beta0": beta0,
                             "theta": [0.0, math.pi], "alpha0": 0.0,
                             "r0": 1.0, "phi0": 0.0, "nu0": nu0}),
    )


def _builders() -> dict[str, Callable[[], FigureData]]:
    out: dict[str, Callable[[], FigureData]] = {}
    for kind in ("even", "odd"):
        for beta0 in (0.8, 1.5):
            out[f"css-wigner-{kind}-{beta0:g}"] = (
                lambda k=kind, b=beta0: _css_wigner(k, b))
            out[f"css-pn-{kind}-{beta0:g}"] = (
                lambda k=kind, b=beta0: _css_pn(k, b))
    out["vacuum-fidelity"] = _vacuum_fidelity
    for beta0 in (0.8, 1.5):
        out[f"css-det-{beta0:g}"] = lambda b=beta0: _css_det(b)
        out[f"css-entropy-{beta0:g}"] = lambda b=beta0: _css_entropy(b)
    out["gss-det"] = lambda: _gss_pair_figure(
        "gss-det", 4.0, 401, gss.determinant_gss,
        ("det_nu0_0[dimensionless]", "det_nu0_3[dimensionless]"))
    out["gss-entropy"] = lambda: _gss_pair_figure(
        "gss-entropy", 6.0, 301, gss.entropy_gss,
        ("entropy_nu0_0[nats]", "entropy_nu0_3[nats]"))
    for nu0 in (0.0, 3.0):
        out[f"gss-pn-nu0-{nu0:g}"] = lambda n=nu0: _gss_pn(n)
    for nu0 in (0.0, 3.0):
        for beta0 in (0.8, 2.0):
            out[f"fidelity-nu0-{nu0:g}-beta-{beta0:g}"] = (
                lambda n=nu0, b=beta0: _fidelity_figure(n, b))
    return out


_FIGURES = _builders()


def figure_tags() -> list[str]:
    return list(_FIGURES)


def build_figure(tag: str) -> FigureData:
    try:
        builder = _FIGURES[tag]
    except KeyError:
        raise ConfigError(
            f"unknown figure tag {tag!r}; valid tags: "
            + ", ".join(figure_tags())) from None
    return builder()
