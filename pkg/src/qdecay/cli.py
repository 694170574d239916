"""Command-line front end: witness sweeps, figure data, integrator reports.

Subcommands
    css            witness series for a decaying coherent superposition
    gss            witness series for a decaying Gaussian state
    fidelity       closed-form fidelity between the two families over time
    oracle-compare closed forms vs the integrator, worst error per observable
    figure         emit the data grid behind a documented figure tag
    validate       run every validation suite and summarize

Every run writes CSV series (RFC 4180, LF, UTF-8, 17 significant digits)
plus summary.json (scalar results) and manifest.json (toolkit version and
the fully resolved parameters; feeding manifest["parameters"] back through
--config reproduces the run byte for byte).  Values that do not exist for
a configuration are written as null in JSON and nan in CSV, never as 0.

Exit codes: 0 success, 1 computation error, 2 invalid configuration,
3 a validation or comparison suite failed its tolerance.

DECAY_THREADS caps parallel figure builds (default: machine parallelism).
"""

from __future__ import annotations

import argparse
import concurrent.futures
import dataclasses
import hashlib
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__, css, gss, validation
from .errors import ConfigError, QDecayError
from .fidelity import fidelity_css_gss
from .figures import build_figure, figure_tags
from .params import CssParams, GssParams, ReservoirParams

_PN_HEAD = 10


@dataclasses.dataclass
class RunConfig:
    """Resolved parameters for one CLI run; one JSON document round trips."""

    family: str
    beta0: float = 0.8
    theta: float = 0.0
    alpha0: complex = 0.0j
    r0: float = 1.0
    phi0: float = 0.0
    nu0: float = 0.0
    omega: float = 1.0
    k: float = 0.1
    nbar: float = 0.0
    t_start: float = 0.0
    t_end: float = 30.0
    n_points: int = 301
    grid_half_width: float = 4.0
    grid_points: int = 41
    seed: int = 20260818
    suite: str = "default"
    tag: str = ""
    out: str = "."

    def __post_init__(self) -> None:
        if self.n_points < 2:
            raise ConfigError("n_points must be at least 2")
        if self.t_end <= self.t_start:
            raise ConfigError("time grid must be monotone: t_end > t_start")
        if self.t_start < 0:
            raise ConfigError("t_start must be non-negative")
        if self.grid_points < 2 or self.grid_half_width <= 0:
            raise ConfigError("phase-space grid needs points >= 2 and a "
                              "positive half width")

    def reservoir(self) -> ReservoirParams:
        return ReservoirParams(omega=self.omega, k=self.k, nbar=self.nbar)

    def times(self) -> np.ndarray:
        return np.linspace(self.t_start, self.t_end, self.n_points)

    def as_json_dict(self) -> dict:
        out = dataclasses.asdict(self)
        out["alpha0"] = [self.alpha0.real, self.alpha0.imag]
        return out


def _config_from(args: argparse.Namespace, family: str) -> RunConfig:
    fields = {f.name: f for f in dataclasses.fields(RunConfig)}
    merged: dict = {}
    if getattr(args, "config", None):
        try:
            raw = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}")
        if not isinstance(raw, dict):
            raise ConfigError("config must be a JSON object")
        for key, value in raw.items():
            if key not in fields:
                raise ConfigError(f"unknown config field {key!r}")
            merged[key] = value
    if merged.get("family", family) != family:
        raise ConfigError(
            f"config field 'family' says {merged['family']!r} but the "
            f"subcommand is {family!r}")
    merged["family"] = family
    for name in fields:
        value = getattr(args, name, None)
        if value is not None:
            merged[name] = value
    if isinstance(merged.get("alpha0"), (list, tuple)):
        re_im = merged["alpha0"]
        if len(re_im) != 2:
            raise ConfigError("alpha0 as a list must be [re, im]")
        merged["alpha0"] = complex(float(re_im[0]), float(re_im[1]))
    elif isinstance(merged.get("alpha0"), str):
        try:
            merged["alpha0"] = complex(merged["alpha0"])
        except ValueError:
            raise ConfigError(f"cannot parse alpha0 {merged['alpha0']!r}")
    elif isinstance(merged.get("alpha0"), (int, float)):
        merged["alpha0"] = complex(merged["alpha0"])
    try:
        return RunConfig(**merged)
    except TypeError as exc:
        raise ConfigError(str(exc))


def _fmt(value: float) -> str:
    return format(float(value), ".17g")


def _write_csv(path: Path, header: tuple[str, ...], rows) -> Path:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")
    return path


def _write_json(path: Path, payload: dict) -> Path:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def _emit_manifest(cfg: RunConfig, out_dir: Path, extra: dict | None = None) -> None:
    payload = {"version": __version__, "parameters": cfg.as_json_dict()}
    if extra:
        payload.update(extra)
    _write_json(out_dir / "manifest.json", payload)


def _out_dir(cfg: RunConfig) -> Path:
    path = Path(cfg.out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _time_cols(cfg: RunConfig, times: np.ndarray) -> list[np.ndarray]:
    return [cfg.k * times, times]


_TIME_HEADER = ("kt[dimensionless]", "t[model units]")


def _series(cfg: RunConfig, out_dir: Path, name: str, label: str,
            times: np.ndarray, values) -> None:
    cols = _time_cols(cfg, times) + [values]
    _write_csv(out_dir / f"{name}.csv", _TIME_HEADER + (label,),
               np.column_stack(cols))


def _pn_head_rows(times: np.ndarray, pdf_at) -> np.ndarray:
    rows = np.zeros((times.size, _PN_HEAD))
    for i, t in enumerate(times):
        pdf = pdf_at(float(t))
        head = pdf[:_PN_HEAD]
        rows[i, : head.size] = head
    return rows


def _run_css(cfg: RunConfig) -> int:
    params = CssParams(beta0=cfg.beta0, theta=cfg.theta)
    res = cfg.reservoir()
    times = cfg.times()
    out_dir = _out_dir(cfg)

    u = np.linspace(-cfg.grid_half_width, cfg.grid_half_width,
                    cfg.grid_points)
    lam = math.sqrt(res.omega / 2.0) * (u[:, None] + 1j * u[None, :])

    det = np.empty(times.size)
    entropy = np.empty(times.size)
    mandel = np.empty(times.size)
    wig_min = np.empty(times.size)
    vac = np.empty(times.size)
    for i, t in enumerate(times):
        t = float(t)
        det[i] = css.covariance_css(params, res, t).det
        entropy[i] = css.entropy_css(params, res, t)
        q = css.mandel_q(css.photon_pdf_css(params, res, t))
        mandel[i] = math.nan if q is None else q
        wig_min[i] = float(np.min(css.wigner_css(params, res, t, lam)))
        vac[i] = css.vacuum_fidelity(params, res, t)

    _series(cfg, out_dir, "det", "det[dimensionless]", times, det)
    _series(cfg, out_dir, "entropy", "entropy[nats]", times, entropy)
    _series(cfg, out_dir, "mandel_q", "mandel_q[dimensionless]", times, mandel)
    _series(cfg, out_dir, "min_wigner", "min_wigner[dx dp density]",
            times, wig_min)
    _series(cfg, out_dir, "vacuum_fidelity", "vacuum_fidelity[dimensionless]",
            times, vac)
    pn = _pn_head_rows(times, lambda t: css.photon_pdf_css(params, res, t))
    _write_csv(out_dir / "pn_head.csv",
               _TIME_HEADER + tuple(f"p{n}[probability]"
                                    for n in range(_PN_HEAD)),
               np.column_stack(_time_cols(cfg, times) + [pn]))

    t_sq = css.squeeze_time_css(params, res.k)
    summary = {
        "family": "css",
        "squeeze_time": t_sq,
        "squeezing_visible": t_sq is not None,
        "coherence_time": css.decoherence_time(params, res.k),
    }
    _write_json(out_dir / "summary.json", summary)
    _emit_manifest(cfg, out_dir)
    return 0


def _run_gss(cfg: RunConfig) -> int:
    params = GssParams(alpha0=cfg.alpha0, r0=cfg.r0, phi0=cfg.phi0,
                       nu0=cfg.nu0)
    res = cfg.reservoir()
    times = cfg.times()
    out_dir = _out_dir(cfg)

    u = np.linspace(-cfg.grid_half_width, cfg.grid_half_width,
                    cfg.grid_points)
    x_grid = math.sqrt(2.0 / res.omega) * u[:, None] * np.ones_like(u)[None, :]
    p_grid = math.sqrt(2.0 * res.omega) * np.ones_like(u)[:, None] * u[None, :]

    det = np.empty(times.size)
    entropy = np.empty(times.size)
    mandel = np.empty(times.size)
    g2 = np.empty(times.size)
    wig_min = np.empty(times.size)
    pn = np.zeros((times.size, _PN_HEAD))
    for i, t in enumerate(times):
        snap = gss.evolve_gss(params, res, float(t))
        det[i] = gss.determinant_gss(snap)
        entropy[i] = gss.entropy_gss(snap)
        pdf = gss.photon_pdf_gss(snap)
        q = css.mandel_q(pdf)
        mandel[i] = math.nan if q is None else q
        witness = gss.g2_witness(snap)
        g2[i] = math.nan if witness is None else witness.value
        wig_min[i] = float(np.min(gss.wigner_gss_closed(snap, x_grid, p_grid)))
        pn[i, : min(_PN_HEAD, pdf.size)] = pdf[:_PN_HEAD]

    _series(cfg, out_dir, "det", "det[dimensionless]", times, det)
    _series(cfg, out_dir, "entropy", "entropy[nats]", times, entropy)
    _series(cfg, out_dir, "mandel_q", "mandel_q[dimensionless]", times, mandel)
    _series(cfg, out_dir, "g2", "g2[dimensionless]", times, g2)
    _series(cfg, out_dir, "min_wigner", "min_wigner[dx dp density]",
            times, wig_min)
    _write_csv(out_dir / "pn_head.csv",
               _TIME_HEADER + tuple(f"p{n}[probability]"
                                    for n in range(_PN_HEAD)),
               np.column_stack(_time_cols(cfg, times) + [pn]))

    t_peak = gss.char_time_gss(params, res)
    state_ok, bath_ok = gss.visibility_gss(params, res)
    summary = {
        "family": "gss",
        "thermal_peak_time": t_peak,
        "squeezing_visible_state": state_ok,
        "squeezing_visible_bath": bath_ok,
    }
    _write_json(out_dir / "summary.json", summary)
    _emit_manifest(cfg, out_dir)
    return 0


def _run_fidelity(cfg: RunConfig) -> int:
    cat = CssParams(beta0=cfg.beta0, theta=cfg.theta)
    gauss = GssParams(alpha0=cfg.alpha0, r0=cfg.r0, phi0=cfg.phi0,
                      nu0=cfg.nu0)
    res = cfg.reservoir()
    times = cfg.times()
    out_dir = _out_dir(cfg)
    values = np.array([fidelity_css_gss(cat, gauss, res, float(t))
                       for t in times])
    _write_csv(out_dir / "fidelity.csv",
               _TIME_HEADER + ("fidelity[dimensionless]",
                               "fidelity_sq[dimensionless]"),
               np.column_stack(_time_cols(cfg, times)
                               + [values, values ** 2]))
    summary = {
        "family": "fidelity",
        "initial": float(values[0]),
        "final": float(values[-1]),
    }
    _write_json(out_dir / "summary.json", summary)
    _emit_manifest(cfg, out_dir)
    return 0


def _suite_report(results, out_dir: Path, cfg: RunConfig, name: str) -> int:
    rows = []
    for result in results:
        print(result.summary())
        for note in result.notes:
            print("   ", note)
        for observable, value in sorted(result.worst.items()):
            rows.append((result.name, observable, value, result.tolerance,
                         result.passed, result.elapsed))
    with open(out_dir / f"{name}.csv", "w", encoding="utf-8",
              newline="") as fh:
        fh.write("suite,observable,worst,tolerance,passed,elapsed[s]\n")
        for suite, observable, value, tol, passed, elapsed in rows:
            fh.write(f"{suite},{observable},{_fmt(value)},{_fmt(tol)},"
                     f"{str(passed).lower()},{_fmt(elapsed)}\n")
    summary = {
        "suites": {r.name: {"passed": r.passed,
                            "worst": {k: v for k, v in sorted(r.worst.items())},
                            "notes": r.notes}
                   for r in results},
        "all_passed": all(r.passed for r in results),
    }
    _write_json(out_dir / "summary.json", summary)
    _emit_manifest(cfg, out_dir)
    return 0 if summary["all_passed"] else 3


def _run_oracle_compare(cfg: RunConfig) -> int:
    if cfg.suite != "default":
        raise ConfigError(f"unknown suite {cfg.suite!r}; available: default")
    out_dir = _out_dir(cfg)
    results = [
        validation.css_oracle_suite(),
        validation.gss_oracle_suite(),
        validation.fidelity_suite(seed=cfg.seed),
    ]
    return _suite_report(results, out_dir, cfg, "oracle_compare")


def _run_validate(cfg: RunConfig) -> int:
    out_dir = _out_dir(cfg)
    return _suite_report(validation.run_all(seed=cfg.seed), out_dir, cfg,
                         "validate")


def _thread_cap() -> int:
    raw = os.environ.get("DECAY_THREADS", "")
    if raw:
        try:
            cap = int(raw)
        except ValueError:
            raise ConfigError(f"DECAY_THREADS must be an integer, got {raw!r}")
        if cap < 1:
            raise ConfigError("DECAY_THREADS must be at least 1")
        return cap
    return os.cpu_count() or 1


def _emit_figure(tag: str, out_dir: Path) -> str:
    data = build_figure(tag)
    path = _write_csv(out_dir / f"{tag}.csv", data.header, data.rows)
    digest = hashlib.sha256(path.read_bytes()).hexdigest()
    _write_json(out_dir / f"{tag}-manifest.json", {
        "version": __version__,
        "tag": tag,
        "parameters": data.params,
        "sha256": digest,
        "rows": int(data.rows.shape[0]),
        "header": list(data.header),
    })
    return digest


def _run_figure(cfg: RunConfig) -> int:
    if not cfg.tag:
        raise ConfigError("figure needs a tag; valid tags: "
                          + ", ".join(figure_tags()))
    tags = figure_tags() if cfg.tag == "all" else [cfg.tag]
    out_dir = _out_dir(cfg)
    workers = min(_thread_cap(), len(tags))
    if workers > 1:
        with concurrent.futures.ProcessPoolExecutor(workers) as pool:
            digests = list(pool.map(_emit_figure, tags,
                                    [out_dir] * len(tags)))
    else:
        digests = [_emit_figure(tag, out_dir) for tag in tags]
    for tag, digest in zip(tags, digests):
        print(f"{tag}: sha256 {digest}")
    return 0


_RUNNERS = {
    "css": _run_css,
    "gss": _run_gss,
    "fidelity": _run_fidelity,
    "oracle-compare": _run_oracle_compare,
    "figure": _run_figure,
    "validate": _run_validate,
}


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON config file; flags override")
    parser.add_argument("--out", help="output directory (default: cwd)")
    parser.add_argument("--omega", type=float, help="mode frequency")
    parser.add_argument("--k", type=float, help="damping rate")
    parser.add_argument("--nbar", type=float, help="reservoir occupation")
    parser.add_argument("--t-start", dest="t_start", type=float)
    parser.add_argument("--t-end", dest="t_end", type=float)
    parser.add_argument("--points", dest="n_points", type=int,
                        help="time grid size")
    parser.add_argument("--seed", type=int, help="randomized-suite seed")


def _add_css_state(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--beta0", type=float, help="branch amplitude")
    parser.add_argument("--theta", type=float,
                        help="superposition phase (0 even, pi odd)")


def _add_gss_state(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--alpha0", type=complex,
                        help="displacement, python complex syntax")
    parser.add_argument("--r0", type=float, help="squeeze strength")
    parser.add_argument("--phi0", type=float, help="squeeze angle")
    parser.add_argument("--nu0", type=float, help="thermal weight")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="decay",
        description="Witnesses and figure data for a damped mode, "
                    "closed forms cross-checked against an integrator.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("css", help="superposition-state witness series")
    _add_common(p)
    _add_css_state(p)
    p.add_argument("--grid-half-width", dest="grid_half_width", type=float)
    p.add_argument("--grid-points", dest="grid_points", type=int)

    p = sub.add_parser("gss", help="Gaussian-state witness series")
    _add_common(p)
    _add_gss_state(p)
    p.add_argument("--grid-half-width", dest="grid_half_width", type=float)
    p.add_argument("--grid-points", dest="grid_points", type=int)

    p = sub.add_parser("fidelity", help="fidelity between the families")
    _add_common(p)
    _add_css_state(p)
    _add_gss_state(p)

    p = sub.add_parser("oracle-compare",
                       help="closed forms vs integrator, error report")
    _add_common(p)
    p.add_argument("--suite", help="comparison suite name (default)")

    p = sub.add_parser("figure", help="emit a documented figure's data grid")
    _add_common(p)
    p.add_argument("--tag", help="figure tag, or 'all'")
    p.add_argument("--list", action="store_true", dest="list_tags",
                   help="list valid tags and exit")

    p = sub.add_parser("validate", help="run every validation suite")
    _add_common(p)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "list_tags", False):
        print("\n".join(figure_tags()))
        return 0
    try:
        cfg = _config_from(args, args.command)
        return _RUNNERS[args.command](cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except QDecayError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
