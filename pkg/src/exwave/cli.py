"""Config-driven experiment runner with reproducible file outputs.

Subcommands: selftest, simulate, truncation, inequalities, decay.  Every run
writes a manifest (config echo, derived exponents, checksums, timing), a
JSON summary, CSV series/tables with fixed schemas, and a companion figure.
CSV bodies are byte-identical for identical config + seed; timestamps live
only in the manifest.  Exit codes: 0 ok, 2 configuration error, 3 numerical
failure.
"""

from __future__ import annotations

import argparse
import copy
import hashlib
import json
import math
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .calculus import ParameterSet, derived_exponents, sobolev_norm
from .data import build_pair, random_bumps
from .dynamics import StepperConfig, linear_flow, solve_nlw, t_window
from .errors import ConfigurationError, NumericalFailure
from .grid import RadialGrid, RadialField, lp_norm, make_grid, zero_field
from .harness import (
    StrichartzPair,
    bernstein_ratios,
    fit_power_law,
    measure_dispersive_decay,
    truncation_experiment,
    verify_radial_sobolev,
)
from .transform import forward, inverse, plancherel_defect, SpectralField

SERIES_COLUMNS = ("t", "energy_v", "hs_u", "hsc_w", "lpp1_u", "linf_u", "boundary_tail_l2")
TABLE_COLUMNS = (
    "J", "T", "E0_v", "E_T", "sup_hs_u", "sup_hsc_w", "st_w_L2Lq",
    "fitted_ET_slope", "fitted_hs_slope",
)

CHECKPOINT_FORMAT = 1

_DEFAULTS = {
    "p": 4.0,
    "s": 0.96,
    "J": 5,
    "grid": {"L": 40.0, "N": 8192},
    "dt": 2e-3,
    "T": "auto",
    "data": {"kind": "rough", "seed": 7, "amplitude": 1.0},
    "stride": 5,
    "out": "runs/run",
    "boundary_tolerance": 1e-8,
    "guard": "auto",
    "margin": 1.0,
    "checkpoint_stride": 0,
    "figures": True,
    "decay": {"center": 2.0, "width": 0.5, "amplitude": 1.0,
              "t_min": 4.0, "t_max": 30.0, "points": 12, "rx": "inf"},
    "inequalities": {
        "sobolev_p": [2.0, 4.0],
        "trials": 200,
        "seed": 2,
        "bernstein": {"q_from": 2.0, "q_to": "inf", "n_lo": 2, "n_hi": 8,
                      "trials": 16, "seed": 0},
    },
}


@dataclass
class RunConfig:
    """Validated run parameters; see parse_config."""

    raw: dict
    p: float
    s: float
    J_list: list[int]
    grid_L: float
    grid_N: int
    dt: float
    T: float | str
    data: dict
    stride: int
    out: str
    boundary_tolerance: float
    guard: str
    margin: float
    checkpoint_stride: int
    figures: bool
    decay: dict = field(default_factory=dict)
    inequalities: dict = field(default_factory=dict)

    def grid(self) -> RadialGrid:
        return make_grid(self.grid_L, self.grid_N)

    def parameter_set(self, J: int) -> ParameterSet:
        return ParameterSet(p=self.p, s=self.s, J=J)

    def window(self, J: int) -> float:
        if self.T == "auto":
            return t_window(self.parameter_set(J))
        return float(self.T)

    def stepper(self) -> StepperConfig:
        return StepperConfig(
            dt=self.dt,
            boundary_tolerance=self.boundary_tolerance,
            guard=self.guard,
            guard_margin=self.margin,
            sample_stride=self.stride,
        )


def _fail(key: str, message: str):
    raise ConfigurationError(f"{key}: {message}")


def _need_number(cfg: dict, key: str, lo=None, hi=None, strict_lo=False) -> float:
    val = cfg
    for part in key.split("."):
        if not isinstance(val, dict) or part not in val:
            _fail(key, "missing required value")
        val = val[part]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        _fail(key, f"expected a number, got {val!r}")
    if lo is not None and (val <= lo if strict_lo else val < lo):
        _fail(key, f"must be {'>' if strict_lo else '>='} {lo}, got {val!r}")
    if hi is not None and val > hi:
        _fail(key, f"must be <= {hi}, got {val!r}")
    return float(val)


def _merge(base: dict, override: dict) -> dict:
    out = copy.deepcopy(base)
    for key, val in override.items():
        if isinstance(val, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], val)
        else:
            out[key] = copy.deepcopy(val)
    return out


def parse_config(text: str) -> RunConfig:
    """Parse and fully validate one JSON run document.

    Diagnostics name the failing key and the violated precondition; module
    preconditions (admissibility of s, dyadic band for J) are enforced here,
    before any compute.
    """
    try:
        user = json.loads(text) if text.strip() else {}
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(user, dict):
        raise ConfigurationError("config must be a JSON object")
    known = set(_DEFAULTS)
    for key in user:
        if key not in known:
            _fail(key, "unknown configuration key")
    cfg = _merge(_DEFAULTS, user)

    p = _need_number(cfg, "p", lo=3.0, hi=5.0)
    s = _need_number(cfg, "s", lo=0.0, hi=1.0, strict_lo=True)
    L = _need_number(cfg, "grid.L", lo=0.0, strict_lo=True)
    N = cfg["grid"]["N"]
    if isinstance(N, bool) or not isinstance(N, int) or N < 1:
        _fail("grid.N", f"expected a positive integer, got {N!r}")
    dt = _need_number(cfg, "dt", lo=0.0, strict_lo=True)
    stride = cfg["stride"]
    if isinstance(stride, bool) or not isinstance(stride, int) or stride < 1:
        _fail("stride", f"expected a positive integer, got {stride!r}")
    btol = _need_number(cfg, "boundary_tolerance", lo=0.0, strict_lo=True)
    margin = _need_number(cfg, "margin", lo=0.0)
    ckpt = cfg["checkpoint_stride"]
    if isinstance(ckpt, bool) or not isinstance(ckpt, int) or ckpt < 0:
        _fail("checkpoint_stride", f"expected a nonnegative integer, got {ckpt!r}")
    if cfg["guard"] not in ("auto", "strict", "off"):
        _fail("guard", f"expected auto|strict|off, got {cfg['guard']!r}")
    if not isinstance(cfg["figures"], bool):
        _fail("figures", f"expected a boolean, got {cfg['figures']!r}")
    if not isinstance(cfg["out"], str) or not cfg["out"]:
        _fail("out", "expected a nonempty path string")

    J_raw = cfg["J"]
    J_list = J_raw if isinstance(J_raw, list) else [J_raw]
    if not J_list or any(isinstance(j, bool) or not isinstance(j, int) for j in J_list):
        _fail("J", f"expected an integer or list of integers, got {J_raw!r}")

    data = cfg["data"]
    if data.get("kind") not in ("bump", "mode", "rough"):
        _fail("data.kind", f"expected bump|mode|rough, got {data.get('kind')!r}")

    grid = make_grid(L, N)
    # admissibility before any compute
    try:
        ps0 = ParameterSet(p=p, s=s, J=J_list[0])
        ps0.require_admissible()
    except ConfigurationError as exc:
        _fail("s", str(exc))
    # band check for every requested level
    lo_band, hi_band = 2.0 * grid.dlam, grid.lam_max
    for J in J_list:
        if not (lo_band <= 2.0**J <= hi_band) or not (lo_band <= 2.0 ** (J - 1) <= hi_band):
            _fail("J", f"2^{J} (and the split 2^{J-1}) must lie in the resolvable band "
                       f"[{lo_band:g}, {hi_band:g}]")

    T = cfg["T"]
    if T != "auto":
        if isinstance(T, bool) or not isinstance(T, (int, float)) or T <= 0:
            _fail("T", f"expected 'auto' or a positive number, got {T!r}")
        T = float(T)

    return RunConfig(
        raw=cfg,
        p=p,
        s=s,
        J_list=[int(j) for j in J_list],
        grid_L=L,
        grid_N=N,
        dt=dt,
        T=T,
        data=dict(data),
        stride=stride,
        out=cfg["out"],
        boundary_tolerance=btol,
        guard=cfg["guard"],
        margin=margin,
        checkpoint_stride=ckpt,
        figures=cfg["figures"],
        decay=dict(cfg["decay"]),
        inequalities=copy.deepcopy(cfg["inequalities"]),
    )


# ---------------------------------------------------------------------------
# output plumbing
# ---------------------------------------------------------------------------

def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return f"{float(x):.17g}"


def write_csv(path: Path, columns, rows) -> None:
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(_fmt(row[c]) for c in columns))
    path.write_text("\n".join(lines) + "\n")


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


class Manifest:
    """Run manifest: written once before compute, finalized after."""

    def __init__(self, outdir: Path, command: str, cfg: RunConfig):
        self.path = outdir / "manifest.json"
        self.outdir = outdir
        self.t0 = time.time()
        derived = {"s_c": 1.5 - 2.0 / (cfg.p - 1.0)}
        try:
            ps = cfg.parameter_set(cfg.J_list[0])
            exps = derived_exponents(ps)
            derived.update(
                s_min=exps.s_min,
                energy_growth_exponent=exps.energy_growth_exponent,
                theorem_growth_exponent=exps.theorem_growth_exponent,
                t_window={str(J): t_window(cfg.parameter_set(J)) for J in cfg.J_list},
            )
        except ConfigurationError:
            pass
        self.doc = {
            "format": 1,
            "version": __version__,
            "command": command,
            "config": cfg.raw,
            "derived": derived,
            "status": "running",
            "failure": None,
            "started_unix": self.t0,
            "finished_unix": None,
            "elapsed_seconds": None,
            "outputs": {},
        }
        self._write()

    def _write(self) -> None:
        self.path.write_text(json.dumps(self.doc, indent=2, sort_keys=True) + "\n")

    def finalize(self, status: str, failure: dict | None = None) -> None:
        self.doc["status"] = status
        self.doc["failure"] = failure
        self.doc["finished_unix"] = time.time()
        self.doc["elapsed_seconds"] = self.doc["finished_unix"] - self.t0
        outputs = {}
        for child in sorted(self.outdir.iterdir()):
            if child.name == "manifest.json" or not child.is_file():
                continue
            outputs[child.name] = f"sha256:{_sha256(child)}"
        self.doc["outputs"] = outputs
        self._write()


def _prepare_outdir(cfg: RunConfig, force: bool) -> Path:
    outdir = Path(cfg.out)
    if (outdir / "manifest.json").exists() and not force:
        raise ConfigurationError(
            f"output directory {outdir} already holds a run manifest; pass --force to overwrite"
        )
    outdir.mkdir(parents=True, exist_ok=True)
    return outdir


def _write_summary(outdir: Path, payload: dict) -> None:
    (outdir / "summary.json").write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# checkpoints (simulate)
# ---------------------------------------------------------------------------

def _config_hash(cfg: RunConfig) -> str:
    return hashlib.sha256(json.dumps(cfg.raw, sort_keys=True).encode()).hexdigest()


def save_checkpoint(path: Path, cfg: RunConfig, step: int, u, ut, rows, w=None, wt=None) -> None:
    """Binary snapshot: versioned header plus spectral coefficients and rows."""
    grid = u.grid
    payload = {
        "format": np.array(CHECKPOINT_FORMAT),
        "config_hash": np.array(_config_hash(cfg)),
        "grid_L": np.array(grid.L),
        "grid_N": np.array(grid.N),
        "step": np.array(step),
        "t": np.array(step * cfg.dt),
        "cu": forward(u).c,
        "cut": forward(ut).c,
        "rows": np.array(json.dumps(rows)),
    }
    if w is not None:
        payload["cw"] = forward(w).c
        payload["cwt"] = forward(wt).c
    tmp = path.with_suffix(".tmp.npz")
    np.savez(tmp, **payload)
    tmp.replace(path)


def load_checkpoint(path: Path, cfg: RunConfig):
    with np.load(path, allow_pickle=False) as z:
        if int(z["format"]) != CHECKPOINT_FORMAT:
            raise ConfigurationError(
                f"checkpoint format {int(z['format'])} unsupported (expected {CHECKPOINT_FORMAT})"
            )
        if str(z["config_hash"]) != _config_hash(cfg):
            raise ConfigurationError("checkpoint was written by a different configuration")
        if float(z["grid_L"]) != cfg.grid_L or int(z["grid_N"]) != cfg.grid_N:
            raise ConfigurationError("checkpoint grid does not match the configuration")
        grid = cfg.grid()
        u = inverse(SpectralField(grid, z["cu"]))
        ut = inverse(SpectralField(grid, z["cut"]))
        rows = json.loads(str(z["rows"]))
        return int(z["step"]), u, ut, rows


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def run_selftest(cfg: RunConfig, outdir: Path) -> dict:
    """Transform, Plancherel, and linear-flow invariants on the configured grid."""
    rng = np.random.default_rng(int(cfg.data.get("seed", 0)))
    checks = {}

    worst_rt = 0.0
    for N in (255, 4095):
        g = make_grid(cfg.grid_L, N)
        f = RadialField(g, rng.standard_normal(N))
        back = inverse(forward(f))
        worst_rt = max(worst_rt, float(np.abs(back.g - f.g).max() / np.abs(f.g).max()))
    checks["round_trip_error"] = (worst_rt, 1e-12)

    g = make_grid(cfg.grid_L, 4095)
    worst_pl = max(
        plancherel_defect(RadialField(g, rng.standard_normal(4095))) for _ in range(20)
    )
    checks["plancherel_defect"] = (worst_pl, 1e-12)

    gm = make_grid(math.pi, 256)
    mode = RadialField(gm, np.sin(3.0 * gm.t))
    zero = zero_field(gm)
    worst_mode = 0.0
    for t in np.linspace(0.0, 10.0, 21):
        st = linear_flow(mode, zero, t)
        worst_mode = max(
            worst_mode,
            float(np.abs(st.u.g - math.cos(3.0 * t) * mode.g).max()),
            float(np.abs(st.ut.g + 3.0 * math.sin(3.0 * t) * mode.g).max()),
        )
    checks["linear_mode_error"] = (worst_mode, 1e-10)

    f = random_bumps(make_grid(cfg.grid_L, 2048), rng, widths=(0.5, 1.5))
    e0 = 0.5 * lp_norm(zero_field(f.grid), 2) ** 2 + 0.5 * sobolev_norm(f, 1.0) ** 2
    st10 = linear_flow(f, zero_field(f.grid), 10.0)
    e10 = 0.5 * lp_norm(st10.ut, 2) ** 2 + 0.5 * sobolev_norm(st10.u, 1.0) ** 2
    checks["linear_energy_drift"] = (abs(e10 - e0) / e0, 1e-12)

    results = {name: {"value": val, "threshold": thr, "ok": bool(val <= thr)}
               for name, (val, thr) in checks.items()}
    ok = all(entry["ok"] for entry in results.values())
    summary = {"checks": results, "ok": ok}
    _write_summary(outdir, summary)
    for name, entry in results.items():
        flag = "ok" if entry["ok"] else "FAIL"
        print(f"selftest {name}: {entry['value']:.3e} (<= {entry['threshold']:.0e}) {flag}")
    if not ok:
        raise NumericalFailure("selftest thresholds violated; see summary.json")
    return summary


def _series_rows(times, records) -> list[dict]:
    rows = []
    for t, rec in zip(times, records):
        rows.append({
            "t": t,
            "energy_v": rec.get("energy_v", rec.get("energy", 0.0)),
            "hs_u": rec.get("hs_u", 0.0),
            "hsc_w": rec.get("hsc_w", 0.0),
            "lpp1_u": rec.get("lpp1_u", 0.0),
            "linf_u": rec.get("linf_u", 0.0),
            "boundary_tail_l2": rec.get("boundary_tail_l2", 0.0),
        })
    return rows


def run_simulate(cfg: RunConfig, outdir: Path, resume: bool = False) -> dict:
    """Full-equation evolution with the configured data; optional checkpoints."""
    grid = cfg.grid()
    data_params = dict(cfg.data)
    if data_params["kind"] == "rough":
        data_params.setdefault("s", cfg.s)
    u0, u1 = build_pair(grid, data_params)
    ps = cfg.parameter_set(cfg.J_list[0])
    T = cfg.window(cfg.J_list[0])
    scfg = cfg.stepper()
    nsteps = max(1, int(round(T / cfg.dt)))

    ckpt_path = outdir / "checkpoint.npz"
    rows: list[dict] = []
    step0 = 0
    u, ut = u0, u1
    if resume:
        if not ckpt_path.exists():
            raise ConfigurationError(f"--resume requested but {ckpt_path} does not exist")
        step0, u, ut, rows = load_checkpoint(ckpt_path, cfg)

    seg = cfg.checkpoint_stride
    if seg:
        seg = max(cfg.stride, (seg // cfg.stride) * cfg.stride)

    while True:
        remaining = nsteps - step0
        if remaining <= 0:
            break
        chunk = min(seg, remaining) if seg else remaining
        traj = solve_nlw(u, ut, cfg.p, chunk * cfg.dt, scfg, ps=ps, step0=step0)
        new_rows = _series_rows(traj.times, traj.records)
        rows.extend(new_rows if not rows else new_rows[1:])
        final = traj.final_state
        u, ut = final.u, final.ut
        step0 += chunk
        if seg:
            save_checkpoint(ckpt_path, cfg, step0, u, ut, rows)

    write_csv(outdir / "series.csv", SERIES_COLUMNS, rows)
    energies = [row["energy_v"] for row in rows]
    summary = {
        "T": nsteps * cfg.dt,
        "steps": nsteps,
        "energy_initial": energies[0],
        "energy_drift_rel": max(abs(e - energies[0]) for e in energies) / energies[0]
        if energies[0] > 0 else 0.0,
        "sup_hs_u": max(row["hs_u"] for row in rows),
        "sup_linf_u": max(row["linf_u"] for row in rows),
    }
    _write_summary(outdir, summary)
    if cfg.figures:
        from . import figures

        series = {key: np.array([row[key] for row in rows]) for key in SERIES_COLUMNS}
        figures.timeseries_figure(series["t"], series, outdir / "series.png",
                                  f"simulate p={cfg.p:g} T={summary['T']:g}")
    return summary


def run_truncation(cfg: RunConfig, outdir: Path) -> dict:
    """High/low truncation scan over the configured J list."""
    grid = cfg.grid()
    data_params = dict(cfg.data)
    if data_params["kind"] == "rough":
        data_params.setdefault("s", cfg.s)
    u0, u1 = build_pair(grid, data_params)
    T = None if cfg.T == "auto" else float(cfg.T)
    table = truncation_experiment(cfg.p, cfg.s, cfg.J_list, u0, u1, cfg.stepper(), T=T)

    write_csv(outdir / "table.csv", TABLE_COLUMNS, table.as_rows())
    for rep in table.reports:
        rows = [
            {key: rep.series[key][i] for key in rep.series} | {"t": rep.times[i]}
            for i in range(len(rep.times))
        ]
        write_csv(outdir / f"series_J{rep.ps.J}.csv", SERIES_COLUMNS, rows)

    summary = {
        "J": [row["J"] for row in table.rows],
        "T": [row["T"] for row in table.rows],
        "E0_v": [row["E0_v"] for row in table.rows],
        "E_T": [row["E_T"] for row in table.rows],
        "sup_hsc_w_over_initial": [rep.sup_hsc_w / rep.hsc_w0 for rep in table.reports],
        "e0_ratio": [rep.e0_ratio for rep in table.reports],
        "fitted_ET_slope": table.fitted_ET_slope,
        "fitted_hs_slope": table.fitted_hs_slope,
        "st_w_L2Lq": [row["st_w_L2Lq"] for row in table.rows],
    }
    _write_summary(outdir, summary)
    if cfg.figures:
        from . import figures

        figures.truncation_figure(table.rows, table.fitted_ET_slope,
                                  table.fitted_hs_slope, outdir / "truncation.png")
    return summary


def run_inequalities(cfg: RunConfig, outdir: Path) -> dict:
    """Weighted-sup (radial Sobolev) and projection-growth (Bernstein) checks."""
    opts = cfg.inequalities
    sob_rows, sob_reports = [], []
    for p in opts["sobolev_p"]:
        rep = verify_radial_sobolev(float(p), int(opts["trials"]), int(opts["seed"]))
        sob_reports.append(rep)
        for sigma, ratio in sorted(rep.per_width.items()):
            sob_rows.append({"p": p, "width": sigma, "max_ratio": ratio})
    write_csv(outdir / "sobolev.csv", ("p", "width", "max_ratio"), sob_rows)

    bopt = opts["bernstein"]
    q_to = math.inf if bopt["q_to"] == "inf" else float(bopt["q_to"])
    Ns = [2.0**k for k in range(int(bopt["n_lo"]), int(bopt["n_hi"]) + 1)]
    grid = cfg.grid()
    ratios = bernstein_ratios(float(bopt["q_from"]), q_to, Ns, int(bopt["trials"]),
                              int(bopt["seed"]), grid=grid)
    pts = sorted(ratios.items())
    fit = fit_power_law(pts)
    write_csv(outdir / "bernstein.csv", ("N", "ratio"), [{"N": n, "ratio": v} for n, v in pts])

    summary = {
        "sobolev": [
            {"p": rep.p, "max_ratio": rep.max_ratio,
             "width_spread": max(rep.per_width.values()) / min(rep.per_width.values())}
            for rep in sob_reports
        ],
        "bernstein_slope": fit.slope,
        "bernstein_theory": 3.0 * (1.0 / float(bopt["q_from"]) - (0.0 if q_to == math.inf else 1.0 / q_to)),
    }
    _write_summary(outdir, summary)
    if cfg.figures:
        from . import figures

        figures.inequalities_figure(sob_reports, pts, fit.slope, outdir / "inequalities.png")
    return summary


def run_decay(cfg: RunConfig, outdir: Path) -> dict:
    """Dispersive decay of the free evolution of a compact bump."""
    opts = cfg.decay
    grid = cfg.grid()
    from .data import bump_field

    f0 = bump_field(grid, float(opts["center"]), float(opts["width"]), float(opts["amplitude"]))
    times = np.geomspace(float(opts["t_min"]), float(opts["t_max"]), int(opts["points"]))
    pair = None if opts["rx"] == "inf" else StrichartzPair(q=2.0, rx=float(opts["rx"]))
    fit = measure_dispersive_decay(f0, pair, times)

    zero = zero_field(grid)
    rows = []
    for t in times:
        st = linear_flow(f0, zero, float(t))
        rows.append({"t": float(t), "value": lp_norm(st.u, math.inf)})
    write_csv(outdir / "decay.csv", ("t", "value"), rows)

    gamma = 1.0 if opts["rx"] == "inf" else 1.0 - 2.0 / float(opts["rx"])
    summary = {"slope": fit.slope, "residual": fit.residual, "gamma_theory": gamma}
    _write_summary(outdir, summary)
    if cfg.figures:
        from . import figures

        figures.decay_figure([(row["t"], row["value"]) for row in rows],
                             fit.slope, fit.intercept, outdir / "decay.png")
    return summary


_RUNNERS = {
    "selftest": run_selftest,
    "simulate": run_simulate,
    "truncation": run_truncation,
    "inequalities": run_inequalities,
    "decay": run_decay,
}


def run(cmd: str, cfg: RunConfig, force: bool = False, resume: bool = False) -> int:
    """Execute one subcommand; writes manifest + outputs, returns exit code."""
    if cmd not in _RUNNERS:
        raise ConfigurationError(f"unknown subcommand {cmd!r}")
    outdir = _prepare_outdir(cfg, force)
    manifest = Manifest(outdir, cmd, cfg)
    try:
        if cmd == "simulate":
            run_simulate(cfg, outdir, resume=resume)
        else:
            _RUNNERS[cmd](cfg, outdir)
    except NumericalFailure as exc:
        manifest.finalize("failed", {"message": str(exc), "t": exc.t})
        raise
    manifest.finalize("ok")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="exwave",
        description="Spectral experiments for the radial defocusing wave equation "
                    "outside the unit ball.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (
        ("selftest", "transform/Plancherel/linear-flow invariants"),
        ("simulate", "evolve the full equation and record diagnostics"),
        ("truncation", "high/low truncation scan over J"),
        ("inequalities", "radial Sobolev and Bernstein checks"),
        ("decay", "dispersive decay fit for the free evolution"),
    ):
        cmd = sub.add_parser(name, help=helptext)
        cmd.add_argument("--config", type=Path, help="JSON config file (defaults apply if omitted)")
        cmd.add_argument("--out", help="override the output directory")
        cmd.add_argument("--force", action="store_true", help="overwrite an existing run directory")
        cmd.add_argument("--no-figures", action="store_true", help="skip figure rendering")
        if name == "simulate":
            cmd.add_argument("--resume", action="store_true", help="continue from checkpoint.npz")
    args = parser.parse_args(argv)

    try:
        text = args.config.read_text() if args.config else "{}"
        cfg = parse_config(text)
        if args.out:
            cfg.out = args.out
            cfg.raw["out"] = args.out
        if args.no_figures:
            cfg.figures = False
        return run(args.command, cfg, force=args.force,
                   resume=getattr(args, "resume", False))
    except ConfigurationError as exc:
        print(f"exwave: configuration error: {exc}", file=sys.stderr)
        return 2
    except NumericalFailure as exc:
        print(f"exwave: numerical failure: {exc}", file=sys.stderr)
        return 3
    except FileNotFoundError as exc:
        print(f"exwave: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
