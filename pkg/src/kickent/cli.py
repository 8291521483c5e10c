"""Command-line front end.

Subcommands reproduce the stock experiments (fig1, fig2, fig3), run
free-form evolutions, fit power laws to existing CSV output, and report
Lyapunov spectra. Settings resolve as flags over config file over
per-subcommand defaults; results land in a delimited file plus an
optional vector plot next to it.

Config files are flat key=value lines. '#' starts a comment, blank
lines are skipped, lists are comma-separated. Keys match the RunConfig
field names (n, sigma, k1, k2, b, m_max, n_max, t_max, b_grid, n_grid,
seed, outdir, output, strict, emit_plots).
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from . import plotting
from .analysis import fit_power_law, lyapunov_exponents
from .classical import MapParams, ModeCutoff
from .errors import ConfigError, KickentError
from .experiments import (EntropyRecord, EntropySeries, provenance_hash,
                          run_chaotic_sweep, run_coupling_sweep,
                          run_time_sweep)
from .initial import GaussianSpec
from .quantum import _check_dim

OUTDIR_ENV = "KICKENT_OUTDIR"

CSV_HEADER = "run_id,T,b,K1,K2,size,S_classical,S_quantum,raw_norm"

_FLOAT_KEYS = {"k1", "k2", "b", "sigma"}
_INT_KEYS = {"n", "m_max", "n_max", "t_max", "seed", "lyap_steps",
             "lyap_transient"}
_LIST_FLOAT_KEYS = {"b_grid"}
_LIST_INT_KEYS = {"n_grid"}
_STR_KEYS = {"outdir", "output"}
_BOOL_KEYS = {"strict", "emit_plots"}
_ALL_KEYS = (_FLOAT_KEYS | _INT_KEYS | _LIST_FLOAT_KEYS | _LIST_INT_KEYS
             | _STR_KEYS | _BOOL_KEYS)

_COMMON_DEFAULTS = {
    "k1": 0.0, "k2": 0.0, "b": 0.0, "n": 50, "sigma": 0.1,
    "m_max": 24, "n_max": 40, "t_max": 1, "b_grid": None, "n_grid": None,
    "seed": 7, "lyap_steps": 100_000, "lyap_transient": 1000,
    "outdir": None, "output": None, "strict": False, "emit_plots": True,
}

_SUBCOMMAND_DEFAULTS = {
    "fig1": {"t_max": 1,
             "b_grid": [float(v) for v in np.geomspace(0.01, 0.3, 12)]},
    "fig2": {"b": 0.05, "t_max": 6},
    "fig3": {"k1": 6.0, "k2": 5.0, "b": 0.001, "t_max": 200,
             "n_grid": [32, 64]},
    "evolve": {"b": 0.05, "t_max": 4},
    "fit": {},
    "lyapunov": {"k1": 6.0, "k2": 5.0, "b": 0.001},
}


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    k1: float
    k2: float
    b: float
    n: int
    sigma: float
    m_max: int
    n_max: int
    t_max: int
    b_grid: Optional[list]
    n_grid: Optional[list]
    seed: int
    lyap_steps: int
    lyap_transient: int
    outdir: str
    output: Optional[str]
    strict: bool
    emit_plots: bool

    def map_params(self) -> MapParams:
        return MapParams(k1=self.k1, k2=self.k2, b=self.b)

    def mode_cutoff(self) -> ModeCutoff:
        return ModeCutoff(m_max=self.m_max, n_max=self.n_max)

    def csv_path(self) -> Path:
        name = self.output or f"{self.subcommand}.csv"
        return Path(self.outdir) / name


def _parse_bool(raw: str, key: str) -> bool:
    low = raw.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"{key}: cannot read {raw!r} as a boolean")


def _coerce(key: str, raw: str):
    try:
        if key in _FLOAT_KEYS:
            return float(raw)
        if key in _INT_KEYS:
            return int(raw)
        if key in _LIST_FLOAT_KEYS:
            return [float(v) for v in raw.split(",") if v.strip()]
        if key in _LIST_INT_KEYS:
            return [int(v) for v in raw.split(",") if v.strip()]
        if key in _BOOL_KEYS:
            return _parse_bool(raw, key)
    except ValueError as exc:
        raise ConfigError(f"{key}: {exc}") from None
    return raw.strip()


def parse_config_file(path) -> dict:
    """Flat key=value lines into a typed mapping."""
    values = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"config file {path}: {exc}") from None
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"{path}:{lineno}: expected key=value")
        key, raw = (part.strip() for part in body.split("=", 1))
        if key not in _ALL_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = _coerce(key, raw)
    return values


def _validated(sub: str, merged: dict) -> RunConfig:
    def fail(field: str, exc: Exception):
        raise ConfigError(f"{field}: {exc}") from None

    try:
        MapParams(k1=merged["k1"], k2=merged["k2"], b=merged["b"])
    except KickentError as exc:
        fail("k1/k2/b", exc)
    try:
        ModeCutoff(m_max=merged["m_max"], n_max=merged["n_max"])
    except KickentError as exc:
        fail("m_max/n_max", exc)
    try:
        GaussianSpec(merged["sigma"])
    except KickentError as exc:
        fail("sigma", exc)
    if sub in ("fig1", "fig2", "evolve") or merged["n_grid"] is None:
        try:
            _check_dim(merged["n"])
        except KickentError as exc:
            fail("N", exc)
    if merged["n_grid"] is not None:
        for n in merged["n_grid"]:
            try:
                _check_dim(n)
            except KickentError as exc:
                fail("n_grid", exc)
    if merged["t_max"] < 1:
        fail("T", ValueError("must be >= 1"))
    if merged["b_grid"] is not None:
        for b in merged["b_grid"]:
            if not math.isfinite(b) or b < 0.0:
                fail("b_grid", ValueError(f"bad coupling value {b!r}"))
    if merged["lyap_steps"] < 1000:
        fail("lyap_steps", ValueError("must be >= 1000"))
    if merged["lyap_transient"] < 0:
        fail("lyap_transient", ValueError("must be >= 0"))
    outdir = merged["outdir"] or os.environ.get(OUTDIR_ENV) or "."
    kwargs = {"subcommand": sub, **{k: merged[k] for k in _ALL_KEYS}}
    kwargs["outdir"] = outdir
    return RunConfig(**kwargs)


def resolve_config(sub: str, ns: argparse.Namespace) -> RunConfig:
    """Flags beat config-file entries beat built-in defaults."""
    merged = dict(_COMMON_DEFAULTS)
    merged.update(_SUBCOMMAND_DEFAULTS[sub])
    if getattr(ns, "config", None):
        merged.update(parse_config_file(ns.config))
    for key in _ALL_KEYS:
        value = getattr(ns, key, None)
        if value is not None:
            merged[key] = value
    return _validated(sub, merged)


def _fmt(value: Optional[float]) -> str:
    if value is None:
        return ""
    return "%.17g" % value


def emit_csv(series_list, path) -> None:
    """Schema: run_id,T,b,K1,K2,size,S_classical,S_quantum,raw_norm with
    absent fields left empty and floats at 17 significant digits."""
    if isinstance(series_list, EntropySeries):
        series_list = [series_list]
    lines = [f"# config_hash={series_list[0].config_hash}", CSV_HEADER]
    for series in series_list:
        for r in series.records:
            lines.append(",".join([
                series.config_hash, str(r.t), _fmt(r.b), _fmt(r.k1),
                _fmt(r.k2), str(r.size), _fmt(r.s_classical),
                _fmt(r.s_quantum), _fmt(r.raw_norm)]))
    try:
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8",
                              newline="\n")
    except OSError as exc:
        raise KickentError(f"cannot write {path}: {exc}") from None


def read_csv(path) -> tuple[str, list]:
    """Inverse of emit_csv: returns (config_hash, [(run_id, record)])."""
    text = Path(path).read_text(encoding="utf-8")
    lines = [ln for ln in text.splitlines() if ln]
    if not lines or not lines[0].startswith("# config_hash="):
        raise ConfigError(f"{path}: missing config_hash line")
    config_hash = lines[0].split("=", 1)[1]
    if len(lines) < 2 or lines[1] != CSV_HEADER:
        raise ConfigError(f"{path}: unexpected CSV header")
    rows = []
    for ln in lines[2:]:
        parts = ln.split(",")
        if len(parts) != 9:
            raise ConfigError(f"{path}: malformed row {ln!r}")
        opt = lambda s: None if s == "" else float(s)
        rows.append((parts[0], EntropyRecord(
            t=int(parts[1]), b=float(parts[2]), k1=float(parts[3]),
            k2=float(parts[4]), size=int(parts[5]),
            s_classical=opt(parts[6]), s_quantum=opt(parts[7]),
            raw_norm=opt(parts[8]))))
    return config_hash, rows


def _fit_columns(records) -> dict:
    """Power-law fits of entropy against coupling, one per populated
    column with at least three strictly positive points."""
    out = {}
    for name, get in (("classical", lambda r: r.s_classical),
                      ("quantum", lambda r: r.s_quantum)):
        pts = [(r.b, get(r)) for r in records
               if get(r) is not None and get(r) > 0.0 and r.b > 0.0]
        if len(pts) >= 3:
            out[name] = fit_power_law(pts)
    return out


def _maybe_strict_rerun(config: RunConfig, runner):
    first = runner()
    if config.strict:
        second = runner()
        flat = lambda result: [(s.config_hash, s.records) for s in
                               (result if isinstance(result, list) else [result])]
        if flat(first) != flat(second):
            raise KickentError("strict mode: repeated run was not bitwise identical")
    return first


def _report_written(path, n_rows: int) -> None:
    print(f"wrote {path} ({n_rows} rows)")


def _run_fig1(config: RunConfig) -> None:
    series = _maybe_strict_rerun(config, lambda: run_coupling_sweep(
        config.b_grid, config.t_max, config.n, config.sigma,
        config.mode_cutoff()))
    path = config.csv_path()
    emit_csv(series, path)
    _report_written(path, len(series.records))
    for name, fit in _fit_columns(series.records).items():
        print(f"{name}: exponent {fit.exponent:.4f} "
              f"(r^2 {fit.r_squared:.5f})")
    if config.emit_plots:
        plotting.render_coupling(series, path.with_suffix(".svg"))
        print(f"wrote {path.with_suffix('.svg')}")


def _run_fig2(config: RunConfig) -> None:
    series = _maybe_strict_rerun(config, lambda: run_time_sweep(
        config.b, config.t_max, config.n, config.sigma,
        config.mode_cutoff()))
    path = config.csv_path()
    emit_csv(series, path)
    _report_written(path, len(series.records))
    last = series.records[-1]
    print(f"final: S_classical {last.s_classical:.6f} "
          f"S_quantum {last.s_quantum:.6f} raw_norm {last.raw_norm:.6f}")
    if config.emit_plots:
        plotting.render_time(series, path.with_suffix(".svg"))
        print(f"wrote {path.with_suffix('.svg')}")


def _run_fig3(config: RunConfig) -> None:
    result = {}

    def runner():
        series_list, lyap_sum = run_chaotic_sweep(
            config.k1, config.k2, config.b, config.n_grid, config.t_max,
            lyap_seed=config.seed)
        result["lyap_sum"] = lyap_sum
        return series_list

    series_list = _maybe_strict_rerun(config, runner)
    path = config.csv_path()
    emit_csv(series_list, path)
    _report_written(path, sum(len(s.records) for s in series_list))
    print(f"Lyapunov sum (two largest): {result['lyap_sum']:.6f}")
    if config.emit_plots:
        plotting.render_chaotic(series_list, path.with_suffix(".svg"),
                                lyap_sum=result["lyap_sum"])
        print(f"wrote {path.with_suffix('.svg')}")


def _run_evolve(config: RunConfig, ns: argparse.Namespace) -> None:
    from .classical import fp_step
    from .entanglement import (schmidt_of_classical, schmidt_of_quantum,
                               von_neumann_entropy)
    from .initial import classical_gaussian_coeffs, product_initial
    from .quantum import build_propagator, qstep
    from .snapshot import (load_classical, load_quantum, save_classical,
                           save_quantum)

    params = config.map_params()
    if ns.from_state:
        cstate, _ = load_classical(str(ns.from_state) + "-classical")
        qstate, _ = load_quantum(str(ns.from_state) + "-quantum")
        if cstate.time != qstate.time:
            raise ConfigError("snapshot times differ between pipelines")
        if cstate.cutoff != config.mode_cutoff():
            raise ConfigError("snapshot cutoff does not match configuration")
        if qstate.dims.n != config.n:
            raise ConfigError("snapshot dimension does not match N")
    else:
        cstate = classical_gaussian_coeffs(config.mode_cutoff(),
                                           GaussianSpec(config.sigma))
        qstate = product_initial(config.n)
    prop = build_propagator(config.n, params)
    records = []
    for step in range(config.t_max + 1):
        if step > 0:
            cstate = fp_step(cstate, params)
            qstate = qstep(qstate, prop)
        cspec = schmidt_of_classical(cstate)
        records.append(EntropyRecord(
            t=cstate.time, b=params.b, k1=params.k1, k2=params.k2,
            size=config.n, s_classical=von_neumann_entropy(cspec),
            s_quantum=von_neumann_entropy(schmidt_of_quantum(qstate)),
            raw_norm=cspec.raw_norm))
    config_hash = provenance_hash({
        "experiment": "evolve", "k1": params.k1, "k2": params.k2,
        "b": params.b, "n": config.n, "sigma": config.sigma,
        "m_max": config.m_max, "n_max": config.n_max,
        "t_max": config.t_max, "resumed": bool(ns.from_state)})
    series = EntropySeries(records=records, label="evolve",
                           config_hash=config_hash)
    path = config.csv_path()
    emit_csv(series, path)
    _report_written(path, len(records))
    if ns.save_state:
        save_classical(str(ns.save_state) + "-classical", cstate, params)
        save_quantum(str(ns.save_state) + "-quantum", qstate, params)
        print(f"saved states under {ns.save_state}-*")
    if config.emit_plots:
        plotting.render_time(series, path.with_suffix(".svg"))
        print(f"wrote {path.with_suffix('.svg')}")


def _run_fit(config: RunConfig, ns: argparse.Namespace) -> None:
    _, rows = read_csv(ns.input)
    records = [rec for _, rec in rows]
    fits = _fit_columns(records)
    if ns.column != "both":
        fits = {k: v for k, v in fits.items() if k == ns.column}
    if not fits:
        raise KickentError("no fittable column with >= 3 positive points")
    for name, fit in fits.items():
        print(f"{name}: exponent {fit.exponent:.6f} "
              f"log_prefactor {fit.log_prefactor:.6f} "
              f"r^2 {fit.r_squared:.6f}")


def _run_lyapunov(config: RunConfig) -> None:
    exps = lyapunov_exponents(config.map_params(),
                              n_transient=config.lyap_transient,
                              n_steps=config.lyap_steps, seed=config.seed)
    print("exponents: " + " ".join(f"{v:.6f}" for v in exps))
    print(f"sum of two largest: {exps[0] + exps[1]:.6f}")


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key=value config file")
    p.add_argument("--k1", type=float, help="kick strength, first particle")
    p.add_argument("--k2", type=float, help="kick strength, second particle")
    p.add_argument("--b", type=float, help="coupling strength")
    p.add_argument("--N", dest="n", type=int,
                   help="Hilbert dimension per particle (even)")
    p.add_argument("--sigma", type=float, help="initial Gaussian width")
    p.add_argument("--m-max", dest="m_max", type=int,
                   help="momentum-index cutoff")
    p.add_argument("--n-max", dest="n_max", type=int,
                   help="position-index cutoff")
    p.add_argument("--T", dest="t_max", type=int, help="number of kicks")
    p.add_argument("--b-grid", dest="b_grid",
                   type=lambda s: [float(v) for v in s.split(",")],
                   help="comma-separated coupling values")
    p.add_argument("--n-grid", dest="n_grid",
                   type=lambda s: [int(v) for v in s.split(",")],
                   help="comma-separated Hilbert dimensions")
    p.add_argument("--seed", type=int, help="RNG seed where applicable")
    p.add_argument("--outdir", help=f"output directory (or ${OUTDIR_ENV})")
    p.add_argument("--output", help="output CSV filename")
    p.add_argument("--strict", action="store_true", default=None,
                   help="run twice and require bitwise-identical results")
    p.add_argument("--plots", dest="emit_plots", action="store_true",
                   default=None, help="render plots (default)")
    p.add_argument("--no-plots", dest="emit_plots", action="store_false",
                   help="skip plot rendering")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kickent",
        description="coupled kicked maps: classical and quantum "
                    "entanglement production")
    subs = parser.add_subparsers(dest="subcommand", required=True)
    specs = [
        ("fig1", "entropy against coupling at fixed time"),
        ("fig2", "entropy against time at fixed coupling"),
        ("fig3", "quantum entropy growth under strong kicks"),
        ("evolve", "free-form paired evolution"),
        ("fit", "power-law fit of an existing CSV"),
        ("lyapunov", "Lyapunov spectrum of the classical map"),
    ]
    for name, help_text in specs:
        sp = subs.add_parser(name, help=help_text)
        _add_common_flags(sp)
        if name == "evolve":
            sp.add_argument("--save-state", dest="save_state",
                            help="basename for final-state snapshots")
            sp.add_argument("--from-state", dest="from_state",
                            help="basename of snapshots to resume from")
        if name == "fit":
            sp.add_argument("input", help="CSV file produced by this tool")
            sp.add_argument("--column", choices=("classical", "quantum",
                                                 "both"), default="both")
    return parser


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        config = resolve_config(ns.subcommand, ns)
        Path(config.outdir).mkdir(parents=True, exist_ok=True)
        if ns.subcommand == "fig1":
            _run_fig1(config)
        elif ns.subcommand == "fig2":
            _run_fig2(config)
        elif ns.subcommand == "fig3":
            _run_fig3(config)
        elif ns.subcommand == "evolve":
            _run_evolve(config, ns)
        elif ns.subcommand == "fit":
            _run_fit(config, ns)
        else:
            _run_lyapunov(config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (KickentError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
