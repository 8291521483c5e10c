"""State snapshots: NPY dump of the coefficient array plus a JSON
sidecar holding everything needed to resume (kind, lattice or Hilbert
dimensions, kick strengths if recorded, time, norms)."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Optional

import numpy as np

from .classical import ClassicalState, MapParams, ModeCutoff, new_state
from .errors import ConfigError, DimensionError
from .quantum import QuantumDims, QuantumState

FORMAT_VERSION = 1


def _paths(base) -> tuple[Path, Path]:
    base = Path(base)
    return base.with_suffix(".npy"), base.with_suffix(".json")


def _write(base, array: np.ndarray, meta: dict) -> None:
    npy, js = _paths(base)
    np.save(npy, array)
    meta = {"version": FORMAT_VERSION, **meta}
    js.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n",
                  encoding="utf-8")


def read_metadata(base) -> dict:
    _, js = _paths(base)
    meta = json.loads(js.read_text(encoding="utf-8"))
    if meta.get("version") != FORMAT_VERSION:
        raise ConfigError(f"unsupported snapshot version in {js}")
    return meta


def save_classical(base, state: ClassicalState,
                   params: Optional[MapParams] = None) -> None:
    meta = {"kind": "classical", "m_max": state.cutoff.m_max,
            "n_max": state.cutoff.n_max, "time": state.time,
            "norm0": state.norm0, "last_step_loss": state.last_step_loss}
    if params is not None:
        meta["params"] = {"k1": params.k1, "k2": params.k2, "b": params.b}
    _write(base, state.coeffs, meta)


def load_classical(base) -> tuple[ClassicalState, Optional[MapParams]]:
    meta = read_metadata(base)
    if meta.get("kind") != "classical":
        raise ConfigError(f"snapshot {base} is not a classical state")
    npy, _ = _paths(base)
    coeffs = np.load(npy)
    cutoff = ModeCutoff(m_max=meta["m_max"], n_max=meta["n_max"])
    expect = (cutoff.m_dim, cutoff.n_dim, cutoff.m_dim, cutoff.n_dim)
    if coeffs.shape != expect:
        raise DimensionError(
            f"snapshot array shape {coeffs.shape} does not match {expect}")
    state = new_state(cutoff)
    state.coeffs[:] = coeffs
    state.time = int(meta["time"])
    state.norm0 = float(meta["norm0"])
    state.last_step_loss = float(meta.get("last_step_loss", 0.0))
    p = meta.get("params")
    params = MapParams(**p) if p else None
    return state, params


def save_quantum(base, state: QuantumState,
                 params: Optional[MapParams] = None) -> None:
    meta = {"kind": "quantum", "n": state.dims.n, "time": state.time}
    if params is not None:
        meta["params"] = {"k1": params.k1, "k2": params.k2, "b": params.b}
    _write(base, state.amps, meta)


def load_quantum(base) -> tuple[QuantumState, Optional[MapParams]]:
    meta = read_metadata(base)
    if meta.get("kind") != "quantum":
        raise ConfigError(f"snapshot {base} is not a quantum state")
    npy, _ = _paths(base)
    amps = np.load(npy)
    dims = QuantumDims(int(meta["n"]))
    if amps.shape != (dims.n * dims.n,):
        raise DimensionError(
            f"snapshot array length {amps.shape} does not match N^2")
    p = meta.get("params")
    params = MapParams(**p) if p else None
    return QuantumState(amps=amps, dims=dims, time=int(meta["time"])), params
