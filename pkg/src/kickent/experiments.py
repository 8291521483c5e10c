"""Sweep drivers pairing the classical and quantum pipelines.

Three stock experiments: entanglement entropy against coupling strength
at fixed time, against time at fixed coupling, and against time for a
strongly kicked pair at several Hilbert dimensions. Each driver returns
an EntropySeries tagged with a short hash of its configuration so CSV
rows stay traceable to the run that produced them.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .analysis import lyapunov_exponents
from .classical import MapParams, ModeCutoff, fp_step
from .entanglement import (schmidt_of_classical, schmidt_of_quantum,
                           von_neumann_entropy)
from .errors import ConfigError, DomainError
from .initial import GaussianSpec, classical_gaussian_coeffs, product_initial
from .quantum import build_propagator, qstep

HASH_CHARS = 12


@dataclass(frozen=True)
class EntropyRecord:
    """One sweep point. Classical fields are None for quantum-only runs."""

    t: int
    b: float
    k1: float
    k2: float
    size: int
    s_classical: Optional[float]
    s_quantum: Optional[float]
    raw_norm: Optional[float]


@dataclass
class EntropySeries:
    records: list
    label: str
    config_hash: str


def provenance_hash(config: dict) -> str:
    """Short stable digest of a flat config mapping."""
    text = "\n".join(f"{k}={config[k]!r}" for k in sorted(config))
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:HASH_CHARS]


def _classical_entropy(state) -> tuple[float, float]:
    spec = schmidt_of_classical(state)
    return von_neumann_entropy(spec), spec.raw_norm


def _quantum_entropy(state) -> float:
    return von_neumann_entropy(schmidt_of_quantum(state))


def run_coupling_sweep(b_values: Sequence[float], t_steps: int, n: int,
                       sigma: float, cutoff: ModeCutoff) -> EntropySeries:
    """Entropies after t_steps kicks as a function of coupling, for the
    uncoupled-integrable pair (K1 = K2 = 0)."""
    if t_steps < 1:
        raise DomainError("t_steps must be >= 1")
    gauss = GaussianSpec(sigma)
    config = {"experiment": "coupling-sweep", "b_values": list(map(float, b_values)),
              "t_steps": t_steps, "n": n, "sigma": sigma,
              "m_max": cutoff.m_max, "n_max": cutoff.n_max}
    records = []
    for b in sorted(float(v) for v in b_values):
        params = MapParams(k1=0.0, k2=0.0, b=b)
        cstate = classical_gaussian_coeffs(cutoff, gauss)
        for _ in range(t_steps):
            cstate = fp_step(cstate, params)
        s_c, raw = _classical_entropy(cstate)
        qstate = product_initial(n)
        prop = build_propagator(n, params)
        for _ in range(t_steps):
            qstate = qstep(qstate, prop)
        records.append(EntropyRecord(t=t_steps, b=b, k1=0.0, k2=0.0, size=n,
                                     s_classical=s_c,
                                     s_quantum=_quantum_entropy(qstate),
                                     raw_norm=raw))
    return EntropySeries(records=records, label=f"coupling-sweep-T{t_steps}",
                         config_hash=provenance_hash(config))


def run_time_sweep(b: float, t_max: int, n: int, sigma: float,
                   cutoff: ModeCutoff) -> EntropySeries:
    """Entropies at every kick count 0..t_max for fixed coupling, again
    with K1 = K2 = 0. The classical state evolves incrementally."""
    if t_max < 1:
        raise DomainError("t_max must be >= 1")
    params = MapParams(k1=0.0, k2=0.0, b=float(b))
    config = {"experiment": "time-sweep", "b": float(b), "t_max": t_max,
              "n": n, "sigma": sigma,
              "m_max": cutoff.m_max, "n_max": cutoff.n_max}
    cstate = classical_gaussian_coeffs(cutoff, GaussianSpec(sigma))
    qstate = product_initial(n)
    prop = build_propagator(n, params)
    records = []
    for t in range(t_max + 1):
        if t > 0:
            cstate = fp_step(cstate, params)
            qstate = qstep(qstate, prop)
        s_c, raw = _classical_entropy(cstate)
        records.append(EntropyRecord(t=t, b=params.b, k1=0.0, k2=0.0, size=n,
                                     s_classical=s_c,
                                     s_quantum=_quantum_entropy(qstate),
                                     raw_norm=raw))
    return EntropySeries(records=records, label=f"time-sweep-b{params.b:g}",
                         config_hash=provenance_hash(config))


def run_chaotic_sweep(k1: float, k2: float, b: float,
                      n_values: Sequence[int], t_max: int,
                      include_classical: bool = False,
                      sigma: Optional[float] = None,
                      cutoff: Optional[ModeCutoff] = None,
                      lyap_seed: int = 7) -> tuple[list, float]:
    """Quantum entropy growth for a strongly kicked, weakly coupled pair,
    one series per Hilbert dimension. Returns the series list and the sum
    of the two largest Lyapunov exponents of the matching classical map.

    Classical densities under strong kicks outrun any affordable mode
    cutoff, so the classical pipeline only runs on explicit request and
    needs sigma and cutoff spelled out.
    """
    if t_max < 1:
        raise DomainError("t_max must be >= 1")
    params = MapParams(k1=float(k1), k2=float(k2), b=float(b))
    exps = lyapunov_exponents(params, seed=lyap_seed)
    lyap_sum = float(exps[0] + exps[1])
    config = {"experiment": "chaotic-sweep", "k1": params.k1, "k2": params.k2,
              "b": params.b, "n_values": list(map(int, n_values)),
              "t_max": t_max, "include_classical": include_classical,
              "sigma": sigma, "lyap_seed": lyap_seed}
    series_list = []
    for n in n_values:
        qstate = product_initial(n)
        prop = build_propagator(n, params)
        records = []
        for t in range(t_max + 1):
            if t > 0:
                qstate = qstep(qstate, prop)
            records.append(EntropyRecord(
                t=t, b=params.b, k1=params.k1, k2=params.k2, size=n,
                s_classical=None, s_quantum=_quantum_entropy(qstate),
                raw_norm=None))
        series_list.append(EntropySeries(
            records=records, label=f"chaotic-sweep-N{n}",
            config_hash=provenance_hash(config)))
    if include_classical:
        if sigma is None or cutoff is None:
            raise ConfigError(
                "classical chaotic runs need explicit sigma and cutoff")
        cstate = classical_gaussian_coeffs(cutoff, GaussianSpec(sigma))
        records = []
        for t in range(t_max + 1):
            if t > 0:
                cstate = fp_step(cstate, params)
            s_c, raw = _classical_entropy(cstate)
            records.append(EntropyRecord(
                t=t, b=params.b, k1=params.k1, k2=params.k2,
                size=cutoff.pair_dim, s_classical=s_c, s_quantum=None,
                raw_norm=raw))
        series_list.append(EntropySeries(
            records=records, label="chaotic-sweep-classical",
            config_hash=provenance_hash(config)))
    return series_list, lyap_sum


@dataclass(frozen=True)
class LinearWindow:
    """Half-open index window [start, stop) of a near-linear segment."""

    start: int
    stop: int
    slope: float
    intercept: float
    r_squared: float

    @property
    def n_points(self) -> int:
        return self.stop - self.start


def detect_linear_window(ts: Sequence[float], ss: Sequence[float],
                         r2_min: float = 0.995,
                         min_points: int = 4) -> Optional[LinearWindow]:
    """Longest contiguous window whose straight-line fit reaches r2_min;
    ties go to the earliest window. Returns None when nothing qualifies.

    Prefix sums make each candidate window O(1), so the whole scan is
    quadratic in the series length.
    """
    t = np.asarray(ts, dtype=float)
    s = np.asarray(ss, dtype=float)
    if t.shape != s.shape or t.ndim != 1:
        raise DomainError("ts and ss must be 1-d and equally long")
    n = t.size
    if min_points < 3:
        raise DomainError("min_points must be >= 3")
    z = np.zeros(1)
    ct = np.concatenate([z, np.cumsum(t)])
    cs = np.concatenate([z, np.cumsum(s)])
    ctt = np.concatenate([z, np.cumsum(t * t)])
    css = np.concatenate([z, np.cumsum(s * s)])
    cts = np.concatenate([z, np.cumsum(t * s)])
    best = None
    for width in range(n, min_points - 1, -1):
        for start in range(0, n - width + 1):
            stop = start + width
            w = float(width)
            st, ss_ = ct[stop] - ct[start], cs[stop] - cs[start]
            stt = ctt[stop] - ctt[start]
            sss = css[stop] - css[start]
            sts = cts[stop] - cts[start]
            var_t = stt - st * st / w
            var_s = sss - ss_ * ss_ / w
            cov = sts - st * ss_ / w
            if var_t <= 0.0 or var_s <= 0.0:
                continue
            slope = cov / var_t
            r2 = cov * cov / (var_t * var_s)
            if r2 >= r2_min and slope > 0.0:
                best = LinearWindow(start=start, stop=stop, slope=slope,
                                    intercept=(ss_ - slope * st) / w,
                                    r_squared=r2)
                break
        if best is not None:
            break
    return best
