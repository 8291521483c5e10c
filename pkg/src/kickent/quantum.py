"""Quantized coupled kicked maps on an N x N torus Hilbert space.

Position eigenvalues sit at (n + 1/2)/N, n = 0..N-1, and N must be even.
One kick period is U = (U1 x U2) . U_b: the coupling phase acts first in
the position basis, then each particle's single map

    <n'| U_i |n> = e^{-i pi/4} / sqrt(N)
                   * exp(i N K_i/(2 pi) cos(2 pi (n + 1/2)/N))
                   * exp(i pi (n - n')^2 / N)

combines its kick phase (source side) with the free quadratic propagator.
Steps are applied matrix-free: the N^2 amplitude vector is reshaped to an
N x N grid and contracted as U1 @ Psi @ U2^T.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .classical import MapParams
from .errors import DimensionError, DomainError

MAX_DIM = 256


def _check_dim(n: int, max_dim: int = MAX_DIM) -> None:
    if n < 2 or n % 2 != 0:
        raise DomainError(f"N must be even and >= 2, got {n}")
    if n > max_dim:
        raise DomainError(f"N = {n} exceeds the configured maximum {max_dim}")


@dataclass(frozen=True)
class QuantumDims:
    """Single-particle Hilbert dimension N; the pair space is N^2."""

    n: int

    def __post_init__(self):
        _check_dim(self.n)


@dataclass
class QuantumState:
    """Amplitudes over the product position basis, length N^2, C order
    (first particle index major)."""

    amps: np.ndarray
    dims: QuantumDims
    time: int = 0

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))


@dataclass(frozen=True)
class QuantumPropagator:
    """One-period factors: the two single maps and the coupling phases."""

    u1: np.ndarray
    u2: np.ndarray
    phases_b: np.ndarray
    dims: QuantumDims


def position_grid(n: int) -> np.ndarray:
    """Angles 2 pi (n + 1/2)/N of the N position eigenvalues."""
    return (np.arange(n) + 0.5) * (2.0 * np.pi / n)


def build_single_map(n: int, kick: float, max_dim: int = MAX_DIM) -> np.ndarray:
    """Dense N x N one-period map for a single particle."""
    _check_dim(n, max_dim)
    if not math.isfinite(kick):
        raise DomainError("kick must be finite")
    theta = position_grid(n)
    kick_phase = np.exp(1j * n * kick / (2.0 * np.pi) * np.cos(theta))
    dn = np.subtract.outer(np.arange(n), np.arange(n))
    kinetic = np.exp(1j * np.pi * dn.astype(float) ** 2 / n)
    return (np.exp(-1j * np.pi / 4.0) / np.sqrt(n)) * kinetic * kick_phase[None, :]


def build_interaction_phases(n: int, b: float,
                             max_dim: int = MAX_DIM) -> np.ndarray:
    """Diagonal coupling phases over the product basis, length N^2."""
    _check_dim(n, max_dim)
    if b < 0.0 or not math.isfinite(b):
        raise DomainError("coupling b must be finite and >= 0")
    c = np.cos(position_grid(n))
    return np.exp(-1j * n * b / (2.0 * np.pi) * np.outer(c, c)).reshape(-1)


def build_propagator(n: int, params: MapParams,
                     max_dim: int = MAX_DIM) -> QuantumPropagator:
    return QuantumPropagator(
        u1=build_single_map(n, params.k1, max_dim),
        u2=build_single_map(n, params.k2, max_dim),
        phases_b=build_interaction_phases(n, params.b, max_dim),
        dims=QuantumDims(n))


def qstep(state: QuantumState, prop: QuantumPropagator) -> QuantumState:
    """One kick period; norm is preserved to roundoff."""
    n = state.dims.n
    if prop.dims.n != n:
        raise DimensionError("propagator and state dimensions differ")
    if state.amps.size != n * n:
        raise DimensionError("amplitude vector length is not N^2")
    psi = (prop.phases_b * state.amps).reshape(n, n)
    out = prop.u1 @ psi @ prop.u2.T
    return replace(state, amps=out.reshape(-1), time=state.time + 1)


def unitarity_report(prop: QuantumPropagator) -> float:
    """Max deviation from unitarity over all factors: ||U^H U - I||_max
    for both single maps and max | |phase| - 1 | for the coupling."""
    n = prop.dims.n
    eye = np.eye(n)
    d1 = np.abs(prop.u1.conj().T @ prop.u1 - eye).max()
    d2 = np.abs(prop.u2.conj().T @ prop.u2 - eye).max()
    db = np.abs(np.abs(prop.phases_b) - 1.0).max()
    return float(max(d1, d2, db))
