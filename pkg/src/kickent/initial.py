"""Matched initial conditions: a phase-space Gaussian for the classical
density and torus coherent states for the wavefunction, both centered at
the origin of the unit torus."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .classical import ClassicalState, ModeCutoff, new_state
from .errors import DomainError
from .quantum import QuantumDims, QuantumState, _check_dim

# images summed in the periodicized Gaussian; exp(-pi*N*(3-1/2)^2) < 1e-30
# already at N = 8, so 3 on each side is plenty
COHERENT_IMAGES = 3

TRUNCATION_TOL = 1e-6


class TruncationWarning(UserWarning):
    """Mode cutoff too small to hold the requested initial density."""


@dataclass(frozen=True)
class GaussianSpec:
    """Isotropic width of the initial density, in torus units.

    The center is pinned to the origin; only the width varies.
    """

    sigma: float

    def __post_init__(self):
        if not (0.0 < self.sigma <= 0.25):
            raise DomainError(f"sigma must lie in (0, 0.25], got {self.sigma}")


def sigma_for_dimension(n: int) -> float:
    """Width whose Fourier profile is comparable to an N-dimensional
    coherent state's. A convenience default, not a tested identity."""
    if n < 1:
        raise DomainError("n must be positive")
    return 1.0 / math.sqrt(n)


def _axis_profile(extent: int, sigma: float) -> np.ndarray:
    k = np.arange(-extent, extent + 1, dtype=float)
    return np.exp(-4.0 * np.pi ** 2 * sigma ** 2 * k * k)


def _axis_tail_fraction(extent: int, sigma: float) -> float:
    """Mass fraction (in the L2 sense) outside |k| <= extent on one axis."""
    inside = float(np.sum(_axis_profile(extent, sigma) ** 2))
    total = inside
    k = extent + 1
    while True:
        term = 2.0 * math.exp(-8.0 * np.pi ** 2 * sigma ** 2 * k * k)
        if term < 1e-300 or term < 1e-18 * total:
            break
        total += term
        k += 1
    return 1.0 - inside / total


def classical_gaussian_coeffs(cutoff: ModeCutoff,
                              spec: GaussianSpec) -> ClassicalState:
    """Product of two identical phase-space Gaussians at the origin.

    Per particle a0(m, n) = sqrt(8 pi sigma^2) exp(-4 pi^2 sigma^2 (m^2 + n^2)),
    which carries unit L2 norm up to Gaussian-sum corrections of order
    exp(-1/(8 sigma^2)).
    """
    sigma = spec.sigma
    tail = (2.0 * _axis_tail_fraction(cutoff.m_max, sigma)
            + 2.0 * _axis_tail_fraction(cutoff.n_max, sigma))
    if tail > TRUNCATION_TOL:
        warnings.warn(
            f"cutoff {cutoff.m_max}x{cutoff.n_max} drops a mass fraction "
            f"{tail:.3e} of the sigma={sigma} Gaussian", TruncationWarning,
            stacklevel=2)
    amp = math.sqrt(8.0 * math.pi * sigma ** 2)
    particle = amp * np.outer(_axis_profile(cutoff.m_max, sigma),
                              _axis_profile(cutoff.n_max, sigma))
    state = new_state(cutoff)
    state.coeffs[:] = np.einsum("ab,cd->abcd", particle, particle)
    state.norm0 = state.norm()
    return state


def coherent_state(n: int, q0: float, p0: float) -> np.ndarray:
    """Unit-norm periodicized Gaussian in the position basis."""
    _check_dim(n)
    q = (np.arange(n) + 0.5) / n
    psi = np.zeros(n, dtype=complex)
    for nu in range(-COHERENT_IMAGES, COHERENT_IMAGES + 1):
        d = q - q0 - nu
        psi += np.exp(-np.pi * n * d * d + 2j * np.pi * n * p0 * d)
    return psi / np.linalg.norm(psi)


def product_initial(n: int) -> QuantumState:
    """Two coherent states at the origin; Schmidt rank 1 by construction."""
    psi = coherent_state(n, 0.0, 0.0)
    return QuantumState(amps=np.outer(psi, psi).reshape(-1),
                        dims=QuantumDims(n))
