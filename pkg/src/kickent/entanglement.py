"""Schmidt spectra and von Neumann entropy for bipartite vectors.

One code path serves both halves of the package: a quantum state on an
N x N product grid and a classical Fourier-coefficient tensor split into
its two particle index groups are treated identically once reshaped to a
dim_a x dim_b matrix.  The spectrum is always renormalized to probabilities;
the raw squared norm of the input is kept alongside so truncation losses
stay visible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateStateError, DimensionError, DomainError

NORM_FLOOR = 1.0e-8
P_FLOOR = 1.0e-15
RANK_EPS = 1.0e-12
# Rows/columns with L2 norm below CROP_TOL * ||M||_F are dropped before the
# SVD.  The singular values move by at most the Frobenius norm of what was
# dropped, far below the 1e-10 equivalence tolerance; set to 0 to disable.
CROP_TOL = 1.0e-14


@dataclass
class SchmidtSpectrum:
    """Squared singular values of the bipartite split, renormalized.

    probs is nonincreasing, sums to 1, and has length min(dim_a, dim_b).
    raw_norm is the squared L2 norm of the input vector before any
    renormalization, the quantity that decays when a truncated evolution
    leaks probability off the lattice.
    """

    probs: np.ndarray
    raw_norm: float
    rank_eps: float = RANK_EPS

    def effective_rank(self) -> int:
        return int(np.count_nonzero(self.probs > self.rank_eps))


def schmidt_spectrum(vector: np.ndarray, dim_a: int, dim_b: int,
                     norm_floor: float = NORM_FLOOR,
                     crop_tol: float = CROP_TOL) -> SchmidtSpectrum:
    """Schmidt probabilities of a vector on a dim_a x dim_b product space.

    Raises DegenerateStateError when the squared norm is below norm_floor,
    DimensionError when the vector length is not dim_a * dim_b.
    """
    vec = np.asarray(vector).reshape(-1)
    if dim_a < 1 or dim_b < 1:
        raise DimensionError("split dimensions must be positive")
    if vec.size != dim_a * dim_b:
        raise DimensionError(
            f"vector length {vec.size} != dim_a*dim_b = {dim_a * dim_b}")
    raw = float(np.vdot(vec, vec).real)
    if raw < norm_floor:
        raise DegenerateStateError(
            f"squared norm {raw:.3e} below floor {norm_floor:.3e}")

    mat = vec.reshape(dim_a, dim_b)
    if crop_tol > 0.0:
        scale = crop_tol * np.sqrt(raw)
        keep_r = np.sqrt((np.abs(mat) ** 2).sum(axis=1)) > scale
        keep_c = np.sqrt((np.abs(mat) ** 2).sum(axis=0)) > scale
        if keep_r.any() and keep_c.any():
            mat = mat[keep_r][:, keep_c]

    s = np.linalg.svd(mat, compute_uv=False)
    probs = s.astype(float) ** 2
    probs /= probs.sum()
    full = np.zeros(min(dim_a, dim_b))
    full[:probs.size] = probs     # svd returns nonincreasing order
    return SchmidtSpectrum(probs=full, raw_norm=raw)


def von_neumann_entropy(spectrum: SchmidtSpectrum,
                        p_floor: float = P_FLOOR) -> float:
    """S = -sum p ln p over probabilities above p_floor (natural log).

    The floor implements the p ln p -> 0 limit without evaluating log(0);
    a probability below p_floor contributes less than ~3.5e-14 to S.
    """
    p = spectrum.probs
    p = p[p >= p_floor]
    if p.size == 0:
        return 0.0
    return float(-(p * np.log(p)).sum()) + 0.0


def reduced_density_oracle(vector: np.ndarray, dim_a: int,
                           dim_b: int) -> np.ndarray:
    """Explicit reduced density matrix on side A, for cross-checks.

    Forms rho_A = M M^dagger / raw_norm directly.  Deliberately the slow,
    obvious construction; guarded to oracle scale (dim_a*dim_b <= 1e6,
    dim_a <= 2000).
    """
    if dim_a * dim_b > 1_000_000 or dim_a > 2000:
        raise DomainError("reduced_density_oracle is restricted to oracle scale")
    vec = np.asarray(vector).reshape(-1)
    if vec.size != dim_a * dim_b:
        raise DimensionError(
            f"vector length {vec.size} != dim_a*dim_b = {dim_a * dim_b}")
    raw = float(np.vdot(vec, vec).real)
    if raw < NORM_FLOOR:
        raise DegenerateStateError(
            f"squared norm {raw:.3e} below floor {NORM_FLOOR:.3e}")
    mat = vec.reshape(dim_a, dim_b)
    return mat @ mat.conj().T / raw


def schmidt_of_classical(state) -> SchmidtSpectrum:
    """Spectrum of a ClassicalState split between its two particles."""
    c = state.coeffs
    dim = c.shape[0] * c.shape[1]
    return schmidt_spectrum(c.reshape(-1), dim, dim)


def schmidt_of_quantum(state) -> SchmidtSpectrum:
    """Spectrum of a QuantumState split between its two particles."""
    n = state.dims.n
    return schmidt_spectrum(state.amps, n, n)
