"""Point dynamics on the four-torus and fitting utilities.

The map advances positions by momenta and then kicks the momenta with
the gradient of the kick potential evaluated at the updated positions.
Lyapunov exponents use the Benettin scheme: push an orthonormal tangent
frame with the exact Jacobian and re-orthonormalize by QR every step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .classical import MapParams
from .errors import DomainError

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class TorusPoint:
    q1: float
    p1: float
    q2: float
    p2: float

    def __post_init__(self):
        for name in ("q1", "p1", "q2", "p2"):
            v = getattr(self, name)
            if not (0.0 <= v < 1.0):
                object.__setattr__(self, name, v % 1.0)

    def as_array(self) -> np.ndarray:
        return np.array([self.q1, self.p1, self.q2, self.p2])


def _kick_gradient(q1: float, q2: float, params: MapParams) -> tuple[float, float]:
    s1, c1 = math.sin(TWO_PI * q1), math.cos(TWO_PI * q1)
    s2, c2 = math.sin(TWO_PI * q2), math.cos(TWO_PI * q2)
    g1 = (params.k1 / TWO_PI) * s1 - (params.b / TWO_PI) * s1 * c2
    g2 = (params.k2 / TWO_PI) * s2 - (params.b / TWO_PI) * s2 * c1
    return g1, g2


def map_step(pt: TorusPoint, params: MapParams) -> TorusPoint:
    q1 = (pt.q1 + pt.p1) % 1.0
    q2 = (pt.q2 + pt.p2) % 1.0
    g1, g2 = _kick_gradient(q1, q2, params)
    return TorusPoint(q1, (pt.p1 - g1) % 1.0, q2, (pt.p2 - g2) % 1.0)


def _jacobian(q1: float, q2: float, params: MapParams) -> np.ndarray:
    """Jacobian of one step, with the kick curvature taken at the primed
    positions (q1, q2 here are already updated). Determinant is 1."""
    c1, c2 = math.cos(TWO_PI * q1), math.cos(TWO_PI * q2)
    s1, s2 = math.sin(TWO_PI * q1), math.sin(TWO_PI * q2)
    a11 = params.k1 * c1 - params.b * c1 * c2
    a22 = params.k2 * c2 - params.b * c1 * c2
    a12 = params.b * s1 * s2
    return np.array([
        [1.0, 1.0, 0.0, 0.0],
        [-a11, 1.0 - a11, -a12, -a12],
        [0.0, 0.0, 1.0, 1.0],
        [-a12, -a12, -a22, 1.0 - a22],
    ])


def tangent_step(pt: TorusPoint, frame: np.ndarray,
                 params: MapParams) -> tuple[TorusPoint, np.ndarray]:
    """Advance a point and a 4 x k tangent frame together."""
    if frame.shape[0] != 4:
        raise DomainError("tangent frame must have four rows")
    nxt = map_step(pt, params)
    jac = _jacobian(nxt.q1, nxt.q2, params)
    return nxt, jac @ frame


def lyapunov_exponents(params: MapParams, n_transient: int = 1000,
                       n_steps: int = 100_000, seed: int = 7) -> np.ndarray:
    """Full Lyapunov spectrum, sorted descending. Symplectic pairing
    makes the four exponents sum to zero up to orbit-average noise."""
    if n_steps < 1000:
        raise DomainError("n_steps must be at least 1000 for a stable average")
    rng = np.random.default_rng(seed)
    pt = TorusPoint(*rng.random(4))
    for _ in range(n_transient):
        pt = map_step(pt, params)
    frame = np.eye(4)
    sums = np.zeros(4)
    for _ in range(n_steps):
        pt, frame = tangent_step(pt, frame, params)
        frame, r = np.linalg.qr(frame)
        diag = np.diag(r)
        # QR sign convention: fold negative diagonals back into Q
        signs = np.where(diag < 0.0, -1.0, 1.0)
        frame *= signs
        sums += np.log(np.abs(diag))
    return np.sort(sums / n_steps)[::-1]


@dataclass(frozen=True)
class PowerLawFit:
    """Least-squares line through (ln b, ln S)."""

    exponent: float
    log_prefactor: float
    r_squared: float

    def evaluate(self, b: float) -> float:
        return math.exp(self.log_prefactor) * b ** self.exponent


def fit_power_law(points) -> PowerLawFit:
    """Fit S = C b^alpha by linear regression in log-log coordinates."""
    pts = [(float(b), float(s)) for b, s in points]
    if len(pts) < 3:
        raise DomainError("power-law fit needs at least 3 points")
    if any(b <= 0.0 or s <= 0.0 for b, s in pts):
        raise DomainError("power-law fit needs strictly positive data")
    x = np.log([b for b, _ in pts])
    y = np.log([s for _, s in pts])
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    total = y - y.mean()
    ss_tot = float(total @ total)
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - float(resid @ resid) / ss_tot
    return PowerLawFit(exponent=float(slope), log_prefactor=float(intercept),
                       r_squared=r2)
