"""Integer-order Bessel functions of the first kind.

The transfer-operator kernels in this package need J_k(x) for runs of
consecutive integer orders at a fixed argument, so the workhorse here is
:func:`bessel_j_row`, which evaluates a whole row in one downward sweep.

Evaluation uses Miller's algorithm: a three-term downward recurrence

    J_{k-1}(x) = (2 k / x) J_k(x) - J_{k+1}(x)

started well above both the largest requested order and x, normalized with
the even-order sum rule

    J_0(x) + 2 * sum_{k>=1} J_{2k}(x) = 1.

Downward recursion is stable for every order, which is why no separate
forward branch exists.  Negative orders and negative arguments follow from
the parity relations J_{-k}(x) = (-1)^k J_k(x) and J_k(-x) = (-1)^k J_k(x).

Accuracy target: absolute error <= 1e-13 and relative error <= 1e-12
wherever |J| > 1e-280, inside the supported envelope |order| <= 1000,
|x| <= 1e4.  Magnitudes below 1e-300 are flushed to exact zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

ORDER_LIMIT = 1000
ARG_LIMIT = 1.0e4
UNDERFLOW_FLUSH = 1.0e-300

# rescaling bounds for the raw (unnormalized) recurrence values
_RESCALE_ABOVE = 1.0e250
_RESCALE_BY = 1.0e-250


@dataclass(frozen=True)
class BesselRow:
    """Values J_k(x) for the consecutive orders in ``orders``."""

    x: float
    orders: np.ndarray
    values: np.ndarray


def _start_order(kmax: int, x: float) -> int:
    # Miller start offset: contamination from the growing solution decays by
    # roughly a factor (k/x)^2 per step below the turning point, and the
    # sqrt(40 m) margin keeps it under double-precision roundoff.
    m0 = max(kmax, int(math.ceil(x)), 4)
    return m0 + int(math.ceil(math.sqrt(40.0 * m0))) + 14


def _row_tiny_arg(kmax: int, x: float) -> np.ndarray:
    # Leading-order series: J_k = (x/2)^k / k!, relative error <= x^2/4.
    # Used below x = 1e-8, where the recurrence growth per step would
    # overflow the rescaling headroom and the correction is < 1e-16.
    row = np.zeros(kmax + 1)
    row[0] = 1.0
    if x > 0.0:
        lh = math.log(x / 2.0)
        for k in range(1, kmax + 1):
            lv = k * lh - math.lgamma(k + 1.0)
            if lv < -709.0:   # exp underflow, remaining orders are 0
                break
            row[k] = math.exp(lv)
    row[row < UNDERFLOW_FLUSH] = 0.0
    return row


def _row_nonneg(kmax: int, x: float) -> np.ndarray:
    """J_0(x) .. J_kmax(x) for x >= 0 by the normalized downward sweep."""
    if x < 1.0e-8:
        return _row_tiny_arg(kmax, x)

    row = np.zeros(kmax + 1)
    epoch = np.zeros(kmax + 1, dtype=np.int64)
    e = 0             # rescale count; stored entries remember their epoch
    # invariant entering iteration k: fkm = J~_{k+1}, fk = J~_{k+2}
    fk = 0.0
    fkm = 1.0e-30     # seed at the start order, fixed by normalization
    ssum = 0.0        # J~_0 + 2 sum J~_{2j}, Kahan-compensated
    comp = 0.0
    for k in range(_start_order(kmax, x), -1, -1):
        fk, fkm = fkm, (2.0 * (k + 1) / x) * fkm - fk
        if k <= kmax:
            row[k] = fkm
            epoch[k] = e
        if k % 2 == 0:
            term = fkm if k == 0 else 2.0 * fkm
            y = term - comp
            t = ssum + y
            comp = (t - ssum) - y
            ssum = t
        if abs(fkm) > _RESCALE_ABOVE:
            fk *= _RESCALE_BY
            fkm *= _RESCALE_BY
            ssum *= _RESCALE_BY
            comp *= _RESCALE_BY
            e += 1
    row /= ssum
    # entries stored before a rescale still carry the older, larger scale;
    # dividing first and applying the lag afterwards keeps every surviving
    # value clear of the denormal range, where precision would be lost
    lag = e - epoch
    if e > 0:
        row *= np.power(_RESCALE_BY, lag)
    row[np.abs(row) < UNDERFLOW_FLUSH] = 0.0
    return row


def bessel_j_row(min_order: int, max_order: int, x: float) -> BesselRow:
    """Evaluate J_k(x) for every integer order k in [min_order, max_order].

    Parameters
    ----------
    min_order, max_order : int
        Inclusive order range, each bounded by ORDER_LIMIT in magnitude.
    x : float
        Argument, |x| <= ARG_LIMIT.  Either sign is accepted.

    Returns
    -------
    BesselRow
        Orders ascending; values share the row normalization, so adjacent
        entries satisfy the three-term recurrence to roundoff.
    """
    if min_order > max_order:
        raise DomainError("empty order range: min_order > max_order")
    if max(abs(min_order), abs(max_order)) > ORDER_LIMIT:
        raise DomainError(f"order out of range (|order| <= {ORDER_LIMIT})")
    if not math.isfinite(x) or abs(x) > ARG_LIMIT:
        raise DomainError(f"argument out of range (|x| <= {ARG_LIMIT})")

    orders = np.arange(min_order, max_order + 1)
    kmax = int(np.max(np.abs(orders)))
    base = _row_nonneg(kmax, abs(x))
    values = base[np.abs(orders)]
    # parity: one sign flip per negative order, another per negative argument
    flips = (orders < 0).astype(int) + (1 if x < 0.0 else 0)
    sign = np.where((np.abs(orders) % 2 == 1) & (flips % 2 == 1), -1.0, 1.0)
    values = values * sign
    values[values == 0.0] = 0.0   # normalize -0.0
    return BesselRow(x=float(x), orders=orders, values=values)


def bessel_j(order: int, x: float) -> float:
    """Single value J_order(x); same domain and accuracy as the row form."""
    row = bessel_j_row(order, order, x)
    return float(row.values[0])
