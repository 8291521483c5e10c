"""Static figure rendering for sweep results.

Everything goes through Agg and writes vector (SVG) or raster files with
pinned metadata so the same series always produces the same bytes.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .analysis import fit_power_law  # noqa: E402
from .errors import DomainError  # noqa: E402

HASH_SALT = "kickent"


def apply_style() -> None:
    plt.rcParams.update({
        "svg.hashsalt": HASH_SALT,
        "figure.figsize": (6.0, 4.2),
        "figure.dpi": 120,
        "savefig.dpi": 120,
        "axes.grid": True,
        "grid.alpha": 0.3,
        "font.size": 10,
    })


def _save(fig, path, config_hash: str) -> None:
    fig.savefig(path, metadata={"Date": None,
                                "Description": f"config_hash={config_hash}"})
    plt.close(fig)


def _split_columns(series):
    ts = [r.t for r in series.records]
    bs = [r.b for r in series.records]
    sc = [r.s_classical for r in series.records]
    sq = [r.s_quantum for r in series.records]
    return ts, bs, sc, sq


def render_coupling(series, path) -> None:
    """Log-log entropy against coupling with fitted slopes annotated."""
    apply_style()
    _, bs, sc, sq = _split_columns(series)
    fig, ax = plt.subplots()
    notes = []
    for vals, marker, name in ((sc, "o", "classical"), (sq, "s", "quantum")):
        pts = [(b, s) for b, s in zip(bs, vals) if s is not None and s > 0.0]
        if not pts:
            continue
        ax.loglog(*zip(*pts), marker=marker, linestyle="none", label=name)
        if len(pts) >= 3:
            fit = fit_power_law(pts)
            grid = sorted(b for b, _ in pts)
            ax.loglog(grid, [fit.evaluate(b) for b in grid], linestyle="--",
                      linewidth=0.8)
            notes.append(f"{name}: slope {fit.exponent:.3f}")
    if notes:
        ax.set_title(";  ".join(notes))
    ax.set_xlabel("coupling b")
    ax.set_ylabel("entanglement entropy")
    ax.legend()
    _save(fig, path, series.config_hash)


def render_time(series, path) -> None:
    """Entropy against kick count on linear axes."""
    apply_style()
    ts, _, sc, sq = _split_columns(series)
    fig, ax = plt.subplots()
    for vals, marker, name in ((sc, "o", "classical"), (sq, "s", "quantum")):
        pts = [(t, s) for t, s in zip(ts, vals) if s is not None]
        if pts:
            ax.plot(*zip(*pts), marker=marker, label=name)
    ax.set_xlabel("kicks")
    ax.set_ylabel("entanglement entropy")
    ax.legend()
    _save(fig, path, series.config_hash)


def render_chaotic(series_list, path, lyap_sum=None) -> None:
    """Quantum entropy growth overlaid for several Hilbert dimensions,
    with an optional Lyapunov-rate guide line through the origin."""
    if not series_list:
        raise DomainError("no series to render")
    apply_style()
    fig, ax = plt.subplots()
    t_ref = 0.0
    for series in series_list:
        ts, _, sc, sq = _split_columns(series)
        vals = sq if any(v is not None for v in sq) else sc
        pts = [(t, s) for t, s in zip(ts, vals) if s is not None]
        if pts:
            ax.plot(*zip(*pts), marker=".", label=series.label)
            t_ref = max(t_ref, max(t for t, _ in pts))
    if lyap_sum is not None and t_ref > 0.0:
        t_end = min(t_ref, 3.0)
        ax.plot([0.0, t_end], [0.0, lyap_sum * t_end], linestyle=":",
                label=f"slope {lyap_sum:.3f}")
    ax.set_xlabel("kicks")
    ax.set_ylabel("entanglement entropy")
    ax.legend()
    _save(fig, path, series_list[0].config_hash)
