"""Optional figure rendering next to the CSV artifacts. Headless backend only."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402


def _finite_positive(values) -> bool:
    arr = np.asarray(values, dtype=float)
    return bool(arr.size) and bool(np.all(np.isfinite(arr)) and np.all(arr > 0))


def render_sweep(rows: list[dict], swept: str, path) -> None:
    """Error components against the swept variable; one point per CSV row."""
    ok = [r for r in rows if not r.get("error")]
    if not ok:
        return
    x = np.array([float(r["swept_value"]) for r in ok])
    e_clean = np.array([float(r["e_clean"]) for r in ok])
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(x, e_clean, "o-", label="e_clean", markersize=3)

    totals = [r["e_total"] for r in ok]
    if all(v != "" for v in totals):
        ax.plot(x, [float(v) for v in totals], "s-", label="e_total", markersize=3)
    mc = [(float(r["swept_value"]), float(r["mc_mean"]), float(r["mc_stderr"]))
          for r in ok if r["mc_mean"] != ""]
    if mc:
        mx, mm, ms = (np.array(v) for v in zip(*mc))
        ax.errorbar(mx, mm, yerr=ms, fmt="x", label="mc_mean", capsize=2)

    if _finite_positive(e_clean):
        ax.set_yscale("log")
    ax.set_xlabel(swept)
    ax.set_ylabel("error")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_spectrum(orders, multiplicities, values, kind: str, path) -> None:
    """Eigenvalue against harmonic degree; zeros drawn on a linear inset scale."""
    orders = np.asarray(orders)
    values = np.asarray(values, dtype=float)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    positive = values > 0
    ax.plot(orders[positive], values[positive], "o-", markersize=4, label=kind)
    if np.any(~positive):
        floor = values[positive].min() if np.any(positive) else 1.0
        ax.plot(orders[~positive], np.full((~positive).sum(), floor), "v",
                markersize=4, label="zero modes (clipped)")
    if _finite_positive(values[positive]):
        ax.set_yscale("log")
    ax.set_xlabel("degree k")
    ax.set_ylabel("eigenvalue")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_singular_values(curves: dict[float, np.ndarray], path) -> None:
    """One descending singular-value profile per weight exponent."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for alpha in sorted(curves):
        s = np.asarray(curves[alpha], dtype=float)
        ax.plot(np.arange(s.size), s, label=f"alpha={alpha:g}")
    ax.set_yscale("log")
    ax.set_xlabel("index")
    ax.set_ylabel("singular value")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
