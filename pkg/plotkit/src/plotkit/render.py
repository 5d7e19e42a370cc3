"""Figure rendering: four plot kinds over the documented CSV schemas.

Backend is pinned to Agg and figures carry no timestamps, so a fixed
input renders to byte-identical images.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .io import EmptyData, load_rows

FIGSIZE = (7.0, 4.5)
DPI = 110


def semicircle_density(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    inside = np.abs(x) < 2
    out[inside] = np.sqrt(4 - x[inside] ** 2) / (2 * np.pi)
    return out


def semicircle_cdf(x: np.ndarray) -> np.ndarray:
    x = np.clip(np.asarray(x, dtype=float), -2.0, 2.0)
    return 0.5 + x * np.sqrt(4 - x * x) / (4 * np.pi) + np.arcsin(x / 2) / np.pi


def product_semicircle_density(k: int, grid_size: int = 4096):
    """Density of a product of k independent semicircle variables.

    Products turn into sums after u = log|x|, so the density of
    log|X1 ... Xk| is the k-fold additive convolution (computed by FFT on
    a uniform grid) of the log-|semicircle| density
    g(u) = 2 e^u rho(e^u), u <= log 2.  Folding back and symmetrizing
    gives the signed product density.  Returns (x, density) arrays.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if k == 1:
        x = np.linspace(-2.2, 2.2, grid_size)
        return x, semicircle_density(x)
    lo, hi = np.log(2) - 14.0, np.log(2)
    u = np.linspace(lo, hi, grid_size)
    du = u[1] - u[0]
    g = 2.0 * np.exp(u) * semicircle_density(np.exp(u))
    # k-fold convolution, zero-padded to full support
    n_out = grid_size * k
    G = np.fft.rfft(g, n=n_out)
    conv = np.fft.irfft(G ** k, n=n_out) * du ** (k - 1)
    u_out = lo * k + du * np.arange(n_out)
    y = np.exp(u_out)
    dens_abs = np.where(y > 0, conv / np.maximum(y, 1e-300), 0.0)
    keep = (y <= 2.0 ** k) & (y > 1e-6)
    x_abs = y[keep]
    d_abs = dens_abs[keep]
    x = np.concatenate([-x_abs[::-1], x_abs])
    dens = np.concatenate([d_abs[::-1], d_abs]) / 2.0
    return x, dens


def _finish(fig, out_path: str) -> None:
    fig.savefig(out_path, dpi=DPI, metadata={"Software": "plotkit"})
    plt.close(fig)


def render_dist(rows: list[dict], out_path: str, bins: int = 40) -> None:
    """Histogram of normalized matrix elements with a distribution overlay."""
    samples = np.array([r["w_re"] for r in rows])
    ks = sorted({r["k_class"] for r in rows})
    fig, ax = plt.subplots(figsize=FIGSIZE)
    ax.hist(samples, bins=bins, range=(-2.5, 2.5), density=True,
            alpha=0.6, color="#4878cf", label=f"{samples.size} samples")
    for k in ks:
        x, dens = product_semicircle_density(k)
        label = "semicircle" if k == 1 else f"product of {k} semicircles"
        ax.plot(x, dens, lw=1.5, label=label)
    ax.set_xlim(-2.5, 2.5)
    ax.set_xlabel("normalized matrix element (real part)")
    ax.set_ylabel("density")
    ax.set_title("normalized Hecke matrix elements")
    ax.legend(frameon=False)
    _finish(fig, out_path)


def render_variance(rows: list[dict], out_path: str) -> None:
    """log-log variance sweep with the V(f) p^{-d_f} reference line."""
    ps = np.array([r["p"] for r in rows], dtype=float)
    s2 = np.array([r["S2"] for r in rows])
    d_f = rows[0]["d_f"]
    v_f = rows[0]["V_f"]
    fig, ax = plt.subplots(figsize=FIGSIZE)
    ax.loglog(ps, s2, "o", color="#4878cf", label="S2(p)")
    grid = np.linspace(ps.min(), ps.max(), 128)
    ax.loglog(grid, v_f / grid ** d_f, "--", color="#d65f5f",
              label=f"V(f) p^-{d_f}")
    ax.set_xlabel("prime p")
    ax.set_ylabel("quantum variance S2")
    ax.set_title("variance decay in the Hecke basis")
    ax.legend(frameon=False)
    _finish(fig, out_path)


def render_scar(rows: list[dict], out_path: str) -> None:
    """Scar matrix elements by class, with the p^{1/4}-scaled generic max."""
    classes = {"in_Z0": "#2e7d32", "in_complement": "#4878cf", "generic": "#d65f5f"}
    fig, ax = plt.subplots(figsize=FIGSIZE)
    for cls, color in classes.items():
        sub = [r for r in rows if r["class"] == cls]
        if not sub:
            continue
        ps = np.array([r["p"] for r in sub], dtype=float)
        vals = np.array([abs(complex(r["re"], r["im"])) for r in sub])
        ax.semilogy(ps, np.maximum(vals, 1e-17), ".", ms=4, color=color, label=cls)
    by_p: dict[int, float] = {}
    for r in rows:
        if r["class"] == "generic":
            by_p[r["p"]] = max(by_p.get(r["p"], 0.0), r["scaled"])
    if by_p:
        ps = sorted(by_p)
        ax.semilogy(ps, [max(by_p[p], 1e-17) for p in ps], "k--", lw=1,
                    label="max p^(1/4)|elem| (generic)")
    ax.set_xlabel("prime p")
    ax.set_ylabel("|matrix element|")
    ax.set_title("scar localization")
    ax.legend(frameon=False, loc="center right")
    _finish(fig, out_path)


def render_ks(rows: list[dict], out_path: str) -> None:
    """KS distance of sqrt(q) E values to the semicircle CDF, per q.

    Display-level statistic of the CSV samples: for each (q, orbit type)
    the first nu block is compared against the semicircle reference,
    excluding the quadratic character column.
    """
    fig, ax = plt.subplots(figsize=FIGSIZE)
    for orbit_type, color in [("sym", "#4878cf"), ("nonsym", "#d65f5f")]:
        qs, kss = [], []
        for q in sorted({r["q"] for r in rows}):
            sub = [r for r in rows if r["q"] == q and r["orbit_type"] == orbit_type]
            if not sub:
                continue
            nu0 = min(r["nu_repr"] for r in sub)
            sub = [r for r in sub if r["nu_repr"] == nu0]
            m = max(r["chi_index"] for r in sub) + 1
            samples = np.sort(np.array(
                [np.sqrt(q) * r["re"] for r in sub if r["chi_index"] != m // 2]
            ))
            if samples.size == 0:
                continue
            n = samples.size
            cdf = semicircle_cdf(samples)
            ks = max(
                np.abs(np.arange(1, n + 1) / n - cdf).max(),
                np.abs(np.arange(0, n) / n - cdf).max(),
            )
            qs.append(q)
            kss.append(ks)
        if qs:
            ax.plot(qs, kss, "o-", color=color, label=orbit_type)
    ax.set_xlabel("field size q")
    ax.set_ylabel("KS distance to semicircle")
    ax.set_title("Sato-Tate equidistribution trend")
    ax.axhline(0.2, color="gray", lw=0.8, ls=":")
    ax.legend(frameon=False)
    _finish(fig, out_path)


RENDERERS = {
    "dist": render_dist,
    "variance": render_variance,
    "scar": render_scar,
    "ks": render_ks,
}


def render(kind: str, in_path: str, out_path: str) -> None:
    rows = load_rows(in_path, kind)
    RENDERERS[kind](rows, out_path)
