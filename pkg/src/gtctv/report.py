"""Figure rendering for solver traces and metric reports.

Figures are written next to the delimited outputs; the Agg backend keeps
rendering headless.
"""

import math
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .fileio import atomic_write_text

__all__ = ["write_trace_csv", "render_trace_figures", "render_metric_figures"]

TRACE_COLUMNS = ("t", "lambda", "sigma", "eps", "tol_mip", "seconds")


def write_trace_csv(path, trace, reproducible=False):
    """Write the per-iteration trace with the fixed six-column header."""
    lines = [",".join(TRACE_COLUMNS)]
    for row in trace:
        vals = []
        for col in TRACE_COLUMNS:
            v = row.get(col)
            if col == "t":
                vals.append(str(int(v)))
            elif col == "seconds" and reproducible:
                vals.append("0.000000")
            elif v is None or (isinstance(v, float) and math.isnan(v)):
                vals.append("nan")
            elif col == "seconds":
                vals.append(f"{v:.6f}")
            else:
                vals.append(repr(float(v)))
        lines.append(",".join(vals))
    atomic_write_text(path, "\n".join(lines) + "\n")


def _finite_series(trace, key):
    xs, ys = [], []
    for row in trace:
        v = row.get(key)
        if v is not None and isinstance(v, (int, float)) and math.isfinite(v):
            xs.append(row["t"])
            ys.append(v)
    return xs, ys


def render_trace_figures(out_dir, trace, prefix="trace"):
    """Render convergence curves (relative change, residual, schedules)."""
    os.makedirs(out_dir, exist_ok=True)
    written = []

    fig, ax = plt.subplots(figsize=(6, 4))
    for key, label in (("eps", "relative change"), ("tol_mip", "operator residual")):
        xs, ys = _finite_series(trace, key)
        if xs:
            ax.semilogy(xs, ys, marker=".", label=label)
    ax.set_xlabel("outer iteration")
    ax.set_ylabel("value (log scale)")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    path = os.path.join(out_dir, f"{prefix}_convergence.png")
    fig.savefig(path, dpi=120)
    plt.close(fig)
    written.append(path)

    fig, ax = plt.subplots(figsize=(6, 4))
    for key in ("lambda", "sigma"):
        xs, ys = _finite_series(trace, key)
        if xs:
            ax.plot(xs, ys, label=key)
    ax.set_xlabel("outer iteration")
    ax.set_ylabel("schedule value")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    path = os.path.join(out_dir, f"{prefix}_schedules.png")
    fig.savefig(path, dpi=120)
    plt.close(fig)
    written.append(path)
    return written


def render_metric_figures(out_dir, report, prefix="metrics"):
    """Render per-slice metric bars for an image-mode report."""
    os.makedirs(out_dir, exist_ok=True)
    written = []
    if report.per_slice_psnr:
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.bar(range(1, len(report.per_slice_psnr) + 1), report.per_slice_psnr)
        ax.set_xlabel("slice")
        ax.set_ylabel("PSNR (dB)")
        ax.axhline(report.mpsnr, color="k", ls="--", label=f"mean {report.mpsnr:.2f}")
        ax.legend()
        fig.tight_layout()
        path = os.path.join(out_dir, f"{prefix}_psnr.png")
        fig.savefig(path, dpi=120)
        plt.close(fig)
        written.append(path)
    if report.per_slice_ssim:
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.bar(range(1, len(report.per_slice_ssim) + 1), report.per_slice_ssim)
        ax.set_xlabel("slice")
        ax.set_ylabel("SSIM")
        ax.axhline(report.mssim, color="k", ls="--", label=f"mean {report.mssim:.4f}")
        ax.legend()
        fig.tight_layout()
        path = os.path.join(out_dir, f"{prefix}_ssim.png")
        fig.savefig(path, dpi=120)
        plt.close(fig)
        written.append(path)
    return written
