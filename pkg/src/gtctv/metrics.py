"""Sampling masks and recovery metrics.

Image-style metrics slice along the last mode and average per-slice PSNR
and SSIM; imputation-style metrics (MAPE, RMSE) evaluate a held-out entry
set, excluding zero ground truth from the percentage error.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.ndimage import convolve

__all__ = [
    "bernoulli_mask",
    "psnr",
    "ssim",
    "mpsnr",
    "mssim",
    "mape",
    "rmse",
    "MetricReport",
    "evaluate",
]

PSNR_CAP = 100.0


def bernoulli_mask(shape, sr, seed=0):
    """Observe each entry independently with probability ``sr`` (counter-based RNG)."""
    if not 0 <= sr <= 1:
        raise ValueError("sampling rate must lie in [0, 1]")
    rng = np.random.Generator(np.random.Philox(seed))
    return rng.random(tuple(int(s) for s in shape)) < sr


def psnr(est, ref, peak=1.0):
    """Peak signal-to-noise ratio over the whole array, capped when exact."""
    mse = float(np.mean((est - ref) ** 2))
    if mse == 0.0:
        return PSNR_CAP
    return 10.0 * math.log10(peak**2 / mse)


def _gaussian_window(size=11, sigma=1.5):
    t = np.arange(size, dtype=float) - (size - 1) / 2.0
    g = np.exp(-(t**2) / (2 * sigma**2))
    g /= g.sum()
    return np.outer(g, g)


def ssim(est, ref, peak=1.0, win_size=11, win_sigma=1.5):
    """Mean structural similarity of two 2-D bands (standard configuration)."""
    if est.shape != ref.shape or est.ndim != 2:
        raise ValueError("ssim expects two equal-shaped 2-D arrays")
    c1 = (0.01 * peak) ** 2
    c2 = (0.03 * peak) ** 2
    w = _gaussian_window(win_size, win_sigma)
    x = est.astype(float)
    y = ref.astype(float)

    def filt(a):
        return convolve(a, w, mode="reflect")

    mx, my = filt(x), filt(y)
    sxx = filt(x * x) - mx * mx
    syy = filt(y * y) - my * my
    sxy = filt(x * y) - mx * my
    num = (2 * mx * my + c1) * (2 * sxy + c2)
    den = (mx * mx + my * my + c1) * (sxx + syy + c2)
    return float(np.mean(num / den))


def _last_mode_slices(a):
    if a.ndim < 2:
        raise ValueError("metrics expect order >= 2 tensors")
    if a.ndim == 2:
        yield a
        return
    for i in range(a.shape[-1]):
        yield a[..., i]


def _bands(slice_):
    """2-D (n1 x n2) bands of one slice, iterating the trailing extents."""
    if slice_.ndim == 2:
        yield slice_
        return
    for idx in np.ndindex(*slice_.shape[2:]):
        yield slice_[(slice(None), slice(None)) + idx]


def mpsnr(est, ref, peak=1.0):
    """Mean of per-slice PSNRs along the last mode."""
    if est.shape != ref.shape:
        raise ValueError("shape mismatch")
    vals = [psnr(s, r, peak) for s, r in zip(_last_mode_slices(est), _last_mode_slices(ref))]
    return float(np.mean(vals)), vals


def mssim(est, ref, peak=1.0):
    """Mean of per-slice SSIMs (each slice averaged over its 2-D bands)."""
    if est.shape != ref.shape:
        raise ValueError("shape mismatch")
    vals = []
    for s, r in zip(_last_mode_slices(est), _last_mode_slices(ref)):
        vals.append(float(np.mean([ssim(b, c, peak) for b, c in zip(_bands(s), _bands(r))])))
    return float(np.mean(vals)), vals


def mape(y, y_hat, eval_mask=None):
    """Mean absolute percentage error over the evaluation set (zero truth excluded)."""
    y = np.asarray(y, dtype=float)
    y_hat = np.asarray(y_hat, dtype=float)
    sel = np.ones(y.shape, dtype=bool) if eval_mask is None else eval_mask.astype(bool)
    sel = sel & (y != 0)
    if not sel.any():
        raise ValueError("empty evaluation set for MAPE")
    return 100.0 * float(np.mean(np.abs(y[sel] - y_hat[sel]) / np.abs(y[sel])))


def rmse(y, y_hat, eval_mask=None):
    """Root mean square error over the evaluation set."""
    y = np.asarray(y, dtype=float)
    y_hat = np.asarray(y_hat, dtype=float)
    sel = np.ones(y.shape, dtype=bool) if eval_mask is None else eval_mask.astype(bool)
    if not sel.any():
        raise ValueError("empty evaluation set for RMSE")
    return float(np.sqrt(np.mean((y[sel] - y_hat[sel]) ** 2)))


@dataclass
class MetricReport:
    """Aggregated metrics plus the per-slice breakdown."""

    mode: str
    mpsnr: float = None
    mssim: float = None
    mape: float = None
    rmse: float = None
    per_slice_psnr: list = field(default_factory=list)
    per_slice_ssim: list = field(default_factory=list)
    eval_entries: int = 0

    def to_dict(self):
        doc = {
            "mode": self.mode,
            "mpsnr": self.mpsnr,
            "mssim": self.mssim,
            "mape": self.mape,
            "rmse": self.rmse,
            "per_slice_psnr": self.per_slice_psnr,
            "per_slice_ssim": self.per_slice_ssim,
            "eval_entries": self.eval_entries,
        }
        if self.mode == "traffic":
            doc["mape_excludes_zero_truth"] = True
        return doc


def evaluate(est, ref, omega=None, mode="images", peak=1.0):
    """Build a :class:`MetricReport` for one of the two evaluation families.

    The images mode scores full last-mode slices; the traffic mode scores
    MAPE/RMSE on the unobserved entries only (requires ``omega``).
    """
    if mode not in ("images", "traffic"):
        raise ValueError(f"unknown metric mode {mode!r}")
    report = MetricReport(mode=mode)
    if mode == "images":
        report.mpsnr, report.per_slice_psnr = mpsnr(est, ref, peak)
        report.mssim, report.per_slice_ssim = mssim(est, ref, peak)
        report.eval_entries = int(est.size)
    else:
        if omega is None:
            raise ValueError("traffic metrics require the observation mask")
        held_out = ~omega.astype(bool)
        report.mape = mape(ref, est, held_out)
        report.rmse = rmse(ref, est, held_out)
        report.eval_entries = int(held_out.sum())
    return report
