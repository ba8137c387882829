"""Independent oracles shared by the unit and acceptance tests."""

import numpy as np


def prox_grid_oracle(penalty, eta, x, step=1e-5, span=None):
    """Minimize f(z) + (z - x)^2 / (2 eta) over z >= 0 by grid search.

    The objective is strictly convex whenever eta * mu < 1, so iterative
    bracket refinement reaches exactly the fine-grid minimizer at ``step``
    resolution without materializing the full fine grid.
    """
    hi = x + 5 * span if span is not None else x + 5.0
    lo = 0.0

    def objective(z):
        return penalty.value(z) + (z - x) ** 2 / (2.0 * eta)

    width = hi - lo
    cur = max(width / 20_000.0, step)
    while True:
        n = max(int(round((hi - lo) / cur)) + 1, 2)
        zs = lo + cur * np.arange(n)
        zs = np.clip(zs, 0.0, None)
        vals = objective(zs)
        i = int(np.argmin(vals))
        if cur <= step:
            return float(zs[i])
        lo = max(zs[max(i - 1, 0)], 0.0)
        hi = zs[min(i + 1, n - 1)]
        cur = max(cur / 100.0, step)


def facewise_svt(a, transform, threshold):
    """Per-face singular value soft thresholding in the transform domain."""
    t = transform.apply(a)
    out = np.empty_like(t)
    for idx in np.ndindex(*t.shape[2:]):
        sel = (slice(None), slice(None)) + idx
        u, s, vh = np.linalg.svd(t[sel], full_matrices=False)
        out[sel] = (u * np.maximum(s - threshold, 0.0)) @ vh
    res = transform.invert(out)
    return res.real if not np.iscomplexobj(a) else res


def facewise_nuclear_sum(a, transform):
    """Sum of per-face nuclear norms of the transform of ``a``."""
    t = transform.apply(a)
    total = 0.0
    for idx in np.ndindex(*t.shape[2:]):
        sel = (slice(None), slice(None)) + idx
        total += float(np.linalg.svd(t[sel], compute_uv=False).sum())
    return total


def subgradient_descent_oracle(objective, subgrad, x0, steps=50_000, a0=None):
    """Diminishing-step subgradient method; returns the best iterate seen."""
    x = x0.copy()
    best = x.copy()
    best_val = objective(x)
    scale = a0 if a0 is not None else 0.1 * max(float(np.linalg.norm(x0.ravel())), 1.0)
    for k in range(steps):
        g = subgrad(x)
        gn = float(np.linalg.norm(g.ravel()))
        if gn == 0:
            break
        x = x - (scale / np.sqrt(k + 1.0)) / gn * g
        val = objective(x)
        if val < best_val:
            best_val = val
            best = x.copy()
    return best, best_val
