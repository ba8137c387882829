"""Plug-in denoisers applied slice-wise to order-N tensors.

A denoiser maps an (n1, n2, c) image slice with c in {1, 3} to a slice of
the same shape.  Tensors whose third extent is not 1 or 3 gain a singleton
third mode first (a pure reshape, so norms are untouched).  Built-ins are
classical so the solver runs without any learned model; a socket client can
stand in for a served model using the same slice protocol.

``check_spc`` empirically tests the pseudo-contractivity inequality
||Dx - Dy||^2 <= ||x - y||^2 + k ||(Id-D)x - (Id-D)y||^2 on random pairs.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.ndimage import convolve1d

__all__ = [
    "Denoiser",
    "IdentityDenoiser",
    "GaussianConvDenoiser",
    "BridgeDenoiser",
    "make_denoiser",
    "residual_operator",
    "SpcReport",
    "check_spc",
]


def slice_layout(shape):
    """Resolve the slicing case: 1 keeps the shape, 2 inserts a singleton mode 3."""
    if len(shape) < 3:
        raise ValueError("slice-wise denoising requires order >= 3")
    if shape[2] in (1, 3):
        return 1, tuple(shape)
    return 2, tuple(shape[:2]) + (1,) + tuple(shape[2:])


class Denoiser:
    """Base class: subclasses implement ``_denoise_slice`` on (n1, n2, c)."""

    declared_k = 0.0

    def _denoise_slice(self, s, sigma):
        raise NotImplementedError

    def denoise(self, x, sigma):
        """Apply the denoiser independently to every (n1, n2, c) slice."""
        if sigma <= 0:
            raise ValueError("sigma must be positive")
        case, work_shape = slice_layout(x.shape)
        work = x.reshape(work_shape)
        out = np.empty_like(work)
        for idx in np.ndindex(*work_shape[3:]):
            sel = (slice(None),) * 3 + idx
            out[sel] = self._denoise_slice(work[sel], sigma)
        return out.reshape(x.shape)

    def close(self):
        pass


class IdentityDenoiser(Denoiser):
    declared_k = 0.0

    def _denoise_slice(self, s, sigma):
        return s


class GaussianConvDenoiser(Denoiser):
    """Separable truncated Gaussian smoothing with reflective boundary.

    The kernel is fixed at construction; set ``sigma_scales_kernel`` to map
    the per-call denoising strength linearly onto the kernel width instead.
    Symmetric nonnegative kernel + reflective boundary keeps the operator's
    spectrum inside [0, 1], hence nonexpansive (k = 0).
    """

    declared_k = 0.0

    def __init__(self, kernel_sigma=1.5, radius=None, sigma_scales_kernel=False):
        if kernel_sigma <= 0:
            raise ValueError("kernel_sigma must be positive")
        self.kernel_sigma = float(kernel_sigma)
        self.radius = int(radius) if radius is not None else None
        self.sigma_scales_kernel = bool(sigma_scales_kernel)

    @staticmethod
    def kernel(kernel_sigma, radius=None):
        r = radius if radius is not None else math.ceil(3 * kernel_sigma)
        t = np.arange(-r, r + 1, dtype=float)
        k = np.exp(-(t**2) / (2 * kernel_sigma**2))
        return k / k.sum()

    def _denoise_slice(self, s, sigma):
        width = sigma * self.kernel_sigma if self.sigma_scales_kernel else self.kernel_sigma
        k = self.kernel(width, self.radius)
        out = convolve1d(s, k, axis=0, mode="reflect")
        return convolve1d(out, k, axis=1, mode="reflect")


class BridgeDenoiser(Denoiser):
    """Client for a denoiser served over the framed slice protocol."""

    def __init__(self, endpoint, declared_k=0.9, connect_timeout=5.0):
        from .bridge_client import BridgeConnection  # lazy: sockets only if used

        self.endpoint = endpoint
        self.declared_k = float(declared_k)
        self._conn = BridgeConnection(
            endpoint, declared_k=self.declared_k, timeout=connect_timeout
        )

    def _denoise_slice(self, s, sigma):
        return self._conn.denoise_slice(s, sigma)

    def denoise(self, x, sigma):
        if sigma <= 0:
            raise ValueError("sigma must be positive")
        case, work_shape = slice_layout(x.shape)
        self._conn.ensure_channels(work_shape[2])
        return super().denoise(x, sigma)

    def close(self):
        self._conn.close()


def make_denoiser(cfg):
    """Build a denoiser from its config mapping (see the run-config schema)."""
    kind = cfg.get("kind", "identity").lower()
    if kind == "identity":
        return IdentityDenoiser()
    if kind == "gaussian":
        return GaussianConvDenoiser(
            kernel_sigma=cfg.get("kernel_sigma", 1.5),
            radius=cfg.get("radius"),
            sigma_scales_kernel=cfg.get("sigma_scales_kernel", False),
        )
    if kind == "bridge":
        return BridgeDenoiser(
            endpoint=cfg["endpoint"], declared_k=cfg.get("declared_k", 0.9)
        )
    raise ValueError(f"unknown denoiser kind {kind!r}")


def residual_operator(denoiser, x, sigma, alpha):
    """Scaled predicted-noise operator alpha * (Id - D_sigma)(x)."""
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    return alpha * (x - denoiser.denoise(x, sigma))


@dataclass
class SpcReport:
    violations: int
    max_ratio: float
    trials: int
    k: float

    @property
    def ok(self):
        return self.violations == 0


def check_spc(denoiser, sigma, k, trials, shape, seed=0, tol=1e-9):
    """Sample random Gaussian pairs and test the k-pseudo-contractivity bound."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    fn = denoiser.denoise if hasattr(denoiser, "denoise") else denoiser
    rng = np.random.Generator(np.random.Philox(seed))
    violations = 0
    max_ratio = 0.0
    for _ in range(trials):
        x = rng.standard_normal(shape)
        y = rng.standard_normal(shape)
        dx, dy = fn(x, sigma), fn(y, sigma)
        lhs = float(np.sum((dx - dy) ** 2))
        rhs = float(np.sum((x - y) ** 2)) + k * float(
            np.sum(((x - dx) - (y - dy)) ** 2)
        )
        if lhs > rhs + tol:
            violations += 1
        if rhs > 0:
            max_ratio = max(max_ratio, lhs / rhs)
    return SpcReport(violations=violations, max_ratio=max_ratio, trials=trials, k=k)
