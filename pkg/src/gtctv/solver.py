"""Three-operator splitting loop for masked tensor completion.

One outer step evaluates the inexact prior prox (backward), the scaled
denoiser residual (forward), and the data-consistency projection
(backward), then relaxes with the Krasnoselskii-Mann weight of the
iteration.  Stopping uses the squared relative change of the data-feasible
iterate; a normalized operator-sum residual is logged as a diagnostic.
"""

import time
from dataclasses import dataclass, field

import numpy as np

from .denoisers import Denoiser, IdentityDenoiser, residual_operator
from .metrics import mpsnr
from .prior import GtctvSpec, InnerAdmmState, gtctv_subgradient, prox_gtctv
from .tensor import frob

__all__ = [
    "ObservationMask",
    "SolverConfig",
    "SolverState",
    "resolvent_data",
    "lambda_schedule",
    "sigma_schedule",
    "dys_step",
    "gtctv_dpc",
    "tol_mip",
    "DivergenceError",
]


class DivergenceError(RuntimeError):
    """Raised when iterates stop being finite (diverged configuration)."""


@dataclass
class ObservationMask:
    """Boolean index set of observed entries and the observed values."""

    omega: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        if self.omega.shape != self.y.shape:
            raise ValueError("mask and observation shapes differ")
        self.omega = self.omega.astype(bool)
        # enforce the invariant: observations vanish off the index set
        self.y = np.where(self.omega, self.y, 0.0)

    @property
    def count(self):
        return int(self.omega.sum())


def resolvent_data(x, mask):
    """Project onto data consistency: observed entries pinned, rest kept."""
    if x.shape != mask.omega.shape:
        raise ValueError(f"shape mismatch {x.shape} vs {mask.omega.shape}")
    return np.where(mask.omega, mask.y, x)


def lambda_schedule(t, t0=100):
    """Relaxation weight: 1 before the switch index, t0/t afterwards."""
    if t < 0:
        raise ValueError("iteration index must be nonnegative")
    return 1.0 if t < t0 else t0 / t


def sigma_schedule(sigma_t, nu, floor=1e-3):
    """Decay the denoising strength by ``nu`` with a fixed floor."""
    if sigma_t <= 0 or nu < 1:
        raise ValueError("require sigma > 0 and nu >= 1")
    return max(sigma_t / nu, floor)


@dataclass
class SolverConfig:
    """All knobs of the outer loop plus the prior specification."""

    spec: GtctvSpec
    denoiser: Denoiser = field(default_factory=IdentityDenoiser)
    tau: float = 1.0
    alpha: float = 0.5
    sigma0: float = 0.3
    nu: float = 1.02
    eps: float = 1e-4
    eps_inner: float = None
    n_in: int = 5
    n_max: int = 200
    rho0: float = 1e-4
    lambda_t0: int = 100
    rho_persist: bool = False
    accelerate: bool = True
    tol_mip_every: int = 10
    allow_unsafe_stepsize: bool = False

    def __post_init__(self):
        if self.eps_inner is None:
            self.eps_inner = self.eps
        self.mu = float(self.spec.penalty.mu)
        self.validate()

    def validate(self):
        if self.tau <= 0:
            raise ValueError("tau must be positive")
        if not self.allow_unsafe_stepsize and self.alpha > 0:
            k = self.denoiser.declared_k
            bound = (2.0 - 2.0 * k) / self.alpha
            if not self.tau < bound:
                raise ValueError(
                    f"stepsize tau = {self.tau} violates tau < (2-2k)/alpha = {bound:.6g}"
                )
        if self.mu > 0 and self.mu / (self.spec.gamma * self.rho0) >= 1:
            raise ValueError(
                "rho0 too small for the penalty: the shrinkage prox needs "
                f"mu/(gamma*rho) < 1, got {self.mu / (self.spec.gamma * self.rho0):.3g}"
            )


@dataclass
class SolverState:
    """Evolving iterates of the outer loop."""

    z: np.ndarray
    x_a: np.ndarray = None
    x_b: np.ndarray = None
    sigma: float = 0.0
    t: int = 0
    inner: InnerAdmmState = None


def dys_step(z, config, mask, t, sigma=None, warm=None):
    """One relaxed fixed-point step; returns (z_next, x_a, x_b, inner_state)."""
    sigma = config.sigma0 if sigma is None else sigma
    if warm is not None and not config.rho_persist:
        warm.rho = config.rho0
    x_b, inner = prox_gtctv(
        z,
        config.spec,
        config.tau,
        config.mu,
        rho0=config.rho0,
        nu=config.nu if config.accelerate else 1.0,
        eps=config.eps_inner,
        n_in=config.n_in,
        warm=warm,
    )
    x_c = x_b - config.denoiser.denoise(x_b, sigma)
    x_a = resolvent_data(2.0 * x_b - z - config.tau * config.alpha * x_c, mask)
    lam = lambda_schedule(t, config.lambda_t0)
    z_next = z + lam * (x_a - x_b)
    return z_next, x_a, x_b, inner


def tol_mip(x_a, mask, config, sigma=None, zero_tol=1e-10):
    """Normalized norm of the operator sum at a feasible point (diagnostic).

    The data term contributes the zero selection, the prior contributes a
    representative subgradient plus the quadratic convexification gradient,
    and the denoiser contributes its scaled residual.
    """
    if not np.array_equal(x_a[mask.omega], mask.y[mask.omega]):
        raise ValueError("tol_mip requires a data-feasible point")
    sigma = config.sigma0 if sigma is None else sigma
    b_term = gtctv_subgradient(x_a, config.spec, zero_tol) + 4.0 * config.mu * x_a
    c_term = residual_operator(config.denoiser, x_a, sigma, config.alpha)
    return frob(b_term + c_term) / float(x_a.size)


def gtctv_dpc(mask, config, x_true=None, cancel=None):
    """Run the full completion loop on a masked observation.

    Returns the recovered tensor and a per-iteration trace (list of dicts
    with keys t, lambda, sigma, eps, tol_mip, seconds, and optionally
    rel_err when ``x_true`` is supplied).
    """
    if mask.count == 0:
        raise ValueError("observation mask is empty")
    z = mask.y.astype(float).copy()
    inner = InnerAdmmState.initial(z, config.spec, config.rho0)
    sigma = config.sigma0
    x_a_prev = None
    x_a = z
    trace = []
    start = time.perf_counter()
    for t in range(config.n_max):
        if cancel is not None and cancel():
            break
        z, x_a, x_b, inner = dys_step(z, config, mask, t, sigma=sigma, warm=inner)
        if not np.all(np.isfinite(z)):
            raise DivergenceError(f"non-finite iterate at outer iteration {t}")
        if x_a_prev is None:
            eps_t = float("nan")
        else:
            denom = frob(x_a_prev) ** 2
            delta = frob(x_a - x_a_prev) ** 2
            eps_t = delta / denom if denom > 0 else delta
        row = {
            "t": t + 1,
            "lambda": lambda_schedule(t, config.lambda_t0),
            "sigma": sigma,
            "eps": eps_t,
            "tol_mip": float("nan"),
            "seconds": time.perf_counter() - start,
        }
        if config.tol_mip_every and (t % config.tol_mip_every == 0 or t == config.n_max - 1):
            row["tol_mip"] = tol_mip(x_a, mask, config, sigma=sigma)
        if x_true is not None:
            row["rel_err"] = frob(x_a - x_true) / max(frob(x_true), 1e-300)
            row["mpsnr"] = mpsnr(x_a, x_true)[0]
        trace.append(row)
        if config.accelerate:
            sigma = sigma_schedule(sigma, config.nu)
        x_a_prev = x_a
        if np.isfinite(eps_t) and eps_t < config.eps:
            break
    if trace and config.tol_mip_every and np.isnan(trace[-1]["tol_mip"]):
        trace[-1]["tol_mip"] = tol_mip(x_a, mask, config, sigma=trace[-1]["sigma"])
    return x_a, trace
