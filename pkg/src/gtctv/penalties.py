"""Weakly convex scalar penalties on the nonnegative half-line.

Each penalty exposes its value, the proximal map of eta*f restricted to
z >= 0, its weak-convexity constant mu, and the derivative used by the
diagnostic subgradient (zero at the origin for all three kinds).

The prox maps are only single-valued when eta * mu < 1; larger products are
rejected rather than silently resolved.
"""

import numpy as np

__all__ = ["Penalty", "AbsPenalty", "ScadPenalty", "McpPenalty", "make_penalty"]


class Penalty:
    """Base interface; subclasses define value/prox/derivative and ``mu``."""

    mu = 0.0

    def _check_input(self, x):
        x = np.asarray(x, dtype=float)
        if np.any(x < 0):
            raise ValueError("penalty inputs must be nonnegative")
        return x

    def _check_eta(self, eta):
        if eta <= 0:
            raise ValueError("eta must be positive")
        if eta * self.mu >= 1:
            raise ValueError(
                f"eta*mu = {eta * self.mu:.3g} >= 1: prox is not single-valued"
            )

    def value(self, x):
        raise NotImplementedError

    def prox(self, eta, x):
        raise NotImplementedError

    def derivative(self, x):
        raise NotImplementedError


class AbsPenalty(Penalty):
    """f(x) = x on x >= 0 (the absolute value restricted to the domain)."""

    mu = 0.0

    def value(self, x):
        x = self._check_input(x)
        return x if x.ndim else float(x)

    def prox(self, eta, x):
        x = self._check_input(x)
        self._check_eta(eta)
        out = np.maximum(x - eta, 0.0)
        return out if out.ndim else float(out)

    def derivative(self, x):
        x = self._check_input(x)
        out = np.where(x > 0, 1.0, 0.0)
        return out if out.ndim else float(out)


class ScadPenalty(Penalty):
    """Three-branch SCAD penalty with scale ``phi`` and shape ``omega`` > 1."""

    def __init__(self, phi, omega):
        if phi <= 0 or omega <= 1:
            raise ValueError("SCAD requires phi > 0 and omega > 1")
        self.phi = float(phi)
        self.omega = float(omega)
        self.mu = 1.0 / (self.omega - 1.0)

    def value(self, x):
        x = self._check_input(x)
        phi, om = self.phi, self.omega
        mid = (-(x**2) + 2 * om * phi * x - phi**2) / (2 * (om - 1))
        out = np.where(
            x < phi, phi * x, np.where(x < om * phi, mid, (om + 1) * phi**2 / 2)
        )
        return out if out.ndim else float(out)

    def prox(self, eta, x):
        x = self._check_input(x)
        self._check_eta(eta)
        phi, om = self.phi, self.omega
        soft = np.maximum(x - eta * phi, 0.0)
        interp = ((om - 1) * x - eta * om * phi) / (om - 1 - eta)
        out = np.where(x <= phi + eta * phi, soft, np.where(x <= om * phi, interp, x))
        return out if out.ndim else float(out)

    def derivative(self, x):
        x = self._check_input(x)
        phi, om = self.phi, self.omega
        mid = (om * phi - x) / (om - 1)
        out = np.where(x < phi, phi, np.where(x < om * phi, mid, 0.0))
        out = np.where(x == 0, 0.0, out)
        return out if out.ndim else float(out)


class McpPenalty(Penalty):
    """Minimax concave penalty with scale ``phi`` and shape ``omega`` > 1."""

    def __init__(self, phi, omega):
        if phi <= 0 or omega <= 1:
            raise ValueError("MCP requires phi > 0 and omega > 1")
        self.phi = float(phi)
        self.omega = float(omega)
        self.mu = 1.0 / self.omega

    def value(self, x):
        x = self._check_input(x)
        phi, om = self.phi, self.omega
        out = np.where(x < om * phi, phi * x - x**2 / (2 * om), om * phi**2 / 2)
        return out if out.ndim else float(out)

    def prox(self, eta, x):
        x = self._check_input(x)
        self._check_eta(eta)
        phi, om = self.phi, self.omega
        interior = om * np.maximum(x - eta * phi, 0.0) / (om - eta)
        out = np.where(x < om * phi, interior, x)
        return out if out.ndim else float(out)

    def derivative(self, x):
        x = self._check_input(x)
        phi, om = self.phi, self.omega
        out = np.where(x < om * phi, phi - x / om, 0.0)
        out = np.where(x == 0, 0.0, out)
        return out if out.ndim else float(out)


def make_penalty(kind, phi=1.0, omega=3.7):
    """Build a penalty from its config name: "abs", "scad", or "mcp"."""
    kind = kind.lower()
    if kind == "abs":
        return AbsPenalty()
    if kind == "scad":
        return ScadPenalty(phi, omega)
    if kind == "mcp":
        return McpPenalty(phi, omega)
    raise ValueError(f"unknown penalty kind {kind!r}")
