"""Invertible per-mode transforms applied along modes 3..N.

Each per-mode matrix is l * W with W unitary: the orthonormal DCT-II has
l = 1, the unnormalized DFT has l = sqrt(n).  The composite scale factor
is the product of the per-mode factors.
"""

import math
from dataclasses import dataclass

import numpy as np
import scipy.fft

__all__ = ["Transform", "dct_matrix", "dft_matrix"]


def dct_matrix(n):
    """Orthonormal DCT-II matrix of size n (rows are the transform basis)."""
    return scipy.fft.dct(np.eye(n), type=2, norm="ortho", axis=0)


def dft_matrix(n):
    """Unnormalized forward DFT matrix of size n."""
    k = np.arange(n)
    return np.exp(-2j * np.pi * np.outer(k, k) / n)


@dataclass(frozen=True)
class Transform:
    """Transform choice for the tensor algebra: ``kind`` is "dct" or "dft"."""

    kind: str = "dct"

    def __post_init__(self):
        if self.kind not in ("dct", "dft"):
            raise ValueError(f"unknown transform kind {self.kind!r}")

    def apply(self, a):
        """Transform ``a`` along every mode from 3 to N."""
        if a.ndim < 3:
            raise ValueError("transform requires order >= 3")
        out = np.asarray(a)
        for ax in range(2, a.ndim):
            if self.kind == "dct":
                out = scipy.fft.dct(out, type=2, norm="ortho", axis=ax)
            else:
                out = np.fft.fft(out, axis=ax)
        return out

    def invert(self, a):
        """Inverse of :func:`apply`."""
        if a.ndim < 3:
            raise ValueError("transform requires order >= 3")
        out = np.asarray(a)
        for ax in range(2, a.ndim):
            if self.kind == "dct":
                out = scipy.fft.idct(out, type=2, norm="ortho", axis=ax)
            else:
                out = np.fft.ifft(out, axis=ax)
        return out

    def scale_factor(self, shape):
        """Composite scale factor l for a tensor of ``shape``."""
        if len(shape) < 3:
            raise ValueError("transform requires order >= 3")
        if self.kind == "dct":
            return 1.0
        return math.sqrt(float(np.prod(shape[2:], dtype=np.int64)))

    def mode_matrix(self, n):
        """The explicit n x n matrix applied along one mode (for oracles)."""
        return dct_matrix(n) if self.kind == "dct" else dft_matrix(n)
