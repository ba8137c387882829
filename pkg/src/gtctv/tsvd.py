"""Transform-domain tensor algebra: t-product, t-SVD, and spectral shrinkage.

All face-wise work happens on the transform of the input; factors are mapped
back with the inverse transform.  Real inputs whose results pick up a small
imaginary residue (DFT round trips) are realified after a residue check.
"""

from dataclasses import dataclass

import numpy as np

from .tensor import facewise_product
from .transform import Transform

__all__ = [
    "tprod",
    "conj_transpose",
    "identity_tensor",
    "TSVDFactors",
    "tsvd",
    "f_penalty_value",
    "tsvf_shrinkage",
]

_IMAG_TOL = 1e-8


def realify(a, where="transform inverse"):
    """Drop a negligible imaginary part, or fail loudly if it is not noise."""
    if not np.iscomplexobj(a):
        return a
    scale = max(1.0, float(np.abs(a.real).max(initial=0.0)))
    resid = float(np.abs(a.imag).max(initial=0.0))
    if resid > _IMAG_TOL * scale:
        raise ArithmeticError(f"imaginary residue {resid:.3g} after {where}")
    return np.ascontiguousarray(a.real)


def tprod(a, b, transform):
    """Transform-based tensor-tensor product of ``a`` and ``b``."""
    if a.ndim < 3 or a.ndim != b.ndim or a.shape[2:] != b.shape[2:]:
        raise ValueError(f"tensors {a.shape} and {b.shape} do not conform")
    c = transform.invert(facewise_product(transform.apply(a), transform.apply(b)))
    if not (np.iscomplexobj(a) or np.iscomplexobj(b)):
        c = realify(c, "t-product")
    return c


def conj_transpose(a, transform):
    """Conjugate transpose: every transform face is conjugate-transposed."""
    if a.ndim < 3:
        raise ValueError("conjugate transpose requires order >= 3")
    t = transform.apply(a)
    t = np.conj(np.swapaxes(t, 0, 1))
    out = transform.invert(t)
    if not np.iscomplexobj(a):
        out = realify(out, "conjugate transpose")
    return out


def identity_tensor(n, trailing_shape, transform):
    """The tensor whose every transform face is the n x n identity."""
    shape = (n, n) + tuple(int(s) for s in trailing_shape)
    eye = np.zeros(shape, dtype=complex if transform.kind == "dft" else float)
    idx = np.arange(n)
    eye[idx, idx, ...] = 1.0
    return realify(transform.invert(eye), "identity tensor")


def _face_iter(t):
    """Iterate (index, face matrix) over trailing indices of a transform tensor."""
    trailing = t.shape[2:]
    for idx in np.ndindex(*trailing):
        yield idx, t[(slice(None), slice(None)) + idx]


@dataclass
class TSVDFactors:
    """Orthogonal factors and the f-diagonal core of a tensor decomposition."""

    u: np.ndarray
    s: np.ndarray
    v: np.ndarray
    transform: Transform

    def reconstruct(self):
        us = tprod(self.u, self.s, self.transform)
        return tprod(us, conj_transpose(self.v, self.transform), self.transform)


def tsvd(a, transform):
    """Decompose ``a`` into orthogonal U, V and an f-diagonal S via face SVDs."""
    if a.ndim < 3:
        raise ValueError("t-SVD requires order >= 3")
    t = transform.apply(a)
    n1, n2 = a.shape[:2]
    u_t = np.zeros((n1, n1) + a.shape[2:], dtype=t.dtype)
    s_t = np.zeros(a.shape, dtype=t.dtype)
    v_t = np.zeros((n2, n2) + a.shape[2:], dtype=t.dtype)
    r = min(n1, n2)
    for idx, face in _face_iter(t):
        uf, sf, vhf = np.linalg.svd(face, full_matrices=True)
        sel = (slice(None), slice(None)) + idx
        u_t[sel] = uf
        v_t[sel] = vhf.conj().T
        s_t[(np.arange(r), np.arange(r)) + idx] = sf
    u = transform.invert(u_t)
    s = transform.invert(s_t)
    v = transform.invert(v_t)
    if not np.iscomplexobj(a) and transform.kind == "dct":
        u, s, v = (realify(x, "t-SVD factor") for x in (u, s, v))
    return TSVDFactors(u=u, s=s, v=v, transform=transform)


def singular_values(a, transform):
    """Per-face singular values of the transform of ``a``, stacked (faces x r)."""
    t = transform.apply(a)
    return np.stack([np.linalg.svd(face, compute_uv=False) for _, face in _face_iter(t)])


def f_penalty_value(a, penalty, transform):
    """Sum of the penalty over all transform-face singular values, scaled by 1/l^2."""
    l = transform.scale_factor(a.shape)
    sv = singular_values(a, transform)
    return float(np.sum(penalty.value(sv))) / l**2


def tsvf_shrinkage(t, penalty, eta, transform):
    """Apply the penalty prox to every transform-face singular value.

    Solves min_G ||G||_{f,L} + (1/2 eta) ||G - T||_F^2; requires eta*mu < 1.
    """
    if eta <= 0 or eta * penalty.mu >= 1:
        raise ValueError(f"eta = {eta:.3g} ill-posed for penalty with mu = {penalty.mu:.3g}")
    tt = transform.apply(t)
    out = np.empty_like(tt)
    for idx, face in _face_iter(tt):
        uf, sf, vhf = np.linalg.svd(face, full_matrices=False)
        shrunk = penalty.prox(eta, sf)
        out[(slice(None), slice(None)) + idx] = (uf * shrunk) @ vhf
    res = transform.invert(out)
    if not np.iscomplexobj(t):
        res = realify(res, "t-SVF shrinkage")
    return res
