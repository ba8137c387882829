"""Dense tensor primitives: folding, mode products, face products, gradients.

All operations are pure functions on numpy arrays stored in row-major (C)
order, so the last index varies fastest.  Mode indices are 1-based to match
the usual tensor-algebra convention; ``mode_axis`` converts to numpy axes.
"""

import numpy as np

__all__ = [
    "mode_axis",
    "unfold",
    "fold",
    "mode_product",
    "facewise_product",
    "inner",
    "frob",
    "grad",
    "grad_adjoint",
    "fft_all",
    "ifft_all",
]


def mode_axis(a, d):
    """Validate 1-based mode index ``d`` against ``a`` and return the axis."""
    n = a.ndim
    if not 1 <= d <= n:
        raise ValueError(f"mode {d} out of range for order-{n} tensor")
    return d - 1


def unfold(a, d):
    """Unfold ``a`` along mode ``d`` into an (n_d x prod(other)) matrix.

    Column order is fixed: the smallest remaining mode varies fastest, so
    for shape (2, 3, 4) and d=1 the element a[i1, i2, i3] lands at
    (row i1, col i2 + 3*i3).
    """
    ax = mode_axis(a, d)
    return np.moveaxis(a, ax, 0).reshape(a.shape[ax], -1, order="F")


def fold(m, d, shape):
    """Inverse of :func:`unfold`: rebuild a tensor of ``shape`` from ``m``."""
    shape = tuple(int(s) for s in shape)
    ax = d - 1
    if not 0 <= ax < len(shape):
        raise ValueError(f"mode {d} out of range for shape {shape}")
    rest = shape[:ax] + shape[ax + 1 :]
    if m.shape != (shape[ax], int(np.prod(rest, dtype=np.int64))):
        raise ValueError(f"matrix shape {m.shape} inconsistent with {shape} at mode {d}")
    return np.moveaxis(m.reshape((shape[ax],) + rest, order="F"), 0, ax)


def mode_product(a, f, d):
    """Tensor-matrix product along mode ``d``: fold_d(F @ unfold_d(A))."""
    f = np.asarray(f)
    ax = mode_axis(a, d)
    if f.ndim != 2 or f.shape[1] != a.shape[ax]:
        raise ValueError(f"matrix {f.shape} does not act on mode {d} of {a.shape}")
    out_shape = a.shape[:ax] + (f.shape[0],) + a.shape[ax + 1 :]
    return fold(f @ unfold(a, d), d, out_shape)


def facewise_product(a, b):
    """Multiply corresponding face slices: C[:, :, i...] = A[:, :, i...] @ B[:, :, i...]."""
    if a.ndim < 3 or b.ndim < 3:
        raise ValueError("facewise product requires order >= 3")
    if a.shape[2:] != b.shape[2:] or a.shape[1] != b.shape[0]:
        raise ValueError(f"faces {a.shape} and {b.shape} do not conform")
    # matmul batches over leading axes, so rotate the two matrix axes to the back
    batch = tuple(range(2, a.ndim))
    c = np.matmul(a.transpose(batch + (0, 1)), b.transpose(batch + (0, 1)))
    n_batch = len(batch)
    return c.transpose((n_batch, n_batch + 1) + tuple(range(n_batch)))


def inner(a, b):
    """Inner product <A, B> with conjugation on the first argument."""
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    return np.sum(np.conj(a) * b)


def frob(a):
    """Frobenius norm sqrt(<A, A>)."""
    return float(np.linalg.norm(a.ravel()))


def grad(a, d):
    """Circular first difference along mode ``d``: (grad a)_i = a_{i+1} - a_i."""
    ax = mode_axis(a, d)
    return np.roll(a, -1, axis=ax) - a


def grad_adjoint(a, d):
    """Adjoint of :func:`grad`: (grad^T a)_i = a_{i-1} - a_i."""
    ax = mode_axis(a, d)
    return np.roll(a, 1, axis=ax) - a


def grad_spectrum(shape, d):
    """FFT diagonalization of :func:`grad` along mode ``d``, broadcast to ``shape``.

    Returns the complex spectrum S such that fft_all(grad(a, d)) = S * fft_all(a);
    the adjoint has spectrum conj(S).
    """
    ax = d - 1
    n = shape[ax]
    col = np.zeros(n)
    col[0] = -1.0
    col[-1] += 1.0  # n == 1 collapses to the zero operator
    spec = np.fft.fft(col)
    bshape = [1] * len(shape)
    bshape[ax] = n
    return spec.reshape(bshape)


def fft_all(a):
    """Unnormalized forward FFT along every mode."""
    return np.fft.fftn(a)


def ifft_all(a):
    """Inverse of :func:`fft_all` (1/prod(n) normalization)."""
    return np.fft.ifftn(a)
