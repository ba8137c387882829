import numpy as np
import pytest
from numpy.testing import assert_allclose

from gtctv.tensor import (
    facewise_product,
    fft_all,
    fold,
    frob,
    grad,
    grad_adjoint,
    grad_spectrum,
    ifft_all,
    inner,
    mode_product,
    unfold,
)

RNG = np.random.default_rng(7)


def test_unfold_index_map():
    a = RNG.standard_normal((2, 3, 4))
    m = unfold(a, 1)
    assert m.shape == (2, 12)
    for i1 in range(2):
        for i2 in range(3):
            for i3 in range(4):
                assert m[i1, i2 + 3 * i3] == a[i1, i2, i3]


def test_unfold_constant():
    a = np.full((2, 3, 4), 2.5)
    assert np.all(unfold(a, 2) == 2.5)


@pytest.mark.parametrize("d", [1, 2, 3])
def test_fold_unfold_roundtrip(d):
    a = RNG.standard_normal((3, 4, 5))
    assert_allclose(fold(unfold(a, d), d, a.shape), a)


def test_unfold_fold_roundtrip_matrix_side():
    a = RNG.standard_normal((3, 4, 5))
    m = unfold(a, 2)
    assert_allclose(unfold(fold(m, 2, a.shape), 2), m)


def test_fold_zero_and_rank1_shapes():
    z = fold(np.zeros((3, 8)), 1, (3, 2, 4))
    assert z.shape == (3, 2, 4) and np.all(z == 0)
    m = np.arange(6.0).reshape(1, 6)
    assert_allclose(fold(m, 1, (1, 6)).ravel(), np.arange(6.0))


def test_unfold_bad_mode():
    a = np.zeros((2, 2))
    with pytest.raises(ValueError):
        unfold(a, 3)
    with pytest.raises(ValueError):
        unfold(a, 0)


def test_mode_product_identity():
    a = RNG.standard_normal((3, 4, 2))
    assert_allclose(mode_product(a, np.eye(4), 2), a)


def test_mode_product_explicit():
    a = np.ones((2, 2, 2))
    f = np.array([[1.0, 1.0], [0.0, 0.0]])
    out = mode_product(a, f, 1)
    assert_allclose(out[0], np.full((2, 2), 2.0))
    assert_allclose(out[1], np.zeros((2, 2)))


def test_mode_product_composes():
    a = RNG.standard_normal((3, 3, 3))
    f = RNG.standard_normal((3, 3))
    g = RNG.standard_normal((3, 3))
    two_step = mode_product(mode_product(a, f, 2), g, 2)
    assert_allclose(two_step, mode_product(a, g @ f, 2), atol=1e-12)


def test_mode_product_shape_error():
    with pytest.raises(ValueError):
        mode_product(np.zeros((2, 3, 4)), np.zeros((2, 2)), 2)


def test_facewise_identity_faces():
    a = RNG.standard_normal((3, 3, 4))
    b = np.stack([np.eye(3)] * 4, axis=2)
    assert_allclose(facewise_product(a, b), a)


def test_facewise_scalar_faces():
    a = np.array([2.0, 3.0]).reshape(1, 1, 2)
    b = np.array([5.0, 7.0]).reshape(1, 1, 2)
    assert_allclose(facewise_product(a, b).ravel(), [10.0, 21.0])


def test_facewise_matches_per_face_oracle():
    a = RNG.standard_normal((2, 3, 2, 2))
    b = RNG.standard_normal((3, 2, 2, 2))
    c = facewise_product(a, b)
    for i in range(2):
        for j in range(2):
            assert_allclose(c[:, :, i, j], a[:, :, i, j] @ b[:, :, i, j])


def test_facewise_shape_errors():
    with pytest.raises(ValueError):
        facewise_product(np.zeros((2, 3, 2)), np.zeros((2, 2, 2)))
    with pytest.raises(ValueError):
        facewise_product(np.zeros((2, 3, 2)), np.zeros((3, 2, 5)))


def test_inner_and_frob():
    a = np.ones((2, 2, 2))
    assert inner(a, np.zeros_like(a)) == 0
    assert inner(a, a) == pytest.approx(8.0)
    assert frob(a) == pytest.approx(np.sqrt(8.0))
    z = np.array(1j).reshape(1, 1, 1)
    assert inner(z, z) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        inner(np.zeros((2,)), np.zeros((3,)))


def test_grad_constant_is_zero():
    a = np.full((3, 4, 2), 1.7)
    for d in (1, 2, 3):
        assert_allclose(grad(a, d), 0.0)


def test_grad_explicit_circulant():
    v = np.array([1.0, 2.0, 3.0, 4.0])
    assert_allclose(grad(v, 1), [1.0, 1.0, 1.0, -3.0])
    # same thing through the explicit circulant of (-1, 1, 0, 0)
    circ = np.zeros((4, 4))
    for i in range(4):
        circ[i, i] = -1.0
        circ[i, (i + 1) % 4] = 1.0
    assert_allclose(grad(v, 1), circ @ v)


def test_grad_degenerate_extent():
    a = RNG.standard_normal((3, 1, 2))
    assert_allclose(grad(a, 2), 0.0)


def test_grad_adjoint_identity():
    for d in (1, 2, 3):
        a = RNG.standard_normal((4, 3, 2))
        b = RNG.standard_normal((4, 3, 2))
        lhs = inner(grad(a, d), b)
        rhs = inner(a, grad_adjoint(b, d))
        assert abs(lhs - rhs) < 1e-12


def test_grad_spectrum_diagonalizes():
    a = RNG.standard_normal((4, 3, 5))
    for d in (1, 2, 3):
        s = grad_spectrum(a.shape, d)
        assert_allclose(fft_all(grad(a, d)), s * fft_all(a), atol=1e-10)
        assert_allclose(fft_all(grad_adjoint(a, d)), np.conj(s) * fft_all(a), atol=1e-10)


def test_fft_impulse_and_constant():
    delta = np.zeros((3, 3, 2))
    delta[0, 0, 0] = 1.0
    assert_allclose(fft_all(delta), np.ones((3, 3, 2)), atol=1e-12)
    c = np.full((3, 3, 2), 2.0)
    f = fft_all(c)
    assert f[0, 0, 0] == pytest.approx(2.0 * 18)
    f[0, 0, 0] = 0
    assert_allclose(f, 0.0, atol=1e-10)


def test_fft_roundtrip_and_parseval():
    a = RNG.standard_normal((4, 4, 3))
    assert np.abs(ifft_all(fft_all(a)) - a).max() <= 1e-12
    assert frob(a) ** 2 == pytest.approx(
        float(np.sum(np.abs(fft_all(a)) ** 2)) / a.size, rel=1e-12
    )
