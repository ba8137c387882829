import numpy as np
import pytest
from numpy.testing import assert_allclose

from gtctv.tensor import frob, mode_product
from gtctv.transform import Transform, dct_matrix, dft_matrix

RNG = np.random.default_rng(11)


@pytest.mark.parametrize("kind", ["dct", "dft"])
def test_roundtrip(kind):
    t = Transform(kind)
    a = RNG.standard_normal((3, 3, 4, 2))
    back = t.invert(t.apply(a))
    assert np.abs(back - a).max() <= 1e-12


def test_apply_matches_matrix_path():
    a = RNG.standard_normal((3, 4, 5, 2))
    for kind in ("dct", "dft"):
        t = Transform(kind)
        ref = a
        for ax in (2, 3):
            ref = mode_product(ref, t.mode_matrix(a.shape[ax]), ax + 1)
        assert np.abs(t.apply(a) - ref).max() <= 1e-10


def test_singleton_third_mode_dct_unchanged():
    t = Transform("dct")
    a = RNG.standard_normal((4, 4, 1))
    assert_allclose(t.apply(a), a, atol=1e-14)


def test_dct_of_constant_mode_concentrates():
    t = Transform("dct")
    a = np.tile(RNG.standard_normal((3, 3, 1)), (1, 1, 5))
    f = t.apply(a)
    assert np.abs(f[:, :, 1:]).max() <= 1e-12
    assert np.abs(f[:, :, 0]).max() > 0


def test_scale_factor_values():
    assert Transform("dct").scale_factor((5, 5, 4, 9)) == 1.0
    assert Transform("dft").scale_factor((5, 5, 4, 9)) == pytest.approx(6.0)
    assert Transform("dft").scale_factor((5, 5, 1)) == pytest.approx(1.0)


def test_dct_isometry_dft_scales():
    a = RNG.standard_normal((3, 4, 5, 2))
    assert frob(Transform("dct").apply(a)) == pytest.approx(frob(a), rel=1e-12)
    t = Transform("dft")
    l = t.scale_factor(a.shape)
    assert float(np.linalg.norm(t.apply(a))) == pytest.approx(l * frob(a), rel=1e-12)


def test_linearity():
    t = Transform("dft")
    a = RNG.standard_normal((3, 3, 4))
    b = RNG.standard_normal((3, 3, 4))
    assert_allclose(t.apply(2.0 * a - 0.5 * b), 2.0 * t.apply(a) - 0.5 * t.apply(b), atol=1e-12)


def test_mode_matrix_structure():
    # each per-mode matrix is l * (unitary)
    for n in (2, 5, 8):
        c = dct_matrix(n)
        assert_allclose(c @ c.T, np.eye(n), atol=1e-12)
        w = dft_matrix(n)
        assert_allclose(w @ w.conj().T / n, np.eye(n), atol=1e-12)


def test_rank_guard():
    with pytest.raises(ValueError):
        Transform("dct").apply(np.zeros((3, 3)))
    with pytest.raises(ValueError):
        Transform("dct").scale_factor((3, 3))
    with pytest.raises(ValueError):
        Transform("qwt")
