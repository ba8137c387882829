import numpy as np
import pytest
from numpy.testing import assert_allclose

from gtctv.fileio import TensorFormatError, read_tensor, read_traffic_csv, write_tensor


def test_float_roundtrip_bit_exact(tmp_path):
    a = np.random.default_rng(1).standard_normal((3, 4, 5))
    p = tmp_path / "a.tnsr"
    write_tensor(p, a)
    b = read_tensor(p)
    assert b.dtype == np.float64
    assert a.tobytes() == b.tobytes()


def test_bool_roundtrip(tmp_path):
    m = np.random.default_rng(2).random((4, 4, 2)) < 0.5
    p = tmp_path / "m.tnsr"
    write_tensor(p, m)
    out = read_tensor(p)
    assert out.dtype == bool
    assert np.array_equal(out, m)


def test_write_is_deterministic(tmp_path):
    a = np.random.default_rng(3).standard_normal((2, 3))
    p1, p2 = tmp_path / "x1.tnsr", tmp_path / "x2.tnsr"
    write_tensor(p1, a)
    write_tensor(p2, a)
    assert p1.read_bytes() == p2.read_bytes()


def test_bad_magic_rejected(tmp_path):
    p = tmp_path / "bad.tnsr"
    p.write_bytes(b"XXXX" + bytes(20))
    with pytest.raises(TensorFormatError):
        read_tensor(p)


def test_unknown_version_rejected(tmp_path):
    a = np.zeros((2, 2))
    p = tmp_path / "v.tnsr"
    write_tensor(p, a)
    blob = bytearray(p.read_bytes())
    blob[4] = 9
    p.write_bytes(bytes(blob))
    with pytest.raises(TensorFormatError):
        read_tensor(p)


def test_truncated_payload_rejected(tmp_path):
    a = np.zeros((2, 2))
    p = tmp_path / "t.tnsr"
    write_tensor(p, a)
    blob = p.read_bytes()
    p.write_bytes(blob[:-3])
    with pytest.raises(TensorFormatError):
        read_tensor(p)


def test_unknown_dtype_rejected(tmp_path):
    a = np.zeros((2, 2))
    p = tmp_path / "d.tnsr"
    write_tensor(p, a)
    blob = bytearray(p.read_bytes())
    blob[5] = 7
    p.write_bytes(bytes(blob))
    with pytest.raises(TensorFormatError):
        read_tensor(p)


def test_traffic_csv_layout(tmp_path):
    # 2 sensors x (3 intervals x 2 days), day-major columns
    p = tmp_path / "t.csv"
    p.write_text("1,2,3,4,5,6\n7,8,9,10,11,12\n")
    tensor, omega = read_traffic_csv(p, sensors=2, intervals=3, days=2)
    assert tensor.shape == (2, 3, 1, 2)
    assert omega.all()
    assert_allclose(tensor[0, :, 0, 0], [1, 2, 3])  # day 1 intervals
    assert_allclose(tensor[0, :, 0, 1], [4, 5, 6])  # day 2 intervals
    assert_allclose(tensor[1, :, 0, 0], [7, 8, 9])


def test_traffic_csv_missing_cells(tmp_path):
    p = tmp_path / "m.csv"
    p.write_text("1,,3,4\n5,6,,8\n")
    tensor, omega = read_traffic_csv(p, sensors=2, intervals=2, days=2)
    assert tensor[0, 1, 0, 0] == 0.0
    assert not omega[0, 1, 0, 0]
    assert omega.sum() == 6


def test_traffic_csv_errors(tmp_path):
    ragged = tmp_path / "r.csv"
    ragged.write_text("1,2,3\n4,5\n")
    with pytest.raises(TensorFormatError):
        read_traffic_csv(ragged, sensors=2, intervals=3, days=1)
    alpha = tmp_path / "a.csv"
    alpha.write_text("1,x\n2,3\n")
    with pytest.raises(TensorFormatError):
        read_traffic_csv(alpha, sensors=2, intervals=2, days=1)


def test_traffic_roundtrip_through_tensor_file(tmp_path):
    p = tmp_path / "t.csv"
    p.write_text("1.5,2.5,3.5,4.5\n5.5,6.5,7.5,8.5\n")
    tensor, _ = read_traffic_csv(p, sensors=2, intervals=2, days=2)
    q = tmp_path / "t.tnsr"
    write_tensor(q, tensor)
    assert_allclose(read_tensor(q), tensor)
