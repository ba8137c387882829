"""On-disk formats: the TNSR array container and the traffic CSV layout.

TNSR layout: magic "TNSR", version u8 (= 1), dtype u8 (1 = float64 LE,
2 = uint8 boolean), rank u8, then rank u32 LE extents, then the row-major
payload.  Writes go through a temp file and rename so readers never see a
torn file.
"""

import os
import struct
import tempfile

import numpy as np

__all__ = [
    "read_tensor",
    "write_tensor",
    "read_traffic_csv",
    "atomic_write_text",
    "TensorFormatError",
]


def atomic_write_text(path, text):
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(os.path.abspath(path)) or ".")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise

MAGIC = b"TNSR"
VERSION = 1
DTYPE_FLOAT64 = 1
DTYPE_BOOL = 2


class TensorFormatError(ValueError):
    pass


def write_tensor(path, a):
    """Write ``a`` (float64 or boolean) to ``path`` atomically."""
    a = np.asarray(a)
    if a.dtype == bool or a.dtype == np.uint8:
        code = DTYPE_BOOL
        payload = a.astype(np.uint8).tobytes(order="C")
    else:
        code = DTYPE_FLOAT64
        payload = np.ascontiguousarray(a, dtype="<f8").tobytes(order="C")
    head = MAGIC + struct.pack("<BBB", VERSION, code, a.ndim)
    head += struct.pack(f"<{a.ndim}I", *a.shape)
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(os.path.abspath(path)) or ".")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(head + payload)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_tensor(path):
    """Read a TNSR file back into a numpy array."""
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < 7 or blob[:4] != MAGIC:
        raise TensorFormatError(f"{path}: not a TNSR file")
    version, code, rank = struct.unpack("<BBB", blob[4:7])
    if version != VERSION:
        raise TensorFormatError(f"{path}: unknown version {version}")
    off = 7 + 4 * rank
    if len(blob) < off:
        raise TensorFormatError(f"{path}: truncated header")
    shape = struct.unpack(f"<{rank}I", blob[7:off])
    count = int(np.prod(shape, dtype=np.int64)) if rank else 1
    if code == DTYPE_FLOAT64:
        need = count * 8
        if len(blob) - off != need:
            raise TensorFormatError(f"{path}: payload length {len(blob) - off}, expected {need}")
        return np.frombuffer(blob, dtype="<f8", count=count, offset=off).reshape(shape).copy()
    if code == DTYPE_BOOL:
        if len(blob) - off != count:
            raise TensorFormatError(f"{path}: payload length {len(blob) - off}, expected {count}")
        return (
            np.frombuffer(blob, dtype=np.uint8, count=count, offset=off)
            .reshape(shape)
            .astype(bool)
        )
    raise TensorFormatError(f"{path}: unknown dtype code {code}")


def read_traffic_csv(path, sensors, intervals, days):
    """Load a sensors x (intervals*days) CSV into a (sensors, intervals, 1, days) tensor.

    Columns are day-major: all intervals of day 1, then day 2, and so on.
    Empty cells become zero and are reported unobserved in the returned mask.
    """
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip("\n\r")
            if not line:
                continue
            rows.append(line.split(","))
    if len(rows) != sensors:
        raise TensorFormatError(f"{path}: {len(rows)} rows, expected {sensors} sensors")
    width = intervals * days
    values = np.zeros((sensors, width))
    observed = np.zeros((sensors, width), dtype=bool)
    for i, cells in enumerate(rows):
        if len(cells) != width:
            raise TensorFormatError(
                f"{path}: row {i} has {len(cells)} cells, expected {width}"
            )
        for j, cell in enumerate(cells):
            cell = cell.strip()
            if cell == "":
                continue
            try:
                values[i, j] = float(cell)
            except ValueError as exc:
                raise TensorFormatError(f"{path}: non-numeric cell at ({i}, {j})") from exc
            observed[i, j] = True
    # columns fold as (day, interval) with interval fastest
    tensor = values.reshape(sensors, days, intervals).transpose(0, 2, 1)
    omega = observed.reshape(sensors, days, intervals).transpose(0, 2, 1)
    return tensor.reshape(sensors, intervals, 1, days), omega.reshape(
        sensors, intervals, 1, days
    )
