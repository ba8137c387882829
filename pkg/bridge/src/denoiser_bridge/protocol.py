"""Framed binary protocol shared by the server and its clients.

Every frame is a little-endian u32 byte count followed by that many bytes:
a UTF-8 JSON header terminated by a single newline, then the raw payload.
Request payloads are float32 little-endian, row-major, one (h, w, c) slice
with c in {1, 3}; responses echo the request id and shape.  The first
exchange on a connection is a hello/capabilities handshake.
"""

import json
import struct

PROTOCOL_VERSION = 1
MAX_FRAME = 1 << 31  # refuse absurd frames instead of allocating them

__all__ = [
    "PROTOCOL_VERSION",
    "ProtocolError",
    "encode_frame",
    "read_frame",
    "write_frame",
]


class ProtocolError(ValueError):
    pass


def encode_frame(header, payload=b""):
    head = json.dumps(header).encode("utf-8") + b"\n"
    return struct.pack("<I", len(head) + len(payload)) + head + payload


def write_frame(sock, header, payload=b""):
    sock.sendall(encode_frame(header, payload))


def _recv_exact(sock, n):
    buf = bytearray()
    while len(buf) < n:
        chunk = sock.recv(n - len(buf))
        if not chunk:
            if buf:
                raise ProtocolError("connection closed mid-frame")
            return None
        buf.extend(chunk)
    return bytes(buf)


def read_frame(sock):
    """Read one frame; returns (header, payload) or None on clean EOF.

    Raises :class:`ProtocolError` for frames whose header cannot be parsed;
    the byte stream itself stays aligned because the length prefix was
    already consumed, so the connection remains usable.
    """
    raw_len = _recv_exact(sock, 4)
    if raw_len is None:
        return None
    (length,) = struct.unpack("<I", raw_len)
    if length > MAX_FRAME:
        raise ProtocolError(f"frame length {length} exceeds limit")
    blob = _recv_exact(sock, length) if length else b""
    if blob is None:
        raise ProtocolError("connection closed mid-frame")
    sep = blob.find(b"\n")
    if sep < 0:
        raise ProtocolError("header not newline-terminated")
    try:
        header = json.loads(blob[:sep].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ProtocolError(f"bad header: {exc}") from exc
    if not isinstance(header, dict):
        raise ProtocolError("header must be a JSON object")
    return header, blob[sep + 1 :]
