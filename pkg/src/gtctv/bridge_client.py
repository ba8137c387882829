"""Socket client for the framed slice-denoising protocol.

Frame layout (both directions): a little-endian u32 byte count, then a
UTF-8 JSON header terminated by a single newline, then the raw payload of
float32 little-endian values in row-major order.  The first exchange on a
connection is a hello/capabilities handshake; afterwards each request
carries one (h, w, c) slice and the response echoes its id and shape.
"""

import json
import socket
import struct

import numpy as np

PROTOCOL_VERSION = 1

__all__ = ["BridgeError", "BridgeConnection", "read_frame", "write_frame"]


class BridgeError(RuntimeError):
    pass


def write_frame(sock, header, payload=b""):
    head = json.dumps(header).encode("utf-8") + b"\n"
    sock.sendall(struct.pack("<I", len(head) + len(payload)) + head + payload)


def _recv_exact(sock, n):
    buf = bytearray()
    while len(buf) < n:
        chunk = sock.recv(n - len(buf))
        if not chunk:
            raise BridgeError("connection closed mid-frame")
        buf.extend(chunk)
    return bytes(buf)


def read_frame(sock):
    (length,) = struct.unpack("<I", _recv_exact(sock, 4))
    blob = _recv_exact(sock, length)
    sep = blob.find(b"\n")
    if sep < 0:
        raise BridgeError("frame header not newline-terminated")
    header = json.loads(blob[:sep].decode("utf-8"))
    return header, blob[sep + 1 :]


class BridgeConnection:
    """One connection with at most a single request in flight."""

    def __init__(self, endpoint, declared_k=None, timeout=5.0):
        host, _, port = endpoint.rpartition(":")
        self._sock = socket.create_connection((host, int(port)), timeout=timeout)
        self._sock.settimeout(60.0)
        self._next_id = 0
        self.capabilities = self._handshake(declared_k)

    def _handshake(self, declared_k):
        write_frame(self._sock, {"type": "hello", "version": PROTOCOL_VERSION})
        header, _ = read_frame(self._sock)
        if "error" in header:
            raise BridgeError(f"handshake refused: {header['error']}")
        if header.get("version") != PROTOCOL_VERSION:
            raise BridgeError(f"protocol version mismatch: {header.get('version')}")
        if declared_k is not None and abs(header["declared_k"] - declared_k) > 1e-9:
            raise BridgeError(
                f"server declares k={header['declared_k']}, config expects {declared_k}"
            )
        return header

    def ensure_channels(self, c):
        channels = self.capabilities.get("channels", [1, 3])
        if c not in channels:
            raise BridgeError(f"server supports channels {channels}, slice has {c}")

    def denoise_slice(self, s, sigma):
        h, w, c = s.shape
        rid = self._next_id
        self._next_id += 1
        payload = np.ascontiguousarray(s, dtype="<f4").tobytes()
        write_frame(
            self._sock, {"shape": [h, w, c], "sigma": float(sigma), "id": rid}, payload
        )
        header, body = read_frame(self._sock)
        if "error" in header:
            raise BridgeError(header["error"])
        if header.get("id") != rid or tuple(header.get("shape", ())) != (h, w, c):
            raise BridgeError(f"response id/shape mismatch: {header}")
        out = np.frombuffer(body, dtype="<f4")
        if out.size != h * w * c:
            raise BridgeError("response payload length mismatch")
        return out.reshape(h, w, c).astype(np.float64)

    def close(self):
        try:
            self._sock.close()
        except OSError:
            pass
