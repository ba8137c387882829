"""TCP server loop: handshake, then one denoise request at a time per connection.

Malformed requests produce an error frame and leave the connection open;
only transport-level corruption (unreadable framing) ends it.  A single
model instance is shared across connections behind a lock, so responses on
one connection always arrive in request order.
"""

import logging
import socketserver
import threading

import numpy as np

from .protocol import PROTOCOL_VERSION, ProtocolError, read_frame, write_frame

log = logging.getLogger("denoiser_bridge")

__all__ = ["BridgeServer", "serve"]


def _error(sock, message, rid=None):
    write_frame(sock, {"error": str(message), "id": rid})


class _Handler(socketserver.BaseRequestHandler):
    def handle(self):
        sock = self.request
        server = self.server
        if not self._handshake(sock, server):
            return
        while True:
            try:
                frame = read_frame(sock)
            except ProtocolError as exc:
                _error(sock, f"malformed frame: {exc}")
                continue
            except (ConnectionError, OSError):
                return
            if frame is None:
                return
            header, payload = frame
            self._serve_request(sock, server, header, payload)

    def _handshake(self, sock, server):
        try:
            frame = read_frame(sock)
        except (ProtocolError, ConnectionError, OSError) as exc:
            _error(sock, f"handshake failed: {exc}")
            return False
        if frame is None:
            return False
        header, _ = frame
        if header.get("type") != "hello" or header.get("version") != PROTOCOL_VERSION:
            _error(sock, f"unsupported hello {header}")
            return False
        caps = {"type": "capabilities", "version": PROTOCOL_VERSION}
        caps.update(server.model.capabilities())
        write_frame(sock, caps)
        return True

    def _serve_request(self, sock, server, header, payload):
        rid = header.get("id")
        try:
            shape = header.get("shape")
            if (
                not isinstance(shape, (list, tuple))
                or len(shape) != 3
                or not all(isinstance(s, int) and s > 0 for s in shape)
            ):
                raise ProtocolError(f"bad shape {shape!r}")
            h, w, c = shape
            if c not in (1, 3):
                raise ProtocolError(f"channel count {c} not in (1, 3)")
            expected = h * w * c * 4
            if len(payload) != expected:
                raise ProtocolError(
                    f"payload is {len(payload)} bytes, shape needs {expected}"
                )
            sigma = float(header.get("sigma", 0.0))
            x = np.frombuffer(payload, dtype="<f4").reshape(h, w, c)
            with server.model_lock:
                out = server.model.denoise(x.astype(np.float32), sigma)
            out = np.ascontiguousarray(out, dtype="<f4")
            if out.shape != (h, w, c):
                raise ProtocolError(f"model returned shape {out.shape}")
            write_frame(sock, {"shape": [h, w, c], "id": rid}, out.tobytes())
        except ProtocolError as exc:
            _error(sock, exc, rid)
        except Exception as exc:  # model failure: report, keep serving
            log.exception("model failure")
            _error(sock, f"model failure: {exc}", rid)


class BridgeServer(socketserver.ThreadingTCPServer):
    allow_reuse_address = True
    daemon_threads = True

    def __init__(self, address, model):
        super().__init__(address, _Handler)
        self.model = model
        self.model_lock = threading.Lock()

    @property
    def endpoint(self):
        host, port = self.server_address[:2]
        return f"{host}:{port}"


def serve(listen, model, background=False):
    """Bind ``listen`` ("host:port") and serve ``model`` until terminated."""
    host, _, port = listen.rpartition(":")
    server = BridgeServer((host, int(port)), model)
    if background:
        thread = threading.Thread(target=server.serve_forever, daemon=True)
        thread.start()
        return server
    log.info("serving %s on %s", model.model_name, server.endpoint)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return server
