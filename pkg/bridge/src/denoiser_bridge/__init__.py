"""Sidecar serving image denoisers over a framed binary socket protocol."""

__version__ = "0.1.0"

from .models import BridgeModel, load_model
from .protocol import PROTOCOL_VERSION, ProtocolError, read_frame, write_frame
from .server import BridgeServer, serve
