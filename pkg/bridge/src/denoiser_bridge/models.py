"""Model loading for the bridge: descriptor files name the denoiser to serve.

A model descriptor is a JSON file:

    {"type": "identity", "model_name": "identity-test", "declared_k": 0.0}
    {"type": "gaussian", "kernel_sigma": 1.2, "declared_k": 0.0}
    {"type": "torchscript", "path": "weights.pt", "declared_k": 0.9,
     "sigma_channel": true, "channels": [1, 3]}

The torchscript kind loads lazily so the server runs without a deep
learning runtime unless learned weights are actually requested.
"""

import json
import math
import os

import numpy as np

__all__ = ["load_model", "BridgeModel"]


class BridgeModel:
    """A served denoiser: metadata plus a slice->slice callable."""

    def __init__(self, model_name, declared_k, channels, fn):
        self.model_name = model_name
        self.declared_k = float(declared_k)
        self.channels = list(channels)
        self._fn = fn

    def denoise(self, slice_, sigma):
        return self._fn(slice_, sigma)

    def capabilities(self):
        return {
            "model_name": self.model_name,
            "declared_k": self.declared_k,
            "channels": self.channels,
        }


def _gaussian_kernel(kernel_sigma):
    r = math.ceil(3 * kernel_sigma)
    t = np.arange(-r, r + 1, dtype=np.float32)
    k = np.exp(-(t**2) / (2 * kernel_sigma**2))
    return (k / k.sum()), r


def _gaussian_fn(kernel_sigma):
    k, r = _gaussian_kernel(kernel_sigma)

    def conv_axis(a, axis):
        pad = [(0, 0)] * a.ndim
        pad[axis] = (r, r)
        padded = np.pad(a, pad, mode="reflect")
        out = np.zeros_like(a)
        for i, w in enumerate(k):
            sl = [slice(None)] * a.ndim
            sl[axis] = slice(i, i + a.shape[axis])
            out += w * padded[tuple(sl)]
        return out

    def fn(slice_, sigma):
        return conv_axis(conv_axis(slice_, 0), 1)

    return fn


def _torchscript_fn(path, device, sigma_channel):
    import torch  # deferred so non-learned models need no DL runtime

    module = torch.jit.load(path, map_location=device)
    module.eval()

    def fn(slice_, sigma):
        x = torch.from_numpy(np.ascontiguousarray(slice_)).permute(2, 0, 1)[None]
        x = x.to(device=device, dtype=torch.float32)
        with torch.no_grad():
            if sigma_channel:
                level = torch.full_like(x[:, :1], float(sigma))
                out = module(torch.cat([x, level], dim=1))
            else:
                out = module(x)
        return out[0].permute(1, 2, 0).cpu().numpy().astype(np.float32)

    return fn


def load_model(path, device="cpu"):
    """Load a model descriptor (or the literal name "identity") for serving."""
    if path == "identity":
        doc = {"type": "identity"}
    else:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    kind = doc.get("type")
    channels = doc.get("channels", [1, 3])
    if kind == "identity":
        return BridgeModel(
            doc.get("model_name", "identity-test"),
            doc.get("declared_k", 0.0),
            channels,
            lambda s, sigma: s,
        )
    if kind == "gaussian":
        return BridgeModel(
            doc.get("model_name", "gaussian-conv"),
            doc.get("declared_k", 0.0),
            channels,
            _gaussian_fn(doc.get("kernel_sigma", 1.2)),
        )
    if kind == "torchscript":
        weights = doc["path"]
        if not os.path.isabs(weights):
            weights = os.path.join(os.path.dirname(os.path.abspath(path)), weights)
        return BridgeModel(
            doc.get("model_name", os.path.basename(weights)),
            doc.get("declared_k", 0.9),
            channels,
            _torchscript_fn(weights, device, doc.get("sigma_channel", True)),
        )
    raise ValueError(f"unknown model type {kind!r}")
