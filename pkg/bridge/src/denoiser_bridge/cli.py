"""Command-line entry point for the denoiser sidecar."""

import argparse
import logging

from .models import load_model
from .server import serve


def build_parser():
    p = argparse.ArgumentParser(prog="denoiser-bridge")
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("serve", help="serve a denoiser model over the framed protocol")
    s.add_argument("--model", required=True, help='model descriptor path or "identity"')
    s.add_argument("--listen", default="127.0.0.1:7401", help="host:port to bind")
    s.add_argument("--device", choices=["cpu", "gpu"], default="cpu")
    return p


def main(argv=None):
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(name)s %(message)s")
    args = build_parser().parse_args(argv)
    device = "cuda" if args.device == "gpu" else "cpu"
    model = load_model(args.model, device=device)
    serve(args.listen, model)
    return 0
