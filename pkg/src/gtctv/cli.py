"""Command-line surface: mask generation, completion, metrics, denoiser checks.

Exit codes: 0 on success, 2 on validation errors (bad config, bad files,
inadmissible stepsizes), 3 on runtime divergence.
"""

import argparse
import json
import sys

import numpy as np

from . import __version__
from .config import load_config
from .denoisers import check_spc
from .fileio import TensorFormatError, atomic_write_text, read_tensor, write_tensor
from .metrics import bernoulli_mask, evaluate, mpsnr
from .report import render_metric_figures, render_trace_figures, write_trace_csv
from .solver import DivergenceError, ObservationMask, gtctv_dpc

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_DIVERGED = 3


class ValidationFailure(Exception):
    pass


def _parse_shape(text):
    try:
        shape = tuple(int(p) for p in text.replace("x", ",").split(",") if p)
    except ValueError:
        raise ValidationFailure(f"bad shape {text!r}")
    if not shape or any(s < 1 for s in shape):
        raise ValidationFailure(f"bad shape {text!r}")
    return shape


def cmd_mask(args):
    shape = _parse_shape(args.shape)
    if not 0 <= args.sr <= 1:
        raise ValidationFailure("sampling rate must lie in [0, 1]")
    omega = bernoulli_mask(shape, args.sr, args.seed)
    write_tensor(args.out, omega)
    print(f"mask: {omega.sum()} / {omega.size} observed -> {args.out}")
    return EXIT_OK


def cmd_complete(args):
    try:
        config, _ = load_config(args.config)
    except Exception as exc:
        raise ValidationFailure(f"config: {exc}")
    try:
        y = read_tensor(args.obs)
        omega = read_tensor(args.mask)
    except TensorFormatError as exc:
        raise ValidationFailure(str(exc))
    if omega.shape != y.shape:
        raise ValidationFailure(f"mask shape {omega.shape} != observation shape {y.shape}")
    try:
        config.spec.validate_rank(y.ndim)
    except ValueError as exc:
        raise ValidationFailure(str(exc))
    mask = ObservationMask(omega=omega, y=y.astype(float))
    x_out, trace = gtctv_dpc(mask, config)
    write_tensor(args.out, x_out)
    if trace:
        last = trace[-1]
        print(
            f"complete: {len(trace)} iterations, eps={last['eps']:.3e}, "
            f"tol_mip={last['tol_mip']:.3e} -> {args.out}"
        )
    if args.trace:
        write_trace_csv(args.trace, trace, reproducible=args.reproducible)
    if args.figures:
        for path in render_trace_figures(args.figures, trace):
            print(f"figure: {path}")
    config.denoiser.close()
    return EXIT_OK


def cmd_metrics(args):
    try:
        ref = read_tensor(args.ref)
        est = read_tensor(args.est)
        omega = read_tensor(args.mask) if args.mask else None
    except TensorFormatError as exc:
        raise ValidationFailure(str(exc))
    if ref.shape != est.shape:
        raise ValidationFailure(f"shape mismatch {ref.shape} vs {est.shape}")
    try:
        report = evaluate(est, ref, omega=omega, mode=args.mode, peak=args.peak)
    except ValueError as exc:
        raise ValidationFailure(str(exc))
    doc = report.to_dict()
    atomic_write_text(args.out, json.dumps(doc, indent=2, sort_keys=True) + "\n")
    if args.csv:
        cols = ["mode", "mpsnr", "mssim", "mape", "rmse", "eval_entries"]
        row = ",".join(
            "" if doc[c] is None else (doc[c] if c == "mode" else repr(doc[c]))
            for c in cols
        )
        atomic_write_text(args.csv, ",".join(cols) + "\n" + row + "\n")
    if args.figures:
        for path in render_metric_figures(args.figures, report):
            print(f"figure: {path}")
    summary = ", ".join(
        f"{k}={doc[k]:.4f}" for k in ("mpsnr", "mssim", "mape", "rmse") if doc[k] is not None
    )
    print(f"metrics[{args.mode}]: {summary} -> {args.out}")
    return EXIT_OK


def cmd_check_denoiser(args):
    try:
        config, raw = load_config(args.config)
    except Exception as exc:
        raise ValidationFailure(f"config: {exc}")
    shape = _parse_shape(args.shape)
    report = check_spc(
        config.denoiser,
        sigma=config.sigma0,
        k=config.denoiser.declared_k,
        trials=args.trials,
        shape=shape,
        seed=raw.get("seed", 0),
    )
    print(
        json.dumps(
            {
                "k": report.k,
                "trials": report.trials,
                "violations": report.violations,
                "max_ratio": report.max_ratio,
            }
        )
    )
    config.denoiser.close()
    return EXIT_OK if report.ok else EXIT_VALIDATION


def build_parser():
    p = argparse.ArgumentParser(prog="gtctv", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    m = sub.add_parser("mask", help="generate a Bernoulli sampling mask")
    m.add_argument("--shape", required=True, help="comma-separated extents, e.g. 32,32,1,16")
    m.add_argument("--sr", type=float, required=True, help="sampling rate in [0, 1]")
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--out", required=True)
    m.set_defaults(fn=cmd_mask)

    c = sub.add_parser("complete", help="run the completion solver")
    c.add_argument("--obs", required=True, help="observed tensor (.tnsr)")
    c.add_argument("--mask", required=True, help="boolean mask tensor (.tnsr)")
    c.add_argument("--config", required=True, help="JSON run configuration")
    c.add_argument("--out", required=True, help="recovered tensor (.tnsr)")
    c.add_argument("--trace", default=None, help="per-iteration CSV trace")
    c.add_argument("--figures", default=None, help="directory for rendered figures")
    c.add_argument(
        "--reproducible",
        action="store_true",
        help="zero the wall-time column so traces compare byte-for-byte",
    )
    c.set_defaults(fn=cmd_complete)

    e = sub.add_parser("metrics", help="score a recovery against ground truth")
    e.add_argument("--ref", required=True)
    e.add_argument("--est", required=True)
    e.add_argument("--mask", default=None)
    e.add_argument("--mode", choices=["images", "traffic"], default="images")
    e.add_argument("--peak", type=float, default=1.0)
    e.add_argument("--out", required=True, help="JSON report path")
    e.add_argument("--csv", default=None, help="optional CSV report path")
    e.add_argument("--figures", default=None, help="directory for rendered figures")
    e.set_defaults(fn=cmd_metrics)

    k = sub.add_parser("check-denoiser", help="sample the pseudo-contractivity bound")
    k.add_argument("--config", required=True)
    k.add_argument("--trials", type=int, default=1000)
    k.add_argument("--shape", default="16,16,1")
    k.set_defaults(fn=cmd_check_denoiser)

    v = sub.add_parser("version", help="print the package version")
    v.set_defaults(fn=lambda args: (print(__version__), EXIT_OK)[1])
    return p


def cli_main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ValidationFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (ValueError, FileNotFoundError, TensorFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except DivergenceError as exc:
        print(f"diverged: {exc}", file=sys.stderr)
        return EXIT_DIVERGED


def main():
    raise SystemExit(cli_main())
