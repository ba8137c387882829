#!/usr/bin/env python3
"""Convert between .npy arrays, traffic CSVs, and the TNSR container.

Usage:
    python3 docs/tnsr_convert.py npy-to-tnsr in.npy out.tnsr
    python3 docs/tnsr_convert.py tnsr-to-npy in.tnsr out.npy
    python3 docs/tnsr_convert.py csv-to-tnsr in.csv out.tnsr --sensors N --intervals N --days N
                                 [--mask-out omega.tnsr]
"""

import argparse

import numpy as np

from gtctv.fileio import read_tensor, read_traffic_csv, write_tensor


def main():
    p = argparse.ArgumentParser(description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("npy-to-tnsr")
    a.add_argument("src")
    a.add_argument("dst")

    b = sub.add_parser("tnsr-to-npy")
    b.add_argument("src")
    b.add_argument("dst")

    c = sub.add_parser("csv-to-tnsr")
    c.add_argument("src")
    c.add_argument("dst")
    c.add_argument("--sensors", type=int, required=True)
    c.add_argument("--intervals", type=int, required=True)
    c.add_argument("--days", type=int, required=True)
    c.add_argument("--mask-out", default=None, help="also write the observed-cell mask")

    args = p.parse_args()
    if args.command == "npy-to-tnsr":
        write_tensor(args.dst, np.load(args.src))
    elif args.command == "tnsr-to-npy":
        np.save(args.dst, read_tensor(args.src))
    else:
        tensor, omega = read_traffic_csv(args.src, args.sensors, args.intervals, args.days)
        write_tensor(args.dst, tensor)
        if args.mask_out:
            write_tensor(args.mask_out, omega)


if __name__ == "__main__":
    main()
