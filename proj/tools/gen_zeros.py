#!/usr/bin/env python3
"""Generate the bundled zeta-zero ordinate table.

Writes one ordinate per line. The first ``--hi-count`` ordinates carry
``--hi-digits`` decimal places (needed by the lattice heuristic and its
certification); the rest carry ``--lo-digits`` decimal places. Every printed
value is checked to lie within one unit in its last decimal place of the
ball returned by Arb.
"""
import argparse
import sys

from flint import acb, arb, ctx


def fmt(x, digits):
    q = (x * arb(10) ** digits + arb(0.5)).floor().unique_fmpz()
    if q is None:
        raise RuntimeError("insufficient working precision")
    text = str(q)
    out = f"{text[:-digits]}.{text[-digits:]}"
    if not (abs(arb(out) - x) < arb(10) ** (-digits)):
        raise RuntimeError(f"cannot certify {out}")
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--count", type=int, default=10200)
    ap.add_argument("--hi-count", type=int, default=64)
    ap.add_argument("--hi-digits", type=int, default=1100)
    ap.add_argument("--lo-digits", type=int, default=240)
    ap.add_argument("--out", default="-")
    args = ap.parse_args()

    out = sys.stdout if args.out == "-" else open(args.out, "w")
    out.write("# Imaginary parts of the nontrivial zeros of the Riemann zeta function,\n")
    out.write("# 0-based: the first line is gamma_0 = 14.1347...\n")
    out.write(f"# {args.count} ordinates; first {args.hi_count} to {args.hi_digits} decimals,\n")
    out.write(f"# the rest to {args.lo_digits} decimals. Each value is within one unit\n")
    out.write("# in its last printed place of the true ordinate (computed with Arb).\n")

    ctx.prec = int(args.hi_digits * 3.33) + 128
    for n in range(1, args.hi_count + 1):
        out.write(fmt(acb.zeta_zero(n).imag, args.hi_digits) + "\n")

    ctx.prec = int(args.lo_digits * 3.33) + 96
    n = args.hi_count + 1
    batch = 500
    while n <= args.count:
        k = min(batch, args.count - n + 1)
        for z in acb.zeta_zeros(n, k):
            out.write(fmt(z.imag, args.lo_digits) + "\n")
        n += k
    out.flush()


if __name__ == "__main__":
    main()
