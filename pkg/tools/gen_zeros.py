#!/usr/bin/env python3
"""Generate a table of the first N zeta-zero ordinates for the data-dependent tests.

Development tool, not part of the installed package. The first 1000 ordinates
come from tests/data/zeros_first1000.txt (mpmath); beyond that Hardy's Z(t) is
evaluated with the Riemann-Siegel formula plus its first correction term on a
fine grid, sign changes are bracketed and refined by bisection. The index of
the result is checked against mpmath.zetazero at a few sample points.

    python tools/gen_zeros.py --count 100000 --out tests/data/zeros_1e5.txt
"""

import argparse
import math
import sys
from pathlib import Path

import numpy as np

HERE = Path(__file__).resolve().parent
FIXTURE = HERE.parent / "tests" / "data" / "zeros_first1000.txt"
TWO_PI = 2 * math.pi


def theta(t):
    return t / 2 * np.log(t / TWO_PI) - t / 2 - math.pi / 8 + 1 / (48 * t) + 7 / (5760 * t**3)


def _c0(p):
    num = np.cos(TWO_PI * (p * p - p - 1 / 16))
    den = np.cos(TWO_PI * p)
    bad = np.abs(den) < 1e-6
    if np.any(bad):
        # removable 0/0 at p = 1/4, 3/4: average the neighbours
        q = p[bad]
        lo, hi = q - 1e-4, q + 1e-4
        num_lo, num_hi = np.cos(TWO_PI * (lo * lo - lo - 1 / 16)), np.cos(TWO_PI * (hi * hi - hi - 1 / 16))
        den = den.copy()
        num = num.copy()
        num[bad] = 0.5 * (num_lo / np.cos(TWO_PI * lo) + num_hi / np.cos(TWO_PI * hi))
        den[bad] = 1.0
    return num / den


def hardy_z(t, chunk=8192):
    t = np.asarray(t, dtype=float)
    out = np.empty_like(t)
    for s in range(0, len(t), chunk):
        tc = t[s : s + chunk]
        a = np.sqrt(tc / TWO_PI)
        n_terms = np.floor(a).astype(int)
        nmax = int(n_terms.max())
        n = np.arange(1, nmax + 1, dtype=float)
        phase = theta(tc)[:, None] - tc[:, None] * np.log(n)[None, :]
        terms = np.cos(phase) / np.sqrt(n)[None, :]
        terms[n[None, :] > n_terms[:, None]] = 0.0
        main = 2 * terms.sum(axis=1)
        p = a - n_terms
        sign = np.where(n_terms % 2 == 1, 1.0, -1.0)
        out[s : s + chunk] = main + sign * a**-0.5 * _c0(p)
    return out


def zeros_between(t_lo, t_hi, grid_step):
    found = []
    block = 200_000
    start = t_lo
    while start < t_hi:
        grid = start + grid_step * np.arange(block + 1)
        grid = grid[grid <= t_hi + grid_step]
        z = hardy_z(grid)
        idx = np.nonzero(np.signbit(z[:-1]) != np.signbit(z[1:]))[0]
        lo, hi = grid[idx], grid[idx + 1]
        zlo = z[idx]
        for _ in range(45):
            mid = 0.5 * (lo + hi)
            zm = hardy_z(mid)
            same = np.signbit(zm) == np.signbit(zlo)
            lo = np.where(same, mid, lo)
            zlo = np.where(same, zm, zlo)
            hi = np.where(same, hi, mid)
        found.append(0.5 * (lo + hi))
        start = grid[-1]
        print(f"  scanned to t = {start:.1f}, zeros so far {sum(len(f) for f in found)}", file=sys.stderr)
    return np.concatenate(found)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=100_000)
    ap.add_argument("--out", required=True)
    ap.add_argument("--grid-step", type=float, default=0.01)
    ap.add_argument("--check", type=int, nargs="*", default=[1001, 2500, 20000, 50001, 100000])
    args = ap.parse_args()

    head = np.array([float(l) for l in FIXTURE.read_text().split("\n") if l and not l.startswith("#")])
    # smoothed counting function gives an upper bound on the height needed
    t_hi = head[-1]
    while theta(np.array([t_hi]))[0] / math.pi + 1 < args.count + 50:
        t_hi *= 1.05
    t_lo = 0.5 * (head[-1] + 1420.0) if head[-1] < 1419.5 else head[-1] + 1e-3
    tail = zeros_between(t_lo, t_hi, args.grid_step)
    tail = tail[tail > head[-1] + 1e-6]
    gammas = np.concatenate([head, tail])[: args.count]
    if len(gammas) < args.count:
        sys.exit(f"only found {len(gammas)} zeros")
    if np.any(np.diff(gammas) <= 0):
        sys.exit("ordinates not strictly increasing")

    import mpmath

    for k in args.check:
        if k <= len(gammas):
            ref = float(mpmath.zetazero(k).imag)
            err = abs(gammas[k - 1] - ref)
            print(f"zero #{k}: {gammas[k - 1]:.9f} vs mpmath {ref:.9f} (diff {err:.2e})", file=sys.stderr)
            if err > 1e-3:
                sys.exit(f"index check failed at zero #{k}")

    with open(args.out, "w") as fh:
        fh.write(f"# first {args.count} zeta zero ordinates (mpmath head + Riemann-Siegel scan)\n")
        for g in gammas:
            fh.write(f"{g:.9f}\n")


if __name__ == "__main__":
    main()
