#!/usr/bin/env python3
"""Ladder-gap decay for the symmetric star family.

For hub weights a_k = k^(-(1+eps)/2) the truncation ladder has the closed
form lambda_n = b_n with b_n^2 the partial sum of squares, so the gap
lambda - lambda_n can be evaluated to arbitrary n and its decay exponent
fitted.  The fitted slope should track -eps.
"""

import argparse
import sys

import numpy as np

from substochastic import fit_decay
from substochastic.constructions import a_power, build_example2


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--eps", type=float, nargs="+", default=[0.25, 0.5, 1.0])
    ap.add_argument("--n-lo", type=int, default=1_000)
    ap.add_argument("--n-hi", type=int, default=100_000)
    ap.add_argument("--points", type=int, default=25)
    args = ap.parse_args()

    print("eps,fitted_slope,ci_low,ci_high")
    for eps in args.eps:
        fam = build_example2(a_power(-(1 + eps) / 2))
        limit = fam.facts.spectral_limit
        b_n = fam.facts.perron_closed_form
        grid = np.unique(np.geomspace(args.n_lo, args.n_hi, args.points).astype(int))
        pairs = [(int(n), limit - b_n(int(n))) for n in grid]
        fit = fit_decay(pairs)
        print(f"{eps},{fit.slope:.6f},{fit.ci_low:.6f},{fit.ci_high:.6f}")
        print(f"eps={eps}: slope {fit.slope:+.4f} (expected {-eps:+.4f})", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
