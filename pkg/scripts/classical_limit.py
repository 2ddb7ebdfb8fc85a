#!/usr/bin/env python3
"""Large-spin behavior: coefficient convergence and profile concentration.

Prints, per kind and rank, the distance of the expansion coefficient from
its large-spin limit 1, and the full width at half maximum of the singlet F
profile as the spin grows (approaching perfect anticorrelation).
"""

import argparse
import math

import numpy as np

from spinphase import DistributionKind, coefficient, singlet_profile


def coefficient_trend(ranks, twice_spins):
    print(f"{'kind':>4} {'k':>3} " + " ".join(f"{ts:>12}" for ts in twice_spins))
    for kind in DistributionKind:
        for k in ranks:
            gaps = [abs(coefficient(kind, ts / 2, k) - 1.0) for ts in twice_spins]
            print(f"{kind.value:>4} {k:>3} " + " ".join(f"{g:>12.3e}" for g in gaps))


def f_profile_fwhm(twice_spin: int) -> float:
    s = twice_spin / 2.0
    half = singlet_profile(DistributionKind.F, s, math.pi) / 2.0
    thetas = np.linspace(0.0, math.pi, 4001)
    vals = singlet_profile(DistributionKind.F, s, thetas)
    below = np.nonzero(vals < half)[0]
    lo, hi = thetas[below[-1]], thetas[below[-1] + 1]
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if singlet_profile(DistributionKind.F, s, mid) < half:
            lo = mid
        else:
            hi = mid
    return 2.0 * (math.pi - 0.5 * (lo + hi))


def concentration_trend(spins):
    print(f"\n{'s':>6} {'FWHM_rad':>10} {'FWHM_deg':>10}")
    for s in spins:
        width = f_profile_fwhm(int(2 * s))
        print(f"{s:>6} {width:>10.5f} {math.degrees(width):>10.3f}")


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--ranks", type=int, nargs="+", default=[1, 2, 3, 4])
    parser.add_argument(
        "--twice-spins", type=int, nargs="+", default=[8, 16, 32, 64, 128, 200]
    )
    parser.add_argument("--spins", type=int, nargs="+", default=[1, 2, 4, 8, 16])
    args = parser.parse_args()
    coefficient_trend(args.ranks, args.twice_spins)
    concentration_trend(args.spins)
