#!/usr/bin/env python3
"""Generate singlet joint-angle profile data for several spins.

Writes one CSV per spin (columns theta12_deg, p, p_normalized, q, f) and
prints a peak/width summary table.  The CSVs match the `spinphase singlet`
subcommand output.
"""

import argparse
import math
from pathlib import Path

import numpy as np

from spinphase import DistributionKind, singlet_profile
from spinphase.cli import main as cli_main


def peak_summary(twice_spin: int, step_deg: float):
    deg = np.arange(0.0, 360.0 + step_deg / 2, step_deg)
    rad = np.deg2rad(deg)
    rows = []
    for kind in DistributionKind:
        vals = singlet_profile(kind, twice_spin / 2.0, rad)
        peak_angle = deg[int(np.argmax(vals))]
        rows.append((kind.value, peak_angle, float(np.max(vals)), float(np.min(vals))))
    return rows


def run(out_dir: Path, step_deg: float, twice_spins):
    out_dir.mkdir(parents=True, exist_ok=True)
    print(f"{'2s':>4} {'kind':>4} {'peak_deg':>9} {'max':>13} {'min':>13}")
    for ts in twice_spins:
        out = out_dir / f"singlet_profile_2s{ts}.csv"
        cli_main(
            ["singlet", "--kind", "all", "--twice-spin", str(ts),
             "--step-deg", str(step_deg), "--out", str(out)]
        )
        for kind, peak, vmax, vmin in peak_summary(ts, step_deg):
            print(f"{ts:>4} {kind:>4} {peak:>9.1f} {vmax:>13.6e} {vmin:>13.6e}")
        print(f"wrote {out}")


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", type=Path, default=Path("out"))
    parser.add_argument("--step-deg", type=float, default=0.5)
    parser.add_argument(
        "--twice-spins", type=int, nargs="+", default=[1, 2, 3, 4]
    )
    args = parser.parse_args()
    run(args.out_dir, args.step_deg, args.twice_spins)
