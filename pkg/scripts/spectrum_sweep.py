#!/usr/bin/env python3
"""Estimated vs exact spectrum of the extremal power maps along |t| = 2/k.

For each phase with Re t >= 2 the map with sigma = 1 - 2/t is the one whose
spectrum reaches the value 1.  Writes CSV to stdout.
"""
import argparse
import cmath
import csv
import math
import sys
from concurrent.futures import ProcessPoolExecutor

from qcspectra.maps import DiskPowerMap, power_spectrum
from qcspectra.means import RadiusSchedule, beta_estimate, reference_spectra


def row(args):
    k, phase, j_max = args
    t = 2 / k * cmath.exp(1j * phase)
    sigma = 1 - 2 / t
    est = beta_estimate(DiskPowerMap(sigma), t, RadiusSchedule(2, j_max))
    ref = reference_spectra(k, t)
    return [k, phase, t.real, t.imag, est.beta_limsup, est.beta_lsq, power_spectrum(sigma, t),
            ref.trivial_upper, ref.theorem_value]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--k", type=float, nargs="+", default=[0.3, 0.5, 0.7])
    ap.add_argument("--phases", type=int, default=7)
    ap.add_argument("--j-max", type=int, default=14)
    a = ap.parse_args()
    tasks = []
    for k in a.k:
        top = math.acos(min(1.0, k))  # Re t = (2/k) cos(phase) >= 2
        tasks += [(k, -top + 2 * top * i / (a.phases - 1), a.j_max) for i in range(a.phases)]
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["k", "phase", "t_re", "t_im", "beta_limsup", "beta_lsq", "exact", "trivial_upper", "theorem"])
    with ProcessPoolExecutor() as pool:
        for r in pool.map(row, tasks):
            out.writerow([f"{x:.6g}" if isinstance(x, float) else x for x in r])


if __name__ == "__main__":
    main()
