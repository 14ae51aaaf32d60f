#!/usr/bin/env python3
# Spiraling rate of the power maps on a grid of exponents, against Im(sigma)/Re(sigma),
# with the dimension bound at k = |sigma - 1|.
import cmath
import math
import sys

from qcspectra.maps import DiskPowerMap
from qcspectra.twist import dim_bound, spiral_exponent

j_max = int(sys.argv[1]) if len(sys.argv) > 1 else 1000

print(f"{'sigma':>18} {'gamma_hat':>10} {'exact':>10} {'error':>9} {'dim_bound':>9}")
for rho in (0.3, 0.6, 0.9):
    for i in range(8):
        s = 1 + rho * cmath.exp(2j * math.pi * i / 8)
        rep = spiral_exponent(DiskPowerMap(s), j_max=j_max)
        exact = s.imag / s.real
        print(f"{s.real:8.4f}{s.imag:+8.4f}i {rep.gamma_hat:10.5f} {exact:10.5f} "
              f"{abs(rep.gamma_hat - exact):9.2e} {dim_bound(rho, rep.gamma_hat):9.4f}")
