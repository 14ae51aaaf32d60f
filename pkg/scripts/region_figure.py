#!/usr/bin/env python3
"""Nested outlines of W_k for several k, with the cone edges, as one SVG."""
import argparse
import math

from qcspectra.pick import boundary_polyline

COLORS = ["#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e"]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k", type=float, nargs="+", default=[0.2, 0.4, 0.6, 0.8])
    ap.add_argument("-o", "--out", default="region.svg")
    a = ap.parse_args()

    x0, x1 = 0.0, 1 / (1 - max(a.k)) + 0.2
    half = (x1 - x0) / 2
    size = 600

    def px(w):
        return (w.real - x0) / (x1 - x0) * size, (half - w.imag) / (2 * half) * size

    parts = []
    for i, k in enumerate(a.k):
        pts = [px(w) for w in boundary_polyline(k, 512)]
        d = "M " + " L ".join(f"{x:.2f} {y:.2f}" for x, y in pts) + " Z"
        parts.append(f'<path d="{d}" fill="none" stroke="{COLORS[i % len(COLORS)]}" stroke-width="1.5"/>')
        # cone |Im w| = k |w|
        for sgn in (1, -1):
            end = x1 * complex(math.sqrt(1 - k * k), sgn * k)
            (ax, ay), (bx, by) = px(0j), px(end)
            parts.append(f'<line x1="{ax:.2f}" y1="{ay:.2f}" x2="{bx:.2f}" y2="{by:.2f}" '
                         f'stroke="{COLORS[i % len(COLORS)]}" stroke-dasharray="4 4" stroke-width="0.7"/>')
    with open(a.out, "w") as fh:
        fh.write(f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {size} {size}">\n')
        fh.write("\n".join(parts) + "\n</svg>\n")
    print(f"wrote {a.out}")


if __name__ == "__main__":
    main()
