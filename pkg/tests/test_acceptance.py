"""Acceptance criteria, one test per criterion.

Each test records a ``[PASS]`` or ``[FAIL]`` line (printed immediately and
again in the terminal summary) before asserting, so a failing criterion
still reports what was measured.  Run directly with
``python3 tests/test_acceptance.py`` or through pytest.
"""
import cmath
import json
import math
import subprocess
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from conftest import ACCEPTANCE_LINES
from qcspectra.cli import main
from qcspectra.maps import DiskPowerMap, NormalizedDiskMap, pointwise_bound_margin, power_spectrum
from qcspectra.means import RadiusSchedule, beta_estimate, dyadic_area_integrals
from qcspectra.pick import (
    RegionWk,
    boundary_polyline,
    cone_check,
    hull_coverage,
    psi_first,
    psi_second,
    random_disk,
    tangent_support,
    two_point_segment,
)
from qcspectra.twist import (
    beurling_check,
    beurling_margin,
    dim_bound,
    gamma_max,
    k_of_L,
    log_f_over_z_bound,
    spiral_exponent,
)
from qcspectra.weld import WeldedStretch, evaluate_motion_disk, motion_beltrami_check, sigma_of

SEED = 20240611


def record(number, ok: bool, detail: str):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def _beta(pair):
    s, t = pair
    return beta_estimate(DiskPowerMap(s), t, RadiusSchedule(2, 14), tail_length=4).beta_limsup


def test_criterion_1_extremal_value():
    ts = [4, 4 * cmath.exp(1j * math.pi / 6), 4 * cmath.exp(1j * math.pi / 3)]
    start = time.perf_counter()
    betas = [_beta((1 - 2 / t, t)) for t in ts]
    wall = time.perf_counter() - start
    worst = max(abs(b - 1) for b in betas)
    ok = worst <= 0.15 and wall <= 120
    record(1, ok, f"beta_limsup = {', '.join(f'{b:.4f}' for b in betas)} (max |beta - 1| = {worst:.4f}, "
                  f"tolerance 0.15), wall {wall:.1f} s")


# fixed before any estimate was run: |sigma - 1| and |t| step through their ranges
# while the phases advance by 2 pi / 5
SANDWICH_SIGMAS = [1 + 0.16 * (i + 1) * cmath.exp(2j * math.pi * i / 5) for i in range(5)]
SANDWICH_TS = [1.2 * (i + 1) * cmath.exp(1j * (math.pi / 5 + 2 * math.pi * i / 5)) for i in range(5)]


def test_criterion_2_trivial_bound_sandwich():
    pairs = [(s, t) for s in SANDWICH_SIGMAS for t in SANDWICH_TS]
    with ProcessPoolExecutor() as pool:
        betas = list(pool.map(_beta, pairs))
    misses = []
    for (s, t), b in zip(pairs, betas):
        lower = max(0.0, power_spectrum(s, t)) - 0.15
        upper = abs(s - 1) * abs(t) + 0.15
        if not lower <= b <= upper:
            misses.append(f"sigma={s:.3f}, t={t:.3f}: {b:.3f} not in [{lower:.3f}, {upper:.3f}]")
    record(2, not misses, f"{len(pairs) - len(misses)} of {len(pairs)} grid points inside the sandwich"
                          + (f"; {'; '.join(misses)}" if misses else ""))


def test_criterion_3_region():
    k = 0.5
    rng = np.random.default_rng(SEED)
    n = 100_000
    region = RegionWk(k)
    # (a) random interpolants of both kinds at random nodes |lambda_0| = k
    c = random_disk(rng, n)
    lam0 = k * np.exp(2j * math.pi * rng.uniform(0, 1, n))
    first = rng.uniform(size=n) < 0.5
    w = np.where(first, psi_first(c, lam0, 0), psi_second(c, lam0, 0))
    violations = int(np.sum(~region.contains(w, slack=1e-12)))
    # (b) coverage
    cov = hull_coverage(k, resolution=0.01, samples=n, seed=SEED)
    # (c) boundary samples against the cone
    outside_cone = int(np.sum(~cone_check(boundary_polyline(k, 256), k)))
    # (d) segment endpoints
    seg_ok = all(two_point_segment(x) == (1 - x * x, 1.0) for x in (0.0, 0.25, 0.5, 0.8, 0.95))
    ok = violations == 0 and cov.hausdorff <= 0.02 and outside_cone == 0 and seg_ok
    record(3, ok, f"(a) {violations} of {n} interpolant values outside W_0.5; "
                  f"(b) Hausdorff distance {cov.hausdorff:.4f} on a 0.01 grid; "
                  f"(c) {outside_cone} of 256 boundary samples outside the cone; "
                  f"(d) segment endpoints exact: {seg_ok}")


def test_criterion_4_tangency():
    worst_max, worst_dist, count = -math.inf, 0.0, 0
    for i in range(20):
        lam_abs = 0.05 + 0.9 * i / 19
        u = math.cos(2.4 * i)
        mod = 1 / lam_abs
        t = mod * cmath.exp(1j * u * math.acos(min(1.0, 1 / mod)))
        assert t.real >= 1 - 1e-12
        rep = tangent_support(t, lam_abs, strict=False)
        worst_max = max(worst_max, rep.polyline_max, rep.support_value)
        worst_dist = max(worst_dist, rep.maximizer_distance)
        count += 1
    ok = worst_max <= 1 + 1e-9 and worst_dist <= 1e-6
    record(4, ok, f"{count} pairs with |t| = 1/|lambda|: max Re(t(1-w)) = {worst_max:.15f}, "
                  f"maximizer distance from 1 - 1/t at most {worst_dist:.2e}")


def test_criterion_5_sigma_identity():
    rng = np.random.default_rng(SEED + 5)
    lam, eta = random_disk(rng, 1000), random_disk(rng, 1000)
    s = np.array([sigma_of(a, b) for a, b in zip(lam, eta)])
    err = float(np.max(np.abs(s - psi_first(1, lam, eta))))
    record(5, err <= 1e-12, f"max |sigma(lam, eta) - Psi_first(c=1)| = {err:.2e} over 1000 samples")


def test_criterion_6_welding():
    rng = np.random.default_rng(SEED + 6)
    x = np.concatenate((np.geomspace(1e-3, 1e3, 100), -np.geomspace(1e-3, 1e3, 100)))
    jump = 0.0
    for lam, eta in zip(random_disk(rng, 10, 0.95), random_disk(rng, 10, 0.95)):
        m = WeldedStretch(lam, eta)
        up, down = m.one_sided(x, "+"), m.one_sided(x, "-")
        jump = max(jump, float(np.max(np.abs(up - down) / np.maximum(1.0, np.abs(up)))))
    worst_mu, points = 0.0, 0
    while points < 20:
        lam, eta = random_disk(rng, 2, 0.9)
        z = complex(random_disk(rng, 1, 2.0)[0])
        if abs(z.imag) < 0.05 or abs(z) < 0.1:
            continue
        worst_mu = max(worst_mu, motion_beltrami_check(WeldedStretch(lam, eta), z, h=1e-5).error)
        points += 1
    ok = jump <= 1e-10 and worst_mu <= 1e-3
    record(6, ok, f"max weld jump {jump:.2e} (10 parameter pairs, 200 points); "
                  f"max Beltrami relative error {worst_mu:.2e} at 20 points")


def test_criterion_7_symmetry():
    rng = np.random.default_rng(SEED + 7)
    worst, n = 0.0, 0
    while n < 1000:
        lam, eta = random_disk(rng, 2, 0.95)
        z = complex(random_disk(rng, 1, 3.0)[0])
        if abs(abs(z) - 1) < 1e-3 or abs(z) < 1e-3:
            continue
        lhs = evaluate_motion_disk(WeldedStretch(lam, eta), z)
        mirror = evaluate_motion_disk(WeldedStretch(eta.conjugate(), lam.conjugate()), 1 / z.conjugate())
        worst = max(worst, abs(lhs - 1 / mirror.conjugate()) / max(1.0, abs(lhs)))
        n += 1
    record(7, worst <= 1e-10, f"max symmetry defect {worst:.2e} over {n} samples")


# ten exponents spread over the admissible disk |sigma - 1| < 1
BOUND_SIGMAS = [1 + (0.1 + 0.08 * i) * cmath.exp(1j * i * math.pi * (3 - math.sqrt(5))) for i in range(10)]


def test_criterion_8_pointwise_and_log_bounds():
    radii = 1 - 2.0 ** -np.linspace(12 / 32, 12, 32)
    margin, slopes = math.inf, []
    for s in BOUND_SIGMAS:
        f = NormalizedDiskMap(DiskPowerMap(s))
        margin = min(margin, pointwise_bound_margin(f, abs(s - 1), radii, 64))
        slopes.append(log_f_over_z_bound(f).slope)
    worst = int(np.argmax(slopes))
    ok = margin >= -1e-9 and max(slopes) <= 0.05
    record(8, ok, f"min pointwise margin {margin:.3e} on a 32x64 grid up to r = 1 - 2^-12; "
                  f"max log(f/z) growth slope {slopes[worst]:.4f} at sigma = {BOUND_SIGMAS[worst]:.3f}")


def test_criterion_9a_area_integral_converges_inside():
    f = DiskPowerMap(0.5)
    inside = np.diff(dyadic_area_integrals(f, 0.9 * 2 / 0.5, 12))
    ratios = inside[:-1] / inside[1:]
    record("9a", bool(np.all(ratios >= 1.5)),
           f"t = 3.6: successive shell ratios {', '.join(f'{r:.3f}' for r in ratios)} "
           f"(required >= 1.5 throughout; asymptotically 2^0.2 = {2 ** 0.2:.3f})")


def test_criterion_9b_area_integral_diverges_at_critical_modulus():
    f = DiskPowerMap(0.5)
    critical = np.diff(dyadic_area_integrals(f, 2 / 0.5, 12))
    growing = bool(critical[0] > 0 and np.all(critical >= critical[0]))
    record("9b", growing, f"t = 4: every shell adds at least {critical[0]:.4f}; "
                          f"last shells {', '.join(f'{c:.4f}' for c in critical[-3:])}")


def test_criterion_10_twisting_formulas():
    rep = spiral_exponent(DiskPowerMap((1 + 1j) / 2))
    gamma_ok = abs(rep.gamma_hat - 1) <= 0.02
    dims_ok = all(dim_bound(k, gamma_max(k)) == 0.0 and dim_bound(k, 0) == 2.0 for k in (0.3, 0.5, 0.8))
    margin = beurling_margin(2, 1)
    equality_ok = beurling_check(2, 1) and abs(margin) <= 1e-12
    kl_ok = k_of_L(2) == 0.6
    ok = gamma_ok and dims_ok and equality_ok and kl_ok
    record(10, ok, f"gamma_hat = {rep.gamma_hat:.4f}; dim_bound extremes exact: {dims_ok}; "
                   f"Beurling at (2, 1): holds = {beurling_check(2, 1)}, margin = {margin:g} "
                   f"(equality requested); k_of_L(2) = {k_of_L(2)!r}")


def test_criterion_11_determinism(tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({
        "map": {"family": "disk_power", "params": {"sigma": ["0.5", "0.25"]}},
        "grid": {"t": ["3", ["2", "-1"]]},
        "schedule": {"j_min": 2, "j_max": 12, "tail_length": 4},
        "seed": 42,
    }))
    same = {}
    for command in ("verify", "beta"):
        outs = []
        for run in range(2):
            out = tmp_path / f"{command}{run}.txt"
            code = main([command, "--config", str(cfg), "--out", str(out), "--jobs", str(1 + run)])
            assert code == 0
            outs.append(out.read_bytes())
        same[command] = outs[0] == outs[1]
    record(11, all(same.values()), ", ".join(f"{c}: {'identical' if v else 'different'} bytes"
                                             for c, v in same.items()))


if __name__ == "__main__":
    sys.exit(subprocess.call([sys.executable, "-m", "pytest", __file__, "-q"]))
