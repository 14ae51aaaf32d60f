"""Named invariant suites, run by ``qcspectra verify``."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import maps, pick, twist, weld
from .config import RunConfig

POWER_FAMILIES = ("half_plane_power", "disk_power", "disk_power_normalized")
WELD_FAMILIES = ("welded_stretch", "radial_stretch")
SIGMAS = (0.5, 1.5, (1 + 1j) / 2, 1 + 0.6j, 0.4 - 0.3j)


@dataclass(frozen=True)
class InvariantResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: {self.detail}"


def _g(x) -> str:
    return format(float(x), ".6g")


class Suite:
    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.tol = cfg.tolerances
        self.n = cfg.verify.samples
        self.configured = None
        self.configured_error = None
        try:
            self.configured = cfg.map.build()
        except Exception as exc:  # reported as a failing invariant
            self.configured_error = exc

    def rng(self, salt: int):
        return np.random.default_rng([self.cfg.seed, salt])

    def sigmas(self):
        out = list(SIGMAS)
        if self.configured is not None and self.cfg.map.family in POWER_FAMILIES:
            out.append(self.cfg.map.params["sigma"])
        return out

    def weld_params(self, rng, count):
        pairs = list(zip(pick.random_disk(rng, count, 0.95), pick.random_disk(rng, count, 0.95)))
        if self.configured is not None and self.cfg.map.family in WELD_FAMILIES:
            pairs.append((self.configured.lam, self.configured.eta))
        return pairs

    # map families ----------------------------------------------------------

    def configured_map(self):
        if self.configured_error is not None:
            return False, f"constructor rejected {self.cfg.map.family}: {self.configured_error}"
        return True, f"{self.cfg.map.family} constructed"

    def injectivity(self):
        rng = self.rng(1)
        worst = math.inf
        for s in self.sigmas():
            f = maps.DiskPowerMap(s)
            z1 = pick.random_disk(rng, 5 * self.n, 0.999)
            # half the pairs are far apart, half are close neighbours
            z2 = np.concatenate((pick.random_disk(rng, 5 * self.n // 2, 0.999),
                                 z1[5 * self.n // 2:] + 1e-6 * pick.random_disk(rng, 5 * self.n - 5 * self.n // 2)))
            z2 = np.where(np.abs(z2) < 0.999, z2, z1 * 0.99)
            w1, w2 = f.evaluate(z1), f.evaluate(z2)
            scale = max(float(np.max(np.abs(w1))), 1.0)
            keep = z1 != z2
            ratio = np.abs(w1 - w2)[keep] / (np.abs(z1 - z2)[keep] * scale)
            worst = min(worst, float(np.min(np.abs(w1 - w2)[keep]) / scale))
            if np.any(ratio == 0):
                return False, f"collision for sigma={s}"
        return worst > 1e-12, f"smallest scaled separation {_g(worst)}"

    def derivative_fd(self):
        rng = self.rng(2)
        worst = 0.0
        for s in self.sigmas():
            f = maps.DiskPowerMap(s)
            z = pick.random_disk(rng, 200, 0.9)
            h = 1e-5
            fd = (f.evaluate(z + h) - f.evaluate(z - h)) / (2 * h)
            worst = max(worst, float(np.max(np.abs(fd - f.derivative(z)) / np.abs(f.derivative(z)))))
        return worst <= 1e-7, f"max relative error {_g(worst)}"

    def normalization(self):
        err = 0.0
        for s in self.sigmas():
            f = maps.NormalizedDiskMap(maps.DiskPowerMap(s))
            err = max(err, abs(f.evaluate(0j)), abs(f.derivative(0j) - 1))
        return err == 0.0, f"max |f(0)|, |f'(0) - 1| = {_g(err)}"

    def _radii(self):
        return 1.0 - 2.0 ** -np.linspace(10 / 16, 10, 16)

    def koebe_bound(self):
        worst = min(maps.pointwise_bound_margin(maps.NormalizedDiskMap(maps.DiskPowerMap(s)), 1.0,
                                                self._radii(), 32) for s in self.sigmas())
        return worst >= -self.tol["margin"], f"min margin {_g(worst)}"

    def distortion_bound(self):
        worst = min(maps.pointwise_bound_margin(f, f.distortion_k(), self._radii(), 32)
                    for f in (maps.NormalizedDiskMap(maps.DiskPowerMap(s)) for s in self.sigmas()))
        return worst >= -self.tol["margin"], f"min margin with k = |sigma - 1|: {_g(worst)}"

    # Pick problem ----------------------------------------------------------

    def reciprocal_form(self):
        bad = sum(pick.RegionWk(k, check_samples=0).reciprocal_form_mismatches(10_000, seed=self.cfg.seed)
                  for k in (0.1, 0.5, 0.9))
        return bad == 0, f"{bad} mismatches"

    def interpolants_in_region(self):
        rng = self.rng(3)
        failures = []
        for k in (0.1, 0.5, 0.9):
            for kind in pick.Kind:
                for c in np.concatenate(([0, 1, 1j, -1], pick.random_disk(rng, 4))):
                    rep = pick.verify_interpolant(pick.InterpolantSpec(kind, c), k,
                                                  samples=self.n, seed=int(rng.integers(2 ** 32)))
                    failures += [(k, kind.value, f[0]) for f in rep.failures]
        return not failures, f"{len(failures)} failures" + (f", first {failures[0]}" if failures else "")

    def mixtures_in_region(self):
        rng = self.rng(4)
        k = 0.5
        lam0 = k * np.exp(2j * math.pi * rng.uniform(0, 1, self.n))
        a, b = pick.random_disk(rng, self.n), pick.random_disk(rng, self.n)
        s = rng.uniform(0, 1, self.n)
        w = (1 - s) * pick.psi_first(a, lam0, 0) + s * pick.psi_first(b, lam0, 0)
        bad = int(np.sum(~pick.contains(w, k)))
        return bad == 0, f"{bad} of {self.n} convex mixtures outside W_k"

    def boundary_in_cone(self):
        bad = 0
        for k in (0.01, 0.5, 0.9, 0.999):
            bad += int(np.sum(~pick.cone_check(pick.boundary_polyline(k, 1024), k)))
        return bad == 0, f"{bad} vertices outside the cone"

    def boundary_vertices(self):
        worst_in, worst_out = -math.inf, math.inf
        for k in (0.1, 0.5, 0.9):
            region = pick.RegionWk(k, check_samples=0)
            v, nrm = pick.boundary_polyline(k, 512, with_normals=True)
            worst_in = max(worst_in, float(np.max(region.hull_gap(v))))
            worst_out = min(worst_out, float(np.min(region.hull_gap(v + 1e-6 * nrm))))
        ok = worst_in <= 1e-10 and worst_out > 0
        return ok, f"max gap on boundary {_g(worst_in)}, min gap after outward push {_g(worst_out)}"

    def hull_coverage(self):
        rep = pick.hull_coverage(0.5, 0.01, samples=50 * self.n, seed=self.cfg.seed)
        return rep.hausdorff <= self.tol["coverage"], f"Hausdorff distance {_g(rep.hausdorff)}"

    def rotation_invariance(self):
        err = pick.rotation_invariance_error(self.n, seed=self.cfg.seed)
        return err <= 1e-12, f"max relative error {_g(err)}"

    def tangent_support_sweep(self):
        count = 0
        for m in (1.0, 2.0, 4.0, 8.0):
            top = math.acos(min(1.0, 1.0 / m))
            for phase in sorted({0.0, top / 2, top, -top / 2, -top}):
                t = m * complex(math.cos(phase), math.sin(phase))
                if t.real < 1:
                    t = complex(1.0, t.imag)
                lam_abs = min(1.0 / abs(t), 0.999)
                rep = pick.tangent_support(t, lam_abs, strict=False)
                if not rep.passed:
                    return False, f"t={t}, |lambda|={lam_abs}: max {_g(max(rep.support_value, rep.polyline_max))}"
                count += 1
        return True, f"{count} (t, |lambda|) pairs"

    # welded motion ---------------------------------------------------------

    def weld_normalization(self):
        rng = self.rng(5)
        err, scaling = 0.0, 0.0
        u = np.exp(1j * np.array([0.3, 1.5, 2.9, -0.4, -2.2]))
        for lam, eta in self.weld_params(rng, 10):
            m = weld.WeldedStretch(lam, eta)
            err = max(err, abs(m.evaluate(1.0) - 1))
            if m.sigma.real <= 0:
                return False, f"Re sigma = {_g(m.sigma.real)}: no growth at infinity"
            # |f(R u)| = R**Re(sigma) |f(u)| along every ray
            grow = np.log(np.abs(m.evaluate(1e6 * u)) / np.abs(m.evaluate(u))) / math.log(1e6)
            scaling = max(scaling, float(np.max(np.abs(grow - m.sigma.real))))
        ok = err == 0.0 and scaling <= 1e-9
        return ok, f"|f(1) - 1| = {_g(err)}, ray growth exponent error {_g(scaling)}"

    def weld_symmetry(self):
        rng = self.rng(6)
        worst = 0.0
        for lam, eta in self.weld_params(rng, 20):
            z = pick.random_disk(rng, self.n // 20 + 1, 3.0)
            z = z[(np.abs(np.abs(z) - 1) > 1e-3) & (np.abs(z) > 1e-3)]
            lhs = weld.evaluate_motion_disk(weld.WeldedStretch(lam, eta), z)
            mirror = weld.evaluate_motion_disk(weld.WeldedStretch(np.conj(eta), np.conj(lam)), 1 / np.conj(z))
            rhs = 1 / np.conj(mirror)
            worst = max(worst, float(np.max(np.abs(lhs - rhs) / np.maximum(1.0, np.abs(lhs)))))
        return worst <= self.tol["symmetry"], f"max error {_g(worst)}"

    def weld_holomorphy(self):
        rng = self.rng(7)
        worst = 0.0
        for lam, eta in self.weld_params(rng, 10):
            for z in pick.random_disk(rng, 5, 3.0):
                if abs(z.imag) > 1e-3:
                    worst = max(worst, weld.holomorphy_residual(complex(z), lam, eta))
        return worst <= self.tol["holomorphy"], f"max Cauchy-Riemann residual {_g(worst)}"

    def weld_continuity(self):
        rng = self.rng(8)
        worst = 0.0
        x = np.concatenate((np.geomspace(1e-3, 1e3, 100), -np.geomspace(1e-3, 1e3, 100)))
        for lam, eta in self.weld_params(rng, 10):
            m = weld.WeldedStretch(lam, eta)
            up, down = m.one_sided(x, "+"), m.one_sided(x, "-")
            worst = max(worst, float(np.max(np.abs(up - down) / np.maximum(1.0, np.abs(up)))))
        return worst <= self.tol["weld"], f"max jump {_g(worst)}"

    def weld_beltrami(self):
        rng = self.rng(9)
        worst = 0.0
        for lam, eta in self.weld_params(rng, 4):
            m = weld.WeldedStretch(lam, eta)
            for z in pick.random_disk(rng, 5, 2.0):
                if abs(z.imag) > 0.05 and abs(z) > 0.1:
                    worst = max(worst, weld.motion_beltrami_check(m, complex(z)).error)
        return worst <= self.tol["beltrami"], f"max relative error {_g(worst)}"

    def sigma_identity(self):
        rng = self.rng(10)
        lam, eta = pick.random_disk(rng, self.n), pick.random_disk(rng, self.n)
        s = np.array([weld.sigma_of(a, b) for a, b in zip(lam, eta)])
        psi = pick.psi_first(1.0, lam, eta)
        err = float(np.max(np.abs(s - psi) / np.maximum(1.0, np.abs(psi))))
        return err <= 1e-12, f"max relative error {_g(err)}"

    # twisting --------------------------------------------------------------

    def beurling_grid(self):
        bad = []
        for rad in np.linspace(0.2, 1.0, 5):
            for phase in np.linspace(0, 2 * math.pi, 24, endpoint=False):
                s = 1 + rad * complex(math.cos(phase), math.sin(phase))
                if abs(s) < 0.1 or s.real <= 1e-9:
                    continue
                a, g = maps.alpha_gamma(maps.HalfPlanePowerMap(s))
                margin = twist.beurling_margin(a, g)
                on_edge = math.isclose(rad, 1.0)
                if not twist.beurling_check(a, g) or (abs(margin) <= 1e-9) != on_edge:
                    bad.append(s)
        return not bad, f"{len(bad)} grid points violate the inequality or its equality case"

    def spiral_convergence(self):
        worst, seen = 0.0, 0
        for rad in (0.3, 0.6, 0.9):
            for phase in np.linspace(0, 2 * math.pi, 6, endpoint=False):
                s = 1 + rad * complex(math.cos(phase), math.sin(phase))
                rep = twist.spiral_exponent(maps.DiskPowerMap(s), j_max=self.cfg.twist.j_max)
                worst = max(worst, abs(rep.gamma_hat - s.imag / s.real))
                seen += 1
        return worst <= self.tol["twist_window"], f"max error over {seen} exponents {_g(worst)}"

    def dim_bound_monotone(self):
        ok = True
        for k in (0.1, 0.3, 0.5, 0.8, 0.99):
            g = np.linspace(0, 1.2 * twist.gamma_max(k), 200)
            vals = [twist.dim_bound(k, x) for x in g]
            ok = ok and vals[0] == 2.0 and all(b <= a for a, b in zip(vals, vals[1:]))
        return ok, "nonincreasing in |gamma| with value 2 at gamma = 0"

    def log_f_over_z_bounded(self):
        worst = 0.0
        for s in (0.5, (1 + 1j) / 2):
            rep = twist.log_f_over_z_bound(maps.NormalizedDiskMap(maps.DiskPowerMap(s)),
                                           slope_limit=self.tol["log_slope"])
            worst = max(worst, rep.slope)
        return worst <= self.tol["log_slope"], f"max growth slope {_g(worst)}"


SUITES: dict[str, list[tuple[str, str]]] = {
    "map_families": [
        ("configured_map", "configured_map"), ("injectivity", "injectivity"),
        ("derivative_fd", "derivative_fd"), ("normalization", "normalization"),
        ("univalent_bound", "koebe_bound"), ("distortion_bound", "distortion_bound"),
    ],
    "nevanlinna_pick": [
        ("reciprocal_form", "reciprocal_form"), ("interpolants_in_region", "interpolants_in_region"),
        ("mixtures_in_region", "mixtures_in_region"), ("boundary_in_cone", "boundary_in_cone"),
        ("boundary_vertices", "boundary_vertices"), ("hull_coverage", "hull_coverage"),
        ("rotation_invariance", "rotation_invariance"), ("tangent_support_sweep", "tangent_support_sweep"),
    ],
    "motion_weld": [
        ("normalization", "weld_normalization"), ("inversion_symmetry", "weld_symmetry"),
        ("parameter_holomorphy", "weld_holomorphy"), ("weld_continuity", "weld_continuity"),
        ("beltrami_coefficient", "weld_beltrami"), ("sigma_identity", "sigma_identity"),
    ],
    "twisting": [
        ("beurling_grid", "beurling_grid"), ("spiral_convergence", "spiral_convergence"),
        ("dim_bound_monotone", "dim_bound_monotone"), ("log_f_over_z_bounded", "log_f_over_z_bounded"),
    ],
}


def invariant_names() -> list[str]:
    return [f"{suite}.{name}" for suite, items in SUITES.items() for name, _ in items]


def run_suites(cfg: RunConfig, only: Callable[[str], bool] | None = None) -> list[InvariantResult]:
    """Run every named invariant in a fixed order; exceptions count as failures."""
    suite = Suite(cfg)
    results = []
    for group, items in SUITES.items():
        for name, method in items:
            full = f"{group}.{name}"
            if only is not None and not only(full):
                continue
            try:
                ok, detail = getattr(suite, method)()
            except Exception as exc:
                ok, detail = False, f"raised {type(exc).__name__}: {exc}"
            results.append(InvariantResult(full, bool(ok), detail))
    return results
