"""Feasibility region of the symmetric three-point Pick problem on the bidisk.

For ``|lambda_0| = k`` the attainable values ``w = Psi(lambda_0, 0)`` of
holomorphic ``Psi: D^2 -> {Re w > 0}`` with ``Psi(0, 0) = 1`` and
``Psi(0, conj(lambda_0)) = conj(w)`` form the convex hull ``W_k`` of two
disks: ``|w - 1| <= k`` and ``|1/w - 1| <= k``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ReportedFailure, SupportViolation

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
MEMBERSHIP_SLACK = 1e-12


@dataclass(frozen=True)
class RegionWk:
    """Two generating disks of ``W_k``; the second is ``{|1/w - 1| <= k}``."""

    k: float
    check_samples: int = 1000

    def __post_init__(self):
        if not 0 < self.k < 1:
            raise ValueError(f"k must lie in (0, 1), got {self.k}")
        if self.check_samples:
            bad = self.reciprocal_form_mismatches(self.check_samples, seed=0)
            if bad:
                raise AssertionError(f"disk2 center/radius disagree with |1/w - 1| <= k ({bad} points)")

    @property
    def disk1(self) -> tuple[complex, float]:
        return 1.0 + 0j, self.k

    @property
    def disk2(self) -> tuple[complex, float]:
        s = 1.0 - self.k ** 2
        return 1.0 / s + 0j, self.k / s

    @property
    def tangent_angle(self) -> float:
        """Half-opening angle of the cone ``|Im w| <= k |w|``."""
        return math.asin(self.k)

    def reciprocal_form_mismatches(self, samples: int, seed=0, margin: float = 1e-12) -> int:
        c2, r2 = self.disk2
        rng = np.random.default_rng(seed)
        lo, hi = 1 - self.k - 0.5, c2.real + r2 + 0.5
        w = rng.uniform(lo, hi, samples) + 1j * rng.uniform(-(r2 + 0.5), r2 + 0.5, samples)
        w = w[w != 0]
        g_center = np.abs(w - c2) - r2
        g_recip = np.abs(1 / w - 1) - self.k
        decided = (np.abs(g_center) > margin) & (np.abs(g_recip) > margin)
        return int(np.sum((g_center[decided] <= 0) != (g_recip[decided] <= 0)))

    def hull_gap(self, w):
        """``min_s |w - c(s)| - r(s)`` over disks interpolating the two generators.

        Nonpositive exactly on ``W_k``: the hull of two disks is the union of
        the disks with linearly interpolated centers and radii.  The objective
        is convex in ``s``; golden-section search to 1e-14.
        """
        w = np.asarray(w, dtype=complex)
        c1, r1 = self.disk1
        c2, r2 = self.disk2

        def g(s):
            return np.abs(w - ((1 - s) * c1 + s * c2)) - ((1 - s) * r1 + s * r2)

        a = np.zeros(w.shape)
        b = np.ones(w.shape)
        x1 = b - GOLDEN * (b - a)
        x2 = a + GOLDEN * (b - a)
        g1, g2 = g(x1), g(x2)
        while np.max(b - a) > 1e-14:
            left = g1 <= g2
            b = np.where(left, x2, b)
            a = np.where(left, a, x1)
            x2n = np.where(left, x1, a + GOLDEN * (b - a))
            x1n = np.where(left, b - GOLDEN * (b - a), x2)
            x1, x2 = x1n, x2n
            g1, g2 = g(x1), g(x2)
        return np.minimum(np.minimum(g(np.zeros(w.shape)), g(np.ones(w.shape))), np.minimum(g1, g2))

    def contains(self, w, slack: float = MEMBERSHIP_SLACK):
        out = self.hull_gap(w) <= slack
        return bool(out) if np.ndim(out) == 0 else out

    def boundary(self, n: int = 256, with_normals: bool = False):
        return boundary_polyline(self.k, n, with_normals)


def contains(w, k: float, slack: float = MEMBERSHIP_SLACK):
    """Membership in ``W_k`` (vectorized over ``w``)."""
    return RegionWk(k, check_samples=0).contains(w, slack)


def _odd(n: int) -> int:
    return n if n % 2 else n + 1


def boundary_polyline(k: float, n: int = 256, with_normals: bool = False):
    """Counterclockwise vertices of the boundary of ``W_k``.

    Arc of disk2 (through the rightmost point ``1/(1-k)``), upper tangent
    segment, arc of disk1 (through the leftmost point ``1-k``), lower tangent
    segment.  The vertex set is symmetric under conjugation.
    """
    if n < 64:
        raise ValueError("need at least 64 vertices")
    region = RegionWk(k, check_samples=0)
    c1, r1 = region.disk1
    c2, r2 = region.disk2
    a = region.tangent_angle + math.pi / 2
    normal_up = np.exp(1j * a)
    t2 = c2 + r2 * normal_up
    t1 = c1 + r1 * normal_up
    len2, len1 = 2 * a * r2, (2 * math.pi - 2 * a) * r1
    seg = abs(t2 - t1)
    total = len2 + len1 + 2 * seg
    # every piece keeps a floor of vertices; the rest is shared by arc length
    floor = 9
    spare = n - 2 * floor
    m = int(spare * seg / total)
    # odd arc counts put vertices on the real axis (extreme points) when n is even
    n2 = _odd(floor + int(round(spare * len2 / total)))
    n1 = n - n2 - 2 * m
    th2 = np.linspace(-a, a, n2)
    th1 = np.linspace(a, 2 * math.pi - a, n1)
    frac = np.arange(1, m + 1) / (m + 1)
    upper = t2 + (t1 - t2) * frac
    lower = np.conj(upper[::-1])
    verts = np.concatenate((c2 + r2 * np.exp(1j * th2), upper, c1 + r1 * np.exp(1j * th1), lower))
    if not with_normals:
        return verts
    normals = np.concatenate((np.exp(1j * th2), np.full(m, normal_up),
                              np.exp(1j * th1), np.full(m, np.conj(normal_up))))
    return verts, normals


class Kind(enum.Enum):
    FIRST = "first"
    SECOND = "second"


@dataclass(frozen=True)
class InterpolantSpec:
    """Extremal rational inner solutions, in the right-half-plane picture."""

    kind: Kind
    c: complex

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        object.__setattr__(self, "c", complex(self.c))
        if abs(self.c) > 1 + 1e-15:
            raise ValueError(f"|c| = {abs(self.c)} > 1: the defining polynomial vanishes on the bidisk")

    def __call__(self, lam, eta):
        if self.kind is Kind.FIRST:
            return psi_first(self, lam, eta)
        return psi_second(self, lam, eta)


def psi_first(spec: InterpolantSpec | complex, lam, eta):
    """``(1 + lam*eta + c*lam + conj(c)*eta) / (1 - lam*eta)``."""
    c = spec.c if isinstance(spec, InterpolantSpec) else np.asarray(spec, dtype=complex)
    lam = np.asarray(lam, dtype=complex)
    eta = np.asarray(eta, dtype=complex)
    out = (1 + lam * eta + c * lam + np.conj(c) * eta) / (1 - lam * eta)
    return complex(out) if out.ndim == 0 else out


def psi_second(spec: InterpolantSpec | complex, lam, eta):
    """``(1 - lam*eta) / (1 - i*c*lam + i*conj(c)*eta + lam*eta)``."""
    c = spec.c if isinstance(spec, InterpolantSpec) else np.asarray(spec, dtype=complex)
    lam = np.asarray(lam, dtype=complex)
    eta = np.asarray(eta, dtype=complex)
    out = (1 - lam * eta) / (1 - 1j * c * lam + 1j * np.conj(c) * eta + lam * eta)
    return complex(out) if out.ndim == 0 else out


def random_disk(rng, size, radius: float = 1.0):
    """Uniform samples in the open disk of the given radius."""
    r = radius * np.sqrt(rng.uniform(0, 1, size))
    return r * np.exp(2j * math.pi * rng.uniform(0, 1, size))


@dataclass
class InterpolantReport:
    spec: InterpolantSpec
    k: float
    samples: int
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def raise_for_failures(self):
        if self.failures:
            name, witness = self.failures[0]
            raise ReportedFailure(f"interpolant check {name!r} failed", witness)


def verify_interpolant(spec: InterpolantSpec, k: float, samples: int = 10_000, seed=0) -> InterpolantReport:
    """Sample-check that ``spec`` solves the three-point problem with ``|lambda_0| = k``."""
    rng = np.random.default_rng(seed)
    report = InterpolantReport(spec, k, samples)
    lam = random_disk(rng, samples)
    eta = random_disk(rng, samples)
    psi = spec(lam, eta)
    bad = np.nonzero(~(psi.real > 0))[0]
    if bad.size:
        report.failures.append(("positive_real_part", (lam[bad[0]], eta[bad[0]])))
    if abs(spec(0, 0) - 1) > 1e-15:
        report.failures.append(("normalized_at_origin", (0j, 0j)))
    mirror = np.conj(spec(np.conj(eta), np.conj(lam)))
    err = np.abs(psi - mirror) / np.maximum(1.0, np.abs(psi))
    bad = np.nonzero(err > 1e-12)[0]
    if bad.size:
        report.failures.append(("reflection_symmetry", (lam[bad[0]], eta[bad[0]])))
    lam0 = k * np.exp(2j * math.pi * rng.uniform(0, 1, samples))
    w = spec(lam0, np.zeros(samples))
    w_bar = spec(np.zeros(samples), np.conj(lam0))
    bad = np.nonzero(np.abs(w_bar - np.conj(w)) > 1e-12 * np.maximum(1.0, np.abs(w)))[0]
    if bad.size:
        report.failures.append(("second_node_value", lam0[bad[0]]))
    bad = np.nonzero(~RegionWk(k, check_samples=0).contains(w))[0]
    if bad.size:
        report.failures.append(("value_in_region", lam0[bad[0]]))
    return report


def cone_check(w, k: float):
    """Two-point necessary condition ``|Im w| <= k |w|``."""
    w = np.asarray(w, dtype=complex)
    out = np.abs(w.imag) <= k * np.abs(w) + 1e-14
    return bool(out) if out.ndim == 0 else out


def two_point_segment(k: float) -> tuple[float, float]:
    """Range of ``Re w`` on the cone boundary contributed by degenerate problems."""
    if not 0 <= k < 1:
        raise ValueError("k must lie in [0, 1)")
    return 1.0 - k * k, 1.0


@dataclass
class SupportReport:
    t: complex
    lam_abs: float
    polyline_max: float
    support_value: float
    maximizers: list
    expected_maximizer: complex
    maximizer_distance: float
    critical: bool

    @property
    def passed(self) -> bool:
        ok = self.polyline_max <= 1 + 1e-9 and self.support_value <= 1 + 1e-9
        if self.critical:
            ok = ok and self.maximizer_distance <= 1e-9 and abs(self.support_value - 1) <= 1e-9
        return ok


def tangent_support(t: complex, lam_abs: float, n: int = 4096, strict: bool = True) -> SupportReport:
    """Check that ``Re(t (1 - w)) <= 1`` on ``W_{|lambda|}`` with equality at ``1 - 1/t``.

    The maximum is taken over the boundary polyline and, exactly, over the
    support functions of the two generating disks.  When ``|t| = 1/|lambda|``
    the exact maximizer set must contain ``1 - 1/t``; for ``|t| < 1/|lambda|``
    only the inequality is asserted.
    """
    t = complex(t)
    if not 0 < lam_abs < 1:
        raise ValueError("|lambda| must lie in (0, 1)")
    if t.real < 1 - 1e-12 or abs(t) * lam_abs > 1 + 1e-12:
        raise ValueError("need Re t >= 1 and |t| <= 1/|lambda|")
    region = RegionWk(lam_abs, check_samples=0)
    verts = boundary_polyline(lam_abs, n)
    poly_max = float(np.max((t * (1 - verts)).real))
    u = -np.conj(t) / abs(t)
    cands = []
    for c, r in (region.disk1, region.disk2):
        cands.append((float((t * (1 - c)).real + r * abs(t)), complex(c + r * u)))
    best = max(v for v, _ in cands)
    maximizers = [w for v, w in cands if v >= best - 1e-12]
    expected = 1 - 1 / t
    dist = min(abs(w - expected) for w in maximizers)
    report = SupportReport(t, lam_abs, poly_max, best, maximizers, expected, dist,
                           critical=math.isclose(abs(t) * lam_abs, 1.0, rel_tol=1e-12))
    if strict and not report.passed:
        raise SupportViolation(
            f"support check failed for t={t!r}, |lambda|={lam_abs}: max {max(poly_max, best):.15g}",
            witness=maximizers[0],
        )
    return report


def achievable_values(k: float, samples: int, rng) -> np.ndarray:
    """Values ``Psi(lambda_0, 0)`` realized by extremal interpolants and their averages.

    FIRST solutions fill the first disk and SECOND solutions the second as
    ``c`` ranges over the closed unit disk; averaging one of each (the average
    of two solutions is again a solution) fills the segments between them.
    """
    lam0 = k
    w1 = psi_first(random_disk(rng, samples), lam0, 0)
    w2 = psi_second(random_disk(rng, samples), lam0, 0)
    # boundary values of c reach the edges of both disks
    b1 = psi_first(np.exp(2j * math.pi * rng.uniform(0, 1, samples)), lam0, 0)
    b2 = psi_second(np.exp(2j * math.pi * rng.uniform(0, 1, samples)), lam0, 0)
    s = rng.uniform(0, 1, samples)
    mixed = (1 - s) * b1 + s * b2
    return np.concatenate((w1, w2, b1, b2, mixed))


@dataclass
class CoverageReport:
    k: float
    resolution: float
    grid_points: int
    samples: int
    uncovered_distance: float
    outside_distance: float

    @property
    def hausdorff(self) -> float:
        return max(self.uncovered_distance, self.outside_distance)


def hull_coverage(k: float, resolution: float = 0.01, samples: int = 100_000, seed=0) -> CoverageReport:
    """Hausdorff distance between ``W_k`` (on a grid) and a sample of achievable values."""
    from scipy.spatial import cKDTree

    region = RegionWk(k, check_samples=0)
    rng = np.random.default_rng(seed)
    achieved = achievable_values(k, samples, rng)
    c2, r2 = region.disk2
    xs = np.arange(1 - k, c2.real + r2 + resolution, resolution)
    ys = np.arange(-r2, r2 + resolution, resolution)
    grid = (xs[None, :] + 1j * ys[:, None]).ravel()
    grid = grid[region.contains(grid)]
    tree = cKDTree(np.column_stack((achieved.real, achieved.imag)))
    dist, _ = tree.query(np.column_stack((grid.real, grid.imag)))
    outside = np.maximum(region.hull_gap(achieved), 0.0)
    return CoverageReport(k, resolution, int(grid.size), int(achieved.size),
                          float(np.max(dist)), float(np.max(outside)))


def rotation_invariance_error(samples: int = 1000, seed=0) -> float:
    """``Psi_c(e^{i th} lam, e^{-i th} eta)`` is the interpolant with ``c e^{i th}``.

    Rotating the parameters therefore maps solutions to solutions, and the
    attainable set only depends on ``|lambda_0|``.
    """
    rng = np.random.default_rng(seed)
    lam, eta, c = (random_disk(rng, samples) for _ in range(3))
    rot = np.exp(2j * math.pi * rng.uniform(0, 1, samples))
    err = 0.0
    for psi, c_rot in ((psi_first, c * rot), (psi_second, c * rot)):
        lhs = psi(c, rot * lam, eta / rot)
        rhs = psi(c_rot, lam, eta)
        err = max(err, float(np.max(np.abs(lhs - rhs) / np.maximum(1.0, np.abs(lhs)))))
    return err
