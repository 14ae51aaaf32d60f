"""Integral means of ``|f'(z)^t|`` over circles and their growth exponents."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import integrate

from .branch import EXP_MAX, log_derivative_on_circle
from .errors import ExponentOverflow, NoConvergence

N_START = 256
N_MAX = 2 ** 20
LOG2 = math.log(2.0)


@dataclass(frozen=True)
class RadiusSchedule:
    """Dyadic radii ``r_j = 1 - 2**-j`` for ``j_min <= j <= j_max``."""

    j_min: int = 2
    j_max: int = 14

    def __post_init__(self):
        if not 2 <= self.j_min < self.j_max <= 20:
            raise ValueError(f"need 2 <= j_min < j_max <= 20, got {self.j_min}, {self.j_max}")

    @property
    def levels(self) -> list[int]:
        return list(range(self.j_min, self.j_max + 1))

    @property
    def radii(self) -> np.ndarray:
        return 1.0 - 2.0 ** -np.arange(self.j_min, self.j_max + 1, dtype=float)


@dataclass
class SpectrumEstimate:
    t: complex
    levels: list[int]
    integrals: list[tuple[float, float]]
    local_slopes: list[float]
    beta_limsup: float
    beta_lsq: float
    tail_length: int
    closure_defects: list[float] = field(default_factory=list)
    sample_counts: list[int] = field(default_factory=list)


def _start_count(r: float) -> int:
    # the grid stays 256 * 2**m; skip levels too coarse to resolve features of width 1 - r
    n = N_START
    while n * (1.0 - r) < 8.0 and n < N_MAX:
        n *= 2
    return n


def log_circle_integral(f, r: float, t: complex, tol: float = 1e-8, n_max: int = N_MAX):
    """Return ``(log I, n, defect)`` for ``I = int_{|z|=r} |f'(z)^t| |dz|``.

    Periodic trapezoid rule on the branch-continued ``log f'``, doubling the
    sample count until successive estimates agree to relative ``tol``.
    """
    if not 0 < r < 1:
        raise ValueError("radius must lie in (0, 1)")
    if tol < 1e-10:
        raise ValueError("tolerance below 1e-10 is not supported")
    t = complex(t)
    n = _start_count(r)
    prev = None
    while True:
        path = log_derivative_on_circle(f, r, n)
        n = path.meta["n"]
        expo = (t * path.logs).real
        top = float(np.max(expo))
        log_i = top + math.log(float(np.mean(np.exp(expo - top)))) + math.log(2 * math.pi * r)
        if prev is not None and abs(math.expm1(log_i - prev)) < tol:
            if log_i > EXP_MAX:
                raise ExponentOverflow(f"circle integral exceeds double range at r={r}")
            return log_i, n, path.closure_defect
        prev = log_i
        n *= 2
        if n > n_max:
            raise NoConvergence(f"trapezoid rule not converged at r={r}, t={t} with n={n // 2}")


def circle_integral(f, r: float, t: complex, tol: float = 1e-8) -> float:
    """``int_{|z|=r} |f'(z)^t| |dz|`` (see :func:`log_circle_integral`)."""
    return math.exp(log_circle_integral(f, r, t, tol)[0])


def _lsq_slope(x, y) -> float:
    return float(np.polyfit(np.asarray(x, float), np.asarray(y, float), 1)[0])


def beta_estimate(f, t: complex, schedule: RadiusSchedule | None = None,
                  tail_length: int = 4, tol: float = 1e-8) -> SpectrumEstimate:
    """Estimate the integral means spectrum of ``f`` at ``t``.

    ``beta_limsup`` (the primary estimate) is the largest of the last
    ``tail_length`` local slopes; ``beta_lsq`` fits a line through the same
    tail.
    """
    schedule = schedule or RadiusSchedule()
    if not 1 <= tail_length <= schedule.j_max - schedule.j_min:
        raise ValueError("tail_length must be between 1 and j_max - j_min")
    logs, defects, counts = [], [], []
    for r in schedule.radii:
        log_i, n, defect = log_circle_integral(f, float(r), t, tol)
        logs.append(log_i)
        defects.append(defect)
        counts.append(n)
    logs = np.array(logs)
    slopes = np.diff(logs) / LOG2
    tail = slopes[-tail_length:]
    x = np.array(schedule.levels[-(tail_length + 1):], float) * LOG2
    return SpectrumEstimate(
        t=complex(t),
        levels=schedule.levels,
        integrals=[(float(r), float(math.exp(li))) for r, li in zip(schedule.radii, logs)],
        local_slopes=[float(s) for s in slopes],
        beta_limsup=float(np.max(tail)),
        beta_lsq=_lsq_slope(x, logs[-(tail_length + 1):]),
        tail_length=tail_length,
        closure_defects=defects,
        sample_counts=counts,
    )


@dataclass(frozen=True)
class ReferenceSpectra:
    k: float
    t: complex
    trivial_upper: float
    trivial_lower: float
    theorem_value: Optional[float]
    linear_zone: Optional[float]
    hedenmalm: float
    disproved_conjecture: float


def _close(a: float, b: float) -> bool:
    return math.isclose(a, b, rel_tol=1e-12, abs_tol=1e-12)


def reference_spectra(k: float, t: complex) -> ReferenceSpectra:
    """Known bounds and exact values of the universal spectrum ``B_k(t)``.

    ``disproved_conjecture`` is the quadratic guess ``k^2 |t|^2 / 4``, which is
    known to be false; it is listed for comparison only.
    """
    if not 0 < k < 1:
        raise ValueError("k must lie in (0, 1)")
    t = complex(t)
    if t == 0:
        raise ValueError("t must be nonzero")
    a = abs(t)
    critical = _close(a, 2 / k)
    theorem = 1.0 if critical and t.real >= 2 - 1e-12 else None
    linear = None
    if t.real >= k * a - 1e-12 and (a >= 2 / k or critical):
        linear = k * a - 1
    return ReferenceSpectra(
        k=k, t=t,
        trivial_upper=k * a,
        trivial_lower=max(0.0, k * a - 1),
        theorem_value=theorem,
        linear_zone=linear,
        hedenmalm=(1 + 7 * k) ** 2 * k ** 2 * a ** 2 / 4,
        disproved_conjecture=k ** 2 * a ** 2 / 4,
    )


class Integrability(enum.Enum):
    INSIDE = "inside"
    CRITICAL_DIVERGENT = "critical_divergent"
    OUTSIDE_THEOREM = "outside_theorem"


def integrability_region(k: float, t: complex) -> Integrability:
    """Whether ``|f'^t|`` is area-integrable for every map with a k-qc extension."""
    if not 0 < k < 1:
        raise ValueError("k must lie in (0, 1)")
    t = complex(t)
    a = abs(t)
    # the cone Re t >= k|t| comes first: t = -2/k is outside, not critical
    if t.real < k * a - 1e-12:
        return Integrability.OUTSIDE_THEOREM
    if _close(a, 2 / k):
        return Integrability.CRITICAL_DIVERGENT
    if a < 2 / k:
        return Integrability.INSIDE
    return Integrability.OUTSIDE_THEOREM


def _shell_integral(f, t, a, b, tol):
    value, _ = integrate.quad(
        lambda r: circle_integral(f, r, t, tol=max(1e-10, tol * 1e-2)),
        a, b, epsabs=0.0, epsrel=tol, limit=50,
    )
    return value


def dyadic_area_integrals(f, t: complex, j_max: int, tol: float = 1e-6) -> np.ndarray:
    """Area integrals over ``|z| < 1 - 2**-j`` for ``j = 1 .. j_max``."""
    edges = 1.0 - 2.0 ** -np.arange(0, j_max + 1, dtype=float)
    shells = [_shell_integral(f, t, float(a), float(b), tol) for a, b in zip(edges[:-1], edges[1:])]
    return np.cumsum(shells)


def area_integral(f, t: complex, r_max: float, tol: float = 1e-6) -> float:
    """``int_{|z| < r_max} |f'(z)^t| dA``, adaptive in the radius."""
    if not 0 < r_max < 1:
        raise ValueError("r_max must lie in (0, 1)")
    total, a = 0.0, 0.0
    while a < r_max:
        b = min(r_max, 1.0 - (1.0 - a) / 2) if a > 0 else min(r_max, 0.5)
        total += _shell_integral(f, t, a, b, tol)
        a = b
    return total
