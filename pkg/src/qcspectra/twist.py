"""Spiraling rates at boundary points and the dimension bound for twisting."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .branch import unwrap_logs
from .maps import log_f_over_z

CONVERGENCE_WINDOW = 0.02
# ratios converge like 1/log(1 - tau); 1000 dyadic levels (still normal doubles)
# keep the error under 0.012 for |sigma - 1| <= 0.9
DEFAULT_TWIST_LEVELS = 1000


@dataclass
class TwistReport:
    zeta: complex
    levels: list[int]
    deltas: list[float]
    ratios: list[float]
    gamma_hat: float
    converged: bool
    analytic_gamma: Optional[float] = None

    @property
    def tau_levels(self) -> list[tuple[float, float]]:
        return [(1.0 - d, r) for d, r in zip(self.deltas, self.ratios)]


def _ray_deltas(j_max: int, per_octave: int = 16) -> np.ndarray:
    head = np.linspace(1.0, 0.5, 33)
    tail = 2.0 ** -np.linspace(1.0, j_max, int((j_max - 1) * per_octave) + 1)
    return np.concatenate((head[:-1], tail))


def spiral_exponent(f, zeta: complex = 1.0, j_max: int = DEFAULT_TWIST_LEVELS,
                    j_min: int = 1) -> TwistReport:
    """Estimate the rotation rate of ``f`` at the boundary point ``zeta``.

    The ratio ``arg(f(tau zeta) - f(zeta)) / log|f(tau zeta) - f(zeta)|`` is
    evaluated at ``tau_j = 1 - 2**-j``.  The argument is continued along the
    ray from ``tau = 0``, where it is normalized into ``[0, 2*pi)``.
    """
    zeta = complex(zeta)
    if not math.isclose(abs(zeta), 1.0, rel_tol=1e-12):
        raise ValueError("zeta must lie on the unit circle")
    if j_max < j_min + 2:
        raise ValueError("need at least three levels")
    deltas = _ray_deltas(j_max)
    logs = np.asarray(f.log_boundary_offset(zeta, deltas), dtype=complex)
    if not np.all(np.isfinite(logs)):
        bad = int(np.argmin(np.isfinite(logs)))
        raise FloatingPointError(
            f"boundary offset not resolvable at 1 - tau = {deltas[bad]:.3g}; lower j_max"
        )
    seed = logs[0].imag % (2 * math.pi)
    cont = unwrap_logs(logs, seed_imag=seed)
    levels = list(range(j_min, j_max + 1))
    idx = [int(np.argmin(np.abs(np.log2(deltas) + j))) for j in levels]
    ratios = [float(cont[i].imag / cont[i].real) for i in idx]
    last = ratios[-3:]
    return TwistReport(
        zeta=zeta,
        levels=levels,
        deltas=[float(deltas[i]) for i in idx],
        ratios=ratios,
        gamma_hat=ratios[-1],
        converged=max(last) - min(last) <= CONVERGENCE_WINDOW,
        analytic_gamma=f.analytic_gamma(zeta),
    )


def twist_csv_rows(report: TwistReport, k: float | None = None) -> list[dict]:
    """Rows ``j, tau_j, ratio_j, gamma_hat, analytic_gamma`` plus the dimension bound.

    ``one_minus_tau`` is kept separately because ``tau_j`` rounds to 1 beyond
    ``j = 53``.
    """
    has_k = k is not None and 0 < k < 1
    bound = dim_bound(k, report.gamma_hat) if has_k else None
    exact = dim_bound(k, report.analytic_gamma) if has_k and report.analytic_gamma is not None else None
    return [
        {"j": j, "tau_j": 1.0 - d, "one_minus_tau": d, "ratio_j": r, "gamma_hat": report.gamma_hat,
         "analytic_gamma": report.analytic_gamma, "converged": report.converged, "k": k,
         "dim_bound": bound, "dim_bound_analytic": exact}
        for j, d, r in zip(report.levels, report.deltas, report.ratios)
    ]


def beurling_margin(alpha: float, gamma: float) -> float:
    return alpha - 0.5 * (1 + gamma * gamma)


def beurling_check(alpha: float, gamma: float) -> bool:
    """Does ``alpha >= (1 + gamma^2)/2`` hold (to 1e-12)?"""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    return beurling_margin(alpha, gamma) >= -1e-12


def gamma_max(k: float) -> float:
    """Largest pointwise rotation rate for a k-quasidisk, ``k/sqrt(1-k^2)``."""
    if not 0 <= k < 1:
        raise ValueError("k must lie in [0, 1)")
    return k / math.sqrt(1 - k * k)


def dim_bound(k: float, gamma: float) -> float:
    """Upper bound ``2 - 2 sqrt(1-k^2)|gamma|/k`` on the dimension of gamma-spiraling points."""
    if not 0 < k < 1:
        raise ValueError("k must lie in (0, 1)")
    # written through gamma_max so the extremal case lands on 0 exactly
    return max(0.0, 2.0 - 2.0 * abs(gamma) / gamma_max(k))


def k_of_L(L: float) -> float:
    """Extension constant of a conformal map onto an L-quasidisk."""
    if L < 1:
        raise ValueError("L must be at least 1")
    return (L * L - 1) / (L * L + 1)


@dataclass
class LogBoundReport:
    radii: list[float]
    sup_per_radius: list[float]
    sup: float
    slope: float
    bounded: bool = field(default=False)


def log_f_over_z_bound(f, radii=None, n_angles: int = 64, slope_limit: float = 0.05) -> LogBoundReport:
    """Growth of ``sup |log(f(z)/z)|`` over circles approaching the boundary.

    The default grid has 32 radii with ``1 - r`` from ``2**-6`` to ``2**-12``;
    inner circles only record the rise from ``log(f/z)(0) = 0`` and say
    nothing about growth at the boundary.
    """
    if radii is None:
        radii = 1.0 - 2.0 ** -np.linspace(6, 12, 32)
    radii = np.asarray(radii, dtype=float)
    theta = 2 * math.pi * np.arange(n_angles) / n_angles
    pts = radii[:, None] * np.exp(1j * theta)[None, :]
    sups = np.max(np.abs(log_f_over_z(f, pts)), axis=1)
    x = np.log(1.0 / (1.0 - radii))
    slope = float(np.polyfit(x, sups, 1)[0]) if np.ptp(sups) > 0 else 0.0
    return LogBoundReport(
        radii=[float(r) for r in radii],
        sup_per_radius=[float(s) for s in sups],
        sup=float(np.max(sups)),
        slope=slope,
        bounded=slope <= slope_limit,
    )
