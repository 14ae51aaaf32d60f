"""Two-parameter holomorphic motion obtained by welding radial stretchings.

On the upper half-plane the motion is the radial stretch with exponent
``sigma_+ = (1+lam)/(1-lam)`` followed by the power ``sigma/sigma_+``; on the
lower half-plane the same with ``eta``.  The harmonic-type mean

    1/sigma = (1/sigma_+ + 1/sigma_-) / 2

makes the two halves agree on the negative real axis.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, OriginSingularity
from .maps import beltrami_fd

MU_FLOOR = 1e-6


def sigma_of(lam: complex, eta: complex) -> complex:
    """Exponent of the motion at the origin, ``(1+lam)(1+eta)/(1-lam*eta)``."""
    lam, eta = complex(lam), complex(eta)
    if abs(lam) >= 1 or abs(eta) >= 1:
        raise DomainError("parameters must lie in the open unit disk")
    return (1 + lam) * (1 + eta) / (1 - lam * eta)


@dataclass(frozen=True)
class WeldedStretch:
    lam: complex
    eta: complex

    def __post_init__(self):
        object.__setattr__(self, "lam", complex(self.lam))
        object.__setattr__(self, "eta", complex(self.eta))
        if abs(self.lam) >= 1 or abs(self.eta) >= 1:
            raise DomainError("parameters must lie in the open unit disk")

    @property
    def sigma_plus(self) -> complex:
        return (1 + self.lam) / (1 - self.lam)

    @property
    def sigma_minus(self) -> complex:
        return (1 + self.eta) / (1 - self.eta)

    @property
    def sigma(self) -> complex:
        return 2.0 / (1.0 / self.sigma_plus + 1.0 / self.sigma_minus)

    def distortion_k(self) -> float:
        return max(abs(self.lam), abs(self.eta))

    def evaluate(self, z, origin_ok: bool = False):
        return evaluate_motion(self, z, origin_ok)

    __call__ = evaluate

    def one_sided(self, x, side: str):
        """Limit of the motion at real ``x`` from the upper (``"+"``) or lower (``"-"``) side."""
        x = np.asarray(x, dtype=float)
        if np.any(x == 0):
            raise OriginSingularity("the real-axis limits are taken away from 0")
        theta = np.where(x > 0, 0.0, math.pi if side == "+" else -math.pi)
        s_side = self.sigma_plus if side == "+" else self.sigma_minus
        return self._formula(np.log(np.abs(x)), theta, s_side)

    def _formula(self, log_r, theta, s_side):
        s = self.sigma
        return np.exp((s / s_side) * (1j * theta + s_side * log_r))

    def exact_beltrami(self, z) -> complex:
        """``lam z/zbar`` above the axis, ``eta * conj(mu(conj z))`` below, ``mu(z) = z/zbar``."""
        z = complex(z)
        if z.imag > 0:
            return self.lam * z / z.conjugate()
        zb = z.conjugate()
        return self.eta * (zb / zb.conjugate()).conjugate()


def radial_stretch(lam: complex) -> WeldedStretch:
    """``(z/|z|) |z|^((1+lam)/(1-lam))``: the diagonal of the motion."""
    return WeldedStretch(lam, lam)


def evaluate_motion(m: WeldedStretch, z, origin_ok: bool = False):
    """Evaluate the welded motion; arguments are taken in ``[0, pi]`` above the axis
    and ``(-pi, 0)`` below it."""
    scalar = np.isscalar(z)
    z = np.asarray(z, dtype=complex)
    zero = z == 0
    if np.any(zero) and not origin_ok:
        raise OriginSingularity("the motion is evaluated away from the origin")
    safe = np.where(zero, 1.0, z)
    theta = np.angle(safe)
    lower = safe.imag < 0
    # np.angle gives -pi for (x, -0.0); that point belongs to the upper closure
    theta = np.where(~lower & (theta < 0), theta + 2 * math.pi, theta)
    s_side = np.where(lower, m.sigma_minus, m.sigma_plus)
    out = m._formula(np.log(np.abs(safe)), theta, s_side)
    out = np.where(zero, 0j, out)
    return complex(out) if scalar else out


@dataclass
class BeltramiReport:
    z: complex
    mu_fd: complex
    mu_exact: complex
    error: float
    relative: bool


def motion_beltrami_check(m: WeldedStretch, z: complex, h: float = 1e-5) -> BeltramiReport:
    """Compare a finite-difference Beltrami coefficient with the closed form.

    The error is relative to ``|mu|``, with a floor of ``MU_FLOOR`` below which
    finite-difference noise (about 1e-10 at ``h = 1e-5``) would dominate.
    """
    z = complex(z)
    if z.imag == 0:
        raise DomainError("the check is made off the real axis")
    if abs(z.imag) <= 2 * h:
        raise DomainError("step crosses the welding line")
    mu_fd = beltrami_fd(m.evaluate, z, h)
    mu = m.exact_beltrami(z)
    scale = max(abs(mu), MU_FLOOR)
    return BeltramiReport(z, mu_fd, mu, abs(mu_fd - mu) / scale, abs(mu) >= MU_FLOOR)


def cayley(z):
    """Unit circle onto the real line; exterior onto the upper half-plane."""
    return 1j * (z + 1) / (z - 1)


def cayley_inverse(w):
    return (w + 1j) / (w - 1j)


def evaluate_motion_disk(m: WeldedStretch, z):
    """The welded motion transported to the unit-circle picture.

    ``lam`` now acts outside the unit circle and ``eta`` inside, which is the
    arrangement in which the reflection ``z -> 1/conj(z)`` exchanges the two
    parameters.
    """
    w = cayley(z if np.isscalar(z) else np.asarray(z, dtype=complex))
    return cayley_inverse(evaluate_motion(m, w))


def holomorphy_residual(z: complex, lam: complex, eta: complex, step: float = 1e-4) -> float:
    """Largest finite-difference d/d(conj) residual of the parameter dependence.

    Fourth-order central differences; scaled by ``max(1, |f(z)|)`` since the
    truncation error grows with the size of the value itself.
    """
    def f(a, b):
        return complex(evaluate_motion(WeldedStretch(a, b), z))

    def diff(d):
        d = np.array(d, dtype=complex)
        near = f(*(np.array([lam, eta]) + d)) - f(*(np.array([lam, eta]) - d))
        far = f(*(np.array([lam, eta]) + 2 * d)) - f(*(np.array([lam, eta]) - 2 * d))
        return (8 * near - far) / (12 * step)

    res = []
    for which in (0, 1):
        unit = np.zeros(2, dtype=complex)
        unit[which] = step
        fx, fy = diff(unit), diff(1j * unit)
        res.append(abs(0.5 * (fx + 1j * fy)))
    return max(res) / max(1.0, abs(f(lam, eta)))
