"""Closed-form conformal maps with quasiconformal extensions.

The families here are the complex power maps ``z**sigma`` of the upper
half-plane and their transplants to the unit disk.  All evaluators accept
scalars or numpy arrays.

Disk model
----------
``m(z) = i(1 - z)/(1 + z)`` sends the disk onto the upper half-plane with
``m(1) = 0`` and ``m(-1) = oo``.  The bare composition ``g_sigma o m`` is
unbounded near ``z = -1``, which puts it outside the class the integral
means spectrum is defined for.  By default :class:`DiskPowerMap` therefore
post-composes with the Moebius map ``M(w) = w / (1 - w/p)``, whose pole
``p = -exp(i*pi*sigma/2)`` is the image of ``m(oo) = -i`` under the explicit
welded extension of ``g_sigma``.  The resulting map is bounded, has the same
``|sigma - 1|``-quasiconformal extension (now fixing infinity), vanishes at
``z = 1`` and behaves like a power ``(z -+ 1)**sigma`` at both ``z = +-1``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateJacobian, DomainError, NotExtendable, SingularPoint

SINGULAR_RADIUS = 1e-12
_BOUNDARY_SLACK = 1e-15


def _as_complex(z):
    if np.isscalar(z):
        return complex(z), True
    return np.asarray(z, dtype=complex), False


def _out(v, scalar):
    return complex(v) if scalar else v


def check_sigma(sigma: complex) -> complex:
    sigma = complex(sigma)
    if sigma == 0 or abs(sigma - 1) > 1 + 1e-15:
        raise DomainError(f"sigma={sigma!r} violates |sigma - 1| <= 1, sigma != 0")
    return sigma


def moebius_disk_to_half_plane(z):
    return 1j * (1 - z) / (1 + z)


def moebius_derivative(z):
    return -2j / (1 + z) ** 2


class ConformalMap:
    """Common interface for the explicit families.

    Subclasses implement ``_eval`` / ``_deriv`` on validated arrays.
    ``domain`` is ``"disk"`` or ``"upper"``.
    """

    domain = "disk"

    def _check(self, z):
        raise NotImplementedError

    def evaluate(self, z):
        z, scalar = _as_complex(z)
        self._check(z)
        return _out(self._eval(z), scalar)

    def derivative(self, z):
        z, scalar = _as_complex(z)
        self._check(z)
        return _out(self._deriv(z), scalar)

    __call__ = evaluate

    def distortion_k(self) -> float:
        raise NotImplementedError

    def boundary_value(self, zeta: complex) -> complex:
        return complex(self.evaluate(zeta))

    def log_boundary_offset(self, zeta: complex, delta: np.ndarray) -> np.ndarray:
        """Principal-ish ``log(f(zeta (1 - delta)) - f(zeta))``.

        The default evaluates directly and so loses accuracy once ``delta``
        approaches machine epsilon; families override it where a log-space
        formula exists.
        """
        delta = np.asarray(delta, dtype=float)
        diff = np.asarray(self.evaluate(zeta * (1.0 - delta)), dtype=complex) - self.boundary_value(zeta)
        with np.errstate(divide="ignore"):
            return np.log(diff)

    def analytic_gamma(self, zeta: complex):
        return None


def _check_disk(z, singular=()):
    if np.any(np.abs(z) > 1 + _BOUNDARY_SLACK):
        raise DomainError("point outside the closed unit disk")
    for s in singular:
        if np.any(np.abs(z - s) < SINGULAR_RADIUS):
            raise SingularPoint(f"too close to the boundary singularity {s}")


@dataclass(frozen=True)
class Identity(ConformalMap):
    def _check(self, z):
        if np.any(~np.isfinite(z)):
            raise DomainError("non-finite point")

    def _eval(self, z):
        return z

    def _deriv(self, z):
        return np.ones_like(z) if isinstance(z, np.ndarray) else 1.0 + 0j

    def distortion_k(self) -> float:
        return 0.0

    def log_boundary_offset(self, zeta, delta):
        delta = np.asarray(delta, dtype=float)
        return cmath.log(-complex(zeta)) + np.log(delta) + 0j

    def analytic_gamma(self, zeta):
        return 0.0


@dataclass(frozen=True)
class HalfPlanePowerMap(ConformalMap):
    """``g(z) = z**sigma`` (principal branch) on the upper half-plane."""

    sigma: complex
    domain = "upper"

    def __post_init__(self):
        object.__setattr__(self, "sigma", check_sigma(self.sigma))

    def _check(self, z):
        if np.any(np.imag(z) < 0):
            raise DomainError("point below the real axis")
        if np.any(np.abs(z) < SINGULAR_RADIUS):
            raise SingularPoint("z = 0 is the singular boundary point")

    def _eval(self, z):
        return np.exp(self.sigma * np.log(z))

    def _deriv(self, z):
        return self.sigma * np.exp((self.sigma - 1) * np.log(z))

    def distortion_k(self) -> float:
        return distortion_k(self)


@dataclass(frozen=True)
class DiskPowerMap(ConformalMap):
    """Power map transplanted to the disk; bounded unless ``bounded=False``."""

    sigma: complex
    bounded: bool = True

    def __post_init__(self):
        object.__setattr__(self, "sigma", check_sigma(self.sigma))

    @property
    def pole(self) -> complex:
        return -cmath.exp(0.5j * math.pi * self.sigma)

    def _check(self, z):
        _check_disk(z, singular=(1.0, -1.0))

    def _half_plane_log(self, z):
        # Log m(z); m lies in the closed upper half-plane so the principal log is continuous
        return np.log(moebius_disk_to_half_plane(z))

    def _eval(self, z):
        w = np.exp(self.sigma * self._half_plane_log(z))
        if not self.bounded:
            return w
        return w / (1 - w / self.pole)

    def _deriv(self, z):
        log_m = self._half_plane_log(z)
        d = self.sigma * np.exp((self.sigma - 1) * log_m) * moebius_derivative(z)
        if not self.bounded:
            return d
        w = np.exp(self.sigma * log_m)
        return d / (1 - w / self.pole) ** 2

    def distortion_k(self) -> float:
        return distortion_k(self)

    def boundary_value(self, zeta):
        zeta = complex(zeta)
        if abs(zeta - 1) < SINGULAR_RADIUS:
            return 0j
        if abs(zeta + 1) < SINGULAR_RADIUS:
            if not self.bounded:
                raise SingularPoint("the unbounded model sends z = -1 to infinity")
            return -self.pole
        return complex(self.evaluate(zeta))

    def log_boundary_offset(self, zeta, delta):
        zeta = complex(zeta)
        delta = np.asarray(delta, dtype=float)
        if abs(zeta - 1) > SINGULAR_RADIUS:
            return super().log_boundary_offset(zeta, delta)
        # z = 1 - delta exactly: m = i*delta/(2 - delta); stay in log space
        log_m = np.log(delta) - np.log(2.0 - delta) + 0.5j * math.pi
        log_w = self.sigma * log_m
        if not self.bounded:
            return log_w
        w = np.exp(log_w)
        return log_w - np.log(1 - w / self.pole)

    def analytic_gamma(self, zeta):
        if abs(complex(zeta) - 1) < SINGULAR_RADIUS:
            return alpha_gamma(self)[1]
        return None


@dataclass(frozen=True)
class NormalizedDiskMap(ConformalMap):
    """``(f(z) - f(0)) / f'(0)``: the class-S normalization of a disk map."""

    base: ConformalMap
    shift: complex = field(init=False)
    scale: complex = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "shift", complex(self.base.evaluate(0j)))
        object.__setattr__(self, "scale", complex(self.base.derivative(0j)))

    def _check(self, z):
        self.base._check(z)

    def _eval(self, z):
        return (self.base._eval(z) - self.shift) / self.scale

    def _deriv(self, z):
        return self.base._deriv(z) / self.scale

    def evaluate(self, z):
        z, scalar = _as_complex(z)
        self._check(z)
        out = self._eval(z)
        # enforce f(0) = 0 exactly
        if scalar:
            return 0j if z == 0 else complex(out)
        return np.where(z == 0, 0j, out)

    def derivative(self, z):
        z, scalar = _as_complex(z)
        self._check(z)
        out = self._deriv(z)
        if scalar:
            return 1 + 0j if z == 0 else complex(out)
        return np.where(z == 0, 1 + 0j, out)

    def distortion_k(self) -> float:
        return self.base.distortion_k()

    def boundary_value(self, zeta):
        return (self.base.boundary_value(zeta) - self.shift) / self.scale

    def log_boundary_offset(self, zeta, delta):
        return self.base.log_boundary_offset(zeta, delta) - cmath.log(self.scale)

    def analytic_gamma(self, zeta):
        return self.base.analytic_gamma(zeta)


def distortion_k(fmap) -> float:
    """Distortion constant ``k`` of the map's quasiconformal extension."""
    if isinstance(fmap, (HalfPlanePowerMap, DiskPowerMap)):
        k = abs(fmap.sigma - 1)
        if k >= 1 - 1e-15:
            raise NotExtendable(f"|sigma - 1| = {k}: the extension degenerates")
        return k
    return fmap.distortion_k()


def alpha_gamma(fmap) -> tuple[float, float]:
    """Scaling exponent and rotation rate: ``sigma = (1 + i*gamma)/alpha``."""
    if isinstance(fmap, Identity):
        return 1.0, 0.0
    if isinstance(fmap, NormalizedDiskMap):
        return alpha_gamma(fmap.base)
    sigma = complex(fmap.sigma)
    if sigma.real <= 0:
        raise DomainError("Re sigma must be positive")
    return 1.0 / sigma.real, sigma.imag / sigma.real


def power_spectrum(sigma: complex, t: complex) -> float:
    """Exact integral means spectrum of the bounded disk power map.

    Near each of its two boundary singularities ``|f'(z)^t|`` behaves like
    ``|z -+ 1|**Re(t(sigma - 1))`` times a bounded factor, so the circle
    integrals grow with exponent ``max(0, Re(t(1 - sigma)) - 1)``.
    """
    return max(0.0, (complex(t) * (1 - complex(sigma))).real - 1.0)


def beltrami_fd(f, z: complex, h: float | None = None) -> complex:
    """Finite-difference Beltrami coefficient ``dbar f / d f`` at ``z``."""
    fn = getattr(f, "evaluate", f)
    z = complex(z)
    if h is None:
        h = 1e-5 * max(1.0, abs(z))
    if h <= 0:
        raise ValueError("step must be positive")
    dx = (complex(fn(z + h)) - complex(fn(z - h))) / (4 * h)
    dy = (complex(fn(z + 1j * h)) - complex(fn(z - 1j * h))) / (4j * h)
    d, dbar = dx + dy, dx - dy
    if abs(d) < 1e-12:
        raise DegenerateJacobian(f"|df| = {abs(d):.3g} at z = {z!r}")
    return dbar / d


def log_zfprime_over_f(f, points: np.ndarray, per_octave: int = 48) -> np.ndarray:
    """``log(z f'(z)/f(z))`` on the branch vanishing at the origin (class S maps)."""
    from .branch import radial_grid_logs

    def q(z):
        z = np.asarray(z, dtype=complex)
        return z * f.derivative(z) / f.evaluate(z)

    return radial_grid_logs(q, points, per_octave=per_octave)


def log_f_over_z(f, points: np.ndarray, per_octave: int = 48) -> np.ndarray:
    """``log(f(z)/z)`` on the branch vanishing at the origin (class S maps)."""
    from .branch import radial_grid_logs

    def q(z):
        z = np.asarray(z, dtype=complex)
        return f.evaluate(z) / z

    return radial_grid_logs(q, points, per_octave=per_octave)


def pointwise_bound_margin(f, k: float, radii, n_angles: int = 64) -> float:
    """Smallest value of ``k log((1+r)/(1-r)) - |log(z f'/f)|`` over a polar grid.

    Nonnegative for every normalized map with a ``k``-quasiconformal
    extension (``k = 1`` gives the classical bound for univalent maps).
    """
    radii = np.asarray(radii, dtype=float)
    theta = 2 * math.pi * np.arange(n_angles) / n_angles
    pts = radii[:, None] * np.exp(1j * theta)[None, :]
    lhs = np.abs(log_zfprime_over_f(f, pts))
    rhs = k * np.log((1 + radii) / (1 - radii))[:, None]
    return float(np.min(rhs - lhs))
