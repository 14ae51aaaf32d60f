"""Continuous branch selection for complex logarithms and powers.

Everything that raises ``f'(z)`` to a complex power goes through here: the
logarithm of a nonvanishing function is continued sample by sample along a
path, always picking the branch nearest to the previous one.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import AmbiguousBranch, ClosureDefect, ExponentOverflow, ZeroValue

TWO_PI = 2.0 * math.pi
# ties closer than this to +-pi mean the step was too coarse
AMBIGUITY_TOL = 1e-6
# largest argument of exp() that stays finite in double precision
EXP_MAX = 709.782712893384


@dataclass(frozen=True)
class TrackedLog:
    """A nonzero complex value together with one chosen branch of its log."""

    value: complex
    log_value: complex

    def __post_init__(self):
        if self.value == 0:
            raise ZeroValue("TrackedLog value must be nonzero")
        if abs(cmath.exp(self.log_value) - self.value) > 1e-12 * abs(self.value):
            raise ValueError(
                f"log_value {self.log_value!r} is not a logarithm of {self.value!r}"
            )

    @classmethod
    def principal(cls, value: complex) -> "TrackedLog":
        value = complex(value)
        if value == 0:
            raise ZeroValue("cannot take the logarithm of zero")
        return cls(value, cmath.log(value))


def continue_log(prev: TrackedLog, next_value: complex) -> TrackedLog:
    """Continue ``prev`` to ``next_value`` on the nearest branch."""
    next_value = complex(next_value)
    if next_value == 0:
        raise ZeroValue("cannot continue a logarithm through zero")
    jump = cmath.phase(next_value / prev.value)
    if math.pi - abs(jump) < AMBIGUITY_TOL:
        raise AmbiguousBranch(
            f"step from {prev.value!r} to {next_value!r} is a half turn; refine the path"
        )
    principal = cmath.log(next_value)
    target = prev.log_value.imag + jump
    wraps = round((target - principal.imag) / TWO_PI)
    return TrackedLog(next_value, complex(principal.real, principal.imag + TWO_PI * wraps))


def tracked_pow(log_w: complex, t: complex) -> complex:
    """``exp(t * log_w)``; raises instead of saturating to infinity."""
    e = complex(t) * complex(log_w)
    if not (math.isfinite(e.real) and math.isfinite(e.imag)):
        raise ExponentOverflow(f"non-finite exponent {e!r}")
    if e.real > EXP_MAX:
        raise ExponentOverflow(f"Re(t log w) = {e.real:.6g} exceeds the double range")
    return cmath.exp(e)


def unwrap_logs(logs: np.ndarray, seed_imag: float | None = None) -> np.ndarray:
    """Continue a sampled sequence of logarithms along its path.

    ``logs`` holds *some* logarithm of each sample (usually the principal
    one).  The returned array differs from it by integer multiples of 2*pi*i
    chosen so that consecutive imaginary parts never jump by more than pi.
    If ``seed_imag`` is given, the first entry is placed on the branch whose
    imaginary part is nearest to it.
    """
    logs = np.asarray(logs, dtype=complex)
    if logs.size == 0:
        return logs.copy()
    im = logs.imag
    jumps = np.diff(im)
    jumps = jumps - TWO_PI * np.round(jumps / TWO_PI)
    if jumps.size and np.max(np.abs(jumps)) > math.pi - AMBIGUITY_TOL:
        i = int(np.argmax(np.abs(jumps)))
        raise AmbiguousBranch(f"branch jump near pi between samples {i} and {i + 1}")
    start = im[0]
    if seed_imag is not None:
        start = im[0] + TWO_PI * round((seed_imag - im[0]) / TWO_PI)
    cont = start + np.concatenate(([0.0], np.cumsum(jumps)))
    # snap to the exact sample value plus a whole number of turns (no drift)
    cont = im + TWO_PI * np.round((cont - im) / TWO_PI)
    return logs.real + 1j * cont


def continue_along(values: np.ndarray, seed: TrackedLog | None = None) -> np.ndarray:
    """Branch-continued logarithms of nonzero samples ``values`` along a path."""
    values = np.asarray(values, dtype=complex)
    if np.any(values == 0):
        raise ZeroValue("path passes through zero")
    logs = np.log(values)
    if seed is None:
        return unwrap_logs(logs)
    first = continue_log(seed, complex(values[0]))
    return unwrap_logs(logs, seed_imag=first.log_value.imag)


@dataclass(frozen=True)
class CirclePath:
    """Equispaced angles on ``|z| = radius``; counts are ``base * 2**level``."""

    radius: float
    n: int
    base: int = 64
    closed: bool = True

    def __post_init__(self):
        if not 0.0 < self.radius < 1.0:
            raise ValueError(f"radius must lie in (0, 1), got {self.radius}")
        ratio = self.n / self.base
        if self.n < self.base or ratio != int(ratio) or int(ratio) & (int(ratio) - 1):
            raise ValueError(f"sample count {self.n} is not {self.base} * 2**m")

    @property
    def angles(self) -> np.ndarray:
        return TWO_PI * np.arange(self.n) / self.n

    @property
    def points(self) -> np.ndarray:
        return self.radius * np.exp(1j * self.angles)

    def doubled(self) -> "CirclePath":
        return CirclePath(self.radius, 2 * self.n, self.base, self.closed)


@dataclass(frozen=True)
class TrackedPath:
    """Branch-continued logarithms at the sample points of a path."""

    points: np.ndarray
    values: np.ndarray
    logs: np.ndarray
    closure_defect: float = 0.0
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.logs)

    def __getitem__(self, i) -> TrackedLog:
        return TrackedLog(complex(self.values[i]), complex(self.logs[i]))


def ray_parameters(r: float, per_octave: int = 48) -> np.ndarray:
    """Radii from 0 to ``r`` refined geometrically toward the unit circle."""
    head = np.linspace(0.0, 0.5, 33)[:-1]
    gap = 1.0 - r
    if r <= 0.5:
        return np.linspace(0.0, r, 65)
    octaves = math.log2(0.5 / gap)
    m = max(2, int(math.ceil(octaves * per_octave)) + 1)
    tail = 1.0 - np.geomspace(0.5, gap, m)
    tail[-1] = r
    return np.concatenate((head, tail))


def radial_grid_logs(func, points, seed_log: complex = 0j, per_octave: int = 48):
    """Continue ``log func`` from the origin out to each of ``points``.

    ``func`` must be vectorized and nonvanishing on every segment
    ``[0, point]``, with ``seed_log`` a logarithm of ``func(0)``.  Points on a
    common ray share one densely sampled continuation.
    """
    points = np.asarray(points, dtype=complex)
    flat = points.ravel()
    out = np.empty(flat.shape, dtype=complex)
    radius = np.abs(flat)
    out[radius == 0] = seed_log
    keys = np.round(np.angle(flat), 12)
    for key in np.unique(keys[radius > 0]):
        idx = np.nonzero((keys == key) & (radius > 0))[0]
        rs = radius[idx]
        s = np.union1d(ray_parameters(float(rs.max()), per_octave), rs)
        s = s[s > 0]
        vals = np.asarray(func(s * np.exp(1j * key)), dtype=complex)
        if np.any(vals == 0):
            raise ZeroValue("function vanishes on the ray")
        logs = unwrap_logs(np.concatenate(([seed_log], np.log(vals))), seed_imag=seed_log.imag)[1:]
        cont = logs[np.searchsorted(s, rs)]
        # the ray uses the rounded angle; evaluate at the exact points and snap to the branch
        exact = np.log(np.asarray(func(flat[idx]), dtype=complex))
        out[idx] = exact + 2j * math.pi * np.round((cont.imag - exact.imag) / TWO_PI)
    return out.reshape(points.shape)


def radial_logs(func, endpoints, seed_log: complex, per_octave: int = 48):
    """Continued ``log func`` at each endpoint (see :func:`radial_grid_logs`)."""
    return np.atleast_1d(radial_grid_logs(func, endpoints, seed_log, per_octave))


def seed_log_derivative(f) -> complex:
    """log f'(0) with argument normalized into [0, 2*pi)."""
    d0 = complex(f.derivative(0j))
    if d0 == 0:
        raise ZeroValue("f'(0) = 0")
    arg = cmath.phase(d0) % TWO_PI
    return complex(math.log(abs(d0)), arg)


def log_derivative_on_circle(f, r: float, n: int = 256, closure_tol: float = 1e-8,
                             refinements: int = 2) -> TrackedPath:
    """Branch-continued ``log f'`` at ``n`` equispaced angles on ``|z| = r``.

    The branch is fixed by ``arg f'(0)`` in ``[0, 2*pi)`` and continuation along
    the radius ``[0, r]``.  If the loop does not close (a sign of
    under-sampling, since ``log f'`` is single valued) the sample count is
    doubled up to ``refinements`` times before :class:`ClosureDefect` is raised.
    """
    if n < 64:
        raise ValueError("need at least 64 samples on the circle")
    path = CirclePath(r, n, base=n)
    seed = seed_log_derivative(f)
    start = radial_logs(f.derivative, np.array([complex(r)]), seed)[0]
    for attempt in range(refinements + 1):
        values = np.asarray(f.derivative(path.points), dtype=complex)
        if np.any(values == 0):
            raise ZeroValue("f' vanishes on the circle")
        closed = np.concatenate((values, values[:1]))
        logs = continue_along(closed, TrackedLog(cmath.exp(start), start))
        defect = float(abs(logs[-1] - logs[0]))
        if defect <= closure_tol:
            return TrackedPath(path.points, values, logs[:-1], defect,
                               {"n": path.n, "radius": r})
        if attempt < refinements:
            path = path.doubled()
    raise ClosureDefect(
        f"log f' fails to close on |z|={r} (defect {defect:.3g} at n={path.n})"
    )
