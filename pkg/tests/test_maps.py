import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qcspectra.errors import DegenerateJacobian, DomainError, NotExtendable, SingularPoint
from qcspectra.maps import (
    DiskPowerMap,
    HalfPlanePowerMap,
    Identity,
    NormalizedDiskMap,
    alpha_gamma,
    beltrami_fd,
    distortion_k,
    pointwise_bound_margin,
    power_spectrum,
)
from qcspectra.weld import WeldedStretch, radial_stretch

# sigma = 1 + rho e^{i phi} with rho < 1 keeps the extension nondegenerate
sigmas = st.builds(lambda rho, phi: 1 + rho * cmath.exp(1j * phi),
                   st.floats(0.0, 0.9), st.floats(0, 2 * math.pi))


def disk_points(rng, n, radius):
    r = radius * np.sqrt(rng.uniform(0, 1, n))
    return r * np.exp(2j * math.pi * rng.uniform(0, 1, n))


def test_half_plane_examples():
    assert HalfPlanePowerMap(1)(2 + 1j) == pytest.approx(2 + 1j, abs=1e-15)
    assert HalfPlanePowerMap(2)(1j) == pytest.approx(-1, abs=1e-15)
    assert HalfPlanePowerMap(1).derivative(3 + 0.5j) == pytest.approx(1, abs=1e-15)
    assert HalfPlanePowerMap(2).derivative(1j) == pytest.approx(2j, abs=1e-15)


def test_half_plane_domain():
    with pytest.raises(SingularPoint):
        HalfPlanePowerMap(0.5)(0)
    with pytest.raises(DomainError):
        HalfPlanePowerMap(0.5)(1 - 1j)


def test_unbounded_disk_model_at_origin_is_principal_root():
    assert DiskPowerMap(0.5, bounded=False)(0) == pytest.approx(cmath.exp(1j * math.pi / 4), abs=1e-15)


def test_bounded_disk_model_at_origin():
    # m(0) = i, w = e^{i pi/4}, pole -e^{i pi/4}: w / (1 - w/p) = w/2
    assert DiskPowerMap(0.5)(0) == pytest.approx(cmath.exp(1j * math.pi / 4) / 2, abs=1e-15)


def test_pole_is_image_of_minus_i_under_the_welded_extension():
    for s in (0.5, (1 + 1j) / 2, 1.4 - 0.3j, 1 + 0.9j):
        ext = WeldedStretch(0, s - 1)
        assert ext(-1j) == pytest.approx(DiskPowerMap(s).pole, abs=1e-14)
        # and on the upper half-plane the extension is the power map itself
        assert ext(0.3 + 2j) == pytest.approx(HalfPlanePowerMap(s)(0.3 + 2j), rel=1e-14)


def test_sigma_validation():
    for bad in (0, 2.1, -0.1, 1 + 1.01j):
        with pytest.raises(DomainError):
            DiskPowerMap(bad)
    with pytest.raises(NotExtendable):
        distortion_k(DiskPowerMap(2))


def test_disk_singular_points_and_domain():
    f = DiskPowerMap(0.5)
    with pytest.raises(SingularPoint):
        f(1 - 1e-13)
    with pytest.raises(SingularPoint):
        f(-1 + 1e-13j)
    with pytest.raises(DomainError):
        f(1.5j)


def test_bounded_model_is_bounded():
    theta = np.linspace(0, 2 * math.pi, 4001)[1:-1]
    theta = theta[np.abs(theta - math.pi) > 1e-9]
    z = (1 - 1e-9) * np.exp(1j * theta)
    assert np.max(np.abs(DiskPowerMap(0.5)(z))) < 10
    assert abs(DiskPowerMap(0.5, bounded=False)(-1 + 1e-8)) > 1e3
    assert DiskPowerMap(0.5).boundary_value(-1) == pytest.approx(-DiskPowerMap(0.5).pole)
    assert DiskPowerMap(0.5)(-1 + 1e-10) == pytest.approx(-DiskPowerMap(0.5).pole, abs=1e-4)


def test_derivative_at_origin_matches_differences():
    f = DiskPowerMap(0.5)
    h = 1e-5
    fd = (f(h) - f(-h)) / (2 * h)
    assert abs(fd - f.derivative(0)) <= 1e-8 * abs(f.derivative(0))


def mp_disk_power(s, z):
    s = mpmath.mpc(s)
    m = 1j * (1 - z) / (1 + z)
    w = mpmath.exp(s * mpmath.log(m))
    p = -mpmath.exp(1j * mpmath.pi * s / 2)
    return w / (1 - w / p)


def test_derivative_against_mpmath(rng):
    with mpmath.workdps(30):
        for s in (0.5, (1 + 1j) / 2, 1.7, 0.6 - 0.4j):
            f = DiskPowerMap(s)
            for z in disk_points(rng, 5, 0.95):
                z = complex(z)
                assert f(z) == pytest.approx(complex(mp_disk_power(s, mpmath.mpc(z))), rel=1e-13)
                want = complex(mpmath.diff(lambda x: mp_disk_power(s, x), mpmath.mpc(z)))
                assert f.derivative(z) == pytest.approx(want, rel=1e-12)


@given(sigmas)
def test_derivative_central_differences(s):
    f = DiskPowerMap(s)
    z = np.array([0.3 + 0.2j, -0.5 + 0.1j, 0.1 - 0.7j, 0.6j])
    h = 1e-5
    fd = (f(z + h) - f(z - h)) / (2 * h)
    assert np.max(np.abs(fd - f.derivative(z)) / np.abs(f.derivative(z))) <= 1e-7


@given(sigmas, st.integers(0, 2 ** 32 - 1))
def test_injectivity_spot_check(s, seed):
    f = DiskPowerMap(s)
    rng = np.random.default_rng(seed)
    z1, z2 = disk_points(rng, 2000, 0.999), disk_points(rng, 2000, 0.999)
    near = z1 + 1e-7 * disk_points(rng, 2000, 1.0)
    near = np.where(np.abs(near) < 0.999, near, z2)
    w1 = f(z1)
    scale = max(1.0, float(np.max(np.abs(w1))))
    assert np.all(np.abs(w1 - f(z2)) > 1e-12 * scale)
    assert np.all(np.abs(w1 - f(near)) > 0)


def test_distortion_and_exponents():
    assert distortion_k(DiskPowerMap(1)) == 0
    assert distortion_k(DiskPowerMap(0.5)) == 0.5
    assert distortion_k(DiskPowerMap((1 + 1j) / 2)) == pytest.approx(math.sqrt(2) / 2, abs=1e-16)
    assert alpha_gamma(DiskPowerMap(1)) == (1.0, 0.0)
    assert alpha_gamma(DiskPowerMap(0.5)) == (2.0, 0.0)
    assert alpha_gamma(DiskPowerMap((1 + 1j) / 2)) == (2.0, 1.0)


@given(sigmas)
def test_alpha_gamma_inverts_the_parametrization(s):
    a, g = alpha_gamma(HalfPlanePowerMap(s))
    assert (1 + 1j * g) / a == pytest.approx(s, abs=1e-14)


def test_normalization_is_exact():
    for s in (0.5, (1 + 1j) / 2, 1.9):
        f = NormalizedDiskMap(DiskPowerMap(s))
        assert f(0) == 0
        assert f.derivative(0) == 1
        assert f(np.array([0j, 0.1]))[0] == 0


def test_beltrami_of_conformal_and_linear_maps():
    assert beltrami_fd(Identity().evaluate, 0.3 + 0.1j) == pytest.approx(0, abs=1e-10)
    k = 0.3
    assert beltrami_fd(lambda z: z + k * np.conj(z), 1 + 1j, 1e-5) == pytest.approx(k, abs=1e-10)
    lam = 0.4
    mu = beltrami_fd(radial_stretch(lam), 1j, 1e-5)
    assert mu == pytest.approx(-lam, abs=1e-3)
    with pytest.raises(DegenerateJacobian):
        beltrami_fd(lambda z: np.conj(z), 0.5j)
    with pytest.raises(ValueError):
        beltrami_fd(Identity().evaluate, 0.5, h=0)


RADII = 1.0 - 2.0 ** -np.linspace(10 / 16, 10, 16)


@given(sigmas)
def test_univalent_and_distortion_bounds(s):
    f = NormalizedDiskMap(DiskPowerMap(s))
    assert pointwise_bound_margin(f, 1.0, RADII, 32) >= -1e-9
    assert pointwise_bound_margin(f, abs(s - 1), RADII, 32) >= -1e-9


def test_distortion_bound_is_not_vacuous():
    # the margin must be able to go negative: a too-small k fails
    f = NormalizedDiskMap(DiskPowerMap(0.5))
    assert pointwise_bound_margin(f, 0.1, RADII, 32) < 0


def test_power_spectrum_values():
    assert power_spectrum(0.5, 4) == 1.0
    assert power_spectrum(0.5, 2) == 0.0
    assert power_spectrum(1.5, -6) == 2.0
