import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from xlink.orbital import (
    EARTH,
    ConstellationSpec,
    GeometryError,
    OrbitSpec,
    PhysicalConstants,
    angular_speed,
    blocked_mask,
    horizon_half_angle,
    in_plane_position,
    in_plane_positions,
    is_blocked_by_earth,
    max_offset_period,
    orbital_period,
    plane_to_gec,
    relative_angular_offset,
    same_plane,
    wrap_angle,
    wrap_signed,
)

angles = st.floats(-50.0, 50.0, allow_nan=False)
altitudes = st.floats(500e3, 2000e3)


def segment_hits_sphere(a, b, radius):
    """Independent oracle: distance from the origin to the closed segment a-b."""
    a, b = np.asarray(a, float), np.asarray(b, float)
    d = b - a
    s = np.clip(-np.dot(a, d) / np.dot(d, d), 0.0, 1.0)
    return np.linalg.norm(a + s * d) < radius


class TestPeriod:
    def test_kepler_value(self):
        a = 6.371e6 + 500e3
        assert orbital_period(500e3) == pytest.approx(2 * math.pi * math.sqrt(a**3 / 3.986e14), rel=1e-15)
        assert orbital_period(500e3) == pytest.approx(5668.1475, abs=1e-3)

    def test_surface_period(self):
        assert orbital_period(0.0) == pytest.approx(5060.84, abs=0.01)

    def test_negative_altitude(self):
        with pytest.raises(GeometryError):
            orbital_period(-1.0)

    @given(altitudes, altitudes)
    def test_monotone(self, h1, h2):
        if h1 < h2:
            assert orbital_period(h1) < orbital_period(h2)

    def test_constants_must_be_positive(self):
        with pytest.raises(ValueError):
            PhysicalConstants(earth_radius=0.0)


class TestWrap:
    @given(angles)
    def test_wrap_angle_range_and_congruence(self, x):
        w = wrap_angle(x)
        assert 0.0 <= w < 2 * math.pi
        assert math.isclose(math.cos(w), math.cos(x), abs_tol=1e-9)
        assert math.isclose(math.sin(w), math.sin(x), abs_tol=1e-9)

    @given(angles)
    def test_wrap_signed_range(self, x):
        w = wrap_signed(x)
        assert -math.pi < w <= math.pi
        assert math.isclose(math.cos(w), math.cos(x), abs_tol=1e-9)

    def test_tiny_negative_stays_below_two_pi(self):
        assert 0.0 <= wrap_angle(-1e-17) < 2 * math.pi


class TestRelativeOffset:
    def test_equal_altitude_constant(self):
        assert relative_angular_offset(500e3, 500e3, 1e6, 0.3) == pytest.approx(0.3)

    def test_linear_drift(self):
        dw = angular_speed(500e3) - angular_speed(510e3)
        assert relative_angular_offset(500e3, 510e3, 1000.0) == pytest.approx(dw * 1000.0, rel=1e-12)
        assert relative_angular_offset(500e3, 510e3, 1000.0) == pytest.approx(2.41558e-3, rel=1e-5)

    @given(st.integers(2, 300), st.integers(2, 300), altitudes, st.floats(1e3, 500e3))
    def test_period_sweeps_one_gap(self, n1, n2, h, dh):
        t = max_offset_period(n1, n2, h, h + dh)
        drift = abs(angular_speed(h) - angular_speed(h + dh)) * t
        assert drift == pytest.approx(2 * math.pi / max(n1, n2), rel=1e-9)

    def test_period_value(self):
        assert max_offset_period(100, 100, 500e3, 510e3) == pytest.approx(26011.13, abs=0.05)

    def test_equal_altitudes_rejected(self):
        with pytest.raises(GeometryError):
            max_offset_period(10, 10, 500e3, 500e3)


class TestFrames:
    @given(st.floats(0, 2 * math.pi), st.floats(0, math.pi))
    def test_rotation_is_proper(self, raan, inc):
        m = plane_to_gec(raan, inc)
        assert np.allclose(m @ m.T, np.eye(3), atol=1e-12)
        assert np.linalg.det(m) == pytest.approx(1.0)

    def test_node_direction(self):
        m = plane_to_gec(math.pi / 2, 0.7)
        assert np.allclose(m @ [1, 0, 0], [0, 1, 0], atol=1e-12)

    def test_inclination_tilts_orbit_normal(self):
        m = plane_to_gec(0.0, 0.4)
        assert math.acos((m @ [0, 0, 1])[2]) == pytest.approx(0.4)

    def test_positions(self):
        o = OrbitSpec(500e3, num_satellites=4)
        p = in_plane_positions(o, 0.1)
        assert np.allclose(p[1], in_plane_position(1, o, 0.1))
        assert np.allclose(np.linalg.norm(p, axis=1), EARTH.earth_radius + 500e3)
        with pytest.raises(GeometryError):
            in_plane_position(4, o)


class TestBlocking:
    @given(
        st.floats(0, 2 * math.pi), st.floats(-1, 1), st.floats(0, 2 * math.pi), st.floats(-1, 1),
        altitudes, altitudes,
    )
    def test_matches_segment_oracle(self, lon1, z1, lon2, z2, h1, h2):
        def point(lon, z, h):
            r = math.sqrt(1 - z * z)
            return (EARTH.earth_radius + h) * np.array([r * math.cos(lon), r * math.sin(lon), z])

        a, b = point(lon1, z1, h1), point(lon2, z2, h2)
        if np.allclose(a, b):
            return
        # skip near-grazing pairs where the two formulations may round differently
        d = b - a
        s = np.clip(-np.dot(a, d) / np.dot(d, d), 0, 1)
        if abs(np.linalg.norm(a + s * d) - EARTH.earth_radius) < 1.0:
            return
        assert is_blocked_by_earth(a, b) == segment_hits_sphere(a, b, EARTH.earth_radius)
        assert bool(blocked_mask(a, b, EARTH.earth_radius)) == is_blocked_by_earth(a, b)

    def test_antipodal_blocked(self):
        r = EARTH.earth_radius + 500e3
        assert is_blocked_by_earth([r, 0, 0], [-r, 0, 0])

    def test_line_hit_behind_endpoint_is_not_blocked(self):
        # the infinite line meets the Earth, but beyond the lower endpoint
        r = EARTH.earth_radius
        assert not is_blocked_by_earth([0, 0, r + 100e3], [0, 0, r + 1000e3])

    def test_endpoint_inside_earth(self):
        with pytest.raises(GeometryError):
            is_blocked_by_earth([0, 0, 1.0], [0, 0, 1e7])

    def test_horizon_angle_is_tangent(self):
        h = 500e3
        half = horizon_half_angle(h)
        r = EARTH.earth_radius + h
        a = r * np.array([math.cos(half), math.sin(half), 0])
        b = r * np.array([math.cos(half), -math.sin(half), 0])
        # the chord midpoint touches the surface
        assert np.linalg.norm(0.5 * (a + b)) == pytest.approx(EARTH.earth_radius)


class TestSpecs:
    def test_orbit_validation(self):
        with pytest.raises(GeometryError):
            OrbitSpec(500e3, num_satellites=1)
        with pytest.raises(GeometryError):
            OrbitSpec(-5.0)
        with pytest.warns(UserWarning, match="LEO"):
            OrbitSpec(3000e3)
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            OrbitSpec(500e3)

    def test_angles_are_wrapped(self):
        o = OrbitSpec(500e3, raan=-0.5, phase_offset=7.0)
        assert 0 <= o.raan < 2 * math.pi and 0 <= o.phase_offset < 2 * math.pi

    def test_same_plane(self):
        a = OrbitSpec(500e3, inclination=0.5, raan=0.2)
        assert same_plane(a, a.with_(altitude=600e3))
        assert not same_plane(a, a.with_(raan=0.3))
        eq = OrbitSpec(500e3)
        assert same_plane(eq, eq.with_(raan=1.0))

    def test_walker(self):
        w = ConstellationSpec.walker(4, 10, 500e3, 0.9, phasing=1)
        assert len(w) == 4 and w.num_satellites == 40
        raans = [o.raan for o in w]
        assert np.allclose(np.diff(raans), math.pi / 2)
        assert w.orbits[1].phase_offset == pytest.approx(2 * math.pi / 40)

    def test_empty_constellation(self):
        with pytest.raises(GeometryError):
            ConstellationSpec(())
