"""Circular-orbit kinematics for LEO cross-link geometry.

Everything here is a pure function of immutable inputs. Positions are in
metres in a geocentric equatorial frame fixed against the stars (z along the
Earth's spin axis, x toward the vernal equinox). Earth rotation and J2 are
ignored; orbits are ideal circles.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from typing import Iterator, Sequence

import numpy as np

TWO_PI = 2.0 * math.pi

LEO_MIN_ALTITUDE = 500e3
LEO_MAX_ALTITUDE = 2000e3


class GeometryError(ValueError):
    """Raised for inputs outside the domain of a geometric operation."""


@dataclass(frozen=True)
class PhysicalConstants:
    earth_radius: float = 6.371e6  # m
    mu: float = 3.986e14  # m^3/s^2
    boltzmann: float = 1.380649e-23  # J/K

    def __post_init__(self):
        for name in ("earth_radius", "mu", "boltzmann"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")


EARTH = PhysicalConstants()


def wrap_angle(angle: float) -> float:
    """Wrap an angle to [0, 2*pi)."""
    wrapped = math.fmod(angle, TWO_PI)
    if wrapped < 0:
        wrapped += TWO_PI
    # fmod of a tiny negative can round back up to exactly 2*pi
    return 0.0 if wrapped >= TWO_PI else wrapped


def wrap_signed(angle: float) -> float:
    """Wrap an angle to (-pi, pi]."""
    wrapped = math.pi - wrap_angle(math.pi - angle)
    return wrapped


@dataclass(frozen=True)
class OrbitSpec:
    """One circular orbital plane populated with evenly spaced satellites.

    Attributes:
        altitude: Height above the Earth's surface (m).
        inclination: Plane inclination (rad).
        raan: Right ascension of the ascending node (rad).
        num_satellites: Satellites in the plane.
        phase_offset: True anomaly of satellite 0 at t = 0 (rad).
    """

    altitude: float
    inclination: float = 0.0
    raan: float = 0.0
    num_satellites: int = 2
    phase_offset: float = 0.0

    def __post_init__(self):
        if not self.altitude > 0:
            raise GeometryError(f"altitude must be positive, got {self.altitude!r}")
        if int(self.num_satellites) != self.num_satellites or self.num_satellites < 2:
            raise GeometryError(
                f"num_satellites must be an integer >= 2, got {self.num_satellites!r}"
            )
        if not LEO_MIN_ALTITUDE <= self.altitude <= LEO_MAX_ALTITUDE:
            warnings.warn(
                f"altitude {self.altitude / 1e3:g} km is outside the 500-2000 km LEO range",
                stacklevel=3,
            )
        object.__setattr__(self, "num_satellites", int(self.num_satellites))
        object.__setattr__(self, "inclination", wrap_angle(self.inclination))
        object.__setattr__(self, "raan", wrap_angle(self.raan))
        object.__setattr__(self, "phase_offset", wrap_angle(self.phase_offset))

    def semi_major_axis(self, constants: PhysicalConstants = EARTH) -> float:
        return constants.earth_radius + self.altitude

    def with_(self, **changes) -> "OrbitSpec":
        return replace(self, **changes)


def same_plane(a: OrbitSpec, b: OrbitSpec, tol: float = 1e-12) -> bool:
    """True if two orbits share an orbital plane (RAAN is moot at zero inclination)."""
    if abs(wrap_signed(a.inclination - b.inclination)) > tol:
        return False
    if abs(math.sin(a.inclination)) <= tol:
        return True
    return abs(wrap_signed(a.raan - b.raan)) <= tol


@dataclass(frozen=True)
class ConstellationSpec:
    """An ordered set of orbits, e.g. one operator's Walker shell."""

    orbits: tuple[OrbitSpec, ...]
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "orbits", tuple(self.orbits))
        if not self.orbits:
            raise GeometryError("a constellation needs at least one orbit")

    def __iter__(self) -> Iterator[OrbitSpec]:
        return iter(self.orbits)

    def __len__(self) -> int:
        return len(self.orbits)

    @property
    def num_satellites(self) -> int:
        return sum(o.num_satellites for o in self.orbits)

    @classmethod
    def walker(
        cls,
        planes: int,
        sats_per_plane: int,
        altitude: float,
        inclination: float,
        phasing: int = 1,
        raan0: float = 0.0,
        raan_spread: float = TWO_PI,
        phase0: float = 0.0,
        name: str = "",
    ) -> "ConstellationSpec":
        """Walker shell of ``planes`` evenly spaced planes.

        Plane k has RAAN ``raan0 + k * raan_spread / planes`` and its satellite 0
        is advanced by ``2*pi*phasing*k / (planes*sats_per_plane)``.
        """
        total = planes * sats_per_plane
        orbits = tuple(
            OrbitSpec(
                altitude=altitude,
                inclination=inclination,
                raan=raan0 + k * raan_spread / planes,
                num_satellites=sats_per_plane,
                phase_offset=phase0 + TWO_PI * phasing * k / total,
            )
            for k in range(planes)
        )
        return cls(orbits, name=name)


@dataclass(frozen=True)
class SatState:
    """Instantaneous state of one satellite.

    ``pointing`` is the transmit boresight (toward the neighbour it sends to,
    index j-1); ``rx_pointing`` is the receive boresight (toward j+1, the
    neighbour it listens to).
    """

    position: np.ndarray
    pointing: np.ndarray
    orbit_index: int
    sat_index: int
    rx_pointing: np.ndarray = field(default=None, compare=False)

    @property
    def id(self) -> tuple[int, int]:
        return (self.orbit_index, self.sat_index)


def orbital_period(altitude: float, constants: PhysicalConstants = EARTH) -> float:
    """Kepler period ``2*pi*sqrt(a^3/mu)`` of a circular orbit, in seconds."""
    if not altitude >= 0:
        raise GeometryError(f"altitude must be non-negative, got {altitude!r}")
    a = constants.earth_radius + altitude
    return TWO_PI * math.sqrt(a**3 / constants.mu)


def angular_speed(altitude: float, constants: PhysicalConstants = EARTH) -> float:
    """Mean motion of a circular orbit (rad/s)."""
    return TWO_PI / orbital_period(altitude, constants)


def _check_altitude(h: float) -> None:
    if not h > 0:
        raise GeometryError(f"altitude must be positive, got {h!r}")


def relative_angular_offset(
    h1: float,
    h2: float,
    t: float,
    initial_offset: float = 0.0,
    constants: PhysicalConstants = EARTH,
) -> float:
    """Offset of orbit 1's satellites relative to orbit 2's after ``t`` seconds.

    Returns ``initial_offset + (w1 - w2) * t`` wrapped to [0, 2*pi).
    """
    _check_altitude(h1)
    _check_altitude(h2)
    if h1 == h2:
        return wrap_angle(initial_offset)
    dw = angular_speed(h1, constants) - angular_speed(h2, constants)
    return wrap_angle(initial_offset + dw * t)


def max_offset_period(
    n1: int, n2: int, h1: float, h2: float, constants: PhysicalConstants = EARTH
) -> float:
    """Time for the relative offset of two orbits to sweep one inter-satellite gap.

    This is the repetition period of every interference pattern between the
    two orbits: ``2*pi*min(1/n1, 1/n2) / |w1 - w2|``.
    """
    if n1 < 1 or n2 < 1:
        raise GeometryError("satellite counts must be >= 1")
    _check_altitude(h1)
    _check_altitude(h2)
    if h1 == h2:
        raise GeometryError("equal altitudes: the offset is constant, no finite period")
    a1 = constants.earth_radius + h1
    a2 = constants.earth_radius + h2
    dw = math.sqrt(constants.mu) * (a1**-1.5 - a2**-1.5)
    return TWO_PI * min(1.0 / n1, 1.0 / n2) / abs(dw)


def in_plane_position(
    sat_index: int,
    orbit: OrbitSpec,
    offset: float = 0.0,
    constants: PhysicalConstants = EARTH,
) -> np.ndarray:
    """Position of satellite ``sat_index`` inside its own orbital plane."""
    n = orbit.num_satellites
    if not 0 <= sat_index < n:
        raise GeometryError(f"sat_index {sat_index} out of range for {n} satellites")
    phi = offset + TWO_PI * sat_index / n
    a = orbit.semi_major_axis(constants)
    return np.array([a * math.cos(phi), a * math.sin(phi), 0.0])


def in_plane_positions(
    orbit: OrbitSpec, offset: float = 0.0, constants: PhysicalConstants = EARTH
) -> np.ndarray:
    """All in-plane positions of an orbit as an (N, 3) array."""
    n = orbit.num_satellites
    phi = offset + TWO_PI * np.arange(n) / n
    a = orbit.semi_major_axis(constants)
    return np.stack([a * np.cos(phi), a * np.sin(phi), np.zeros(n)], axis=-1)


def plane_to_gec(raan: float, inclination: float) -> np.ndarray:
    """Rotation taking in-plane coordinates (x toward the ascending node) to GEC."""
    co, so = math.cos(raan), math.sin(raan)
    ci, si = math.cos(inclination), math.sin(inclination)
    return np.array(
        [
            [co, -so * ci, so * si],
            [so, co * ci, -co * si],
            [0.0, si, ci],
        ]
    )


def rise_set(a: np.ndarray, b: np.ndarray, earth_radius: float) -> np.ndarray:
    """Rise/set quadratic; positive when the line through a and b meets the Earth."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    ab = np.sum(a * b, axis=-1)
    aa = np.sum(a * a, axis=-1)
    bb = np.sum(b * b, axis=-1)
    re2 = earth_radius**2
    return ab**2 - aa * bb + (aa + bb) * re2 - 2.0 * re2 * ab


def is_blocked_by_earth(
    a: Sequence[float], b: Sequence[float], constants: PhysicalConstants = EARTH
) -> bool:
    """True if the Earth (a hard sphere) blocks the straight path from a to b.

    The rise/set quadratic tests the infinite line; the segment is blocked only
    when, in addition, the line's closest approach to the centre falls between
    the two endpoints.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    re = constants.earth_radius
    if np.dot(a, a) <= re * re or np.dot(b, b) <= re * re:
        raise GeometryError("both endpoints must lie outside the Earth")
    ab = float(np.dot(a, b))
    if not (np.dot(a, a) > ab and np.dot(b, b) > ab):
        return False
    return bool(rise_set(a, b, re) > 0)


def blocked_mask(a: np.ndarray, b: np.ndarray, earth_radius: float) -> np.ndarray:
    """Vectorised :func:`is_blocked_by_earth` over broadcastable arrays of points."""
    ab = np.sum(a * b, axis=-1)
    aa = np.sum(a * a, axis=-1)
    bb = np.sum(b * b, axis=-1)
    return (rise_set(a, b, earth_radius) > 0) & (aa > ab) & (bb > ab)


def horizon_half_angle(altitude: float, constants: PhysicalConstants = EARTH) -> float:
    """Central half-angle at which two equal-altitude satellites lose line of sight."""
    return math.acos(constants.earth_radius / (constants.earth_radius + altitude))
