"""Antenna patterns, free-space link budget, thermal noise and Shannon capacity.

Internal math is linear SI throughout; the dB helpers exist for I/O.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np

from .orbital import EARTH, PhysicalConstants

SPEED_OF_LIGHT = 2.99792458e8  # m/s

# The beam edge belongs to the beam: a target at exactly alpha/2 off boresight
# is inside. The tolerance absorbs rounding in the angle computation.
BEAM_EDGE_TOL = 1e-9


class RadioError(ValueError):
    pass


def db_to_linear(db):
    return 10.0 ** (np.asarray(db, dtype=float) / 10.0)


def linear_to_db(x):
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore"):
        return 10.0 * np.log10(x)


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


def watts_to_dbm(watts):
    return linear_to_db(watts) + 30.0


class PatternKind(str, enum.Enum):
    CONE = "cone"
    CONE_SPHERE = "cone_sphere"


@dataclass(frozen=True)
class AntennaPattern:
    """Cone pattern, optionally with a uniform sidelobe floor (cone-plus-sphere).

    Attributes:
        beamwidth: Full cone angle alpha (rad).
        kind: ``PatternKind.CONE`` or ``PatternKind.CONE_SPHERE``.
        sidelobe_level_db: How far the sidelobe floor sits below the main lobe
            (dB, positive). Only meaningful for cone-plus-sphere.
    """

    beamwidth: float
    kind: PatternKind = PatternKind.CONE
    sidelobe_level_db: float = math.inf

    def __post_init__(self):
        if not 0 < self.beamwidth <= 2 * math.pi:
            raise RadioError(f"beamwidth must lie in (0, 2*pi], got {self.beamwidth!r}")
        object.__setattr__(self, "kind", PatternKind(self.kind))
        if self.kind is PatternKind.CONE_SPHERE:
            if not self.sidelobe_level_db > 0:
                raise RadioError("sidelobe level must be a positive number of dB below the main lobe")

    @classmethod
    def cone(cls, beamwidth: float) -> "AntennaPattern":
        return cls(beamwidth)

    @classmethod
    def cone_sphere(cls, beamwidth: float, sidelobe_level_db: float) -> "AntennaPattern":
        return cls(beamwidth, PatternKind.CONE_SPHERE, sidelobe_level_db)

    @property
    def half_beam(self) -> float:
        return 0.5 * self.beamwidth

    @property
    def sidelobe_gain(self) -> float:
        if self.kind is PatternKind.CONE:
            return 0.0
        return main_lobe_gain(self) * 10.0 ** (-self.sidelobe_level_db / 10.0)


def main_lobe_gain(pattern: AntennaPattern) -> float:
    """Main-lobe power gain.

    For the pure cone this is ``2 / (1 - cos(alpha/2))``. With a sidelobe floor
    the main lobe is lowered so that the pattern still radiates exactly the
    input power over the full sphere.
    """
    c = math.cos(pattern.half_beam)
    in_cone = 0.5 * (1.0 - c)  # fraction of the sphere inside the cone
    if in_cone <= 0:
        raise RadioError("zero beamwidth implies infinite gain")
    if pattern.kind is PatternKind.CONE:
        return 1.0 / in_cone
    floor = 10.0 ** (-pattern.sidelobe_level_db / 10.0)
    return 1.0 / (in_cone + floor * (1.0 - in_cone))


def angle_between(u, v):
    """Angle between vectors, accurate near 0 and pi (vectorised over leading axes)."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    cross = np.linalg.norm(np.cross(u, v), axis=-1)
    dot = np.sum(u * v, axis=-1)
    return np.arctan2(cross, dot)


def in_beam(angle, beamwidth: float):
    """Edge-inclusive main-lobe membership test for an off-boresight angle."""
    return np.asarray(angle) < 0.5 * beamwidth + BEAM_EDGE_TOL


def gain_toward(pattern: AntennaPattern, boresight, target_dir) -> float:
    """Power gain of ``pattern`` pointed along ``boresight`` toward ``target_dir``."""
    theta = float(angle_between(boresight, target_dir))
    if in_beam(theta, pattern.beamwidth):
        return main_lobe_gain(pattern)
    return pattern.sidelobe_gain


@dataclass(frozen=True)
class RadioConfig:
    """Link parameters shared by every satellite.

    Attributes:
        tx_power: Transmit power (W).
        carrier: Carrier frequency (Hz).
        bandwidth: Channel bandwidth (Hz).
        system_temperature: Receiver system temperature (K).
        pattern: Antenna pattern used for both transmit and receive.
    """

    tx_power: float
    carrier: float
    bandwidth: float
    system_temperature: float
    pattern: AntennaPattern

    def __post_init__(self):
        for name in ("tx_power", "carrier", "bandwidth", "system_temperature"):
            if not getattr(self, name) > 0:
                raise RadioError(f"{name} must be strictly positive")

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.carrier

    @property
    def beamwidth(self) -> float:
        return self.pattern.beamwidth

    def with_beamwidth(self, beamwidth: float) -> "RadioConfig":
        return replace(self, pattern=replace(self.pattern, beamwidth=beamwidth))

    def with_pattern(self, pattern: AntennaPattern) -> "RadioConfig":
        return replace(self, pattern=pattern)


@dataclass(frozen=True)
class BandPreset:
    name: str
    tx_power_dbm: float
    carrier: float
    bandwidth: float
    system_temperature: float

    def config(self, pattern: AntennaPattern | float) -> RadioConfig:
        if not isinstance(pattern, AntennaPattern):
            pattern = AntennaPattern.cone(float(pattern))
        return RadioConfig(
            tx_power=dbm_to_watts(self.tx_power_dbm),
            carrier=self.carrier,
            bandwidth=self.bandwidth,
            system_temperature=self.system_temperature,
            pattern=pattern,
        )


MMWAVE = BandPreset("mmwave", 60.0, 38e9, 400e6, 100.0)
SUBTHZ = BandPreset("subthz", 27.0, 130e9, 10e9, 100.0)
BANDS = {MMWAVE.name: MMWAVE, SUBTHZ.name: SUBTHZ}


def band(name: str) -> BandPreset:
    try:
        return BANDS[name.lower()]
    except KeyError:
        raise RadioError(f"unknown band preset {name!r}; expected one of {sorted(BANDS)}") from None


def received_power(cfg: RadioConfig, g_tx: float, g_rx: float, distance):
    """Friis free-space received power ``P_tx * g_tx * g_rx * (lambda / (4 pi d))^2``."""
    d = np.asarray(distance, dtype=float)
    if np.any(d <= 0):
        raise RadioError("distance must be positive")
    out = cfg.tx_power * g_tx * g_rx * (cfg.wavelength / (4.0 * math.pi * d)) ** 2
    return float(out) if out.ndim == 0 else out


def noise_power(cfg: RadioConfig, constants: PhysicalConstants = EARTH) -> float:
    """Johnson-Nyquist noise power kTB (W)."""
    return constants.boltzmann * cfg.system_temperature * cfg.bandwidth


def capacity(bandwidth: float, sinr):
    """Shannon capacity in bit/s."""
    s = np.asarray(sinr, dtype=float)
    if np.any(s < 0):
        raise RadioError("SINR must be non-negative")
    out = bandwidth * np.log2(1.0 + s)
    return float(out) if out.ndim == 0 else out
