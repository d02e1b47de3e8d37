"""Interference from orbits in a different plane, in the geocentric equatorial frame.

Each satellite is placed in its own orbital plane and rotated into the GEC
frame. A satellite j of the other orbit interferes when the Earth does not
block it from the victim and both beam-alignment angles are inside the beam.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..orbital import (
    EARTH,
    GeometryError,
    OrbitSpec,
    PhysicalConstants,
    angular_speed,
    blocked_mask,
    in_plane_position,
    in_plane_positions,
    plane_to_gec,
    relative_angular_offset,
    same_plane,
)
from ..radio import RadioConfig, in_beam, main_lobe_gain, noise_power
from .report import InterferenceReport, make_report
from .single import SingleOrbitScenario, single_expected_interference, single_signal_power


@dataclass(frozen=True)
class ShiftedScenario:
    """Two orbits at one altitude in different planes.

    ``delta_beta`` is the constant phase of orbit 2's satellite 0 ahead of
    orbit 1's satellite 0; orbit 2's own ``phase_offset`` is not used.
    """

    orbit1: OrbitSpec
    orbit2: OrbitSpec
    radio: RadioConfig
    delta_beta: float = 0.0
    constants: PhysicalConstants = EARTH

    def __post_init__(self):
        if self.orbit1.altitude != self.orbit2.altitude:
            raise GeometryError("shifted orbits must share one altitude")
        if same_plane(self.orbit1, self.orbit2):
            raise GeometryError("shifted orbits must lie in different planes")

    @property
    def period(self) -> float:
        return 2.0 * math.pi / angular_speed(self.orbit1.altitude, self.constants)

    def phases_at(self, t: float) -> tuple[float, float]:
        base = self.orbit1.phase_offset + angular_speed(self.orbit1.altitude, self.constants) * t
        return base, base + self.delta_beta


@dataclass(frozen=True)
class ShiftedCoplanarScenario:
    """Victim orbit plus an orbit in another plane at another altitude.

    Both orbits use their own ``phase_offset``; the relative offset then drifts
    at the difference of the two mean motions.
    """

    orbit1: OrbitSpec
    orbit2: OrbitSpec
    radio: RadioConfig
    constants: PhysicalConstants = EARTH

    def __post_init__(self):
        if same_plane(self.orbit1, self.orbit2) and self.orbit1.altitude == self.orbit2.altitude:
            raise GeometryError("identical orbits: nothing to shift")

    def delta_beta_at(self, t: float) -> float:
        return relative_angular_offset(
            self.orbit2.altitude,
            self.orbit1.altitude,
            t,
            self.orbit2.phase_offset - self.orbit1.phase_offset,
            self.constants,
        )

    def phases_at(self, t: float) -> tuple[float, float]:
        base = self.orbit1.phase_offset + angular_speed(self.orbit1.altitude, self.constants) * t
        return base, base + self.delta_beta_at(t)


def _gec_positions(orbit: OrbitSpec, phase: float, constants: PhysicalConstants) -> np.ndarray:
    m = plane_to_gec(orbit.raan, orbit.inclination)
    return in_plane_positions(orbit, phase, constants) @ m.T


def _arccos_angle(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    # coincident points give 0/0; callers mask them out by distance
    with np.errstate(invalid="ignore", divide="ignore"):
        cosine = np.sum(u * v, axis=-1) / (np.linalg.norm(u, axis=-1) * np.linalg.norm(v, axis=-1))
    return np.arccos(np.clip(cosine, -1.0, 1.0))


def other_orbit_terms(
    victim_orbit: OrbitSpec,
    other_orbit: OrbitSpec,
    victim_phase: float,
    other_phase: float,
    radio: RadioConfig,
    constants: PhysicalConstants = EARTH,
) -> dict[int, float]:
    """Received power at victim satellite 0 from each interfering satellite of another orbit.

    Args:
        victim_phase: true anomaly of the victim's satellite 0 (rad).
        other_phase: true anomaly of the other orbit's satellite 0 (rad).

    Returns:
        {j: power in W} for the satellites j that pass all three conditions.
    """
    m1 = plane_to_gec(victim_orbit.raan, victim_orbit.inclination)
    r_rx = m1 @ in_plane_position(0, victim_orbit, victim_phase, constants)
    r_tx = m1 @ in_plane_position(1, victim_orbit, victim_phase, constants)
    r_j = _gec_positions(other_orbit, other_phase, constants)
    r_prev = np.roll(r_j, 1, axis=0)  # row j holds satellite j-1

    visible = ~blocked_mask(r_j, r_rx[None, :], constants.earth_radius)
    rx_to_j = r_j - r_rx
    psi = _arccos_angle(rx_to_j, (r_tx - r_rx)[None, :])
    psi_p = _arccos_angle(r_prev - r_j, -rx_to_j)
    members = visible & in_beam(np.abs(psi), radio.beamwidth) & in_beam(np.abs(psi_p), radio.beamwidth)

    g = main_lobe_gain(radio.pattern)
    scale = radio.tx_power * g * g * radio.wavelength**2 / (16.0 * math.pi**2)
    d2 = np.sum(rx_to_j * rx_to_j, axis=-1)
    members &= d2 > 0
    return {int(j): scale / float(d2[j]) for j in np.flatnonzero(members)}


def _two_orbit_report(
    victim_orbit: OrbitSpec,
    other_orbit: OrbitSpec,
    phases: tuple[float, float],
    radio: RadioConfig,
    constants: PhysicalConstants,
    label: str,
) -> InterferenceReport:
    own = SingleOrbitScenario(victim_orbit, radio, constants)
    own_ids = [(0, i) for i in range(2, own.interferer_count + 2)]
    terms = other_orbit_terms(victim_orbit, other_orbit, phases[0], phases[1], radio, constants)
    other_ids = [(1, j) for j in sorted(terms)]
    i_own = single_expected_interference(own)
    i_other = float(sum(terms.values()))
    sources = {sid: "single" for sid in own_ids}
    sources.update({sid: label for sid in other_ids})
    return make_report(
        single_signal_power(own),
        i_own + i_other,
        noise_power(radio, constants),
        radio.bandwidth,
        own_ids + other_ids,
        breakdown={"single": i_own, label: i_other},
        sources=sources,
    )


def shifted_interferer_set(s: ShiftedScenario, t: float = 0.0) -> frozenset:
    p1, p2 = s.phases_at(t)
    return frozenset(other_orbit_terms(s.orbit1, s.orbit2, p1, p2, s.radio, s.constants))


def shifted_expected_interference(s: ShiftedScenario, t: float = 0.0) -> float:
    """E[I3]: interference from the shifted orbit alone (W)."""
    p1, p2 = s.phases_at(t)
    return float(sum(other_orbit_terms(s.orbit1, s.orbit2, p1, p2, s.radio, s.constants).values()))


def shifted_report(s: ShiftedScenario, t: float = 0.0) -> InterferenceReport:
    """Same-orbit plus shifted-orbit interference at time ``t``."""
    return _two_orbit_report(s.orbit1, s.orbit2, s.phases_at(t), s.radio, s.constants, "shifted")


shifted_sir_sinr = shifted_report


def shifted_coplanar_interferer_set(s: ShiftedCoplanarScenario, t: float) -> frozenset:
    p1, p2 = s.phases_at(t)
    return frozenset(other_orbit_terms(s.orbit1, s.orbit2, p1, p2, s.radio, s.constants))


def shifted_coplanar_interference(s: ShiftedCoplanarScenario, t: float) -> InterferenceReport:
    """Same-orbit plus shifted co-planar interference at time ``t``."""
    return _two_orbit_report(
        s.orbit1, s.orbit2, s.phases_at(t), s.radio, s.constants, "shifted_coplanar"
    )


def other_orbit_profile(
    victim_orbit: OrbitSpec,
    other_orbit: OrbitSpec,
    times,
    radio: RadioConfig,
    constants: PhysicalConstants = EARTH,
) -> tuple[np.ndarray, np.ndarray]:
    """:func:`other_orbit_terms` for many instants, each orbit advancing at its own rate.

    Satellite 0 of each orbit sits at ``phase_offset + w * t``.

    Returns:
        (mask, power), each (T, N_other); power is 0 outside the interferer set.
    """
    ts = np.asarray(times, dtype=float).reshape(-1)
    w1 = angular_speed(victim_orbit.altitude, constants)
    w2 = angular_speed(other_orbit.altitude, constants)
    m1 = plane_to_gec(victim_orbit.raan, victim_orbit.inclination)
    m2 = plane_to_gec(other_orbit.raan, other_orbit.inclination)
    a1 = victim_orbit.semi_major_axis(constants)
    a2 = other_orbit.semi_major_axis(constants)

    def ring(phi, a, m):
        local = np.stack([a * np.cos(phi), a * np.sin(phi), np.zeros_like(phi)], axis=-1)
        return local @ m.T

    phi1 = victim_orbit.phase_offset + w1 * ts
    r_rx = ring(phi1, a1, m1)
    r_tx = ring(phi1 + 2.0 * math.pi / victim_orbit.num_satellites, a1, m1)
    n = other_orbit.num_satellites
    phi2 = other_orbit.phase_offset + w2 * ts[:, None] + 2.0 * math.pi * np.arange(n) / n
    r_j = ring(phi2, a2, m2)
    r_prev = np.roll(r_j, 1, axis=1)

    visible = ~blocked_mask(r_j, r_rx[:, None, :], constants.earth_radius)
    rx_to_j = r_j - r_rx[:, None, :]
    psi = _arccos_angle(rx_to_j, (r_tx - r_rx)[:, None, :])
    psi_p = _arccos_angle(r_prev - r_j, -rx_to_j)
    d2 = np.sum(rx_to_j * rx_to_j, axis=-1)
    mask = visible & in_beam(psi, radio.beamwidth) & in_beam(psi_p, radio.beamwidth) & (d2 > 0)
    g = main_lobe_gain(radio.pattern)
    scale = radio.tx_power * g * g * radio.wavelength**2 / (16.0 * math.pi**2)
    return mask, np.where(mask, scale / np.where(mask, d2, 1.0), 0.0)
