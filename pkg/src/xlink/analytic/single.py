"""Same-orbit interference: closed forms for one ring of N evenly spaced satellites.

Satellite 1 transmits to satellite 0 (the victim); every satellite i beams at
its neighbour i-1, so the satellites 2, 3, ... ahead of the transmitter are the
candidate interferers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..orbital import EARTH, OrbitSpec, PhysicalConstants, horizon_half_angle
from ..radio import BEAM_EDGE_TOL, RadioConfig, main_lobe_gain, noise_power
from .report import InterferenceReport, make_report

# Line-of-sight ties (a grazing path) count as visible.
_FLOOR_TOL = 1e-9


@dataclass(frozen=True)
class SingleOrbitScenario:
    orbit: OrbitSpec
    radio: RadioConfig
    constants: PhysicalConstants = EARTH

    @property
    def interferer_count(self) -> int:
        return single_interferer_count(
            self.orbit.num_satellites, self.orbit.altitude, self.radio.beamwidth, self.constants
        )


def single_interferer_count(
    n: int, altitude: float, alpha: float, constants: PhysicalConstants = EARTH
) -> int:
    """Number of same-orbit satellites in mutual line of sight and beam alignment.

    ``floor(min(N/pi * acos(R_E/(R_E+h)), 1 + N*alpha/(2*pi))) - 1``, clamped at 0.
    The beam term widens the half beamwidth by the same edge tolerance as
    :func:`xlink.radio.in_beam`, so a satellite exactly on the edge counts.
    """
    if n < 2:
        raise ValueError("need at least two satellites")
    los = n / math.pi * horizon_half_angle(altitude, constants) + _FLOOR_TOL
    beam = 1.0 + n * (0.5 * alpha + BEAM_EDGE_TOL) / math.pi
    return max(0, math.floor(min(los, beam)) - 1)


def single_link_distance(
    i: int, n: int, altitude: float, constants: PhysicalConstants = EARTH
) -> float:
    """Chord length between satellite 0 and satellite i of an N-satellite ring."""
    if not 1 <= i <= n - 1:
        raise ValueError(f"index {i} outside [1, {n - 1}]")
    a = constants.earth_radius + altitude
    return math.sqrt(2.0) * a * math.sqrt(1.0 - math.cos(2.0 * math.pi * i / n))


def _chord_factors(n: int, count: int) -> np.ndarray:
    i = np.arange(2, count + 2)
    return 1.0 - np.cos(2.0 * math.pi * i / n)


def _link_scale(s: SingleOrbitScenario) -> float:
    """P_tx G^2 lambda^2 / (32 pi^2 a^2): received power times (1 - cos(2 pi i / N))."""
    g = main_lobe_gain(s.radio.pattern)
    a = s.orbit.semi_major_axis(s.constants)
    return s.radio.tx_power * g * g * s.radio.wavelength**2 / (32.0 * math.pi**2 * a * a)


def single_interference_terms(s: SingleOrbitScenario) -> np.ndarray:
    """Power received from each interferer i = 2 .. N1+1 (W)."""
    return _link_scale(s) / _chord_factors(s.orbit.num_satellites, s.interferer_count)


def single_expected_interference(s: SingleOrbitScenario) -> float:
    return float(np.sum(single_interference_terms(s)))


def single_signal_power(s: SingleOrbitScenario) -> float:
    return _link_scale(s) / (1.0 - math.cos(2.0 * math.pi / s.orbit.num_satellites))


def single_sir(
    n: int, altitude: float, alpha: float, constants: PhysicalConstants = EARTH
) -> float:
    """Same-orbit SIR; depends on altitude only through the line-of-sight limit."""
    count = single_interferer_count(n, altitude, alpha, constants)
    if count == 0:
        return math.inf
    signal = 1.0 / (1.0 - math.cos(2.0 * math.pi / n))
    return float(signal / np.sum(1.0 / _chord_factors(n, count)))


def single_sinr(s: SingleOrbitScenario) -> float:
    return single_report(s).sinr


def single_report(s: SingleOrbitScenario, orbit_index: int = 0) -> InterferenceReport:
    count = s.interferer_count
    ids = [(orbit_index, i) for i in range(2, count + 2)]
    interference = single_expected_interference(s)
    return make_report(
        single_signal_power(s),
        interference,
        noise_power(s.radio, s.constants),
        s.radio.bandwidth,
        ids,
        breakdown={"single": interference},
        sources={sid: "single" for sid in ids},
    )


def sir_asymptote() -> float:
    """Large-N limit of the same-orbit SIR: ``1 / (pi^2/6 - 1)``."""
    return 1.0 / (math.pi**2 / 6.0 - 1.0)


def optimal_satellite_count(
    altitude: float, alpha: float, constants: PhysicalConstants = EARTH
) -> int:
    """Largest satellite count per orbit that keeps the same-orbit interferer set empty."""
    bound = max(2.0 * math.pi / alpha, 2.0 * math.pi / horizon_half_angle(altitude, constants))
    n = max(2, math.ceil(bound))
    while n > 2 and single_interferer_count(n, altitude, alpha, constants) > 0:
        n -= 1
    while single_interferer_count(n + 1, altitude, alpha, constants) == 0:
        n += 1
    return n
