"""Two rings sharing one orbital plane at different altitudes.

All geometry is 2-D in the orbital plane. The victim sits at the top of the
picture, A = (0, a_rx); a satellite at relative angle theta on radius a_int is
at a_int * (sin theta, cos theta). Relative angles grow toward the victim's
transmitter, which sits at +2*pi/N_rx.

The relative offset ``delta_beta`` is the angle of the upper ring's satellite 0
ahead of the lower ring's satellite 0. Seen from a lower victim the upper
satellites sit at ``delta_beta + 2*pi*j/N_C``; seen from an upper victim the
lower satellites sit at ``-delta_beta + 2*pi*i/N``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .. import kernels
from ..orbital import (
    EARTH,
    LEO_MAX_ALTITUDE,
    GeometryError,
    OrbitSpec,
    PhysicalConstants,
    max_offset_period,
    relative_angular_offset,
    same_plane,
)
from ..radio import BEAM_EDGE_TOL, RadioConfig, main_lobe_gain, noise_power
from .report import InterferenceReport, make_report
from .single import SingleOrbitScenario, single_expected_interference, single_signal_power

Victim = Literal["lower", "upper"]


@dataclass(frozen=True)
class CoplanarScenario:
    lower: OrbitSpec
    upper: OrbitSpec
    radio: RadioConfig
    victim: Victim = "lower"
    constants: PhysicalConstants = EARTH

    def __post_init__(self):
        if self.victim not in ("lower", "upper"):
            raise ValueError(f"victim must be 'lower' or 'upper', got {self.victim!r}")
        if not same_plane(self.lower, self.upper):
            raise GeometryError("co-planar orbits must share inclination and RAAN")
        if not self.upper.altitude > self.lower.altitude:
            raise GeometryError("the upper orbit must be strictly higher than the lower one")

    @property
    def victim_orbit(self) -> OrbitSpec:
        return self.lower if self.victim == "lower" else self.upper

    @property
    def interferer_orbit(self) -> OrbitSpec:
        return self.upper if self.victim == "lower" else self.lower

    @property
    def victim_orbit_index(self) -> int:
        return 0 if self.victim == "lower" else 1

    @property
    def interferer_orbit_index(self) -> int:
        return 1 - self.victim_orbit_index

    @property
    def r_rx(self) -> float:
        return self.victim_orbit.semi_major_axis(self.constants)

    @property
    def r_int(self) -> float:
        return self.interferer_orbit.semi_major_axis(self.constants)

    @property
    def period(self) -> float:
        """Repetition period of the interference pattern (s)."""
        return max_offset_period(
            self.lower.num_satellites,
            self.upper.num_satellites,
            self.lower.altitude,
            self.upper.altitude,
            self.constants,
        )

    def delta_beta_at(self, t: float) -> float:
        return relative_angular_offset(
            self.upper.altitude,
            self.lower.altitude,
            t,
            self.upper.phase_offset - self.lower.phase_offset,
            self.constants,
        )

    def relative_angles(self, delta_beta: float) -> np.ndarray:
        n = self.interferer_orbit.num_satellites
        sign = 1.0 if self.victim == "lower" else -1.0
        return sign * delta_beta + 2.0 * math.pi * np.arange(n) / n

    def with_upper_altitude(self, altitude: float) -> "CoplanarScenario":
        return CoplanarScenario(
            self.lower, self.upper.with_(altitude=altitude), self.radio, self.victim, self.constants
        )


def _relative_angle(j: int, s: CoplanarScenario, delta_beta: float) -> float:
    n = s.interferer_orbit.num_satellites
    if not 0 <= j < n:
        raise GeometryError(f"satellite index {j} out of range for {n} satellites")
    return float(s.relative_angles(delta_beta)[j])


def coplanar_psi(j: int, s: CoplanarScenario, delta_beta: float) -> float:
    """Signed angle between the victim's boresight and the direction to satellite j.

    Full-quadrant arctangent of (cross, dot) of the boresight and the A->B
    vector, with A->B = (a_int sin O, a_int cos O - a_rx).
    """
    o = _relative_angle(j, s, delta_beta)
    a_rx, a_int = s.r_rx, s.r_int
    half = math.pi / s.victim_orbit.num_satellites
    ab_x = a_int * math.sin(o)
    ab_y = a_int * math.cos(o) - a_rx
    if ab_x == 0.0 and ab_y == 0.0:
        raise GeometryError("interferer coincides with the receiver")
    num = ab_y * math.cos(half) + ab_x * math.sin(half)
    den = ab_x * math.cos(half) - ab_y * math.sin(half)
    return math.atan2(num, den)


def coplanar_psi_prime(j: int, s: CoplanarScenario, delta_beta: float) -> float:
    """Angle at satellite j between its transmit boresight and the victim."""
    o = _relative_angle(j, s, delta_beta)
    n = s.interferer_orbit.num_satellites
    o_prev = o - 2.0 * math.pi / n  # neighbour j-1, wrapping at j = 0
    a_rx, a_int = s.r_rx, s.r_int
    b = np.array([a_int * math.sin(o), a_int * math.cos(o)])
    d = np.array([a_int * math.sin(o_prev), a_int * math.cos(o_prev)])
    a = np.array([0.0, a_rx])
    bd, ba = d - b, a - b
    norm = float(np.linalg.norm(bd) * np.linalg.norm(ba))
    if norm == 0.0:
        raise GeometryError("interferer coincides with the receiver")
    return math.acos(max(-1.0, min(1.0, float(np.dot(bd, ba)) / norm)))


def coplanar_distance(j: int, s: CoplanarScenario, delta_beta: float) -> float:
    o = _relative_angle(j, s, delta_beta)
    a_rx, a_int = s.r_rx, s.r_int
    return math.sqrt(a_int**2 * math.sin(o) ** 2 + (a_int * math.cos(o) - a_rx) ** 2)


def _beam_edge(s: CoplanarScenario) -> float:
    return 0.5 * s.radio.beamwidth + BEAM_EDGE_TOL


def _evaluate(s: CoplanarScenario, theta: np.ndarray):
    return kernels.coplanar_mask(
        theta,
        s.r_rx,
        s.r_int,
        s.victim_orbit.num_satellites,
        s.interferer_orbit.num_satellites,
        _beam_edge(s),
        s.constants.earth_radius,
    )


def coplanar_interferer_set(s: CoplanarScenario, delta_beta: float) -> frozenset:
    """Indices j of the other ring passing the horizon test and both beam tests."""
    mask = _evaluate(s, s.relative_angles(delta_beta))[0]
    return frozenset(int(j) for j in np.flatnonzero(mask))


def _pair_gain_scale(s: CoplanarScenario) -> float:
    g = main_lobe_gain(s.radio.pattern)
    return s.radio.tx_power * g * g * s.radio.wavelength**2 / (16.0 * math.pi**2)


def coplanar_interference_terms(s: CoplanarScenario, delta_beta: float) -> dict[int, float]:
    """Received power from each cross-orbit interferer, keyed by its index (W)."""
    mask, dist2, _, _ = _evaluate(s, s.relative_angles(delta_beta))
    scale = _pair_gain_scale(s)
    return {int(j): scale / float(dist2[j]) for j in np.flatnonzero(mask)}


def coplanar_expected_interference(s: CoplanarScenario, delta_beta: float) -> float:
    """Cross-orbit interference at the victim (W): E[I2] or, for an upper victim, E[I2c]."""
    return float(sum(coplanar_interference_terms(s, delta_beta).values()))


def coplanar_profile_terms(s: CoplanarScenario, delta_betas) -> tuple[np.ndarray, np.ndarray]:
    """Membership and received power of every cross-orbit satellite for many offsets.

    Returns:
        (mask, power), each shaped ``delta_betas.shape + (N_int,)``; power is 0
        outside the interferer set.
    """
    db = np.asarray(delta_betas, dtype=float)
    n = s.interferer_orbit.num_satellites
    sign = 1.0 if s.victim == "lower" else -1.0
    theta = sign * db[..., None] + 2.0 * math.pi * np.arange(n) / n
    mask, dist2, _, _ = _evaluate(s, theta)
    power = np.where(mask, _pair_gain_scale(s) / np.where(mask, dist2, 1.0), 0.0)
    return mask, power


def coplanar_profile(s: CoplanarScenario, delta_betas) -> np.ndarray:
    """Cross-orbit interference for many offsets at once (W)."""
    return coplanar_profile_terms(s, delta_betas)[1].sum(axis=-1)


def coplanar_report(s: CoplanarScenario, delta_beta: float) -> InterferenceReport:
    """Same-orbit plus cross-orbit interference at the victim for one offset."""
    own = SingleOrbitScenario(s.victim_orbit, s.radio, s.constants)
    vi, ii = s.victim_orbit_index, s.interferer_orbit_index
    own_ids = [(vi, i) for i in range(2, own.interferer_count + 2)]
    cross = coplanar_interference_terms(s, delta_beta)
    cross_ids = [(ii, j) for j in sorted(cross)]
    i_own = single_expected_interference(own)
    i_cross = float(sum(cross.values()))
    sources = {sid: "single" for sid in own_ids}
    sources.update({sid: "coplanar" for sid in cross_ids})
    return make_report(
        single_signal_power(own),
        i_own + i_cross,
        noise_power(s.radio, s.constants),
        s.radio.bandwidth,
        own_ids + cross_ids,
        breakdown={"single": i_own, "coplanar": i_cross},
        sources=sources,
    )


coplanar_sir_sinr = coplanar_report


def coplanar_report_at(s: CoplanarScenario, t: float) -> InterferenceReport:
    return coplanar_report(s, s.delta_beta_at(t))


def _worst_case_angles(s: CoplanarScenario) -> list[float]:
    """Relative angles putting an interferer on the victim's boresight, or the
    victim on an interferer's boresight."""
    a_rx, a_int = s.r_rx, s.r_int
    n_rx = s.victim_orbit.num_satellites
    step = 2.0 * math.pi / s.interferer_orbit.num_satellites
    out = []
    half = math.pi / n_rx
    disc = a_int**2 - (a_rx * math.cos(half)) ** 2
    if disc >= 0:
        for root in (a_rx * math.sin(half) + math.sqrt(disc), a_rx * math.sin(half) - math.sqrt(disc)):
            if root > 0:
                px = root * math.cos(half)
                py = a_rx - root * math.sin(half)
                out.append(math.atan2(px, py))
    p = a_int * math.cos(0.5 * step)
    if p <= a_rx:
        off = math.acos(p / a_rx)
        out.extend([0.5 * step - off, 0.5 * step + off])
    return out


def is_isolated(s: CoplanarScenario, grid: int = 10_000) -> bool:
    """True if no relative phase produces a cross-orbit interferer.

    Offsets are sampled on ``grid`` points across one inter-satellite gap of the
    interfering ring (covering every phase once all satellites are included),
    plus the analytic worst-case phases.
    """
    n_int = s.interferer_orbit.num_satellites
    gap = 2.0 * math.pi / n_int
    theta = (np.arange(grid)[:, None] * (gap / grid) + gap * np.arange(n_int)[None, :]).ravel()
    theta = np.concatenate([theta, np.asarray(_worst_case_angles(s), dtype=float)])
    return not kernels.coplanar_any(
        theta,
        s.r_rx,
        s.r_int,
        s.victim_orbit.num_satellites,
        n_int,
        _beam_edge(s),
        s.constants.earth_radius,
    )


def min_isolation_altitude(
    s: CoplanarScenario,
    grid: int = 10_000,
    tol: float = 1.0,
    max_altitude: float = LEO_MAX_ALTITUDE,
) -> float:
    """Lowest upper-orbit altitude h_C* that isolates the victim from the other ring.

    Bisection on the upper altitude down to ``tol`` metres between the lower
    altitude and ``max_altitude``. Returns ``inf`` if even ``max_altitude``
    leaves an interferer for some phase.
    """
    lo = s.lower.altitude
    hi = max_altitude
    if not is_isolated(s.with_upper_altitude(hi), grid):
        return math.inf
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if is_isolated(s.with_upper_altitude(mid), grid):
            hi = mid
        else:
            lo = mid
    return hi
