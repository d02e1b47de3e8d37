"""Aggregate interference across a whole deployment of one or more constellations."""
from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from ..orbital import (
    EARTH,
    ConstellationSpec,
    OrbitSpec,
    PhysicalConstants,
    angular_speed,
    same_plane,
)
from ..radio import RadioConfig, noise_power
from .coplanar import CoplanarScenario, coplanar_interference_terms, coplanar_profile_terms
from .report import InterferenceReport, make_report
from .shifted import other_orbit_profile, other_orbit_terms
from .single import SingleOrbitScenario, single_expected_interference, single_signal_power

SOURCE_CLASSES = ("single", "shifted", "coplanar", "shifted_coplanar")


def flatten_orbits(constellations: Sequence[ConstellationSpec]) -> list[OrbitSpec]:
    """All orbits in deployment order; list position is the global orbit index."""
    return [o for c in constellations for o in c.orbits]


def classify_orbit(victim: OrbitSpec, other: OrbitSpec) -> str:
    """Source class of ``other`` as seen from a victim in ``victim``."""
    coplane = same_plane(victim, other)
    if victim.altitude == other.altitude:
        return "shifted"
    return "coplanar" if coplane else "shifted_coplanar"


def _anomaly(orbit: OrbitSpec, t: float, constants: PhysicalConstants) -> float:
    return orbit.phase_offset + angular_speed(orbit.altitude, constants) * t


def _in_plane_anomaly(orbit: OrbitSpec, t: float, constants: PhysicalConstants) -> float:
    # In an equatorial plane the RAAN only rotates the reference direction.
    phase = _anomaly(orbit, t, constants)
    if abs(math.sin(orbit.inclination)) <= 1e-12:
        phase += orbit.raan * math.cos(orbit.inclination)
    return phase


def _coplanar_setup(victim, other, radio, constants):
    lower, upper = (victim, other) if victim.altitude < other.altitude else (other, victim)
    s = CoplanarScenario(lower, upper, radio, "lower" if lower is victim else "upper", constants)
    return s, lower, upper


def _coplanar_terms(victim, other, t, radio, constants) -> dict[int, float]:
    s, lower, upper = _coplanar_setup(victim, other, radio, constants)
    delta_beta = _in_plane_anomaly(upper, t, constants) - _in_plane_anomaly(lower, t, constants)
    return coplanar_interference_terms(s, delta_beta)


def combined_deployment_report(
    constellations: Sequence[ConstellationSpec],
    radio: RadioConfig,
    t: float = 0.0,
    constants: PhysicalConstants = EARTH,
) -> InterferenceReport:
    """Interference at satellite 0 of the first orbit of the first constellation.

    Every other orbit is classified against the victim orbit: same altitude in
    another plane is ``shifted``, another altitude in the same plane is
    ``coplanar`` and another altitude in another plane is ``shifted_coplanar``.
    Contributions add up; ``breakdown`` holds the total per class and
    ``sources`` the class of each interferer id (global orbit index, satellite).
    """
    orbits = flatten_orbits(constellations)
    victim = orbits[0]
    own = SingleOrbitScenario(victim, radio, constants)
    ids = [(0, i) for i in range(2, own.interferer_count + 2)]
    sources = {sid: "single" for sid in ids}
    breakdown = dict.fromkeys(SOURCE_CLASSES, 0.0)
    breakdown["single"] = single_expected_interference(own)

    victim_phase = _anomaly(victim, t, constants)
    for k, other in enumerate(orbits[1:], start=1):
        label = classify_orbit(victim, other)
        if label == "coplanar":
            terms = _coplanar_terms(victim, other, t, radio, constants)
        else:
            terms = other_orbit_terms(
                victim, other, victim_phase, _anomaly(other, t, constants), radio, constants
            )
        for j in sorted(terms):
            ids.append((k, j))
            sources[(k, j)] = label
        breakdown[label] += float(sum(terms.values()))

    return make_report(
        single_signal_power(own),
        sum(breakdown.values()),
        noise_power(radio, constants),
        radio.bandwidth,
        ids,
        breakdown=breakdown,
        sources=sources,
    )


def combined_profile(
    constellations: Sequence[ConstellationSpec],
    radio: RadioConfig,
    times,
    constants: PhysicalConstants = EARTH,
):
    """Vectorised :func:`combined_deployment_report` over many instants.

    Returns:
        (signal, per_class, ids, sources): constant signal power (W), a dict of
        (T,) interference arrays per source class, a list of per-step id sets
        and the source class of every id that appears.
    """
    ts = np.asarray(times, dtype=float).reshape(-1)
    orbits = flatten_orbits(constellations)
    victim = orbits[0]
    own = SingleOrbitScenario(victim, radio, constants)
    own_ids = frozenset((0, i) for i in range(2, own.interferer_count + 2))
    per_class = {c: np.zeros(len(ts)) for c in SOURCE_CLASSES}
    per_class["single"][:] = single_expected_interference(own)
    step_ids = [set(own_ids) for _ in ts]
    sources = {sid: "single" for sid in own_ids}

    for k, other in enumerate(orbits[1:], start=1):
        label = classify_orbit(victim, other)
        if label == "coplanar":
            s, lower, upper = _coplanar_setup(victim, other, radio, constants)
            db = np.array(
                [_in_plane_anomaly(upper, t, constants) - _in_plane_anomaly(lower, t, constants) for t in ts]
            )
            mask, power = coplanar_profile_terms(s, db)
        else:
            mask, power = other_orbit_profile(victim, other, ts, radio, constants)
        per_class[label] += power.sum(axis=-1)
        for step, j in zip(*np.nonzero(mask)):
            step_ids[step].add((k, int(j)))
            sources[(k, int(j))] = label
    return single_signal_power(own), per_class, [frozenset(x) for x in step_ids], sources
