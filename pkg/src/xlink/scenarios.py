"""Scenario descriptions shared by sweeps, the CLI and the equivalence suite.

A :class:`ScenarioParams` names one of the orbit families and carries every
parameter a sweep axis can vary. It builds the matching constellations with
the victim's orbit first, so analytic and simulated interferer ids line up.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Literal

import numpy as np

from .analytic.combined import combined_profile
from .orbital import (
    EARTH,
    ConstellationSpec,
    GeometryError,
    OrbitSpec,
    PhysicalConstants,
    max_offset_period,
    orbital_period,
)
from .radio import RadioConfig, noise_power
from .series import TimeSeries
from .simulator import SimulationConfig
from .simulator import run as simulate

Kind = Literal["single", "coplanar", "shifted", "shifted_coplanar", "combined"]
KINDS = ("single", "coplanar", "shifted", "shifted_coplanar", "combined")

# Bound on samples x satellites evaluated in one vectorised block.
_BLOCK_CELLS = 1 << 20


@dataclass(frozen=True)
class ScenarioParams:
    """Parameters of one scenario family.

    Attributes:
        kind: Orbit family.
        radio: Link parameters.
        altitude: Victim orbit altitude (m).
        num_satellites: Satellites in the victim orbit (per plane for ``combined``).
        inclination: Victim orbit inclination (rad).
        raan: Victim orbit RAAN (rad).
        phase_offset: Anomaly of the victim orbit's satellite 0 at t = 0 (rad);
            for co-planar scenarios always the lower orbit's.
        other_altitude: Altitude of the co-planar / shifted co-planar orbit or
            second constellation (m).
        other_num_satellites: Satellites in the other orbit; ``None`` ties it to
            ``num_satellites``.
        other_inclination: Inclination of the other orbit; ``None`` ties it to
            ``inclination``.
        other_raan: RAAN of the other orbit for shifted families (rad).
        delta_beta: Lead of the other orbit's satellite 0 at t = 0 (rad); for
            co-planar scenarios the upper orbit's lead over the lower.
        victim: ``"lower"`` or ``"upper"`` for the co-planar family.
        planes: Planes per Walker shell for ``combined``.
        t: Evaluation instant for instantaneous metrics (s).
    """

    kind: Kind
    radio: RadioConfig
    altitude: float = 500e3
    num_satellites: int = 100
    inclination: float = 0.0
    raan: float = 0.0
    phase_offset: float = 0.0
    other_altitude: float = 510e3
    other_num_satellites: int | None = None
    other_inclination: float | None = None
    other_raan: float = math.pi / 2
    delta_beta: float = 0.0
    victim: Literal["lower", "upper"] = "lower"
    planes: int = 10
    t: float = 0.0
    constants: PhysicalConstants = EARTH

    def __post_init__(self):
        if self.kind not in KINDS:
            raise GeometryError(f"unknown scenario kind {self.kind!r}; expected one of {KINDS}")
        if self.victim not in ("lower", "upper"):
            raise GeometryError(f"victim must be 'lower' or 'upper', got {self.victim!r}")
        if self.kind == "coplanar" and not self.other_altitude > self.altitude:
            raise GeometryError("co-planar scenarios need other_altitude above altitude")
        if self.kind == "shifted_coplanar" and self.other_altitude == self.altitude:
            raise GeometryError("shifted co-planar scenarios need a different other_altitude")
        if self.planes < 1:
            raise GeometryError("planes must be >= 1")

    def with_(self, **changes) -> "ScenarioParams":
        return replace(self, **changes)

    @property
    def n_other(self) -> int:
        return self.num_satellites if self.other_num_satellites is None else self.other_num_satellites

    @property
    def gamma_other(self) -> float:
        return self.inclination if self.other_inclination is None else self.other_inclination

    def _victim_orbit(self) -> OrbitSpec:
        return OrbitSpec(
            self.altitude, self.inclination, self.raan, self.num_satellites, self.phase_offset
        )

    def constellations(self) -> tuple[ConstellationSpec, ...]:
        """Deployment with the victim at orbit 0, satellite 0."""
        mine = self._victim_orbit()
        other_phase = self.phase_offset + self.delta_beta
        if self.kind == "single":
            return (ConstellationSpec((mine,)),)
        if self.kind == "coplanar":
            upper = OrbitSpec(
                self.other_altitude, self.inclination, self.raan, self.n_other, other_phase
            )
            if self.victim == "lower":
                return (ConstellationSpec((mine, upper)),)
            # The victim rides the upper orbit; keep it first.
            return (ConstellationSpec((upper, mine)),)
        if self.kind in ("shifted", "shifted_coplanar"):
            h = self.altitude if self.kind == "shifted" else self.other_altitude
            other = OrbitSpec(h, self.gamma_other, self.other_raan, self.n_other, other_phase)
            return (ConstellationSpec((mine,)), ConstellationSpec((other,)))
        first = ConstellationSpec.walker(
            self.planes, self.num_satellites, self.altitude, self.inclination,
            raan0=self.raan, phase0=self.phase_offset,
        )
        second = ConstellationSpec.walker(
            self.planes, self.n_other, self.other_altitude, self.gamma_other,
            raan0=self.raan, phase0=other_phase,
        )
        return (first, second)

    def period(self) -> float | None:
        """Averaging window: the offset period for two altitudes, else one orbit.

        ``None`` for the time-invariant single-orbit family.
        """
        if self.kind == "single":
            return None
        if self.kind == "shifted" or self.other_altitude == self.altitude:
            return orbital_period(self.altitude, self.constants)
        return max_offset_period(
            self.num_satellites, self.n_other, self.altitude, self.other_altitude, self.constants
        )

    def time_grid(self, samples: int, t0: float | None = None) -> np.ndarray:
        """``samples`` evenly spaced instants covering one period, end excluded."""
        start = self.t if t0 is None else t0
        period = self.period()
        if period is None:
            return np.array([start])
        return start + (period / samples) * np.arange(samples)

    def analytic_series(self, times) -> TimeSeries:
        """Closed-form metrics at each instant in ``times``."""
        ts = np.atleast_1d(np.asarray(times, dtype=float))
        cons = self.constellations()
        total_sats = sum(c.num_satellites for c in cons)
        block = max(1, _BLOCK_CELLS // max(1, total_sats))
        per_class: dict[str, list[np.ndarray]] = {}
        ids: list[frozenset] = []
        sources: dict = {}
        signal = 0.0
        for i in range(0, len(ts), block):
            signal, pc, step_ids, src = combined_profile(cons, self.radio, ts[i : i + block], self.constants)
            for k, v in pc.items():
                per_class.setdefault(k, []).append(v)
            ids.extend(step_ids)
            sources.update(src)
        breakdown = {k: np.concatenate(v) for k, v in per_class.items()}
        dt = float(ts[1] - ts[0]) if len(ts) > 1 else None
        return TimeSeries(
            ts,
            np.full(len(ts), signal),
            sum(breakdown.values()),
            noise_power(self.radio, self.constants),
            self.radio.bandwidth,
            interferer_ids=tuple(ids),
            breakdown=breakdown,
            sources=sources,
            period=self.period(),
            dt=dt,
        )

    def simulation_config(self, times) -> SimulationConfig:
        """Simulator run on the uniform grid ``times`` (one or more instants)."""
        ts = np.atleast_1d(np.asarray(times, dtype=float))
        if len(ts) == 1:
            dt = 1.0
            t_end = ts[0] + 0.5
        else:
            dt = float(ts[1] - ts[0])
            t_end = float(ts[-1])
        return SimulationConfig(
            self.constellations(), self.radio, float(ts[0]), t_end, dt, (0, 0, 0), self.constants
        )

    def simulated_series(self, times, workers: int | None = None) -> TimeSeries:
        series = simulate(self.simulation_config(times), workers=workers)
        return replace(series, period=self.period())
