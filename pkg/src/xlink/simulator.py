"""Time-driven geometric simulator.

At every timestep all satellites are propagated along their circular orbits,
beam pointing is rebuilt from the true neighbour positions, and interferers
are found purely geometrically: not blocked by the Earth, and each of the
victim's receive beam and the candidate's transmit beam contains the other.
Nothing here uses the closed forms of :mod:`xlink.analytic`, which makes the
simulator an independent check on them.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .analytic.combined import classify_orbit
from .analytic.report import InterferenceReport, make_report
from .orbital import (
    EARTH,
    ConstellationSpec,
    GeometryError,
    OrbitSpec,
    PhysicalConstants,
    SatState,
    angular_speed,
    blocked_mask,
    max_offset_period,
    orbital_period,
    plane_to_gec,
)
from .parallel import ordered_map, worker_count
from .series import TimeSeries
from .radio import BEAM_EDGE_TOL, PatternKind, RadioConfig, main_lobe_gain, noise_power

MAX_STEPS = 10**8
DEFAULT_STEPS_PER_PERIOD = 10_000
# Upper bound on timesteps x satellites held in memory at once.
_CHUNK_CELLS = 1 << 20


class ResourceGuardError(RuntimeError):
    """A run would exceed the configured step budget."""


@dataclass(frozen=True)
class SimulationConfig:
    """One simulation run.

    Attributes:
        constellations: Deployment; orbits are indexed globally in order.
        radio: Link parameters shared by every satellite.
        t_start: First timestamp (s).
        t_end: Last timestamp (s), included when it falls on the grid.
        dt: Step (s). ``None`` picks :func:`default_dt`.
        victim: (constellation, orbit within it, satellite) of the receiver.
            Its transmitter is the next satellite in the same orbit.
    """

    constellations: tuple[ConstellationSpec, ...]
    radio: RadioConfig
    t_start: float = 0.0
    t_end: float | None = None
    dt: float | None = None
    victim: tuple[int, int, int] = (0, 0, 0)
    constants: PhysicalConstants = EARTH

    def __post_init__(self):
        cons = self.constellations
        if isinstance(cons, ConstellationSpec):
            cons = (cons,)
        object.__setattr__(self, "constellations", tuple(cons))
        if not self.constellations:
            raise GeometryError("need at least one constellation")
        c, o, s = self.victim
        if not 0 <= c < len(self.constellations):
            raise GeometryError(f"victim constellation {c} out of range")
        if not 0 <= o < len(self.constellations[c]):
            raise GeometryError(f"victim orbit {o} out of range")
        if not 0 <= s < self.constellations[c].orbits[o].num_satellites:
            raise GeometryError(f"victim satellite {s} out of range")
        if self.t_end is None:
            object.__setattr__(self, "t_end", self.t_start + scenario_period(self))
        if self.dt is None:
            object.__setattr__(self, "dt", default_dt(self))
        if not self.dt > 0:
            raise GeometryError("dt must be positive")
        if not self.t_end > self.t_start:
            raise GeometryError("t_end must be after t_start")

    @property
    def orbits(self) -> list[OrbitSpec]:
        return [o for c in self.constellations for o in c.orbits]

    @property
    def victim_orbit_index(self) -> int:
        c, o, _ = self.victim
        return sum(len(x) for x in self.constellations[:c]) + o

    @property
    def victim_id(self) -> tuple[int, int]:
        return (self.victim_orbit_index, self.victim[2])

    @property
    def transmitter_id(self) -> tuple[int, int]:
        k, s = self.victim_id
        return (k, (s + 1) % self.orbits[k].num_satellites)

    @property
    def num_steps(self) -> int:
        return int(math.floor((self.t_end - self.t_start) / self.dt + 1e-9)) + 1

    def timestamps(self) -> np.ndarray:
        return self.t_start + self.dt * np.arange(self.num_steps)


def scenario_period(config: SimulationConfig) -> float:
    """Repetition period seen by the victim.

    ``max_offset_period`` against the first orbit at a different altitude, or
    the victim's orbital period when every orbit shares its altitude.
    """
    orbits = config.orbits
    victim = orbits[config.victim_orbit_index]
    for other in orbits:
        if other.altitude != victim.altitude:
            return max_offset_period(
                victim.num_satellites,
                other.num_satellites,
                victim.altitude,
                other.altitude,
                config.constants,
            )
    return orbital_period(victim.altitude, config.constants)


def default_dt(config: SimulationConfig) -> float:
    return scenario_period(config) / DEFAULT_STEPS_PER_PERIOD


@dataclass(frozen=True)
class _Layout:
    """Static description of every satellite, flattened across orbits."""

    orbit_of: np.ndarray  # (S,) global orbit index
    sat_of: np.ndarray  # (S,) index within the orbit
    starts: np.ndarray  # (K,) first flat index of each orbit
    sizes: np.ndarray  # (K,)
    omegas: np.ndarray  # (K,)
    radii: np.ndarray  # (K,)
    phases: np.ndarray  # (K,)
    rotations: np.ndarray  # (K, 3, 3)


def _layout(config: SimulationConfig) -> _Layout:
    orbits = config.orbits
    sizes = np.array([o.num_satellites for o in orbits])
    starts = np.concatenate([[0], np.cumsum(sizes)[:-1]])
    return _Layout(
        orbit_of=np.repeat(np.arange(len(orbits)), sizes),
        sat_of=np.concatenate([np.arange(n) for n in sizes]),
        starts=starts,
        sizes=sizes,
        omegas=np.array([angular_speed(o.altitude, config.constants) for o in orbits]),
        radii=np.array([o.semi_major_axis(config.constants) for o in orbits]),
        phases=np.array([o.phase_offset for o in orbits]),
        rotations=np.stack([plane_to_gec(o.raan, o.inclination) for o in orbits]),
    )


def _unit(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def _snapshot(layout: _Layout, ts: np.ndarray):
    """Positions and beam directions of every satellite at each time in ``ts``.

    Returns:
        (pos, tx_dir, rx_dir), each (T, S, 3).
    """
    parts, tx_parts, rx_parts = [], [], []
    for k in range(len(layout.sizes)):
        n = int(layout.sizes[k])
        phi = layout.phases[k] + layout.omegas[k] * ts[:, None] + 2.0 * math.pi * np.arange(n) / n
        local = np.stack(
            [layout.radii[k] * np.cos(phi), layout.radii[k] * np.sin(phi), np.zeros_like(phi)],
            axis=-1,
        )
        pos = local @ layout.rotations[k].T
        parts.append(pos)
        tx_parts.append(_unit(np.roll(pos, 1, axis=1) - pos))  # toward j-1
        rx_parts.append(_unit(np.roll(pos, -1, axis=1) - pos))  # toward j+1
    return (
        np.concatenate(parts, axis=1),
        np.concatenate(tx_parts, axis=1),
        np.concatenate(rx_parts, axis=1),
    )


def propagate(config: SimulationConfig, t: float) -> list[SatState]:
    """States of every satellite at time ``t``, in global (orbit, satellite) order."""
    tol = 1e-9 * max(1.0, abs(config.t_end))
    if not config.t_start - tol <= t <= config.t_end + tol:
        raise GeometryError(f"t={t} outside [{config.t_start}, {config.t_end}]")
    layout = _layout(config)
    pos, tx, rx = _snapshot(layout, np.array([float(t)]))
    return [
        SatState(pos[0, i], tx[0, i], int(layout.orbit_of[i]), int(layout.sat_of[i]), rx[0, i])
        for i in range(pos.shape[1])
    ]


def _lookup(states: Sequence[SatState], sat_id) -> SatState:
    for s in states:
        if s.id == tuple(sat_id):
            return s
    raise GeometryError(f"satellite {sat_id} not present")


def _transmitter_of(states: Sequence[SatState], victim) -> tuple[int, int]:
    k, s = victim
    n = sum(1 for x in states if x.orbit_index == k)
    return (k, (s + 1) % n)


def _candidates(states, victim):
    tx_id = _transmitter_of(states, victim)
    return [s for s in states if s.id != tuple(victim) and s.id != tx_id]


def detect_interferers(
    states: Sequence[SatState],
    victim,
    alpha: float,
    constants: PhysicalConstants = EARTH,
) -> frozenset:
    """Ids of satellites in main-lobe alignment with the victim and not blocked by the Earth.

    The victim listens along its ``rx_pointing`` (toward its transmitter);
    every other satellite transmits along its ``pointing``.
    """
    rx = _lookup(states, victim)
    cands = _candidates(states, victim)
    if not cands:
        return frozenset()
    pos = np.stack([c.position for c in cands])[None]
    tx_dir = np.stack([c.pointing for c in cands])[None]
    mask, _ = kernels.interferer_mask(
        rx.position[None],
        rx.rx_pointing[None],
        pos,
        tx_dir,
        0.5 * alpha + BEAM_EDGE_TOL,
        constants.earth_radius,
    )
    return frozenset(c.id for c, m in zip(cands, mask[0]) if m)


def _sidelobe_interference(rx_pos, rx_dir, pos, tx_dir, radio, constants):
    """Interference from every visible candidate under a cone-plus-sphere pattern."""
    to_c = pos - rx_pos[:, None, :]
    d2 = np.sum(to_c * to_c, axis=-1)
    edge = 0.5 * radio.beamwidth + BEAM_EDGE_TOL

    def angle(u, v):
        cross = np.cross(u, v)
        return np.arctan2(np.sqrt(np.sum(cross * cross, axis=-1)), np.sum(u * v, axis=-1))

    g_main = main_lobe_gain(radio.pattern)
    g_side = radio.pattern.sidelobe_gain
    g_rx = np.where(angle(rx_dir[:, None, :], to_c) < edge, g_main, g_side)
    g_tx = np.where(angle(tx_dir, -to_c) < edge, g_main, g_side)
    visible = ~blocked_mask(pos, rx_pos[:, None, :], constants.earth_radius) & (d2 > 0)
    scale = radio.tx_power * radio.wavelength**2 / (16.0 * math.pi**2)
    return np.where(visible, scale * g_rx * g_tx / np.where(d2 > 0, d2, 1.0), 0.0)


def step_metrics(
    states: Sequence[SatState],
    victim,
    radio: RadioConfig,
    constants: PhysicalConstants = EARTH,
) -> InterferenceReport:
    """Instantaneous report at the victim from propagated states."""
    rx = _lookup(states, victim)
    tx = _lookup(states, _transmitter_of(states, victim))
    g = main_lobe_gain(radio.pattern)
    scale = radio.tx_power * g * g * radio.wavelength**2 / (16.0 * math.pi**2)
    d_sig = tx.position - rx.position
    signal = scale / float(np.dot(d_sig, d_sig))
    ids = detect_interferers(states, victim, radio.beamwidth, constants)
    cands = _candidates(states, victim)
    if radio.pattern.kind is PatternKind.CONE_SPHERE and cands:
        powers = _sidelobe_interference(
            rx.position[None],
            rx.rx_pointing[None],
            np.stack([c.position for c in cands])[None],
            np.stack([c.pointing for c in cands])[None],
            radio,
            constants,
        )[0]
        interference = float(powers.sum())
    else:
        interference = 0.0
        for c in cands:
            if c.id in ids:
                d = c.position - rx.position
                interference += scale / float(np.dot(d, d))
    return make_report(signal, interference, noise_power(radio, constants), radio.bandwidth, ids)


def _run_chunk(config: SimulationConfig, layout: _Layout, ts: np.ndarray):
    radio, constants = config.radio, config.constants
    pos, tx_dir, rx_dir = _snapshot(layout, ts)
    k, s = config.victim_id
    victim_flat = int(layout.starts[k]) + s
    tx_flat = int(layout.starts[k]) + (s + 1) % int(layout.sizes[k])
    keep = np.ones(pos.shape[1], dtype=bool)
    keep[[victim_flat, tx_flat]] = False
    cand = np.flatnonzero(keep)

    rx_pos = pos[:, victim_flat]
    rx_beam = rx_dir[:, victim_flat]
    g = main_lobe_gain(radio.pattern)
    scale = radio.tx_power * g * g * radio.wavelength**2 / (16.0 * math.pi**2)
    d_sig = pos[:, tx_flat] - rx_pos
    signal = scale / np.sum(d_sig * d_sig, axis=-1)

    c_pos = np.ascontiguousarray(pos[:, cand])
    c_tx = np.ascontiguousarray(tx_dir[:, cand])
    if cand.size:
        mask, dist2 = kernels.interferer_mask(
            np.ascontiguousarray(rx_pos),
            np.ascontiguousarray(rx_beam),
            c_pos,
            c_tx,
            0.5 * radio.beamwidth + BEAM_EDGE_TOL,
            constants.earth_radius,
        )
        if radio.pattern.kind is PatternKind.CONE_SPHERE:
            powers = _sidelobe_interference(rx_pos, rx_beam, c_pos, c_tx, radio, constants)
        else:
            powers = np.where(mask, scale / np.where(mask, dist2, 1.0), 0.0)
    else:
        mask = np.zeros((len(ts), 0), dtype=bool)
        powers = np.zeros((len(ts), 0))

    orbits = config.orbits
    victim_orbit = orbits[k]
    cand_orbit = layout.orbit_of[cand]
    labels = ["single" if i == k else classify_orbit(victim_orbit, o) for i, o in enumerate(orbits)]
    cand_label = np.array([labels[i] for i in cand_orbit], dtype=object)
    classes = sorted(set(labels))
    per_class = {c: np.sum(np.where(cand_label == c, powers, 0.0), axis=-1) for c in classes}
    totals = powers.sum(axis=-1)
    ids = []
    for step in range(len(ts)):
        members = cand[mask[step]]
        ids.append(frozenset((int(layout.orbit_of[i]), int(layout.sat_of[i])) for i in members))
    sources = {sid: labels[sid[0]] for step_ids in ids for sid in step_ids}
    return signal, totals, ids, per_class, sources


def run(config: SimulationConfig, workers: int | None = None) -> TimeSeries:
    """Step the whole deployment from ``t_start`` to ``t_end``.

    Deterministic: timesteps are independent and their results are merged in
    timestamp order, so the worker count never changes the output.

    Raises:
        ResourceGuardError: more than ``MAX_STEPS`` timesteps.
    """
    steps = config.num_steps
    if steps > MAX_STEPS:
        raise ResourceGuardError(f"{steps} timesteps exceed the limit of {MAX_STEPS}")
    layout = _layout(config)
    ts = config.timestamps()
    per_chunk = max(1, _CHUNK_CELLS // max(1, int(layout.sizes.sum())))
    chunks = [ts[i : i + per_chunk] for i in range(0, steps, per_chunk)]
    results = ordered_map(
        lambda c: _run_chunk(config, layout, c),
        chunks,
        worker_count() if workers is None else workers,
    )
    sources = {}
    for part in results:
        sources.update(part[4])
    classes = sorted({c for part in results for c in part[3]})
    return TimeSeries(
        ts,
        np.concatenate([part[0] for part in results]),
        np.concatenate([part[1] for part in results]),
        noise_power(config.radio, config.constants),
        config.radio.bandwidth,
        interferer_ids=tuple(x for part in results for x in part[2]),
        breakdown={c: np.concatenate([part[3][c] for part in results]) for c in classes},
        sources=sources,
        period=scenario_period(config),
        dt=config.dt,
    )
