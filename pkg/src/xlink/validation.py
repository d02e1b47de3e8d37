"""Analytic against simulator equivalence checks.

Every scenario family is evaluated both ways on one time grid; interferer sets
must agree exactly and powers to ``POWER_RTOL``. Random configurations whose
geometry sits on a decision boundary (an angle within ``TIE_MARGIN`` of the
beam edge) are skipped, since there the two float paths may legitimately
round to opposite sides.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .orbital import LEO_MAX_ALTITUDE, LEO_MIN_ALTITUDE, orbital_period
from .radio import BEAM_EDGE_TOL, RadioConfig
from .scenarios import KINDS, ScenarioParams
from .simulator import _layout, _snapshot
from .sweeps import compare_series

POWER_RTOL = 1e-9
TIE_MARGIN = 1e-12


@dataclass(frozen=True)
class EquivalenceResult:
    name: str
    kind: str
    steps: int
    set_mismatches: int
    max_rel_deviation: float

    @property
    def passed(self) -> bool:
        return self.set_mismatches == 0 and self.max_rel_deviation <= POWER_RTOL


def check_grid(params: ScenarioParams, times, name: str = "") -> EquivalenceResult:
    """Compare analytic and simulated series on the instants ``times``."""
    ts = np.atleast_1d(np.asarray(times, dtype=float))
    analytic = params.analytic_series(ts)
    simulated = params.simulated_series(ts, workers=1)
    c = compare_series(analytic, simulated)
    return EquivalenceResult(name or params.kind, params.kind, c.steps, c.set_mismatches, c.max_rel_deviation)


def check_scenario(params: ScenarioParams, samples: int = 1000, name: str = "") -> EquivalenceResult:
    """Compare over one full period sampled at ``samples`` instants.

    Time-invariant single-orbit scenarios are sampled over one orbital period.
    """
    period = params.period() or orbital_period(params.altitude, params.constants)
    ts = params.t + (period / samples) * np.arange(samples)
    return check_grid(params, ts, name)


def _edge_margin(params: ScenarioParams, t: float) -> float:
    """Smallest distance of any beam-alignment angle at the victim from a beam edge."""
    cfg = params.simulation_config([t])
    layout = _layout(cfg)
    pos, tx_dir, rx_dir = _snapshot(layout, np.array([t]))
    pos, tx_dir = pos[0], tx_dir[0]
    rx, beam = pos[0], rx_dir[0, 0]
    tx_flat = 1 % int(layout.sizes[0])
    cand = np.array([i for i in range(len(pos)) if i not in (0, tx_flat)], dtype=int)
    if cand.size == 0:
        return math.inf
    to_c = pos[cand] - rx

    def angle(u, v):
        cross = np.cross(u, v)
        return np.arctan2(np.sqrt(np.sum(cross * cross, axis=-1)), np.sum(u * v, axis=-1))

    # both the geometric edge and the widened decision edge count as boundaries
    edges = (0.5 * params.radio.beamwidth, 0.5 * params.radio.beamwidth + BEAM_EDGE_TOL)
    psi = angle(np.broadcast_to(beam, to_c.shape), to_c)
    psi_p = angle(tx_dir[cand], -to_c)
    return float(min(np.min(np.abs(a - e)) for a in (psi, psi_p) for e in edges))


def is_boundary_tie(params: ScenarioParams, times) -> bool:
    return any(_edge_margin(params, float(t)) < TIE_MARGIN for t in np.atleast_1d(times))


def _other_altitude(rng, h, lo, hi, gap=0.0):
    """Altitude ``h + d`` with ``d`` in ``[lo, hi]``, ``|d| >= gap``, kept inside LEO."""
    lo, hi = max(lo, LEO_MIN_ALTITUDE - h), min(hi, LEO_MAX_ALTITUDE - h)
    while True:
        d = rng.uniform(lo, hi)
        if abs(d) >= gap:
            return h + d


def random_scenario(kind: str, rng: np.random.Generator, radio: RadioConfig) -> ScenarioParams:
    """A random configuration of one family within the supported domain.

    Beamwidths stay below 180 deg: the same-orbit count formula only covers
    interferers ahead of the transmitter, and wider beams reach round the ring.
    """
    deg = math.radians
    alpha = deg(rng.uniform(0.5, 179.0))
    r = radio.with_beamwidth(alpha)
    h = rng.uniform(500e3, 1900e3)
    base = dict(
        radio=r,
        altitude=h,
        phase_offset=rng.uniform(0, 2 * math.pi),
        t=rng.uniform(0, 20000.0),
    )
    if kind == "single":
        return ScenarioParams("single", num_satellites=int(rng.integers(2, 400)), **base)
    if kind == "coplanar":
        return ScenarioParams(
            "coplanar",
            num_satellites=int(rng.integers(2, 200)),
            other_num_satellites=int(rng.integers(2, 200)),
            other_altitude=_other_altitude(rng, h, 1e3, 400e3),
            delta_beta=rng.uniform(0, 2 * math.pi),
            victim=str(rng.choice(["lower", "upper"])),
            **base,
        )
    shifted_common = dict(
        num_satellites=int(rng.integers(2, 150)),
        other_num_satellites=int(rng.integers(2, 150)),
        inclination=deg(rng.uniform(1.0, 179.0)),
        raan=rng.uniform(0, 2 * math.pi),
        other_raan=rng.uniform(0, 2 * math.pi),
        delta_beta=rng.uniform(0, 2 * math.pi),
    )
    if kind == "shifted":
        return ScenarioParams("shifted", **shifted_common, **base)
    if kind == "shifted_coplanar":
        return ScenarioParams(
            "shifted_coplanar",
            other_altitude=_other_altitude(rng, h, -300e3, 300e3, gap=1e3),
            other_inclination=deg(rng.uniform(1.0, 179.0)),
            **shifted_common,
            **base,
        )
    return ScenarioParams(
        "combined",
        num_satellites=int(rng.integers(2, 60)),
        other_num_satellites=int(rng.integers(2, 60)),
        inclination=deg(rng.uniform(1.0, 179.0)),
        other_inclination=deg(rng.uniform(1.0, 179.0)),
        other_altitude=_other_altitude(rng, h, 0.0, 100e3),
        planes=int(rng.integers(1, 6)),
        delta_beta=rng.uniform(0, 2 * math.pi),
        **base,
    )


def random_suite(
    kind: str,
    count: int,
    radio: RadioConfig,
    seed: int = 0,
    instants: int = 3,
) -> Iterator[EquivalenceResult]:
    """``count`` random configurations of ``kind``, each checked at ``instants`` times.

    Boundary ties are redrawn, so exactly ``count`` results are produced.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    rng = np.random.default_rng(seed)
    produced = 0
    while produced < count:
        params = random_scenario(kind, rng, radio)
        period = params.period() or orbital_period(params.altitude, params.constants)
        ts = params.t + (period / instants) * np.arange(instants)
        if is_boundary_tie(params, ts):
            continue
        yield check_grid(params, ts, f"{kind}#{produced}")
        produced += 1
