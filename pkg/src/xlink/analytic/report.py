from __future__ import annotations

import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping

from ..radio import capacity

SatId = tuple[int, int]


@dataclass(frozen=True)
class InterferenceReport:
    """Link metrics at the victim receiver.

    Attributes:
        interferer_ids: (orbit_index, sat_index) of every main-lobe interferer.
        expected_interference: Aggregate interference power E[I] (W).
        sir: Signal-to-interference ratio (linear); ``inf`` with no interference.
        sinr: Signal-to-interference-plus-noise ratio (linear).
        capacity: Shannon capacity (bit/s).
        signal_power: Received power of the wanted link (W).
        noise_power: Thermal noise kTB (W).
        bandwidth: Channel bandwidth (Hz).
        breakdown: Interference power per source class (W).
        sources: Source class of each interferer id.
    """

    interferer_ids: frozenset
    expected_interference: float
    sir: float
    sinr: float
    capacity: float
    signal_power: float
    noise_power: float
    bandwidth: float
    breakdown: Mapping[str, float] = field(default_factory=dict)
    sources: Mapping[SatId, str] = field(default_factory=dict, compare=False)

    @property
    def snr(self) -> float:
        return self.signal_power / self.noise_power

    @property
    def num_interferers(self) -> int:
        return len(self.interferer_ids)


def make_report(
    signal_power: float,
    interference: float,
    noise_power: float,
    bandwidth: float,
    interferer_ids: Iterable[SatId] = (),
    breakdown: Mapping[str, float] | None = None,
    sources: Mapping[SatId, str] | None = None,
) -> InterferenceReport:
    interference = float(interference)
    sir = signal_power / interference if interference > 0 else math.inf
    sinr = signal_power / (interference + noise_power)
    return InterferenceReport(
        interferer_ids=frozenset(interferer_ids),
        expected_interference=interference,
        sir=sir,
        sinr=sinr,
        capacity=capacity(bandwidth, sinr),
        signal_power=float(signal_power),
        noise_power=float(noise_power),
        bandwidth=float(bandwidth),
        breakdown=MappingProxyType(dict(breakdown or {})),
        sources=MappingProxyType(dict(sources or {})),
    )
