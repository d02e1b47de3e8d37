"""Time series of link metrics, stored as arrays with per-step reports built on demand."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import Mapping, Sequence

import numpy as np

from .analytic.report import InterferenceReport, make_report
from .radio import capacity


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """Per-step link metrics in timestamp order.

    Attributes:
        timestamps: Strictly increasing sample times (s).
        signal: Wanted-link received power per step (W).
        interference: Aggregate interference per step (W).
        noise_power: Thermal noise (W).
        bandwidth: Channel bandwidth (Hz).
        interferer_ids: Optional per-step interferer id sets.
        breakdown: Optional per-class interference arrays (W).
        sources: Source class of each interferer id that ever appears.
        period: Repetition period of the scenario (s), if it has one.
        dt: Sampling step (s).
    """

    timestamps: np.ndarray
    signal: np.ndarray
    interference: np.ndarray
    noise_power: float
    bandwidth: float
    interferer_ids: tuple[frozenset, ...] | None = None
    breakdown: Mapping[str, np.ndarray] = field(default_factory=dict)
    sources: Mapping[tuple[int, int], str] = field(default_factory=dict)
    period: float | None = None
    dt: float | None = None

    def __post_init__(self):
        ts = np.asarray(self.timestamps, dtype=float)
        n = len(ts)
        sig = np.broadcast_to(np.asarray(self.signal, dtype=float), (n,)).copy()
        itf = np.asarray(self.interference, dtype=float)
        if itf.shape != (n,) or sig.shape != (n,):
            raise ValueError("timestamps, signal and interference differ in length")
        if n > 1 and not np.all(np.diff(ts) > 0):
            raise ValueError("timestamps must be strictly increasing")
        object.__setattr__(self, "timestamps", ts)
        object.__setattr__(self, "signal", sig)
        object.__setattr__(self, "interference", itf)
        if self.interferer_ids is not None:
            ids = tuple(frozenset(x) for x in self.interferer_ids)
            if len(ids) != n:
                raise ValueError("interferer_ids differ in length from timestamps")
            object.__setattr__(self, "interferer_ids", ids)
        object.__setattr__(
            self,
            "breakdown",
            MappingProxyType({k: np.asarray(v, dtype=float) for k, v in self.breakdown.items()}),
        )
        object.__setattr__(self, "sources", MappingProxyType(dict(self.sources)))
        if self.dt is None and n > 1:
            object.__setattr__(self, "dt", float(ts[1] - ts[0]))

    @classmethod
    def from_reports(
        cls,
        timestamps: Sequence[float],
        reports: Sequence[InterferenceReport],
        period: float | None = None,
        dt: float | None = None,
    ) -> "TimeSeries":
        reports = list(reports)
        if len(reports) != len(timestamps):
            raise ValueError("timestamps and reports differ in length")
        keys = sorted({k for r in reports for k in r.breakdown})
        sources = {}
        for r in reports:
            sources.update(r.sources)
        return cls(
            timestamps,
            np.array([r.signal_power for r in reports]),
            np.array([r.expected_interference for r in reports]),
            reports[0].noise_power if reports else 0.0,
            reports[0].bandwidth if reports else 0.0,
            interferer_ids=tuple(r.interferer_ids for r in reports),
            breakdown={k: np.array([r.breakdown.get(k, 0.0) for r in reports]) for k in keys},
            sources=sources,
            period=period,
            dt=dt,
        )

    def __len__(self) -> int:
        return len(self.timestamps)

    @cached_property
    def sir(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return np.where(self.interference > 0, self.signal / np.where(self.interference > 0, self.interference, 1.0), np.inf)

    @cached_property
    def sinr(self) -> np.ndarray:
        return self.signal / (self.interference + self.noise_power)

    @cached_property
    def capacity(self) -> np.ndarray:
        return np.asarray(capacity(self.bandwidth, self.sinr), dtype=float).reshape(-1)

    def report(self, i: int) -> InterferenceReport:
        ids = self.interferer_ids[i] if self.interferer_ids is not None else ()
        return make_report(
            float(self.signal[i]),
            float(self.interference[i]),
            self.noise_power,
            self.bandwidth,
            ids,
            breakdown={k: float(v[i]) for k, v in self.breakdown.items()},
            sources={sid: self.sources[sid] for sid in ids if sid in self.sources},
        )

    @cached_property
    def reports(self) -> tuple[InterferenceReport, ...]:
        return tuple(self.report(i) for i in range(len(self)))

    @property
    def span(self) -> float:
        """Time covered, counting each sample as one step long."""
        if len(self) == 0:
            return 0.0
        return float(self.timestamps[-1] - self.timestamps[0]) + (self.dt or 0.0)

    def window(self, start: int, stop: int) -> "TimeSeries":
        """Samples ``start:stop`` as a new series."""
        sl = slice(start, stop)
        return TimeSeries(
            self.timestamps[sl],
            self.signal[sl],
            self.interference[sl],
            self.noise_power,
            self.bandwidth,
            interferer_ids=None if self.interferer_ids is None else self.interferer_ids[sl],
            breakdown={k: v[sl] for k, v in self.breakdown.items()},
            sources=self.sources,
            period=self.period,
            dt=self.dt,
        )
