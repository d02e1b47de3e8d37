"""Parameter sweeps, time averaging and interference distributions."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np

from .analytic.report import InterferenceReport, make_report
from .parallel import ordered_map
from .radio import watts_to_dbm
from .scenarios import ScenarioParams
from .series import TimeSeries

Axis = Literal["N", "alpha", "delta_h", "time", "gamma"]
Metric = Literal["E_I", "SIR", "SINR", "capacity"]
Averaging = Literal["instant", "time_mean", "histogram"]

AXES = ("N", "alpha", "delta_h", "time", "gamma")
METRICS = ("E_I", "SIR", "SINR", "capacity")
AVERAGINGS = ("instant", "time_mean", "histogram")

_AXIS_KINDS = {
    "N": {"single", "coplanar", "shifted", "shifted_coplanar", "combined"},
    "alpha": {"single", "coplanar", "shifted", "shifted_coplanar", "combined"},
    "delta_h": {"coplanar", "shifted_coplanar", "combined"},
    "time": {"single", "coplanar", "shifted", "shifted_coplanar", "combined"},
    "gamma": {"shifted", "shifted_coplanar", "combined"},
}


class SweepError(ValueError):
    """Inconsistent sweep specification."""


@dataclass(frozen=True)
class SweepSpec:
    """A one-dimensional sweep over a scenario.

    Attributes:
        scenario: Base scenario; the axis overrides one of its parameters.
        axis: Parameter to vary. ``alpha`` and ``gamma`` values are in radians,
            ``delta_h`` in metres above ``scenario.altitude``, ``time`` in seconds.
        values: Strictly monotone axis values.
        metric: Headline metric of the result table.
        averaging: ``instant`` evaluates at ``scenario.t`` (or the swept time);
            ``time_mean`` and ``histogram`` cover one scenario period.
        samples: Instants per period for time averaging.
        bins: Histogram bins.
    """

    scenario: ScenarioParams
    axis: Axis
    values: tuple[float, ...]
    metric: Metric = "SINR"
    averaging: Averaging = "instant"
    samples: int = 1000
    bins: int = 50

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if self.axis not in AXES:
            raise SweepError(f"unknown axis {self.axis!r}; expected one of {AXES}")
        if self.metric not in METRICS:
            raise SweepError(f"unknown metric {self.metric!r}; expected one of {METRICS}")
        if self.averaging not in AVERAGINGS:
            raise SweepError(f"unknown averaging {self.averaging!r}; expected one of {AVERAGINGS}")
        if not self.values:
            raise SweepError("sweep values must be nonempty")
        diffs = np.diff(self.values)
        if len(diffs) and not (np.all(diffs > 0) or np.all(diffs < 0)):
            raise SweepError("sweep values must be strictly monotone")
        if self.scenario.kind not in _AXIS_KINDS[self.axis]:
            raise SweepError(f"axis {self.axis!r} does not apply to a {self.scenario.kind} scenario")
        if self.axis == "time" and self.averaging != "instant":
            raise SweepError("a time axis needs instant averaging")
        if self.axis == "N" and any(v != int(v) or v < 2 for v in self.values):
            raise SweepError("N values must be integers >= 2")
        if self.axis == "delta_h" and self.scenario.kind == "coplanar" and min(self.values) <= 0:
            raise SweepError("co-planar delta_h values must be positive")
        if self.samples < 1:
            raise SweepError("samples must be >= 1")
        if self.bins < 2:
            raise SweepError("bins must be >= 2")

    def point(self, value: float) -> ScenarioParams:
        """The scenario at one axis value."""
        s = self.scenario
        if self.axis == "N":
            return s.with_(num_satellites=int(value))
        if self.axis == "alpha":
            return s.with_(radio=s.radio.with_beamwidth(value))
        if self.axis == "delta_h":
            return s.with_(other_altitude=s.altitude + value)
        if self.axis == "gamma":
            return s.with_(inclination=value)
        return s.with_(t=value)


@dataclass(frozen=True)
class Histogram:
    """Probability density of instantaneous interference over uniform time.

    Bins are uniform in dBm over the positive samples. Samples with no
    interference have no dBm value; their share of time is ``zero_fraction``.
    """

    bin_edges: np.ndarray  # dBm
    densities: np.ndarray  # probability per dBm, integrating to 1 over the positive samples
    zero_fraction: float = 0.0

    @property
    def probabilities(self) -> np.ndarray:
        return self.densities * np.diff(self.bin_edges)


def _metric(report: InterferenceReport, metric: str) -> float:
    if metric == "E_I":
        return report.expected_interference
    if metric == "SIR":
        return report.sir
    if metric == "SINR":
        return report.sinr
    return report.capacity


def time_average(series: TimeSeries, require_full_period: bool = True) -> InterferenceReport:
    """Report built from time-mean powers.

    Mean signal and mean interference are taken in watts and the ratios are
    formed afterwards (ratio of means, never mean of ratios).

    Raises:
        ValueError: empty series, or one shorter than its period.
    """
    if len(series) == 0:
        raise ValueError("cannot average an empty series")
    if require_full_period and series.period is not None:
        if series.span < series.period * (1.0 - 1e-9):
            raise ValueError(
                f"series spans {series.span:.6g} s, shorter than its period {series.period:.6g} s"
            )
    ids = set()
    if series.interferer_ids is not None:
        for x in series.interferer_ids:
            ids |= x
    return make_report(
        float(np.mean(series.signal)),
        float(np.mean(series.interference)),
        series.noise_power,
        series.bandwidth,
        ids,
        breakdown={k: float(np.mean(v)) for k, v in series.breakdown.items()},
        sources={sid: series.sources[sid] for sid in ids if sid in series.sources},
    )


def interference_pdf(series: TimeSeries, bins: int = 50) -> Histogram:
    """Histogram of instantaneous interference, each sample weighted equally.

    Raises:
        ValueError: ``bins < 2`` or no sample with positive interference.
    """
    if bins < 2:
        raise ValueError("bins must be >= 2")
    x = np.asarray(series.interference, dtype=float)
    positive = x[x > 0]
    if positive.size == 0:
        raise ValueError("no sample carries interference")
    dbm = watts_to_dbm(positive)
    lo, hi = float(dbm.min()), float(dbm.max())
    if hi - lo < 1e-9:
        lo, hi = lo - 0.5, hi + 0.5
    densities, edges = np.histogram(dbm, bins=bins, range=(lo, hi), density=True)
    return Histogram(edges, densities, zero_fraction=1.0 - positive.size / x.size)


@dataclass(frozen=True)
class SimCheck:
    """Analytic against simulated metrics on a shared time grid."""

    set_mismatches: int
    max_rel_deviation: float
    steps: int


@dataclass(frozen=True)
class SweepPoint:
    value: float
    report: InterferenceReport
    histogram: Histogram | None = None
    sim_check: SimCheck | None = None


@dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec
    points: tuple[SweepPoint, ...] = field(default_factory=tuple)

    @property
    def axis_values(self) -> np.ndarray:
        return np.array([p.value for p in self.points])

    def values(self, metric: str | None = None) -> np.ndarray:
        m = metric or self.spec.metric
        return np.array([_metric(p.report, m) for p in self.points])

    def table(self) -> list[tuple[float, float]]:
        return list(zip(self.axis_values.tolist(), self.values().tolist()))


def compare_series(analytic: TimeSeries, simulated: TimeSeries) -> SimCheck:
    """Count interferer-set mismatches and the worst relative power deviation."""
    if analytic.interferer_ids is None or simulated.interferer_ids is None:
        raise ValueError("both series need interferer ids")
    mismatches = sum(a != b for a, b in zip(analytic.interferer_ids, simulated.interferer_ids))
    worst = 0.0
    for x, y in ((analytic.interference, simulated.interference), (analytic.signal, simulated.signal)):
        scale = np.maximum(np.abs(x), np.abs(y))
        nz = scale > 0
        if nz.any():
            worst = max(worst, float(np.max(np.abs(x - y)[nz] / scale[nz])))
    return SimCheck(mismatches, worst, len(analytic))


def _evaluate(spec: SweepSpec, value: float, check_sim: bool) -> SweepPoint:
    params = spec.point(value)
    if spec.averaging == "instant":
        ts = np.array([params.t])
    else:
        ts = params.time_grid(spec.samples)
    series = params.analytic_series(ts)
    report = series.report(0) if spec.averaging == "instant" else time_average(series)
    hist = None
    if spec.averaging == "histogram" and np.any(series.interference > 0):
        hist = interference_pdf(series, spec.bins)
    check = None
    if check_sim:
        check = compare_series(series, params.simulated_series(ts, workers=1))
    return SweepPoint(value, report, hist, check)


def run_sweep(spec: SweepSpec, check_sim: bool = False, workers: int | None = None) -> SweepResult:
    """Evaluate the analytic model at every axis value, in axis order.

    With ``check_sim`` the simulator is run on the same instants and the
    comparison is attached to each point.
    """
    points = ordered_map(lambda v: _evaluate(spec, v, check_sim), spec.values, workers)
    return SweepResult(spec, tuple(points))


def to_db(x) -> np.ndarray:
    """10*log10 with +inf preserved and 0 mapped to -inf."""
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore"):
        return 10.0 * np.log10(x)


def drop_windows(flags: Sequence[bool]) -> list[tuple[int, int]]:
    """Maximal runs of True as (start, stop) index pairs; stop is exclusive."""
    f = np.asarray(flags, dtype=int)
    d = np.diff(np.concatenate([[0], f, [0]]))
    return list(zip(np.flatnonzero(d == 1).tolist(), np.flatnonzero(d == -1).tolist()))


def circular_drop_windows(flags: Sequence[bool]) -> list[tuple[int, int]]:
    """Like :func:`drop_windows`, but a run touching both ends of a periodic
    record counts once."""
    runs = drop_windows(flags)
    n = len(flags)
    if len(runs) > 1 and runs[0][0] == 0 and runs[-1][1] == n:
        first = runs.pop(0)
        last = runs.pop()
        runs.append((last[0], first[1] + n))
    return runs


def mean_of_ratios_sir(series: TimeSeries) -> float:
    """Time mean of the instantaneous SIR; provided only for contrast with :func:`time_average`."""
    return float(np.mean(series.sir))


__all__ = [
    "AXES",
    "AVERAGINGS",
    "METRICS",
    "Histogram",
    "SimCheck",
    "SweepError",
    "SweepPoint",
    "SweepResult",
    "SweepSpec",
    "circular_drop_windows",
    "compare_series",
    "drop_windows",
    "interference_pdf",
    "mean_of_ratios_sir",
    "run_sweep",
    "time_average",
    "to_db",
]
