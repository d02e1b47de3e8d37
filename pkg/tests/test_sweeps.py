import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from xlink.analytic import single_sir
from xlink.radio import MMWAVE, watts_to_dbm
from xlink.scenarios import ScenarioParams
from xlink.series import TimeSeries
from xlink.sweeps import (
    SweepError,
    SweepSpec,
    circular_drop_windows,
    drop_windows,
    interference_pdf,
    mean_of_ratios_sir,
    run_sweep,
    time_average,
    to_db,
)

deg = math.radians
RADIO = MMWAVE.config(deg(10))


def series(interference, signal=1.0, period=None, dt=1.0):
    n = len(interference)
    return TimeSeries(np.arange(n) * dt, signal, np.asarray(interference, float), 1e-3, 1e6, period=period, dt=dt)


class TestSpec:
    @pytest.mark.parametrize(
        "kw,match",
        [
            (dict(axis="N", values=()), "nonempty"),
            (dict(axis="N", values=(10, 5, 20)), "monotone"),
            (dict(axis="N", values=(10, 10)), "monotone"),
            (dict(axis="N", values=(1.5,)), "integers"),
            (dict(axis="gamma", values=(0.1,)), "does not apply"),
            (dict(axis="delta_h", values=(0.0, 1e3)), "positive"),
            (dict(axis="time", values=(0.0,), averaging="time_mean"), "instant"),
            (dict(axis="bogus", values=(1,)), "axis"),
            (dict(axis="N", values=(10,), metric="bogus"), "metric"),
            (dict(axis="N", values=(10,), bins=1), "bins"),
        ],
    )
    def test_rejects(self, kw, match):
        kind = "single" if kw["axis"] != "delta_h" else "coplanar"
        with pytest.raises(SweepError, match=match):
            SweepSpec(ScenarioParams(kind, RADIO), **kw)

    def test_point(self):
        base = ScenarioParams("coplanar", RADIO)
        assert SweepSpec(base, "delta_h", (5e3,)).point(5e3).other_altitude == 505e3
        assert SweepSpec(base, "alpha", (0.2,)).point(0.2).radio.beamwidth == 0.2
        assert SweepSpec(base, "N", (7,)).point(7).num_satellites == 7
        assert SweepSpec(base, "time", (9.0,)).point(9.0).t == 9.0


class TestAveraging:
    def test_ratio_of_means(self):
        s = series([1.0, 3.0], signal=[2.0, 2.0], period=2.0)
        r = time_average(s)
        assert r.sir == pytest.approx(1.0)  # mean(S) / mean(I) = 2 / 2
        assert mean_of_ratios_sir(s) == pytest.approx((2.0 + 2 / 3) / 2)

    def test_needs_full_period(self):
        with pytest.raises(ValueError, match="shorter"):
            time_average(series([1.0, 2.0], period=10.0))
        assert time_average(series([1.0, 2.0], period=10.0), require_full_period=False).expected_interference == 1.5
        with pytest.raises(ValueError):
            time_average(series([]))

    @given(st.lists(st.floats(1e-12, 1e-6), min_size=2, max_size=40))
    def test_mean_interference(self, xs):
        r = time_average(series(xs, period=len(xs)))
        assert r.expected_interference == pytest.approx(np.mean(xs))
        assert r.sinr <= r.sir

    def test_all_zero_is_inf(self):
        assert time_average(series([0.0, 0.0], period=2.0)).sir == math.inf


class TestHistogram:
    @given(st.lists(st.floats(1e-12, 1e-3), min_size=1, max_size=200), st.integers(0, 20), st.integers(2, 60))
    def test_normalised(self, xs, zeros, bins):
        h = interference_pdf(series(xs + [0.0] * zeros), bins)
        assert h.probabilities.sum() == pytest.approx(1.0)
        assert h.zero_fraction == pytest.approx(zeros / (len(xs) + zeros))
        assert len(h.bin_edges) == bins + 1
        assert np.all(np.isfinite(h.densities))

    def test_bins_in_dbm(self):
        h = interference_pdf(series([1e-3, 1e-2, 1e-1]), bins=2)
        assert h.bin_edges[0] == pytest.approx(0.0) and h.bin_edges[-1] == pytest.approx(20.0)
        assert np.allclose(watts_to_dbm(1e-3), 0.0)

    def test_no_interference(self):
        with pytest.raises(ValueError):
            interference_pdf(series([0.0, 0.0]))


class TestRun:
    def test_single_n_sweep_matches_closed_form(self):
        spec = SweepSpec(ScenarioParams("single", MMWAVE.config(deg(40))), "N", tuple(range(10, 80, 7)), "SIR")
        res = run_sweep(spec, workers=2)
        assert np.array_equal(res.axis_values, spec.values)
        expect = [single_sir(int(n), 500e3, deg(40)) for n in spec.values]
        assert np.allclose(res.values(), expect, rtol=1e-12)
        assert res.table()[0][0] == 10.0

    def test_time_mean_with_sim_check(self):
        spec = SweepSpec(ScenarioParams("coplanar", RADIO), "delta_h", (10e3, 50e3), "SINR", "time_mean", samples=200)
        res = run_sweep(spec, check_sim=True)
        for p in res.points:
            assert p.sim_check.set_mismatches == 0 and p.sim_check.max_rel_deviation < 1e-9
            assert p.sim_check.steps == 200
        # more separation, less co-planar interference
        assert res.values()[1] > res.values()[0]

    def test_histogram_points(self):
        spec = SweepSpec(ScenarioParams("coplanar", RADIO), "N", (50, 100), "E_I", "histogram", samples=300, bins=20)
        res = run_sweep(spec)
        assert all(p.histogram is not None and len(p.histogram.densities) == 20 for p in res.points)

    def test_workers_do_not_change_results(self):
        spec = SweepSpec(ScenarioParams("coplanar", RADIO), "alpha", tuple(deg(a) for a in (2, 5, 10, 20)), "SIR", "time_mean", samples=100)
        a, b = run_sweep(spec, workers=1), run_sweep(spec, workers=4)
        assert np.array_equal(a.values(), b.values())


class TestWindows:
    def test_runs(self):
        assert drop_windows([0, 1, 1, 0, 1]) == [(1, 3), (4, 5)]
        assert drop_windows([]) == []
        assert circular_drop_windows([1, 0, 1, 1]) == [(2, 5)]
        assert circular_drop_windows([1, 1, 1]) == [(0, 3)]

    def test_to_db(self):
        assert np.array_equal(to_db([0.0, 1.0, math.inf]), [-math.inf, 0.0, math.inf])
