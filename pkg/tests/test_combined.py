import math

import numpy as np
import pytest

from xlink.analytic import (
    SOURCE_CLASSES,
    CoplanarScenario,
    ShiftedScenario,
    SingleOrbitScenario,
    classify_orbit,
    combined_deployment_report,
    combined_profile,
    coplanar_report,
    flatten_orbits,
    shifted_report,
    single_report,
)
from xlink.orbital import ConstellationSpec, OrbitSpec
from xlink.radio import MMWAVE, SUBTHZ

deg = math.radians


def test_classify():
    v = OrbitSpec(500e3, deg(50), 0.0, 10)
    assert classify_orbit(v, v.with_(raan=1.0)) == "shifted"
    assert classify_orbit(v, v.with_(altitude=510e3)) == "coplanar"
    assert classify_orbit(v, v.with_(altitude=510e3, raan=1.0)) == "shifted_coplanar"


def test_single_orbit_reduces_to_single_report():
    radio = MMWAVE.config(deg(10))
    orbit = OrbitSpec(500e3, num_satellites=100)
    r = combined_deployment_report([ConstellationSpec((orbit,))], radio)
    ref = single_report(SingleOrbitScenario(orbit, radio))
    assert r.interferer_ids == ref.interferer_ids
    assert (r.expected_interference, r.sir, r.sinr) == (ref.expected_interference, ref.sir, ref.sinr)
    # every source class is reported, empty ones as zero
    assert dict(r.breakdown) == {"single": ref.expected_interference, "shifted": 0.0, "coplanar": 0.0, "shifted_coplanar": 0.0}


def test_two_coplanar_rings_match_coplanar_report():
    radio = MMWAVE.config(deg(10))
    lo, up = OrbitSpec(500e3, num_satellites=100), OrbitSpec(510e3, num_satellites=100, phase_offset=0.01)
    r = combined_deployment_report([ConstellationSpec((lo, up))], radio)
    ref = coplanar_report(CoplanarScenario(lo, up, radio), 0.01)
    assert r.interferer_ids == ref.interferer_ids
    assert r.expected_interference == pytest.approx(ref.expected_interference, rel=1e-12)


def test_upper_victim_is_first_orbit():
    radio = MMWAVE.config(deg(10))
    lo, up = OrbitSpec(500e3, num_satellites=100), OrbitSpec(510e3, num_satellites=100, phase_offset=0.01)
    r = combined_deployment_report([ConstellationSpec((up, lo))], radio)
    ref = coplanar_report(CoplanarScenario(lo, up, radio, "upper"), 0.01)
    # the report keeps deployment indices: the upper ring is orbit 0 here
    assert r.expected_interference == pytest.approx(ref.expected_interference, rel=1e-12)
    assert r.breakdown["coplanar"] == pytest.approx(ref.breakdown["coplanar"], rel=1e-12)


def test_shifted_pair_matches_shifted_report():
    radio = MMWAVE.config(deg(30))
    a, b = OrbitSpec(500e3, deg(3), 0.0, 50), OrbitSpec(500e3, deg(3), deg(90), 50, 0.02)
    s = ShiftedScenario(a, b, radio, delta_beta=0.02)
    for t in (0.0, 900.0, 2500.0):
        r = combined_deployment_report([ConstellationSpec((a,)), ConstellationSpec((b,))], radio, t)
        ref = shifted_report(s, t)
        assert r.interferer_ids == ref.interferer_ids
        assert r.expected_interference == pytest.approx(ref.expected_interference, rel=1e-12)


def test_profile_matches_reports_and_breakdown_adds_up():
    radio = SUBTHZ.config(deg(20))
    shells = (
        ConstellationSpec.walker(3, 20, 500e3, deg(50)),
        ConstellationSpec.walker(3, 20, 520e3, deg(50), phase0=0.03),
    )
    ts = np.linspace(0, 3000, 25)
    signal, per_class, ids, sources = combined_profile(shells, radio, ts)
    assert set(per_class) == set(SOURCE_CLASSES)
    total = sum(per_class.values())
    for k, t in enumerate(ts):
        r = combined_deployment_report(shells, radio, t)
        assert r.signal_power == pytest.approx(signal)
        assert ids[k] == r.interferer_ids
        assert total[k] == pytest.approx(r.expected_interference, rel=1e-12, abs=1e-30)
        assert sum(r.breakdown.values()) == pytest.approx(r.expected_interference)
        for sid in r.interferer_ids:
            assert sources[sid] == r.sources[sid]
    assert len(flatten_orbits(shells)) == 6
