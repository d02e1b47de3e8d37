import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from xlink.analytic import (
    CoplanarScenario,
    coplanar_distance,
    coplanar_expected_interference,
    coplanar_interference_terms,
    coplanar_interferer_set,
    coplanar_profile,
    coplanar_profile_terms,
    coplanar_psi,
    coplanar_psi_prime,
    coplanar_report,
    coplanar_report_at,
    is_isolated,
    min_isolation_altitude,
    single_report,
    SingleOrbitScenario,
)
from xlink.orbital import EARTH, GeometryError, OrbitSpec
from xlink.radio import MMWAVE, main_lobe_gain, received_power

deg = math.radians


def scenario(n=100, nc=100, h=500e3, hc=510e3, alpha=10.0, victim="lower"):
    return CoplanarScenario(
        OrbitSpec(h, num_satellites=n), OrbitSpec(hc, num_satellites=nc), MMWAVE.config(deg(alpha)), victim
    )


def _angle(u, v):
    return math.atan2(abs(u[0] * v[1] - u[1] * v[0]), u[0] * v[0] + u[1] * v[1])


def vector_oracle(s, delta_beta):
    """Place both rings in the plane and test each satellite with plain vectors.

    Returns (set, powers, margin) where margin is the smallest distance of an
    angle from the beam edge or of a path from grazing the Earth (relative).
    """
    v_ring, i_ring = s.victim_orbit, s.interferer_orbit
    r_v, r_i = s.r_rx, s.r_int
    n_v, n_i = v_ring.num_satellites, i_ring.num_satellites
    # absolute anomalies: lower ring satellite 0 at 0, upper ring satellite 0 at delta_beta
    lead_v = 0.0 if s.victim == "lower" else delta_beta
    lead_i = delta_beta if s.victim == "lower" else 0.0

    def pos(r, phi):
        return np.array([r * math.cos(phi), r * math.sin(phi)])

    a = pos(r_v, lead_v)
    tx = pos(r_v, lead_v + 2 * math.pi / n_v)
    edge = s.radio.beamwidth / 2
    found, powers, margin = set(), {}, math.inf
    g = main_lobe_gain(s.radio.pattern)
    for j in range(n_i):
        b = pos(r_i, lead_i + 2 * math.pi * j / n_i)
        prev = pos(r_i, lead_i + 2 * math.pi * (j - 1) / n_i)
        psi = _angle(tx - a, b - a)
        psi_p = _angle(prev - b, a - b)
        d = b - a
        t = np.clip(-np.dot(a, d) / np.dot(d, d), 0, 1)
        closest = np.linalg.norm(a + t * d)
        margin = min(margin, abs(psi - edge), abs(psi_p - edge), abs(closest - EARTH.earth_radius) / r_v)
        if psi <= edge and psi_p <= edge and closest > EARTH.earth_radius:
            found.add(j)
            powers[j] = received_power(s.radio, g, g, float(np.linalg.norm(d)))
    return found, powers, margin


@st.composite
def coplanar_cases(draw):
    n = draw(st.integers(2, 200))
    nc = draw(st.integers(2, 200))
    h = draw(st.floats(500e3, 1500e3))
    hc = h + draw(st.floats(1e3, 400e3))
    alpha = draw(st.floats(0.5, 179.0))
    victim = draw(st.sampled_from(["lower", "upper"]))
    db = draw(st.floats(0, 2 * math.pi))
    return scenario(n, nc, h, hc, alpha, victim), db


class TestGeometry:
    @given(coplanar_cases())
    def test_set_and_powers_match_vector_oracle(self, case):
        s, db = case
        found, powers, margin = vector_oracle(s, db)
        assume(margin > 1e-9)
        assert coplanar_interferer_set(s, db) == frozenset(found)
        terms = coplanar_interference_terms(s, db)
        for j, p in powers.items():
            assert terms[j] == pytest.approx(p, rel=1e-9)

    @given(coplanar_cases(), st.integers(0, 199))
    def test_angles_match_vectors(self, case, j):
        s, db = case
        j = j % s.interferer_orbit.num_satellites
        theta = s.relative_angles(db)[j]
        b = np.array([s.r_int * math.sin(theta), s.r_int * math.cos(theta)])
        a = np.array([0.0, s.r_rx])
        assume(np.linalg.norm(b - a) > 1.0)
        half = math.pi / s.victim_orbit.num_satellites
        bore = np.array([math.cos(half), -math.sin(half)])
        d = b - a
        signed = math.atan2(bore[0] * d[1] - bore[1] * d[0], float(bore @ d))
        assert coplanar_psi(j, s, db) == pytest.approx(signed, abs=1e-9)
        assert coplanar_distance(j, s, db) == pytest.approx(float(np.linalg.norm(d)), rel=1e-12)
        assert 0.0 <= coplanar_psi_prime(j, s, db) <= math.pi

    def test_index_out_of_range(self):
        with pytest.raises(GeometryError):
            coplanar_psi(100, scenario(), 0.0)

    def test_validation(self):
        with pytest.raises(GeometryError):
            scenario(h=510e3, hc=500e3)
        with pytest.raises(GeometryError):
            CoplanarScenario(
                OrbitSpec(500e3, inclination=0.5), OrbitSpec(510e3, inclination=0.6), MMWAVE.config(0.1)
            )
        with pytest.raises(ValueError):
            scenario(victim="middle")


class TestProfile:
    def test_profile_matches_pointwise(self):
        s = scenario()
        db = np.linspace(0, 0.2, 37)
        expect = [coplanar_expected_interference(s, x) for x in db]
        assert np.allclose(coplanar_profile(s, db), expect, rtol=1e-12)
        mask, power = coplanar_profile_terms(s, db)
        assert mask.shape == power.shape == (37, 100)
        assert np.all(power[~mask] == 0)

    def test_periodic_in_offset(self):
        s = scenario(n=60, nc=80)
        db = np.linspace(0, 1, 101)
        gap = 2 * math.pi / 80
        assert np.allclose(coplanar_profile(s, db + gap), coplanar_profile(s, db), rtol=1e-9)

    def test_periodic_in_time(self):
        s = scenario()
        t = np.linspace(0, 5000, 11)
        a = [coplanar_report_at(s, x).expected_interference for x in t]
        b = [coplanar_report_at(s, x + s.period).expected_interference for x in t]
        assert np.allclose(a, b, rtol=1e-9)

    @given(st.floats(0, 2 * math.pi), st.floats(1.0, 60.0))
    def test_upper_profile_mirrors_lower(self, db, alpha):
        lo, up = scenario(alpha=alpha), scenario(alpha=alpha, victim="upper")
        a, b = coplanar_expected_interference(lo, db), coplanar_expected_interference(up, -db)
        assert a == pytest.approx(b, rel=1e-9, abs=1e-30)

    def test_report_adds_same_orbit(self):
        s = scenario()
        r = coplanar_report(s, 0.01)
        own = single_report(SingleOrbitScenario(s.lower, s.radio))
        assert r.breakdown["single"] == pytest.approx(own.expected_interference)
        assert r.expected_interference == pytest.approx(r.breakdown["single"] + r.breakdown["coplanar"])
        assert {sid for sid, c in r.sources.items() if c == "coplanar"} == {
            (1, j) for j in coplanar_interferer_set(s, 0.01)
        }

    def test_sir_envelope(self):
        s = scenario()
        db = np.linspace(0, 2 * math.pi / 100, 2001)
        reports = [coplanar_report(s, x) for x in db[::50]]
        sir_db = [10 * math.log10(r.sir) for r in reports]
        assert -25 <= min(sir_db) and max(sir_db) <= 0


class TestIsolation:
    def test_wide_gap_isolates(self):
        assert is_isolated(scenario(alpha=1.0, hc=600e3))
        assert not is_isolated(scenario(alpha=10.0))

    @pytest.mark.parametrize("alpha,n", [(1.0, 50), (3.0, 100), (10.0, 40)])
    def test_threshold_is_tight(self, alpha, n):
        s = scenario(n=n, nc=n, alpha=alpha)
        h_star = min_isolation_altitude(s)
        assert is_isolated(s.with_upper_altitude(h_star))
        below = s.with_upper_altitude(h_star - 5.0)
        # a denser phase scan finds interference just under the threshold
        assert not is_isolated(below, grid=100_000)

    def test_isolation_gap_shrinks_with_n(self):
        gaps = [min_isolation_altitude(scenario(n=n, nc=n, alpha=1.0)) - 500e3 for n in (50, 100, 200)]
        assert gaps[0] > gaps[1] > gaps[2]
        assert max(gaps) < 10e3

    def test_unreachable(self):
        s = scenario(n=3, nc=3, alpha=179.0)
        assert min_isolation_altitude(s, max_altitude=600e3) == math.inf
