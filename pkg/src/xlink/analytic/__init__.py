"""Closed-form interference, SIR, SINR and capacity for the four orbit geometries."""
from .combined import (
    SOURCE_CLASSES,
    classify_orbit,
    combined_deployment_report,
    combined_profile,
    flatten_orbits,
)
from .coplanar import (
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
    coplanar_sir_sinr,
    is_isolated,
    min_isolation_altitude,
)
from .report import InterferenceReport, make_report
from .shifted import (
    ShiftedCoplanarScenario,
    ShiftedScenario,
    other_orbit_profile,
    other_orbit_terms,
    shifted_coplanar_interference,
    shifted_coplanar_interferer_set,
    shifted_expected_interference,
    shifted_interferer_set,
    shifted_report,
    shifted_sir_sinr,
)
from .single import (
    SingleOrbitScenario,
    optimal_satellite_count,
    single_expected_interference,
    single_interference_terms,
    single_interferer_count,
    single_link_distance,
    single_report,
    single_signal_power,
    single_sinr,
    single_sir,
    sir_asymptote,
)

__all__ = [name for name in dir() if not name.startswith("_")]
