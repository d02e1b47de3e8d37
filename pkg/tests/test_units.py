import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from xlink.units import DIMENSIONS, UnitError, parse_quantity, units_for


@pytest.mark.parametrize(
    "text,dim,value",
    [
        ("500 km", "length", 500e3),
        ("12m", "length", 12.0),
        ("5 deg", "angle", math.radians(5)),
        ("90°", "angle", math.pi / 2),
        ("0.5 rad", "angle", 0.5),
        ("38 GHz", "frequency", 38e9),
        ("400MHz", "frequency", 400e6),
        ("0.13 THz", "frequency", 130e9),
        ("60 dBm", "power", 1000.0),
        ("0 dBW", "power", 1.0),
        ("250 mW", "power", 0.25),
        ("100 K", "temperature", 100.0),
        ("2 min", "time", 120.0),
        ("1.5e3 s", "time", 1500.0),
        ("-20 dB", "level", -20.0),
        (20, "level", 20.0),
        ("20", "level", 20.0),
    ],
)
def test_parse(text, dim, value):
    assert parse_quantity(text, dim) == pytest.approx(value)


@pytest.mark.parametrize(
    "text,dim,match",
    [
        (500, "length", "no unit"),
        ("500", "length", "no unit"),
        ("5 parsec", "length", "unknown unit"),
        ("5 GHz", "length", "frequency"),
        ("km 5", "length", "malformed"),
        ("", "length", "malformed"),
        (True, "level", "quantity"),
        ([1], "length", "quantity"),
    ],
)
def test_errors_name_the_token(text, dim, match):
    with pytest.raises(UnitError, match=match):
        parse_quantity(text, dim)


@given(st.floats(-1e6, 1e6, allow_nan=False), st.sampled_from(["m", "km"]))
def test_length_round_trip(x, unit):
    factor = 1e3 if unit == "km" else 1.0
    assert parse_quantity(f"{x!r} {unit}", "length") == pytest.approx(x * factor)


def test_every_dimension_has_units():
    for d in DIMENSIONS:
        assert units_for(d)
