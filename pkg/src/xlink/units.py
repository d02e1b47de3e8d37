"""Parsing of unit-suffixed quantities such as ``"500 km"`` or ``"60 dBm"``."""
from __future__ import annotations

import math
import re

_NUMBER = r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?"
_PATTERN = re.compile(rf"^\s*({_NUMBER})\s*([^\s\d.+-][^\s]*)?\s*$")

# unit -> (dimension, converter to SI / linear)
_UNITS = {
    "m": ("length", lambda x: x),
    "km": ("length", lambda x: x * 1e3),
    "deg": ("angle", math.radians),
    "°": ("angle", math.radians),
    "rad": ("angle", lambda x: x),
    "Hz": ("frequency", lambda x: x),
    "kHz": ("frequency", lambda x: x * 1e3),
    "MHz": ("frequency", lambda x: x * 1e6),
    "GHz": ("frequency", lambda x: x * 1e9),
    "THz": ("frequency", lambda x: x * 1e12),
    "W": ("power", lambda x: x),
    "mW": ("power", lambda x: x * 1e-3),
    "dBm": ("power", lambda x: 10.0 ** ((x - 30.0) / 10.0)),
    "dBW": ("power", lambda x: 10.0 ** (x / 10.0)),
    "K": ("temperature", lambda x: x),
    "s": ("time", lambda x: x),
    "min": ("time", lambda x: x * 60.0),
    "h": ("time", lambda x: x * 3600.0),
    "dB": ("level", lambda x: x),
}

DIMENSIONS = sorted({d for d, _ in _UNITS.values()})


class UnitError(ValueError):
    """A quantity string could not be parsed or has the wrong dimension."""


def units_for(dimension: str) -> list[str]:
    return [u for u, (d, _) in _UNITS.items() if d == dimension]


def parse_quantity(value, dimension: str) -> float:
    """Convert ``value`` to SI (or dB for ``level``).

    Strings must carry an explicit unit of the requested dimension. Bare numbers
    are accepted only for ``level`` (dB) quantities.

    Raises:
        UnitError: malformed text, unknown unit or wrong dimension.
    """
    if isinstance(value, bool):
        raise UnitError(f"expected a {dimension} quantity, got {value!r}")
    if isinstance(value, (int, float)):
        if dimension == "level":
            return float(value)
        raise UnitError(
            f"{value!r} has no unit; write it with one of {', '.join(units_for(dimension))}"
        )
    if not isinstance(value, str):
        raise UnitError(f"expected a {dimension} quantity, got {value!r}")
    m = _PATTERN.match(value)
    if m is None:
        raise UnitError(f"malformed quantity {value!r}")
    number, unit = float(m.group(1)), m.group(2)
    if unit is None:
        if dimension == "level":
            return number
        raise UnitError(
            f"{value!r} has no unit; write it with one of {', '.join(units_for(dimension))}"
        )
    if unit not in _UNITS:
        raise UnitError(f"unknown unit {unit!r} in {value!r}")
    dim, convert = _UNITS[unit]
    if dim != dimension:
        raise UnitError(f"unit {unit!r} in {value!r} is a {dim}, expected a {dimension}")
    return float(convert(number))
