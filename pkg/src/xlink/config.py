"""Run configuration: a TOML document with unit-suffixed values.

Example::

    scenario = "coplanar"
    band = ["mmwave", "subthz"]
    alpha = ["10 deg", "30 deg"]
    N = 100
    h = "500 km"

    [other]
    h = "510 km"

    [sweep]
    axis = "delta_h"
    start = "10 km"
    stop = "200 km"
    step = "10 km"
    metric = "SINR"
    averaging = "time_mean"

Top-level keys describe the victim orbit and the radio; ``[other]`` the
second orbit or constellation; ``[radio]`` overrides band-preset fields;
``[sweep]`` turns the run into a one-dimensional sweep.
"""
from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from typing import Any

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .orbital import GeometryError
from .radio import BANDS, AntennaPattern, RadioConfig, RadioError, band
from .scenarios import KINDS, ScenarioParams
from .sweeps import AVERAGINGS, AXES, METRICS, SweepError, SweepSpec
from .units import UnitError, parse_quantity

COMMANDS = ("single", "coplanar", "shifted", "shifted-coplanar", "full", "sweep", "validate")
COMMAND_KINDS = {
    "single": "single",
    "coplanar": "coplanar",
    "shifted": "shifted",
    "shifted-coplanar": "shifted_coplanar",
    "full": "combined",
}
_KIND_COMMANDS = {v: k for k, v in COMMAND_KINDS.items()}

_TOP_KEYS = {
    "scenario", "band", "alpha", "pattern", "sidelobe_level", "N", "h", "gamma", "raan",
    "phase", "t", "victim", "planes", "samples", "bins", "other", "radio", "sweep",
}
_OTHER_KEYS = {"h", "N", "gamma", "raan", "delta_beta"}
_RADIO_KEYS = {"tx_power", "carrier", "bandwidth", "temperature"}
_SWEEP_KEYS = {"axis", "values", "start", "stop", "step", "metric", "averaging"}
_AXIS_DIMENSION = {"alpha": "angle", "gamma": "angle", "delta_h": "length", "time": "time"}


class ConfigError(ValueError):
    """Invalid configuration; ``field`` names the offending key."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


@dataclass(frozen=True)
class Series:
    """One (band, beamwidth) combination; ``tag`` suffixes its CSV columns."""

    tag: str
    radio: RadioConfig


@dataclass(frozen=True)
class SweepOptions:
    axis: str
    values: tuple[float, ...]
    metric: str = "SINR"
    averaging: str = "instant"


@dataclass(frozen=True)
class RunConfig:
    """Validated run description.

    ``scenario`` carries the radio of the first series; the CLI re-targets it
    to each series in turn.
    """

    command: str
    scenario: ScenarioParams
    series: tuple[Series, ...]
    sweep: SweepOptions | None = None
    samples: int = 1000
    bins: int = 50


def _check_keys(table: dict, allowed: set, where: str) -> None:
    for key in table:
        if key not in allowed:
            name = f"{where}.{key}" if where else key
            raise ConfigError(name, f"unknown key; allowed keys are {sorted(allowed)}")


def _quantity(table: dict, key: str, dimension: str, default, where: str = ""):
    name = f"{where}.{key}" if where else key
    if key not in table:
        return default
    try:
        return parse_quantity(table[key], dimension)
    except UnitError as e:
        raise ConfigError(name, str(e)) from None


def _integer(table: dict, key: str, default, minimum: int, where: str = ""):
    name = f"{where}.{key}" if where else key
    if key not in table:
        return default
    v = table[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(name, f"expected an integer, got {v!r}")
    if v < minimum:
        raise ConfigError(name, f"must be >= {minimum}, got {v}")
    return v


def _choice(table: dict, key: str, choices, default, where: str = ""):
    name = f"{where}.{key}" if where else key
    if key not in table:
        return default
    v = table[key]
    if v not in choices:
        raise ConfigError(name, f"expected one of {list(choices)}, got {v!r}")
    return v


def _as_list(v) -> list:
    return list(v) if isinstance(v, list) else [v]


def _series_tag(band_label: str, alpha: float | None) -> str:
    if alpha is None:
        return band_label
    deg = f"{math.degrees(alpha):.6g}".replace(".", "p").replace("-", "m")
    return f"{band_label}_a{deg}"


def _radios(doc: dict, sweep_axis: str | None) -> tuple[Series, ...]:
    bands = _as_list(doc.get("band", "mmwave"))
    if not bands:
        raise ConfigError("band", "needs at least one band")
    for b in bands:
        if not isinstance(b, str) or b.lower() not in BANDS:
            raise ConfigError("band", f"unknown band {b!r}; expected one of {sorted(BANDS)}")
    raw_alphas = _as_list(doc.get("alpha", "5 deg"))
    if not raw_alphas:
        raise ConfigError("alpha", "needs at least one beamwidth")
    alphas = []
    for a in raw_alphas:
        try:
            alpha = parse_quantity(a, "angle")
        except UnitError as e:
            raise ConfigError("alpha", str(e)) from None
        if not 0 < alpha <= 2 * math.pi:
            raise ConfigError("alpha", f"beamwidth must be in (0, 360] deg, got {a!r}")
        alphas.append(alpha)
    if sweep_axis == "alpha":
        alphas = alphas[:1]

    pattern_kind = _choice(doc, "pattern", ("cone", "cone_sphere"), "cone")
    sidelobe = _quantity(doc, "sidelobe_level", "level", None)
    if pattern_kind == "cone_sphere" and sidelobe is None:
        raise ConfigError("sidelobe_level", "required for the cone_sphere pattern")
    if pattern_kind == "cone" and sidelobe is not None:
        raise ConfigError("sidelobe_level", "only applies to the cone_sphere pattern")

    overrides = doc.get("radio", {})
    if not isinstance(overrides, dict):
        raise ConfigError("radio", "expected a table")
    _check_keys(overrides, _RADIO_KEYS, "radio")
    out = []
    for b in bands:
        preset = band(b)
        for alpha in alphas:
            pattern = (
                AntennaPattern.cone(alpha)
                if pattern_kind == "cone"
                else AntennaPattern.cone_sphere(alpha, sidelobe)
            )
            base = preset.config(pattern)
            try:
                radio = RadioConfig(
                    tx_power=_quantity(overrides, "tx_power", "power", base.tx_power, "radio"),
                    carrier=_quantity(overrides, "carrier", "frequency", base.carrier, "radio"),
                    bandwidth=_quantity(overrides, "bandwidth", "frequency", base.bandwidth, "radio"),
                    system_temperature=_quantity(
                        overrides, "temperature", "temperature", base.system_temperature, "radio"
                    ),
                    pattern=pattern,
                )
            except RadioError as e:
                raise ConfigError("radio", str(e)) from None
            label = preset.name if not overrides else f"{preset.name}custom"
            out.append(Series(_series_tag(label, None if sweep_axis == "alpha" else alpha), radio))
    tags = [s.tag for s in out]
    if len(set(tags)) != len(tags):
        raise ConfigError("alpha", "duplicate band/beamwidth combinations")
    return tuple(out)


def _sweep(doc: dict) -> SweepOptions | None:
    if "sweep" not in doc:
        return None
    table = doc["sweep"]
    if not isinstance(table, dict):
        raise ConfigError("sweep", "expected a table")
    _check_keys(table, _SWEEP_KEYS, "sweep")
    if "axis" not in table:
        raise ConfigError("sweep.axis", "missing required field")
    axis = _choice(table, "axis", AXES, None, "sweep")
    metric = _choice(table, "metric", METRICS, "SINR", "sweep")
    averaging = _choice(table, "averaging", AVERAGINGS, "instant", "sweep")

    def convert(v, name):
        if axis == "N":
            if isinstance(v, bool) or not isinstance(v, int):
                raise ConfigError(name, f"N values must be integers, got {v!r}")
            return float(v)
        try:
            return parse_quantity(v, _AXIS_DIMENSION[axis])
        except UnitError as e:
            raise ConfigError(name, str(e)) from None

    has_range = any(k in table for k in ("start", "stop", "step"))
    if "values" in table and has_range:
        raise ConfigError("sweep.values", "give either values or start/stop/step, not both")
    if "values" in table:
        if not isinstance(table["values"], list):
            raise ConfigError("sweep.values", "expected a list")
        values = [convert(v, "sweep.values") for v in table["values"]]
    elif has_range:
        for k in ("start", "stop", "step"):
            if k not in table:
                raise ConfigError(f"sweep.{k}", "missing required field")
        start = convert(table["start"], "sweep.start")
        stop = convert(table["stop"], "sweep.stop")
        step = convert(table["step"], "sweep.step")
        if not step > 0:
            raise ConfigError("sweep.step", "must be positive")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        if count < 1:
            raise ConfigError("sweep.stop", "range is empty")
        values = (start + step * np.arange(count)).tolist()
    else:
        raise ConfigError("sweep.values", "missing required field")
    if not values:
        raise ConfigError("sweep.values", "sweep values must be nonempty")
    diffs = np.diff(values)
    if len(diffs) and not (np.all(diffs > 0) or np.all(diffs < 0)):
        raise ConfigError("sweep.values", "values must be strictly monotone")
    return SweepOptions(axis, tuple(values), metric, averaging)


def parse_config(text: str, command: str | None = None) -> RunConfig:
    """Parse and validate a configuration document.

    Args:
        text: TOML source.
        command: CLI command; scenario commands fix the scenario kind.

    Raises:
        ConfigError: unknown key, missing field, malformed or out-of-range value.
    """
    try:
        doc: dict[str, Any] = tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        raise ConfigError("document", f"invalid TOML: {e}") from None
    return config_from_dict(doc, command)


def config_from_dict(doc: dict, command: str | None = None) -> RunConfig:
    _check_keys(doc, _TOP_KEYS, "")
    if command is not None and command not in COMMANDS:
        raise ConfigError("command", f"expected one of {list(COMMANDS)}, got {command!r}")

    kind = _choice(doc, "scenario", KINDS, None)
    if command in COMMAND_KINDS:
        if kind is not None and kind != COMMAND_KINDS[command]:
            raise ConfigError(
                "scenario", f"{kind!r} conflicts with command {command!r}"
            )
        kind = COMMAND_KINDS[command]
    if kind is None:
        if command == "sweep":
            raise ConfigError("scenario", "missing required field for the sweep command")
        kind = "single"
    if command == "sweep" and "sweep" not in doc:
        raise ConfigError("sweep", "missing required table for the sweep command")

    sweep = _sweep(doc)
    series = _radios(doc, sweep.axis if sweep else None)

    other = doc.get("other", {})
    if not isinstance(other, dict):
        raise ConfigError("other", "expected a table")
    _check_keys(other, _OTHER_KEYS, "other")

    h = _quantity(doc, "h", "length", 500e3)
    if not h > 0:
        raise ConfigError("h", "altitude must be positive")
    default_other_h = h + 10e3 if kind != "shifted" else h
    h_other = _quantity(other, "h", "length", default_other_h, "other")
    if not h_other > 0:
        raise ConfigError("other.h", "altitude must be positive")

    try:
        params = ScenarioParams(
            kind=kind,
            radio=series[0].radio,
            altitude=h,
            num_satellites=_integer(doc, "N", 100, 2),
            inclination=_quantity(doc, "gamma", "angle", 0.0),
            raan=_quantity(doc, "raan", "angle", 0.0),
            phase_offset=_quantity(doc, "phase", "angle", 0.0),
            other_altitude=h_other,
            other_num_satellites=_integer(other, "N", None, 2, "other"),
            other_inclination=_quantity(other, "gamma", "angle", None, "other"),
            other_raan=_quantity(other, "raan", "angle", math.pi / 2, "other"),
            delta_beta=_quantity(other, "delta_beta", "angle", 0.0, "other"),
            victim=_choice(doc, "victim", ("lower", "upper"), "lower"),
            planes=_integer(doc, "planes", 10, 1),
            t=_quantity(doc, "t", "time", 0.0),
        )
    except GeometryError as e:
        raise ConfigError("scenario", str(e)) from None

    samples = _integer(doc, "samples", 1000, 1)
    bins = _integer(doc, "bins", 50, 2)
    if sweep is not None:
        try:
            SweepSpec(params, sweep.axis, sweep.values, sweep.metric, sweep.averaging, samples, bins)
        except SweepError as e:
            raise ConfigError("sweep", str(e)) from None
    if command is None:
        command = "sweep" if sweep is not None else _KIND_COMMANDS[kind]
    return RunConfig(command, params, series, sweep, samples, bins)


def load_config(path, command: str | None = None) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise ConfigError("config", f"cannot read {path}: {e.strerror}") from None
    return parse_config(text, command)
