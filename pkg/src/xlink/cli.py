"""Command-line entry point: ``xlink <command> --config <file> --out <dir>``.

Exit codes: 0 success, 2 configuration error, 3 validation failure,
4 resource guard, 1 I/O error.
"""
from __future__ import annotations

import argparse
import math
import sys
from datetime import datetime, timezone
from importlib import resources
from pathlib import Path
from typing import Sequence

from .config import COMMANDS, ConfigError, RunConfig, load_config
from .orbital import GeometryError
from .parallel import THREADS_ENV, worker_count
from .radio import RadioError
from .simulator import MAX_STEPS, ResourceGuardError
from .sweeps import SweepError, SweepResult, SweepSpec, run_sweep
from .units import UnitError
from .validation import POWER_RTOL, check_scenario

SCHEMA = 1
EXIT_OK = 0
EXIT_IO = 1
EXIT_CONFIG = 2
EXIT_VALIDATION = 3
EXIT_RESOURCE = 4

AXIS_COLUMNS = {
    "N": ("N", lambda v: f"{int(round(v))}"),
    "alpha": ("alpha_deg", lambda v: f"{math.degrees(v):.6f}"),
    "gamma": ("gamma_deg", lambda v: f"{math.degrees(v):.6f}"),
    "delta_h": ("delta_h_km", lambda v: f"{v / 1e3:.6f}"),
    "time": ("t_s", lambda v: f"{v:.6f}"),
}


class ValidationFailure(RuntimeError):
    """The analytic and simulated results disagree."""


def format_db(x: float) -> str:
    """dB value with 4 decimals; infinities as the literals ``inf`` / ``-inf``."""
    if math.isnan(x):
        raise ValueError("refusing to write NaN")
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.4f}"


def _db(x: float) -> str:
    if x == math.inf:
        return "inf"
    return format_db(10.0 * math.log10(x))


def _header(timestamp: bool) -> list[str]:
    lines = [f"# schema={SCHEMA}"]
    if timestamp:
        now = datetime.now(timezone.utc).isoformat(timespec="seconds")
        lines.append(f"# generated={now}")
    return lines


def _write(path: Path, header: list[str], columns: list[str], rows: list[list[str]]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    text = "\n".join(header + [",".join(columns)] + [",".join(r) for r in rows]) + "\n"
    path.write_text(text, encoding="utf-8")


def sweep_specs(config: RunConfig) -> list[tuple[str, SweepSpec]]:
    """One sweep per series: the configured sweep, or the command's default axis.

    Without a ``[sweep]`` table ``single`` evaluates one point at the configured
    N; the time-varying families trace one period on ``samples`` instants.
    """
    out = []
    for series in config.series:
        params = config.scenario.with_(radio=series.radio)
        if config.sweep is not None:
            sw = config.sweep
            spec = SweepSpec(
                params, sw.axis, sw.values, sw.metric, sw.averaging, config.samples, config.bins
            )
        elif params.kind == "single":
            spec = SweepSpec(params, "N", (params.num_satellites,), "SINR", "instant")
        else:
            values = params.time_grid(config.samples)
            spec = SweepSpec(params, "time", tuple(values), "SINR", "instant")
        out.append((series.tag, spec))
    return out


def planned_steps(config: RunConfig, check_sim: bool) -> int:
    """Time steps a run will evaluate, counted before anything is allocated."""
    if config.sweep is not None:
        points = len(config.sweep.values)
        per_point = 1 if config.sweep.averaging == "instant" else config.samples
    else:
        points = 1 if config.scenario.kind == "single" else config.samples
        per_point = 1
    return len(config.series) * points * per_point * (2 if check_sim else 1)


def _guard(config: RunConfig, check_sim: bool) -> None:
    steps = planned_steps(config, check_sim)
    if steps > MAX_STEPS:
        raise ResourceGuardError(f"run needs {steps} time steps, above the limit of {MAX_STEPS:.0e}")


def sweep_table(results: list[tuple[str, SweepResult]]) -> tuple[list[str], list[list[str]]]:
    axis = results[0][1].spec.axis
    name, fmt = AXIS_COLUMNS[axis]
    columns = [name]
    for tag, _ in results:
        columns += [f"ei_w_{tag}", f"sir_db_{tag}", f"sinr_db_{tag}", f"cap_gbps_{tag}"]
    rows = []
    for i, value in enumerate(results[0][1].spec.values):
        row = [fmt(value)]
        for _, res in results:
            rep = res.points[i].report
            row += [
                f"{rep.expected_interference:.6e}",
                _db(rep.sir),
                _db(rep.sinr),
                f"{rep.capacity / 1e9:.6f}",
            ]
        rows.append(row)
    return columns, rows


def _histogram_rows(result: SweepResult) -> list[list[str]]:
    name, fmt = AXIS_COLUMNS[result.spec.axis]
    rows = []
    for p in result.points:
        if p.histogram is None:
            continue
        h = p.histogram
        for lo, hi, d in zip(h.bin_edges[:-1], h.bin_edges[1:], h.densities):
            rows.append([fmt(p.value), format_db(lo), format_db(hi), f"{d:.6e}", f"{h.zero_fraction:.6f}"])
    return rows


def run_command(config: RunConfig, out: Path, check_sim: bool = False, timestamp: bool = True) -> int:
    """Execute a scenario or sweep command and write its CSV files."""
    _guard(config, check_sim)
    specs = sweep_specs(config)
    results = [(tag, run_sweep(spec, check_sim=check_sim)) for tag, spec in specs]
    header = _header(timestamp)
    columns, rows = sweep_table(results)
    target = out / f"{config.command}.csv"
    _write(target, header, columns, rows)
    print(f"wrote {target}")

    if results[0][1].spec.averaging == "histogram":
        for tag, res in results:
            axis_name = AXIS_COLUMNS[res.spec.axis][0]
            path = out / f"pdf_{tag}.csv"
            _write(
                path,
                header,
                [axis_name, "bin_lo_dbm", "bin_hi_dbm", "density_per_db", "zero_fraction"],
                _histogram_rows(res),
            )
            print(f"wrote {path}")

    if check_sim:
        axis_name, fmt = AXIS_COLUMNS[results[0][1].spec.axis]
        rows, failed = [], 0
        for tag, res in results:
            for p in res.points:
                c = p.sim_check
                ok = c.set_mismatches == 0 and c.max_rel_deviation <= POWER_RTOL
                failed += not ok
                rows.append(
                    [fmt(p.value), tag, str(c.steps), str(c.set_mismatches),
                     f"{c.max_rel_deviation:.3e}", "pass" if ok else "FAIL"]
                )
        path = out / "simcheck.csv"
        _write(path, header, [axis_name, "series", "steps", "set_mismatches", "max_rel_dev", "status"], rows)
        print(f"wrote {path}")
        if failed:
            raise ValidationFailure(f"{failed} sweep points disagree with the simulator")
    return EXIT_OK


def fixture_paths() -> list[Path]:
    root = resources.files("xlink") / "fixtures"
    return sorted(Path(str(p)) for p in root.iterdir() if p.name.endswith(".toml"))


def run_validate(paths: Sequence[Path], out: Path, timestamp: bool = True) -> int:
    """Equivalence suite over fixture files; one row per fixture and series."""
    rows, failed = [], 0
    for path in paths:
        config = load_config(path)
        for series in config.series:
            params = config.scenario.with_(radio=series.radio)
            res = check_scenario(params, config.samples, path.stem)
            failed += not res.passed
            status = "pass" if res.passed else "FAIL"
            rows.append(
                [path.stem, res.kind, series.tag, str(res.steps), str(res.set_mismatches),
                 f"{res.max_rel_deviation:.3e}", status]
            )
            print(
                f"{status} {path.stem} [{series.tag}] steps={res.steps} "
                f"set_mismatches={res.set_mismatches} max_rel_dev={res.max_rel_deviation:.3e}"
            )
    target = out / "validate.csv"
    _write(
        target,
        _header(timestamp),
        ["fixture", "kind", "series", "steps", "set_mismatches", "max_rel_dev", "status"],
        rows,
    )
    print(f"wrote {target}")
    if failed:
        raise ValidationFailure(f"{failed} fixture checks failed")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="xlink",
        description="Cross-link interference engine for LEO constellations.",
        epilog=f"{THREADS_ENV} caps worker threads.",
    )
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", type=Path, help="TOML configuration (optional for validate)")
    p.add_argument("--out", type=Path, required=True, help="output directory")
    p.add_argument("--check-sim", action="store_true", help="cross-check every point with the simulator")
    p.add_argument("--no-timestamp", action="store_true", help="omit the generated-at comment line")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    timestamp = not args.no_timestamp
    try:
        worker_count()
        if args.command == "validate":
            paths = [args.config] if args.config else fixture_paths()
            return run_validate(paths, args.out, timestamp)
        if args.config is None:
            raise ConfigError("config", f"--config is required for {args.command}")
        config = load_config(args.config, args.command)
        return run_command(config, args.out, args.check_sim, timestamp)
    except (ConfigError, SweepError, GeometryError, RadioError, UnitError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as e:
        if THREADS_ENV in str(e):
            print(f"config error: {e}", file=sys.stderr)
            return EXIT_CONFIG
        raise
    except ValidationFailure as e:
        print(f"validation failed: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except ResourceGuardError as e:
        print(f"resource guard: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except OSError as e:
        print(f"I/O error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
