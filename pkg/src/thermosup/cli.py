"""Command-line entry point.

Subcommands cover every report the library produces: ``gibbs``,
``twobath``, ``onebath``, ``collide``, ``heatmap``, and ``maxvis``. Heat
maps emit CSV with columns ``t0,t1,visibility``; thermalisation curves
emit ``collision,trace_distance``. A config file (flat ``key = value``
lines, a TOML-compatible subset) can supply any option; explicit flags
win. Runs with a fixed seed are byte-reproducible.

Exit codes: 0 success, 2 parse/config error, 3 domain validation,
4 resource or I/O failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import __version__
from .collision import (
    DEFAULT_MAX_AMPLITUDES,
    CollisionConfig,
    GridSpec,
    MemoryBudgetError,
    ThresholdNotReachedError,
    collisions_to_threshold,
    thermalization_curve,
    visibility_heatmap,
    visibility_trace,
)
from .onebath import (
    OneBathConfig,
    max_visibility_onebath,
    probe_output,
    visibility_onebath,
)
from .qmath import EIGENVALUE_FLOOR, HERMITIAN_ATOL, TRACE_ATOL, UNITARY_ATOL
from .thermal import (
    HamiltonianSpec,
    PurificationSpec,
    Temperature,
    gibbs_weights,
)
from .twobath import (
    TwoBathConfig,
    conditional_probe_state,
    max_visibility_closed_form,
    max_visibility_search,
    visibility,
)

_TOLERANCES = {
    "hermitian_atol": HERMITIAN_ATOL,
    "trace_atol": TRACE_ATOL,
    "eigenvalue_floor": EIGENVALUE_FLOOR,
    "unitary_atol": UNITARY_ATOL,
}


class ConfigError(Exception):
    pass


@dataclass
class ResultRecord:
    """Machine-readable run record mirrored to JSON."""

    experiment: str
    inputs: dict
    outputs: dict
    tolerances: dict = field(default_factory=lambda: dict(_TOLERANCES))
    versions: dict = field(default_factory=lambda: {"thermosup": __version__, "record": 1})

    def to_json(self) -> str:
        payload = {
            "experiment": self.experiment,
            "inputs": _jsonable(self.inputs),
            "outputs": _jsonable(self.outputs),
            "tolerances": _jsonable(self.tolerances),
            "versions": self.versions,
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _jsonable(value):
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        if np.iscomplexobj(value):
            return _jsonable([[ [z.real, z.imag] for z in row] for row in np.atleast_2d(value)])
        return _jsonable(value.tolist())
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, complex):
        return [value.real, value.imag]
    return value


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def emit_csv(header: list[str], rows: list[tuple], path: str | None) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) if isinstance(v, (float, np.floating)) else str(v) for v in row))
    text = "\n".join(lines) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def emit_json(record: ResultRecord, path: str | None) -> None:
    text = record.to_json()
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def parse_config(path: str) -> dict:
    """Flat ``key = value`` file: quoted strings, numbers, true/false, inf."""
    values: dict = {}
    try:
        with open(path) as fh:
            raw_lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    for lineno, raw in enumerate(raw_lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if not key or not val:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        if val.startswith('"') and val.endswith('"') and len(val) >= 2:
            values[key] = val[1:-1]
        elif val in ("true", "false"):
            values[key] = val == "true"
        else:
            try:
                values[key] = int(val)
            except ValueError:
                try:
                    values[key] = float(val)
                except ValueError:
                    raise ConfigError(f"{path}:{lineno}: cannot parse value {val!r}") from None
    return values


@dataclass(frozen=True)
class _Opt:
    name: str
    typ: Callable
    default: object = None
    help: str = ""
    choices: tuple | None = None


def _temperature(text: str) -> float:
    t = float(text)
    if math.isnan(t) or t < 0:
        raise argparse.ArgumentTypeError(f"temperature must be >= 0, got {text}")
    return t


_COMMON = [
    _Opt("config", str, None, "flat key=value config file; flags win"),
    _Opt("out", str, None, "output file (stdout when omitted)"),
    _Opt("format", str, "csv", "output format", ("csv", "json")),
    _Opt("seed", int, 0, "random seed for stochastic subcommands"),
]

_PLOT = _Opt("plot", str, None, "also render a figure to this image file")

_ENERGIES = _Opt("energies", str, "0,1", "comma-separated ascending level energies")
_PROBE = _Opt("probe", str, "ground", "initial probe state", ("ground", "mixed", "plus"))

_COMMANDS: dict[str, dict] = {
    "gibbs": {
        "help": "thermal weights and state for one temperature",
        "opts": [_Opt("t", _temperature, 1.0, "temperature (0 and inf allowed)"), _ENERGIES],
    },
    "twobath": {
        "help": "quantum-controlled two-bath visibility and conditional state",
        "opts": [
            _Opt("t0", _temperature, 1.0, "temperature of bath 0"),
            _Opt("t1", _temperature, 1.0, "temperature of bath 1"),
            _Opt("phi", float, 0.0, "control measurement phase"),
            _PROBE,
            _ENERGIES,
        ],
    },
    "onebath": {
        "help": "superposed-purification visibility and probe output",
        "opts": [
            _Opt("t0", _temperature, 1.0, "temperature of branch 0"),
            _Opt("t1", _temperature, 1.0, "temperature of branch 1"),
            _Opt("phi0", float, 0.0, "purification phase of branch 0"),
            _Opt("phi1", float, 0.0, "purification phase of branch 1"),
            _Opt("phic", float, 0.0, "control measurement phase"),
            _PROBE,
            _ENERGIES,
        ],
    },
    "collide": {
        "help": "collisional thermalisation curve or collisional visibility",
        "opts": [
            _Opt("eta", float, 0.8, "interaction strength in [0, 1]"),
            _Opt("m", int, 5, "number of collisions / bath subsystems"),
            _Opt("scenario", str, "plain", "collisional scenario", ("plain", "twobath", "onebath")),
            _Opt("t", _temperature, 1.0, "bath temperature (both baths unless overridden)"),
            _Opt("t0", _temperature, None, "temperature of bath/branch 0"),
            _Opt("t1", _temperature, None, "temperature of bath/branch 1"),
            _Opt("eps", float, 1e-3, "thermalisation threshold on the trace distance"),
            _Opt("probe", str, "ground", "initial pure probe state", ("ground", "plus")),
            _PLOT,
        ],
    },
    "heatmap": {
        "help": "visibility heat map over a (T0, T1) grid",
        "opts": [
            _Opt("scenario", str, None, "which scenario to sweep", ("twobath", "onebath")),
            _Opt("eta", float, 0.8, "interaction strength in [0, 1]"),
            _Opt("m", int, 3, "number of collisions per bath"),
            _Opt("grid", int, 25, "grid points per temperature axis"),
            _Opt("tmin", _temperature, 0.1, "lowest temperature on the grid"),
            _Opt("tmax", _temperature, 5.0, "highest temperature on the grid"),
            _Opt("probe", str, "ground", "initial pure probe state", ("ground", "plus")),
            _PLOT,
        ],
    },
    "maxvis": {
        "help": "extremal two-bath visibility: closed form and stochastic search",
        "opts": [
            _Opt("t0", _temperature, 1.0, "temperature of bath 0"),
            _Opt("t1", _temperature, 1.0, "temperature of bath 1"),
            _Opt("trials", int, 20000, "Haar samples before refinement"),
            _PROBE,
            _ENERGIES,
        ],
    },
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="thermosup",
        description="Operational simulations of thermalisation controlled by a quantum degree of freedom.",
    )
    parser.add_argument("--version", action="version", version=f"thermosup {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, spec in _COMMANDS.items():
        p = sub.add_parser(name, help=spec["help"])
        for opt in _COMMON + spec["opts"]:
            kwargs = {"help": opt.help, "default": None}
            if opt.choices:
                kwargs["choices"] = opt.choices
            if opt.typ is not str:
                kwargs["type"] = opt.typ
            p.add_argument(f"--{opt.name}", **kwargs)
    return parser


def _resolve(args: argparse.Namespace) -> dict:
    spec = _COMMANDS[args.command]
    opts_spec = _COMMON + spec["opts"]
    allowed = {o.name for o in opts_spec if o.name != "config"}
    file_values = parse_config(args.config) if args.config else {}
    unknown = set(file_values) - allowed
    if unknown:
        raise ConfigError(f"unknown config keys for {args.command}: {sorted(unknown)}")
    resolved = {}
    for opt in opts_spec:
        value = getattr(args, opt.name)
        if value is None and opt.name in file_values:
            raw = file_values[opt.name]
            try:
                value = opt.typ(str(raw)) if opt.typ is not str else str(raw)
            except (ValueError, argparse.ArgumentTypeError) as exc:
                raise ConfigError(f"config key {opt.name}: {exc}") from exc
            if opt.choices and value not in opt.choices:
                raise ConfigError(f"config key {opt.name} must be one of {opt.choices}")
        if value is None:
            value = opt.default
        resolved[opt.name] = value
    return resolved


def _energies(opts: dict) -> HamiltonianSpec:
    try:
        levels = tuple(float(x) for x in str(opts["energies"]).split(","))
    except ValueError as exc:
        raise ValueError(f"cannot parse energies {opts['energies']!r}") from exc
    return HamiltonianSpec(levels)


def _probe_density(kind: str, dim: int) -> np.ndarray:
    rho = np.zeros((dim, dim), dtype=complex)
    if kind == "ground":
        rho[0, 0] = 1.0
    elif kind == "mixed":
        rho = np.eye(dim, dtype=complex) / dim
    elif kind == "plus":
        v = np.zeros(dim, dtype=complex)
        v[0] = v[1] = 1.0 / np.sqrt(2.0)
        rho = np.outer(v, v.conj())
    else:
        raise ValueError(f"unknown probe {kind!r}")
    return rho


def _probe_vector(kind: str) -> np.ndarray:
    if kind == "ground":
        return np.array([1.0, 0.0], dtype=complex)
    if kind == "plus":
        return np.array([1.0, 1.0], dtype=complex) / np.sqrt(2.0)
    raise ValueError(f"unknown pure probe {kind!r}")


def _max_amplitudes() -> int:
    raw = os.environ.get("THERMOSUP_MAX_DIM")
    if raw is None:
        return DEFAULT_MAX_AMPLITUDES
    try:
        return int(raw)
    except ValueError as exc:
        raise ValueError(f"THERMOSUP_MAX_DIM must be an integer, got {raw!r}") from exc


def _run_gibbs(opts: dict):
    h = _energies(opts)
    t = Temperature.from_temperature(opts["t"])
    gw = gibbs_weights(h, t)
    rows = [(n, h.energies[n], gw.weights[n]) for n in range(h.dim)]
    record = ResultRecord(
        "gibbs",
        inputs={"t": opts["t"], "energies": list(h.energies)},
        outputs={"weights": list(gw.weights), "z_shifted": gw.z, "beta": t.beta},
    )
    return record, ["level", "energy", "weight"], rows, None


def _run_twobath(opts: dict):
    h = _energies(opts)
    cfg = TwoBathConfig(
        h=h,
        t0=Temperature.from_temperature(opts["t0"]),
        t1=Temperature.from_temperature(opts["t1"]),
        rho_s=_probe_density(opts["probe"], h.dim),
        phi=opts["phi"],
    )
    vis = visibility(cfg)
    state = conditional_probe_state(cfg)
    prob = float(np.trace(state).real)
    record = ResultRecord(
        "twobath",
        inputs={k: opts[k] for k in ("t0", "t1", "phi", "probe", "energies")},
        outputs={
            "visibility": vis.visibility,
            "phase": vis.phase,
            "probability": prob,
            "conditional_state": state,
        },
    )
    rows = [("visibility", vis.visibility), ("phase", vis.phase), ("probability", prob)]
    return record, ["quantity", "value"], rows, None


def _run_onebath(opts: dict):
    h = _energies(opts)
    cfg = OneBathConfig(
        h=h,
        purification=PurificationSpec(
            temperatures=(
                Temperature.from_temperature(opts["t0"]),
                Temperature.from_temperature(opts["t1"]),
            ),
            phases=(opts["phi0"], opts["phi1"]),
        ),
        rho_s=_probe_density(opts["probe"], h.dim),
        phi_c=opts["phic"],
    )
    vis = visibility_onebath(cfg)
    vmax = max_visibility_onebath(h, *cfg.purification.temperatures)
    state = probe_output(cfg)
    prob = float(np.trace(state).real)
    record = ResultRecord(
        "onebath",
        inputs={k: opts[k] for k in ("t0", "t1", "phi0", "phi1", "phic", "probe", "energies")},
        outputs={
            "visibility": vis.visibility,
            "phase": vis.phase,
            "max_visibility": vmax,
            "probability": prob,
            "probe_state": state,
        },
    )
    rows = [
        ("visibility", vis.visibility),
        ("phase", vis.phase),
        ("max_visibility", vmax),
        ("probability", prob),
    ]
    return record, ["quantity", "value"], rows, None


def _collision_config(opts: dict) -> CollisionConfig:
    t0 = opts["t0"] if opts["t0"] is not None else opts["t"]
    t1 = opts["t1"] if opts["t1"] is not None else t0
    return CollisionConfig(
        eta=opts["eta"],
        m=opts["m"],
        t0=Temperature.from_temperature(t0),
        t1=Temperature.from_temperature(t1),
        probe=_probe_vector(opts["probe"]),
        threshold=opts["eps"],
        scenario=opts["scenario"],
    )


def _run_collide(opts: dict):
    from .plotting import render_curve

    cfg = _collision_config(opts)
    cap = _max_amplitudes()
    inputs = {k: opts[k] for k in ("eta", "m", "scenario", "t", "t0", "t1", "eps", "probe")}
    if cfg.scenario == "plain":
        trace = thermalization_curve(cfg, max_amplitudes=cap)
        try:
            crossing = collisions_to_threshold(cfg, max_amplitudes=cap)
        except ThresholdNotReachedError:
            crossing = None
        record = ResultRecord(
            "collide",
            inputs=inputs,
            outputs={
                "trace_distance": list(trace.trace_distance),
                "threshold_collision": crossing,
            },
        )
        rows = list(zip(trace.collisions.tolist(), trace.trace_distance))
        header = ["collision", "trace_distance"]
    else:
        trace = visibility_trace(cfg, max_amplitudes=cap)
        record = ResultRecord(
            "collide",
            inputs=inputs,
            outputs={"visibility": list(trace.visibility)},
        )
        rows = list(zip(trace.collisions.tolist(), trace.visibility))
        header = ["collision", "visibility"]
    plotter = (lambda path: render_curve(trace, path)) if opts["plot"] else None
    return record, header, rows, plotter


def _run_heatmap(opts: dict):
    from .plotting import render_heatmap

    if opts["scenario"] is None:
        raise ValueError("heatmap requires --scenario twobath|onebath")
    cfg = CollisionConfig(
        eta=opts["eta"],
        m=opts["m"],
        t0=Temperature.from_temperature(1.0),
        probe=_probe_vector(opts["probe"]),
        scenario=opts["scenario"],
    )
    grid = GridSpec(t_min=opts["tmin"], t_max=opts["tmax"], points=opts["grid"])
    result = visibility_heatmap(grid, cfg, max_amplitudes=_max_amplitudes())
    rows = list(result.iter_rows())
    record = ResultRecord(
        "heatmap",
        inputs={k: opts[k] for k in ("scenario", "eta", "m", "grid", "tmin", "tmax", "probe")},
        outputs={
            "temperatures": list(result.temperatures),
            "visibility": result.values,
        },
    )
    plotter = (lambda path: render_heatmap(result, path)) if opts["plot"] else None
    return record, ["t0", "t1", "visibility"], rows, plotter


def _run_maxvis(opts: dict):
    h = _energies(opts)
    t0 = Temperature.from_temperature(opts["t0"])
    t1 = Temperature.from_temperature(opts["t1"])
    rho = _probe_density(opts["probe"], h.dim)
    closed = max_visibility_closed_form(h, t0, t1, rho)
    searched = max_visibility_search(h, t0, t1, rho, trials=opts["trials"], seed=opts["seed"])
    record = ResultRecord(
        "maxvis",
        inputs={k: opts[k] for k in ("t0", "t1", "probe", "trials", "seed", "energies")},
        outputs={"closed_form": closed, "search": searched, "gap": closed - searched},
    )
    rows = [("closed_form", closed), ("search", searched), ("gap", closed - searched)]
    return record, ["quantity", "value"], rows, None


_RUNNERS = {
    "gibbs": _run_gibbs,
    "twobath": _run_twobath,
    "onebath": _run_onebath,
    "collide": _run_collide,
    "heatmap": _run_heatmap,
    "maxvis": _run_maxvis,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        opts = _resolve(args)
    except ConfigError as exc:
        print(f"thermosup: config error: {exc}", file=sys.stderr)
        return 2
    try:
        record, header, rows, plotter = _RUNNERS[args.command](opts)
    except MemoryBudgetError as exc:
        print(f"thermosup: resource error: {exc}", file=sys.stderr)
        return 4
    except ValueError as exc:
        print(f"thermosup: invalid parameters: {exc}", file=sys.stderr)
        return 3
    try:
        if opts["format"] == "json":
            emit_json(record, opts["out"])
        else:
            emit_csv(header, rows, opts["out"])
        if opts.get("plot") and plotter is not None:
            plotter(opts["plot"])
    except OSError as exc:
        print(f"thermosup: I/O error: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
