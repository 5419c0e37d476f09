"""Command-line front end: run experiments and export CSV or JSON tables.

Angles cross this boundary in degrees and are converted to radians
internally. Output files start with a ``# key=value`` metadata header that
records the complete run configuration (including the RNG algorithm for
Monte Carlo runs), so a file can always be reproduced from its own header;
no timestamps are written and a fixed configuration produces byte-identical
files.

Exit codes: 0 success, 1 I/O failure, 2 usage or validation error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import __version__, analytics, mc_engine
from .experiments import (
    Curve,
    Engine,
    ExperimentKind,
    KimDetector,
    ZEILINGER_CELLS,
    aspect_probabilities,
    model_label,
    sweep,
)
from .mc_engine import CoincidenceCounts, McConfig
from .optics import PolarizerSetting
from .sources import DisentangledEnsemble, EntangledPair, correlation_analytic

__all__ = ["emit_table", "run_command", "console_main"]

_DEG = math.pi / 180.0

GRID_PRESETS = {
    "gisin-figure1": "0:360:64",
    "kim-figure3": "0:360:64",
}


class _UsageError(Exception):
    pass


def _parse_grid_degrees(spec: str) -> list[float]:
    """Parse START:STOP:N (degrees, endpoint excluded) or a named preset."""
    spec = GRID_PRESETS.get(spec, spec)
    parts = spec.split(":")
    if len(parts) != 3:
        raise _UsageError(f"grid must be START:STOP:N or a preset name, got {spec!r}")
    try:
        start, stop, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise _UsageError(f"bad grid {spec!r}: {exc}") from None
    if n <= 0 or stop <= start:
        raise _UsageError(f"grid needs STOP > START and N > 0, got {spec!r}")
    return list(np.linspace(start, stop, n, endpoint=False))


def _model_from_name(name: str):
    return EntangledPair() if name == "entangled" else DisentangledEnsemble()


def _mc_config(args) -> McConfig:
    window = math.inf if args.phase_window is None else args.phase_window * _DEG
    return McConfig(
        trials=args.trials,
        seed=args.seed,
        phase_window=window,
        accidental_rate=args.accidental_rate,
        streams=args.streams,
    )


def _mc_meta(cfg: McConfig) -> dict:
    return {
        "trials": cfg.trials,
        "seed": cfg.seed,
        "streams": cfg.streams,
        "phase_window_deg": "inf" if math.isinf(cfg.phase_window) else repr(cfg.phase_window / _DEG),
        "accidental_rate": repr(cfg.accidental_rate),
        "rng": mc_engine.RNG_NAME,
    }


# ---------------------------------------------------------------------------
# Emission
# ---------------------------------------------------------------------------


def _fmt_value(v: float) -> str:
    return f"{v:.12g}"


def _curve_rows(curve: Curve) -> list[tuple[str, str, str]]:
    rows = []
    x_is_angle = curve.kind is not ExperimentKind.ZEILINGER_TELEPORT
    for p in curve.points:
        x = p.x / _DEG if x_is_angle else p.x
        rows.append((f"{x:.6f}", _fmt_value(p.y), "" if p.stderr is None else _fmt_value(p.stderr)))
    return rows


def _write_bytes(destination, payload: str) -> int:
    data = payload.encode("utf-8")
    with open(destination, "wb") as fh:
        fh.write(data)
    return len(data)


def emit_table(data, fmt: str, destination, meta: dict) -> int:
    """Write a curve or a counts table with its metadata header.

    CSV curves use the header row ``x,y,stderr`` with x in degrees to six
    decimals (the zeilinger table indexes its four cells instead) and
    values to twelve significant digits; counts use ``channel,value`` rows.
    JSON output is one object with ``meta`` plus ``points`` or ``counts``.
    Returns the number of bytes written.
    """
    if isinstance(data, Curve):
        if fmt == "csv":
            lines = [f"# {k}={v}" for k, v in meta.items()]
            lines.append("x,y,stderr")
            lines.extend(",".join(row) for row in _curve_rows(data))
            return _write_bytes(destination, "\n".join(lines) + "\n")
        points = [
            {
                "x": float(row[0]),
                "y": float(row[1]),
                "stderr": None if row[2] == "" else float(row[2]),
            }
            for row in _curve_rows(data)
        ]
        doc = {"meta": meta, "points": points}
        return _write_bytes(destination, json.dumps(doc, indent=2, sort_keys=True) + "\n")

    if isinstance(data, CoincidenceCounts):
        entries = list(data.channels().items())
        entries += [("accidental", data.n_accidental), ("trials", data.n_trials)]
        if fmt == "csv":
            lines = [f"# {k}={v}" for k, v in meta.items()]
            lines.append("channel,value")
            lines.extend(f"{name},{_fmt_value(value)}" for name, value in entries)
            return _write_bytes(destination, "\n".join(lines) + "\n")
        doc = {"meta": meta, "counts": {name: value for name, value in entries}}
        return _write_bytes(destination, json.dumps(doc, indent=2, sort_keys=True) + "\n")

    raise TypeError(f"emit_table expects a Curve or CoincidenceCounts, got {type(data).__name__}")


def _emit_mapping(values: dict, fmt: str, destination, meta: dict) -> int:
    if fmt == "csv":
        lines = [f"# {k}={v}" for k, v in meta.items()]
        lines.append("term,value")
        lines.extend(f"{k},{_fmt_value(v)}" for k, v in values.items())
        return _write_bytes(destination, "\n".join(lines) + "\n")
    doc = {"meta": meta, **values}
    return _write_bytes(destination, json.dumps(doc, indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# Subcommand handlers
# ---------------------------------------------------------------------------


def _base_meta(args, command: str) -> dict:
    return {
        "tool": f"eprsim {__version__}",
        "command": command,
        "model": args.model,
        "engine": args.engine,
        "format": args.format,
    }


def _handle_aspect(args) -> int:
    model = _model_from_name(args.model)
    a = PolarizerSetting(args.a * _DEG)
    b = PolarizerSetting(args.b * _DEG)
    meta = _base_meta(args, "aspect")
    meta["a_deg"] = repr(args.a)
    meta["b_deg"] = repr(args.b)
    if args.engine == "analytic":
        probs = aspect_probabilities(model, a, b)
        meta["correlation"] = _fmt_value(correlation_analytic(model, a.angle, b.angle))
        values = {"pp": probs.p_pp, "pm": probs.p_pm, "mp": probs.p_mp, "mm": probs.p_mm}
        return _finish(_emit_mapping(values, args.format, args.out, meta))
    cfg = _mc_config(args)
    meta.update(_mc_meta(cfg))
    counts = mc_engine.run_double_coincidence(model, a, b, cfg)
    est = analytics.correlation_from_counts(counts)
    meta["correlation"] = _fmt_value(est.value)
    meta["correlation_stderr"] = _fmt_value(est.std_err)
    return _finish(emit_table(counts, args.format, args.out, meta))


def _sweep_command(args, kind: ExperimentKind, command: str, grid, meta_extra=None, **settings) -> int:
    model = _model_from_name(args.model)
    meta = _base_meta(args, command)
    meta.update(meta_extra or {})
    if args.engine == "analytic":
        curve = sweep(kind, model, grid, engine=Engine.ANALYTIC, **settings)
        return _finish(emit_table(curve, args.format, args.out, meta))
    cfg = _mc_config(args)
    meta.update(_mc_meta(cfg))
    curve = sweep(kind, model, grid, engine=Engine.MONTE_CARLO, mc=cfg, **settings)
    return _finish(emit_table(curve, args.format, args.out, meta))


def _handle_gisin(args) -> int:
    grid_deg = _parse_grid_degrees(args.grid)
    if abs(args.a0**2 + args.a1**2 - 1.0) > 1e-9:
        raise _UsageError(f"--a0/--a1 must satisfy a0^2 + a1^2 = 1, got {args.a0}, {args.a1}")
    return _sweep_command(
        args, ExperimentKind.GISIN_TRIPLE, "gisin", [x * _DEG for x in grid_deg],
        meta_extra={"grid": args.grid, "a0": repr(args.a0), "a1": repr(args.a1)},
        a0=args.a0, a1=args.a1,
    )


def _handle_kim(args) -> int:
    grid_deg = _parse_grid_degrees(args.grid)
    detector = KimDetector(args.detector)
    return _sweep_command(
        args, ExperimentKind.KIM_COMPLETE_BSM, "kim", [x * _DEG for x in grid_deg],
        meta_extra={"grid": args.grid, "detector": detector.value},
        detector=detector,
    )


def _handle_zeilinger(args) -> int:
    cells = ",".join(f"{a.value}:{b.value}" for a, b in ZEILINGER_CELLS)
    return _sweep_command(
        args, ExperimentKind.ZEILINGER_TELEPORT, "zeilinger",
        [float(i) for i in range(len(ZEILINGER_CELLS))],
        meta_extra={"cells": cells},
    )


def _handle_chsh(args) -> int:
    try:
        angles = [float(x) * _DEG for x in args.angles.split(",")]
    except ValueError:
        raise _UsageError(f"--angles must be four comma-separated degrees, got {args.angles!r}")
    if len(angles) != 4:
        raise _UsageError("--angles needs exactly four values: a,a',b,b'")
    a, ap, b, bp = angles
    model = _model_from_name(args.model)
    meta = _base_meta(args, "chsh")
    meta["angles_deg"] = args.angles
    pairs = [(a, b), (a, bp), (ap, b), (ap, bp)]
    if args.engine == "analytic":
        e_values = [correlation_analytic(model, x, y) for x, y in pairs]
        s = analytics.chsh(*e_values)
        values = {
            "e_ab": e_values[0], "e_abp": e_values[1],
            "e_apb": e_values[2], "e_apbp": e_values[3],
            "s": s,
        }
        return _finish(_emit_mapping(values, args.format, args.out, meta))
    cfg = _mc_config(args)
    meta.update(_mc_meta(cfg))
    estimates = [
        analytics.correlation_from_counts(
            mc_engine.run_double_coincidence(
                model, PolarizerSetting(x), PolarizerSetting(y), cfg, key=(i,)
            )
        )
        for i, (x, y) in enumerate(pairs)
    ]
    s = analytics.chsh(*(est.value for est in estimates))
    s_err = math.sqrt(sum(est.std_err**2 for est in estimates))
    values = {
        "e_ab": estimates[0].value, "e_abp": estimates[1].value,
        "e_apb": estimates[2].value, "e_apbp": estimates[3].value,
        "s": s, "s_stderr": s_err,
    }
    return _finish(_emit_mapping(values, args.format, args.out, meta))


def _handle_rate(args) -> int:
    if args.phase_window is None:
        raise _UsageError("rate needs --phase-window")
    window = args.phase_window * _DEG
    rate = mc_engine.estimate_detection_rate(window, args.trials, args.seed)
    stderr = math.sqrt(max(0.0, rate * (1.0 - rate)) / args.trials)
    meta = _base_meta(args, "rate")
    meta.update(
        {
            "phase_window_deg": repr(args.phase_window),
            "trials": args.trials,
            "seed": args.seed,
            "rng": mc_engine.RNG_NAME,
        }
    )
    lines_payload = {"window_deg": args.phase_window, "rate": rate, "stderr": stderr}
    return _finish(_emit_mapping(lines_payload, args.format, args.out, meta))


def _finish(bytes_written: int) -> int:
    return 0 if bytes_written >= 0 else 1


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _add_common(sub, default_format="csv"):
    sub.add_argument("--config", help="key=value config file; flags override file values")
    sub.add_argument("--model", choices=["entangled", "disentangled"], default="entangled")
    sub.add_argument("--engine", choices=["analytic", "montecarlo"], default="analytic")
    sub.add_argument("--trials", type=int, default=100_000)
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--streams", type=int, default=1)
    sub.add_argument("--phase-window", dest="phase_window", type=float, default=None,
                     help="phase matching half-width in degrees (default: disabled)")
    sub.add_argument("--accidental-rate", dest="accidental_rate", type=float, default=0.0)
    sub.add_argument("--out", required=True, help="output file path")
    sub.add_argument("--format", choices=["csv", "json"], default=default_format)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eprsim",
        description="EPR coincidence experiments: entangled versus disentangled predictions",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    aspect = commands.add_parser("aspect", help="double-coincidence polarizer correlation")
    _add_common(aspect)
    aspect.add_argument("--a", type=float, required=True, help="polarizer A angle (degrees)")
    aspect.add_argument("--b", type=float, required=True, help="polarizer B angle (degrees)")
    aspect.set_defaults(handler=_handle_aspect)

    gisin = commands.add_parser("gisin", help="triple-coincidence fringe vs analyzer phase")
    _add_common(gisin)
    gisin.add_argument("--grid", default="gisin-figure1",
                       help="START:STOP:N in degrees (endpoint excluded) or preset gisin-figure1")
    gisin.add_argument("--a0", type=float, default=1.0 / math.sqrt(2.0))
    gisin.add_argument("--a1", type=float, default=1.0 / math.sqrt(2.0))
    gisin.set_defaults(handler=_handle_gisin)

    zeilinger = commands.add_parser("zeilinger", help="teleportation match/mismatch rate table")
    _add_common(zeilinger)
    zeilinger.set_defaults(handler=_handle_zeilinger)

    kim = commands.add_parser("kim", help="complete-BSM fringe vs analyzer angle")
    _add_common(kim)
    kim.add_argument("--detector", choices=["I", "II"], required=True)
    kim.add_argument("--grid", default="kim-figure3",
                     help="START:STOP:N in degrees (endpoint excluded) or preset kim-figure3")
    kim.set_defaults(handler=_handle_kim)

    chsh = commands.add_parser("chsh", help="CHSH combination at four polarizer angles")
    _add_common(chsh, default_format="json")
    chsh.add_argument("--angles", required=True, help="a,a',b,b' in degrees")
    chsh.set_defaults(handler=_handle_chsh)

    rate = commands.add_parser("rate", help="phase-matching detection rate for a window")
    _add_common(rate)
    rate.set_defaults(handler=_handle_rate)

    return parser


def _apply_config_file(argv: list[str]) -> list[str]:
    """Insert config-file values as tokens right after the subcommand."""
    if "--config" in argv:
        idx = argv.index("--config")
        if idx + 1 >= len(argv):
            return argv
        path = argv[idx + 1]
        tokens = []
        with open(path) as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#") or "=" not in line:
                    continue
                k, v = line.split("=", 1)
                tokens.extend([f"--{k.strip()}", v.strip()])
        return argv[:1] + tokens + argv[1:]
    return argv


def run_command(argv: list[str]) -> int:
    """Parse and execute one CLI invocation; returns the process exit code."""
    parser = build_parser()
    try:
        argv = _apply_config_file(list(argv))
    except OSError as exc:
        print(f"eprsim: cannot read config file: {exc}", file=sys.stderr)
        return 1
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return args.handler(args)
    except _UsageError as exc:
        print(f"eprsim: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"eprsim: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"eprsim: {exc}", file=sys.stderr)
        return 1


def console_main() -> None:
    sys.exit(run_command(sys.argv[1:]))
