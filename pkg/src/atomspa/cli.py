"""Command-line front end: simulate traces, attack them, draw schedules.

Exit codes: 0 success (for attack: scalar recovered or no ground truth
expectation), 2 invalid configuration or arguments, 3 I/O or file format
problems, 4 attack finished but the scalar was not recovered.
"""

import argparse
import json
import os
import sys
from dataclasses import fields

from atomspa.field import get_curve
from atomspa.atoms import (AffinePoint, ScalarK, k_mul,
                           scalar_for_pattern_counts)
from atomspa.sched import Timing, build_schedules, addressing_diff
from atomspa.leakage import LeakageParams, simulate_trace, write_trace, \
    read_trace
from atomspa.spa import run_attack, write_report
from atomspa.diagram import render_diagram, schedule_svg

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_NOT_RECOVERED = 4

# reference scenario: 256-bit scalar with 145 one bits below the leading
# one, so a run executes 255 doublings and 145 additions
DEFAULT_CONFIG = {
    "curve": "P-256",
    "scalar": {"bits": 256, "ones_below_msb": 145, "pick_seed": 1},
    "base_point": "generator",
    "timing": {},
    "leakage": {"alpha": 1.0, "beta": 0.0, "sigma": 0.05, "seed": 1,
                "samples_per_cycle": 300},
    "workers": 1,
}


class ConfigError(Exception):
    pass


def load_config(path):
    cfg = json.loads(json.dumps(DEFAULT_CONFIG))  # deep copy
    if path:
        try:
            with open(path) as f:
                user = json.load(f)
        except OSError as e:
            raise IOError(f"cannot read config: {e}") from e
        except json.JSONDecodeError as e:
            raise ConfigError(f"config is not valid JSON: {e}") from e
        for key, val in user.items():
            if isinstance(val, dict) and isinstance(cfg.get(key), dict):
                cfg[key].update(val)
            else:
                cfg[key] = val
    return cfg


def resolve_curve(cfg):
    try:
        return get_curve(cfg["curve"])
    except ValueError as e:
        raise ConfigError(str(e)) from e


def resolve_scalar(cfg, curve):
    spec = cfg["scalar"]
    if isinstance(spec, str):
        k = ScalarK.from_string(spec)
    elif "hex" in spec:
        k = ScalarK.from_string(spec["hex"])
    else:
        bits = int(spec.get("bits", 256))
        ones = int(spec.get("ones_below_msb", 145))
        if ones > bits - 1 or bits < 2:
            raise ConfigError(
                f"unsatisfiable scalar constraints: {ones} ones in "
                f"{bits - 1} free positions")
        try:
            k = scalar_for_pattern_counts(bits, ones, curve,
                                          seed=spec.get("pick_seed", 1))
        except ValueError as e:
            raise ConfigError(str(e)) from e
    if not (1 <= k.value < curve.n):
        raise ConfigError("scalar outside [1, n)")
    return k


def resolve_point(cfg, curve):
    spec = cfg["base_point"]
    if spec == "generator":
        return AffinePoint(curve.gx, curve.gy)
    try:
        x = int(spec["x"], 16) if isinstance(spec["x"], str) else spec["x"]
        y = int(spec["y"], 16) if isinstance(spec["y"], str) else spec["y"]
        return AffinePoint(x, y).validate(curve)
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigError(f"bad base point: {e}") from e


def resolve_timing(cfg):
    spec = dict(cfg.get("timing", {}))
    known = {f.name for f in fields(Timing)}
    bad = set(spec) - known
    if bad:
        raise ConfigError(f"unknown timing options: {sorted(bad)}")
    return Timing(**spec)


def resolve_leakage(cfg, seed_override=None):
    spec = dict(cfg.get("leakage", {}))
    if seed_override is not None:
        spec["seed"] = seed_override
    try:
        return LeakageParams(**spec)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"bad leakage parameters: {e}") from e


def cmd_simulate(args):
    cfg = load_config(args.config)
    curve = resolve_curve(cfg)
    k = resolve_scalar(cfg, curve)
    point = resolve_point(cfg, curve)
    timing = resolve_timing(cfg)
    params = resolve_leakage(cfg, args.seed)

    d, a = build_schedules(timing)
    _result, seq = k_mul(k, point, curve)
    trace = simulate_trace(seq, d, a, params,
                           workers=int(cfg.get("workers", 1)))

    os.makedirs(args.out_dir, exist_ok=True)
    trace_path = os.path.join(args.out_dir, "trace.bin")
    meta_path = os.path.join(args.out_dir, "trace.json")
    write_trace(trace, trace_path, meta_path)
    nd, na = seq.count("D"), seq.count("A")
    print(f"curve           : {curve.name}")
    print(f"scalar          : 0x{k.value:x} ({k.bit_length} bits)")
    print(f"patterns        : {len(seq)} ({nd} doublings, {na} additions)")
    print(f"pattern length  : {d.cycle_count} cycles, "
          f"{d.cycle_count * params.samples_per_cycle} samples")
    print(f"total samples   : {trace.samples.size:,}")
    print(f"trace           : {trace_path}")
    print(f"metadata        : {meta_path}")
    return EXIT_OK


def cmd_attack(args):
    trace = read_trace(args.trace, args.meta or _sidecar(args.trace))
    report = run_attack(trace, chunks=args.chunks)
    paths = write_report(report, args.out_dir)
    for line in report.summary_lines():
        print(line)
    for p in paths:
        print(f"wrote {p}")
    truth = trace.meta.get("ground_truth")
    if truth is not None:
        want = "".join(truth)
        got = report.recovered_bits
        from atomspa.spa import recover_scalar
        if got is None or got != recover_scalar(want):
            print("scalar NOT recovered")
            return EXIT_NOT_RECOVERED
        print("scalar fully recovered")
    return EXIT_OK


def cmd_diagram(args):
    cfg = load_config(args.config)
    timing = resolve_timing(cfg)
    d, a = build_schedules(timing)
    os.makedirs(args.out_dir, exist_ok=True)
    paths = []
    paths += render_diagram(d, os.path.join(args.out_dir, "pattern_d"))
    paths += render_diagram(a, os.path.join(args.out_dir, "pattern_a"))
    overlay = os.path.join(args.out_dir, "pattern_overlay.svg")
    with open(overlay, "w") as f:
        f.write(schedule_svg(d, overlay_diff=addressing_diff(d, a),
                             title="doubling with addressing differences"))
    paths.append(overlay)
    diff = addressing_diff(d, a)
    print(f"pattern length        : {d.cycle_count} cycles")
    print(f"differing bus cycles  : {len(diff)}")
    for p in paths:
        print(f"wrote {p}")
    return EXIT_OK


def cmd_report(args):
    trace = read_trace(args.trace, args.meta or _sidecar(args.trace))
    report = run_attack(trace, chunks=args.chunks)
    for line in report.summary_lines():
        print(line)
    return EXIT_OK


def _sidecar(trace_path):
    base, _ = os.path.splitext(trace_path)
    return base + ".json"


def build_parser():
    p = argparse.ArgumentParser(
        prog="atomspa",
        description="atomic-pattern scalar multiplication side-channel lab")
    sub = p.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="simulate a kP power trace")
    sim.add_argument("--config", help="JSON scenario config")
    sim.add_argument("--seed", type=int, help="override the leakage seed")
    sim.add_argument("--out-dir", default=".", help="output directory")
    sim.set_defaults(func=cmd_simulate)

    att = sub.add_parser("attack", help="run the SPA attack on a trace")
    att.add_argument("--trace", required=True, help="raw float32 trace file")
    att.add_argument("--meta", help="metadata sidecar (default: trace.json)")
    att.add_argument("--out-dir", default=".", help="report directory")
    att.add_argument("--chunks", type=int, default=1)
    att.set_defaults(func=cmd_attack)

    dia = sub.add_parser("diagram", help="draw the pattern schedules")
    dia.add_argument("--config", help="JSON scenario config")
    dia.add_argument("--out-dir", default=".", help="output directory")
    dia.set_defaults(func=cmd_diagram)

    rep = sub.add_parser("report", help="print attack summary only")
    rep.add_argument("--trace", required=True)
    rep.add_argument("--meta")
    rep.add_argument("--chunks", type=int, default=1)
    rep.set_defaults(func=cmd_report)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (IOError, OSError) as e:
        print(f"i/o error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
