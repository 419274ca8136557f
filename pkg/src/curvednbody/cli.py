"""Command-line front end: experiment configuration, orchestration, and
trajectory/report serialization.

Configs are JSON documents carrying a schema_version, the curvature, masses,
and either explicit initial conditions or a catalog orbit name with
parameters.  Trajectories serialize to long-format CSV (one row per body per
sample); reports and residual/verification output serialize to JSON.  All
numbers are written with 17 significant digits so doubles round-trip.

Exit codes: 0 ok, 2 config error, 3 singularity stop, 4 integrator failure,
5 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time

import numpy as np

from . import __version__
from .analysis import classify, stability_scan
from .dynamics import PhaseState, detect_singularity, first_integrals
from .equilibria import (
    CATALOG,
    RESpec,
    catalog,
    catalog_defaults,
    criterion_residual,
    fixed_point_residual,
    initial_state,
    parabolic_nonexistence_check,
    random_parabolic_spec,
)
from .errors import (
    CurvedNBodyError,
    IntegrationError,
    SingularityApproach,
    SingularityError,
)
from .geometry import Curvature
from .integrator import IntegratorConfig, TrajectorySample, integrate
from .isometry import RotationKind

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SINGULARITY = 3
EXIT_INTEGRATOR = 4
EXIT_VERIFICATION = 5

CSV_HEADER = ["t", "body", "w", "x", "y", "z", "vw", "vx", "vy", "vz"]


class ConfigError(CurvedNBodyError):
    pass


def _fmt(x) -> str:
    return f"{float(x):.17g}"


def _load_config(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    version = cfg.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ConfigError(f"unsupported schema_version {version!r}; "
                          f"expected {SCHEMA_VERSION}")
    return cfg


def _integrator_config(cfg: dict, args) -> IntegratorConfig:
    overrides = dict(cfg.get("integrator", {}))
    if getattr(args, "rel_tol", None) is not None:
        overrides["rel_tol"] = args.rel_tol
    if getattr(args, "abs_tol", None) is not None:
        overrides["abs_tol"] = args.abs_tol
    allowed = {"rel_tol", "abs_tol", "h_init", "h_min", "project_every_step",
               "singularity_margin_stop"}
    unknown = set(overrides) - allowed
    if unknown:
        raise ConfigError(f"unknown integrator settings: {sorted(unknown)}")
    try:
        return IntegratorConfig(**overrides)
    except CurvedNBodyError as exc:
        raise ConfigError(str(exc)) from exc


def _spec_from_config(cfg: dict, seed=None) -> RESpec:
    if "catalog" in cfg:
        entry = cfg["catalog"]
        if not isinstance(entry, dict) or "name" not in entry:
            raise ConfigError("catalog entry needs a 'name'")
        params = entry.get("params", {})
        try:
            return catalog(entry["name"], **params)
        except TypeError as exc:
            raise ConfigError(f"bad catalog parameters: {exc}") from exc
    if "respec" in cfg:
        entry = dict(cfg["respec"])
        if entry.get("kind") == RotationKind.NEG_PARABOLIC.value and \
                "coords0" not in entry:
            rng = np.random.default_rng(seed)
            n = int(entry.get("n", 3))
            return random_parabolic_spec(n, float(entry.get("kappa", -1.0)), rng)
        try:
            return RESpec.from_dict(entry)
        except KeyError as exc:
            raise ConfigError(f"respec is missing field {exc}") from exc
    raise ConfigError("config needs a 'catalog' or 'respec' entry")


def _state_from_config(cfg: dict) -> PhaseState:
    if "initial" in cfg:
        init = cfg["initial"]
        for key in ("positions", "velocities"):
            if key not in init:
                raise ConfigError(f"initial conditions need '{key}'")
        kappa = cfg.get("kappa")
        if kappa is None:
            raise ConfigError("explicit initial conditions need 'kappa'")
        masses = cfg.get("masses")
        if masses is None:
            raise ConfigError("explicit initial conditions need 'masses'")
        return PhaseState.from_arrays(float(kappa), masses,
                                      np.asarray(init["positions"], float),
                                      np.asarray(init["velocities"], float))
    return initial_state(_spec_from_config(cfg))


def _write_trajectory(path, samples: list[TrajectorySample]):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for s in samples:
            for b in range(s.state.n):
                writer.writerow([_fmt(s.t), b,
                                 *(_fmt(x) for x in s.state.q[b]),
                                 *(_fmt(x) for x in s.state.v[b])])


def read_trajectory(path):
    """Read a long-format trajectory CSV back into (times, q, v) arrays."""
    rows = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != CSV_HEADER:
            raise ConfigError(f"unexpected trajectory columns {reader.fieldnames}")
        for row in reader:
            t = float(row["t"])
            rows.setdefault(t, {})[int(row["body"])] = [
                float(row[c]) for c in CSV_HEADER[2:]]
    times = sorted(rows)
    n = len(rows[times[0]])
    q = np.array([[rows[t][b][:4] for b in range(n)] for t in times])
    v = np.array([[rows[t][b][4:] for b in range(n)] for t in times])
    return np.array(times), q, v


def _integral_record(samples):
    return {
        "t": [s.t for s in samples],
        "h": [s.integrals.h for s in samples],
        **{f"c_{name}": [getattr(s.integrals, f"c_{name}") for s in samples]
           for name in ("wx", "wy", "wz", "xy", "xz", "yz")},
    }


def _write_json(path, payload):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def cmd_simulate(args) -> int:
    t_start = time.perf_counter()
    cfg = _load_config(args.config)
    state0 = _state_from_config(cfg)
    verdict = detect_singularity(state0.q, state0.curvature)
    if verdict:
        print(f"error: initial configuration is singular: "
              f"{verdict.kind.capitalize()}({verdict.i},{verdict.j})",
              file=sys.stderr)
        return EXIT_CONFIG
    icfg = _integrator_config(cfg, args)
    t_end = args.t_end if args.t_end is not None else cfg.get("t_end")
    if t_end is None:
        raise ConfigError("no t_end given (config key or --t-end)")
    n_samples = args.samples if args.samples is not None else cfg.get("samples", 100)
    times = np.linspace(state0.t, float(t_end), int(n_samples))

    outputs = cfg.get("output", {})
    traj_path = args.out or outputs.get("trajectory", "trajectory.csv")
    report_path = outputs.get("report", "report.json")

    status = "completed"
    stop = None
    try:
        samples = integrate(state0, float(t_end), icfg, sample_times=times)
    except SingularityApproach as exc:
        samples = exc.samples
        status = "singularity_approach"
        stop = {"i": exc.i, "j": exc.j, "t": exc.t, "margin": exc.margin}
    except IntegrationError as exc:
        print(f"error: integration failed: {exc}", file=sys.stderr)
        return EXIT_INTEGRATOR

    _write_trajectory(traj_path, samples)
    record = _integral_record(samples)
    h = np.array(record["h"])
    c = np.array([record[f"c_{k}"] for k in ("wx", "wy", "wz", "xy", "xz", "yz")])
    report = {
        "status": status,
        "singularity_stop": stop,
        "n_samples": len(samples),
        "integrals": record,
        "drift": {
            "h_rel": float(np.max(np.abs(h - h[0])) / max(1e-300, abs(h[0]))),
            "c_abs": float(np.max(np.abs(c - c[:, :1]))) if samples else 0.0,
        },
        "classification": classify(samples).tag if len(samples) >= 8 else None,
        "wall_clock_s": time.perf_counter() - t_start,
    }
    _write_json(report_path, report)
    print(f"wrote {traj_path} and {report_path} ({len(samples)} samples, "
          f"status {status})")
    return EXIT_SINGULARITY if status == "singularity_approach" else EXIT_OK


def cmd_verify(args) -> int:
    cfg = _load_config(args.config)
    spec = _spec_from_config(cfg, seed=args.seed)
    out = args.out or cfg.get("output", {}).get("report", "verify.json")
    if spec.kind is RotationKind.NEG_PARABOLIC:
        evidence = parabolic_nonexistence_check(spec)
        payload = {"kind": spec.kind.value, "evidence": evidence.to_dict()}
        _write_json(out, payload)
        print(f"parabolic ansatz rejected: {evidence.conclusion}")
        return EXIT_OK
    report = criterion_residual(spec)
    payload = report.to_dict()
    if spec.kind in (RotationKind.POS_ELLIPTIC,
                     RotationKind.POS_ELLIPTIC_ELLIPTIC):
        fp = fixed_point_residual(spec)
        payload["fixed_point"] = fp.to_dict()
        if fp.passed and fp.condition:
            payload["condition"] = fp.condition
    _write_json(out, payload)
    line = (f"{payload['criterion']}: max residual {report.max_abs:.3e} -> "
            f"{'pass' if report.passed else 'FAIL'}")
    if payload.get("condition"):
        line += f" (condition: {payload['condition']})"
    print(line)
    return EXIT_OK if report.passed else EXIT_VERIFICATION


def cmd_catalog(args) -> int:
    if args.action == "list":
        for name in sorted(CATALOG):
            defaults = ", ".join(f"{k}={v!r}" for k, v in
                                 catalog_defaults(name).items())
            print(f"{name}({defaults})")
        return EXIT_OK
    if not args.name:
        raise ConfigError("catalog emit needs an orbit name")
    params = json.loads(args.params) if args.params else {}
    spec = catalog(args.name, **params)
    state = initial_state(spec)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "kappa": spec.kappa,
        "masses": spec.masses.tolist(),
        "respec": spec.to_dict(),
        "initial": {"positions": state.q.tolist(),
                    "velocities": state.v.tolist()},
    }
    if args.out:
        _write_json(args.out, payload)
        print(f"wrote {args.out}")
    else:
        json.dump(payload, sys.stdout, indent=2)
        print()
    return EXIT_OK


def cmd_classify(args) -> int:
    times, q, v = read_trajectory(args.trajectory)
    if args.kappa is not None:
        kappa = args.kappa
    else:
        # infer the curvature sign from whichever quadratic form is constant
        qq_plus = (q ** 2).sum(axis=2)
        qq_minus = qq_plus - 2 * q[:, :, 3] ** 2
        kappa = (1.0 / np.mean(qq_plus) if np.ptp(qq_plus) < np.ptp(qq_minus)
                 else -1.0 / np.mean(np.abs(qq_minus)))
    masses = (np.asarray(json.loads(args.masses), dtype=float)
              if args.masses else np.ones(q.shape[1]))
    curv = Curvature(kappa)
    samples = []
    for k, t in enumerate(times):
        state = PhaseState.from_arrays(kappa, masses, q[k], v[k], t)
        samples.append(TrajectorySample(t, state, first_integrals(state)))
    cls = classify(samples)
    payload = {
        "tag": cls.tag,
        "kappa": curv.kappa,
        "momentum_pattern": sorted(cls.momentum_pattern),
        "bodies": [{"kind": b.kind, "r": b.r, "second": b.second}
                   for b in cls.per_body],
    }
    if args.out:
        _write_json(args.out, payload)
    print(f"classification: {cls.tag} "
          f"(momenta: {', '.join(sorted(cls.momentum_pattern)) or 'none'})")
    return EXIT_OK


def cmd_scan_stability(args) -> int:
    try:
        scan = stability_scan(args.r_min, args.r_max, args.steps)
    except IntegrationError as exc:
        print(f"error: scan integration failed: {exc}", file=sys.stderr)
        return EXIT_INTEGRATOR
    csv_path = args.out or "stability_scan.csv"
    with open(csv_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["r", "max_off_unit", "classification"])
        for r, off, label in zip(scan.r, scan.max_off_unit,
                                 scan.classifications):
            writer.writerow([_fmt(r), _fmt(off), label])
    _write_json(args.transitions_out,
                {"transitions": list(scan.transitions),
                 "brackets": [list(b) for b in scan.brackets]})
    print(f"wrote {csv_path} and {args.transitions_out}; "
          f"transitions at {[f'{t:.6f}' for t in scan.transitions]}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="curvednbody",
        description="simulate and verify n-body dynamics on curved 3-manifolds")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="integrate a configuration")
    p.add_argument("--config", required=True)
    p.add_argument("--out", help="trajectory CSV path (overrides config)")
    p.add_argument("--t-end", type=float, dest="t_end")
    p.add_argument("--samples", type=int)
    p.add_argument("--rel-tol", type=float, dest="rel_tol")
    p.add_argument("--abs-tol", type=float, dest="abs_tol")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="evaluate existence-criterion residuals")
    p.add_argument("--config", required=True)
    p.add_argument("--out", help="JSON report path")
    p.add_argument("--seed", type=int, help="seed for randomized ansatz")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("catalog", help="list or emit catalog orbits")
    p.add_argument("action", choices=["list", "emit"])
    p.add_argument("name", nargs="?")
    p.add_argument("--params", help="JSON object of constructor parameters")
    p.add_argument("--out")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("classify", help="classify a trajectory CSV")
    p.add_argument("trajectory")
    p.add_argument("--kappa", type=float)
    p.add_argument("--masses", help="JSON list of masses (default: all 1)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("scan-stability",
                       help="scan the triangle family for stability transitions")
    p.add_argument("--r-min", type=float, default=0.30, dest="r_min")
    p.add_argument("--r-max", type=float, default=0.99, dest="r_max")
    p.add_argument("--steps", type=int, default=80)
    p.add_argument("--out", help="grid CSV path")
    p.add_argument("--transitions-out", default="transitions.json")
    p.set_defaults(func=cmd_scan_stability)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, SingularityError) as exc:
        if isinstance(exc, SingularityError):
            print(f"error: {exc.kind.capitalize()}({exc.i},{exc.j}): {exc}",
                  file=sys.stderr)
        else:
            print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SingularityApproach as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SINGULARITY
    except IntegrationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTEGRATOR
    except CurvedNBodyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
