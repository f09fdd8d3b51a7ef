"""Command-line experiment runner.

Config resolution order: built-in defaults < JSON config file (--config)
< explicit command-line flags.  Every output embeds the resolved
scientific parameters (not plumbing like worker count or paths) so runs
are self-describing.  Exit codes: 0 success, 2 invalid config,
3 property violation, 4 solver size limit.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import math
import os
import sys

import numpy as np

from . import bounds, empirical, validation
from .lattice import Cube
from .operators import SolverSizeError, assemble
from .random_field import FieldSpec, derive_seed, sample
from .spectra import normalized_evcf, sup_norm_distance

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_VIOLATION = 3
EXIT_SOLVER = 4

WORKERS_ENV = "IDSCONC_WORKERS"


# ---------------------------------------------------------------------------
# config plumbing


def _load_config_file(path: str | None) -> dict:
    if not path:
        return {}
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError("config file must hold a JSON object")
    return data


def resolve_config(defaults: dict, args: argparse.Namespace) -> dict:
    """defaults < config file < explicitly passed flags."""
    cfg = dict(defaults)
    cfg.update(_load_config_file(getattr(args, "config", None)))
    for key in defaults:
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    unknown = set(cfg) - set(defaults)
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    return cfg


def _field_spec(cfg: dict) -> FieldSpec:
    raw = cfg.get("field")
    if raw is None:
        return FieldSpec(seed=int(cfg.get("seed", 0)))
    if isinstance(raw, str):
        raw = json.loads(raw)
    spec = FieldSpec.from_dict(raw)
    if "seed" in cfg and cfg["seed"] is not None:
        spec = spec.with_seed(int(cfg["seed"]))
    return spec


def _echo(cfg: dict) -> str:
    science = {k: v for k, v in cfg.items()
               if k not in ("output", "summary", "workers", "dump_matrix")}
    return json.dumps(science, sort_keys=True)


@contextlib.contextmanager
def _open_out(path: str | None):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            yield fh


def _dump_json(obj: dict, path: str | None) -> None:
    with _open_out(path) as fh:
        json.dump(obj, fh, sort_keys=True, indent=2)
        fh.write("\n")


def _parse_floats(text) -> list[float]:
    if isinstance(text, (list, tuple)):
        return [float(x) for x in text]
    return [float(x) for x in str(text).split(",") if x]


def _parse_ints(text) -> list[int]:
    return [int(x) for x in str(text).split(",")] \
        if isinstance(text, str) else [int(x) for x in text]


def _default_workers() -> int:
    return int(os.environ.get(WORKERS_ENV, "1"))


# ---------------------------------------------------------------------------
# commands


BOUNDS_DEFAULTS = {
    "constants": False, "geometric": False, "thm1": False, "thm2": False,
    "thm3": False, "cor59": False, "cor511": False,
    "d": 1, "n": 100, "m": 10, "r": 0, "k": None, "M": 2.0,
    "alpha": 0.05, "beta": 0.1, "kappa": 0.1, "s": 100,
    "output": None, "seed": None, "field": None,
}


def cmd_bounds(args) -> int:
    cfg = resolve_config(BOUNDS_DEFAULTS, args)
    reports: dict = {}
    warnings = []
    if cfg["constants"]:
        partial, tail = bounds.chaining_series_with_tail()
        reports["constants"] = {
            "chaining_series": partial, "tail_bound": tail,
            "K_2": bounds.k_M(2.0), "K_2_cap": bounds.k_M_cap(2.0),
            "K_confidence": bounds.K_THEOREM1,
            "C": {str(d): bounds.theorem1_C(d) for d in (1, 2, 3, 4)},
        }
    d, n, m, r = int(cfg["d"]), int(cfg["n"]), int(cfg["m"]), int(cfg["r"])
    k = int(cfg["k"]) if cfg["k"] is not None else None
    if cfg["geometric"]:
        rep = bounds.geometric_bound(d, n, m, r)
        reports["geometric"] = rep.to_dict()
        try:
            reports["decomposition"] = \
                bounds.decomposition_bound(d, n, m, r).to_dict()
        except ValueError as exc:
            warnings.append(str(exc))
        if not rep.valid:
            warnings.append(f"geometric bound side conditions violated: "
                            f"{rep.side_conditions}")
    if cfg["thm1"]:
        reports["thm1_min_side"] = bounds.thm1_min_side(
            d, float(cfg["alpha"]), float(cfg["beta"])).to_dict()
    if cfg["thm2"]:
        kk = k if k is not None else bounds.dimension_k(d, "thm2")
        reports["thm2_error"] = bounds.thm2_error_bound(d, n, r, kk).to_dict()
        reports["thm2_probability"] = \
            bounds.thm2_probability(d, n, float(cfg["M"]), kk).to_dict()
    if cfg["thm3"]:
        kk = k if k is not None else bounds.dimension_k(d, "thm3")
        reports["thm3_probability"] = \
            bounds.thm3_probability(d, n, r, kk).to_dict()
    if cfg["cor59"]:
        reports["cor59"] = {
            "value": bounds.cor59_probability(int(cfg["s"]),
                                              float(cfg["kappa"]),
                                              float(cfg["M"]))}
    if cfg["cor511"]:
        reports["cor511"] = bounds.cor511_probability(
            int(cfg["s"]), float(cfg["kappa"])).to_dict()
    if not reports:
        raise ValueError("no bound selected; pass e.g. --constants or --thm1")
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)
    _dump_json({"config": json.loads(_echo(cfg)), "reports": reports,
                "warnings": warnings}, cfg["output"])
    if cfg["output"] not in (None, "-"):
        _print_report_table(reports)
    return EXIT_OK


def _print_report_table(reports: dict) -> None:
    for name, rep in reports.items():
        print(name)
        flat = rep.get("terms", rep) if isinstance(rep, dict) else rep
        for key, val in flat.items():
            print(f"  {key:<24} {val}")
        if isinstance(rep, dict) and "total" in rep:
            print(f"  {'total':<24} {rep['total']}")


DECOMPOSE_DEFAULTS = {
    "d": 1, "n": 100, "m": 10, "r": 0, "samples": 10, "seed": 0,
    "field": None, "output": None, "dump_matrix": None,
}


def cmd_decompose(args) -> int:
    cfg = resolve_config(DECOMPOSE_DEFAULTS, args)
    d, n, m, r = int(cfg["d"]), int(cfg["n"]), int(cfg["m"]), int(cfg["r"])
    samples = int(cfg["samples"])
    spec = _field_spec(cfg)
    decomp = bounds.decomposition_bound(d, n, m, r)
    explicit = bounds.geometric_bound(d, n, m, r)
    cube = Cube(d, n)
    sites = cube.sites()
    all_pass = True
    with _open_out(cfg["output"]) as fh:
        fh.write(f"# config: {_echo(cfg)}\n")
        fh.write("sample,lhs,decomposition,explicit,pass\n")
        for i in range(samples):
            omega = sample(spec.with_seed(derive_seed(spec.seed, i)), sites)
            if i == 0 and cfg["dump_matrix"]:
                with open(cfg["dump_matrix"], "w", encoding="utf-8") as mh:
                    assemble(sites, omega).dump_coo(mh)
            whole = normalized_evcf(sites, omega, float(n ** d))
            avg = empirical.block_average(omega, n, m, r, d)
            lhs = sup_norm_distance(whole, avg)
            ok = lhs <= decomp.total <= explicit.total
            all_pass &= ok
            fh.write(f"{i},{lhs!r},{decomp.total!r},{explicit.total!r},"
                     f"{int(ok)}\n")
    return EXIT_OK if all_pass else EXIT_VIOLATION


CONCENTRATE_DEFAULTS = {
    "d": 1, "m": 1, "r": 0, "s": 100, "R": 200, "kappa": "0.05,0.1,0.2",
    "M": 2.0, "seed": 0, "field": None, "reference_samples": None,
    "workers": None, "output": None, "summary": None,
}


def cmd_concentrate(args) -> int:
    cfg = resolve_config(CONCENTRATE_DEFAULTS, args)
    spec = _field_spec(cfg)
    workers = int(cfg["workers"]) if cfg["workers"] is not None \
        else _default_workers()
    ref = int(cfg["reference_samples"]) \
        if cfg["reference_samples"] is not None else None
    table = empirical.concentration_experiment(
        spec, int(cfg["d"]), int(cfg["m"]), int(cfg["r"]), int(cfg["s"]),
        _parse_floats(cfg["kappa"]), int(cfg["R"]), seed=int(cfg["seed"]),
        M=float(cfg["M"]), reference_samples=ref, workers=workers)
    with _open_out(cfg["output"]) as fh:
        fh.write(f"# config: {_echo(cfg)}\n")
        table.write_csv(fh)
    if cfg["summary"]:
        _dump_json({"config": json.loads(_echo(cfg)),
                    "mean_sup": table.mean_sup,
                    "reference_samples": table.reference_samples},
                   cfg["summary"])
    return EXIT_OK


BRACKETS_DEFAULTS = {
    "d": 1, "m": 1, "r": 0, "S": 10_000, "S2": 2_000, "q_max": 5,
    "seed": 0, "field": None, "output": None,
}


def cmd_brackets(args) -> int:
    cfg = resolve_config(BRACKETS_DEFAULTS, args)
    spec = _field_spec(cfg)
    phi = empirical.empirical_phi(spec, int(cfg["d"]), int(cfg["m"]),
                                  int(cfg["r"]), int(cfg["S"]))
    covers = empirical.build_bracketing(phi, int(cfg["q_max"]))
    stats = empirical.verify_bracketing(
        covers, spec, int(cfg["d"]), int(cfg["m"]), int(cfg["r"]),
        int(cfg["S2"]), seed=derive_seed(spec.seed, empirical.VERIFY_STREAM))
    _dump_json({"config": json.loads(_echo(cfg)),
                "covers": [c.to_json_dict() for c in covers],
                "verification": [s.to_json_dict() for s in stats]},
               cfg["output"])
    return EXIT_OK


REFERENCE_DEFAULTS = {
    "d": 1, "r": 0, "n": "50,100,200", "S": 100, "seed": 0,
    "field": None, "output": None,
}


def cmd_reference(args) -> int:
    cfg = resolve_config(REFERENCE_DEFAULTS, args)
    spec = _field_spec(cfg)
    points = empirical.reference_ids(spec, int(cfg["d"]), int(cfg["r"]),
                                     _parse_ints(cfg["n"]), int(cfg["S"]),
                                     seed=int(cfg["seed"]))
    with _open_out(cfg["output"]) as fh:
        fh.write(f"# config: {_echo(cfg)}\n")
        fh.write("n,gap,bound,mc_band\n")
        for p in points:
            gap = "" if p.gap_from_previous is None else repr(p.gap_from_previous)
            fh.write(f"{p.n},{gap},{p.bound!r},{p.mc_band!r}\n")
    return EXIT_OK


REGION_DEFAULTS = {
    "d": 3, "n": 8, "r": 0, "alpha": 0.05, "beta": 0.1, "seed": 0,
    "field": None, "output": None,
}


def cmd_region(args) -> int:
    cfg = resolve_config(REGION_DEFAULTS, args)
    spec = _field_spec(cfg)
    d, n = int(cfg["d"]), int(cfg["n"])
    cube = Cube(d, n)
    omega = sample(spec, cube.sites())
    region = empirical.confidence_region(omega, n, d, int(cfg["r"]),
                                         float(cfg["beta"]),
                                         float(cfg["alpha"]))
    required = region.required_side
    _dump_json({"config": json.loads(_echo(cfg)),
                "certified": region.certified,
                "required_side": required if math.isfinite(required)
                else "inf",
                "lower": region.lower.to_json_dict(),
                "upper": region.upper.to_json_dict()},
               cfg["output"])
    if not region.certified:
        print(f"warning: band not certified at side n={n} "
              f"(required > {required})", file=sys.stderr)
    return EXIT_OK


VALIDATE_DEFAULTS = {"suite": None, "seed": 20260824, "output": None}


def cmd_validate(args) -> int:
    cfg = resolve_config(VALIDATE_DEFAULTS, args)
    names = None
    if cfg["suite"]:
        names = [s for s in str(cfg["suite"]).split(",") if s]
    results = validation.run_suites(int(cfg["seed"]), names)
    for name, res in results.items():
        print(f"{name}: {'PASS' if res['ok'] else 'FAIL'}")
    _dump_json({"config": json.loads(_echo(cfg)),
                "results": {k: _jsonable(v) for k, v in results.items()}},
               cfg["output"])
    return EXIT_OK if all(r["ok"] for r in results.values()) else EXIT_VIOLATION


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


# ---------------------------------------------------------------------------
# argument parsing


def _add_common(p, keys):
    if "d" in keys:
        p.add_argument("--d", type=int)
    for name in ("n", "m", "r", "k", "samples", "S", "S2", "R", "s",
                 "q_max", "workers", "reference_samples", "seed"):
        if name in keys:
            if name == "n" and not isinstance(keys["n"], int):
                p.add_argument("--n", type=str)  # comma list
            else:
                p.add_argument(f"--{name}", type=int)
    for name in ("M", "alpha", "beta"):
        if name in keys:
            p.add_argument(f"--{name}", type=float)
    if "kappa" in keys:
        p.add_argument("--kappa", type=str)
    if "field" in keys:
        p.add_argument("--field", type=str,
                       help="field spec as JSON: "
                            '{"marginal": {"kind": "uniform", "params": '
                            '[0.0, 1.0]}, "rho": 0, "seed": 0}')
    if "output" in keys:
        p.add_argument("--output", "-o", type=str)
    if "summary" in keys:
        p.add_argument("--summary", type=str)
    if "dump_matrix" in keys:
        p.add_argument("--dump-matrix", dest="dump_matrix", type=str)
    p.add_argument("--config", type=str,
                   help="JSON config file; flags override its values")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="idsconc",
        description="Explicit finite-volume bounds and reproducible "
                    "spectral-statistics experiments for the discrete "
                    "Anderson model.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", help="evaluate closed-form bounds/constants")
    for flag in ("constants", "geometric", "thm1", "thm2", "thm3",
                 "cor59", "cor511"):
        p.add_argument(f"--{flag}", action="store_const", const=True,
                       default=None)
    _add_common(p, BOUNDS_DEFAULTS)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("decompose",
                       help="per-sample tiling decomposition inequality check")
    _add_common(p, DECOMPOSE_DEFAULTS)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("concentrate",
                       help="block-average concentration experiment")
    _add_common(p, CONCENTRATE_DEFAULTS)
    p.set_defaults(func=cmd_concentrate)

    p = sub.add_parser("brackets", help="bracketing cover report")
    _add_common(p, BRACKETS_DEFAULTS)
    p.set_defaults(func=cmd_brackets)

    p = sub.add_parser("reference",
                       help="Monte Carlo reference curve with Cauchy gaps")
    _add_common(p, REFERENCE_DEFAULTS)
    p.set_defaults(func=cmd_reference)

    p = sub.add_parser("region", help="sup-norm confidence band")
    _add_common(p, REGION_DEFAULTS)
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("validate", help="run the property suites")
    p.add_argument("--suite", type=str, help="comma-separated suite names")
    _add_common(p, VALIDATE_DEFAULTS)
    p.set_defaults(func=cmd_validate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SolverSizeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
