"""Batch experiment driver: every module behind a seeded, file-driven subcommand.

Usage: blab <subcommand> --config cfg.json [--seed N] [--out DIR]

Configs are strict JSON: unknown fields are rejected with their path, and a
seed is mandatory for anything randomized. Exit codes: 0 clean run, 1 a
verified inequality was violated, 2 bad configuration or unreadable input,
3 numerical failure inside a module (sampling, resolution, root finding).
Reports are canonical JSON (sorted keys, no timestamps): rerunning a config
with the same seed reproduces every output byte for byte.

The driver is sequential; BLAB_THREADS, when set, is validated and recorded
as an upper bound on parallelism, which a one-worker driver satisfies
trivially.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .bounds import envelope_fit, envelope_grid, lemma_bound, lemma_check, theorem_check
from .critical import critical_points, critical_sum, log_weighted_sum, protas_sum
from .errors import BlabError
from .fileio import (canonical_json, complex_pair, read_boundary, read_zeros,
                     write_means_csv, write_points_csv, write_report,
                     write_series_csv, write_zeros)
from .means import hp_trend, radial_geometric_family
from .products import BlaschkeProduct
from .regions import (BoundarySet, GeometricLaw, ModelFunction, PowerLaw,
                      StolzSpec, region_boundary, sample_zeros, type_beta)

LEMMA_TAG = "phi(|t - z*|lam|| / 3) / |1 - conj(lam)*z| <= 2*C_phi + K"
THEOREM_TAG = "|B'(z)| <= 2*(2*C_phi + K)^2 * sum(1 - |z_n|) / phi(d(z, E)/6)^2"
ENVELOPE_TAG = "|B'(z)| <= c1 * exp(c2 / d(z, E)^rho)"
CRITICAL_SUM_TAG = "terms (1 - |z'|) * d(z', E)^max(rho - beta + eps, 0)"


class ConfigError(Exception):
    """Configuration rejected; message carries the offending field path."""


# ---------------------------------------------------------------------------
# field validation


def _as_dict(value, path):
    if not isinstance(value, dict):
        raise ConfigError(f"{path}: expected an object")
    return value


def _fields(cfg, path, required, optional):
    """Validate a config object against its schema, rejecting unknown keys."""
    cfg = _as_dict(cfg, path)
    for key in cfg:
        if key not in required and key not in optional:
            raise ConfigError(f"{path}.{key}: unknown field")
    out = {}
    for key, parse in required.items():
        if key not in cfg:
            raise ConfigError(f"{path}.{key}: required field missing")
        out[key] = parse(cfg[key], f"{path}.{key}")
    for key, parse in optional.items():
        if key in cfg:
            out[key] = parse(cfg[key], f"{path}.{key}")
    return out


def _number(value, path, positive=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}: expected a number")
    value = float(value)
    if positive and not value > 0.0:
        raise ConfigError(f"{path}: must be positive")
    return value


def _positive(value, path):
    return _number(value, path, positive=True)


def _real(value, path):
    return _number(value, path)


def _integer(value, path, minimum=None):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{path}: expected an integer")
    if minimum is not None and value < minimum:
        raise ConfigError(f"{path}: must be at least {minimum}")
    return int(value)


def _count(value, path):
    return _integer(value, path, minimum=1)


def _seed_field(value, path):
    return _integer(value, path, minimum=0)


def _string(value, path):
    if not isinstance(value, str) or not value:
        raise ConfigError(f"{path}: expected a non-empty string")
    return value


def _number_list(value, path, positive=False):
    if not isinstance(value, list) or not value:
        raise ConfigError(f"{path}: expected a non-empty array of numbers")
    return [_number(v, f"{path}[{i}]", positive=positive) for i, v in enumerate(value)]


def _int_list(value, path):
    if not isinstance(value, list) or not value:
        raise ConfigError(f"{path}: expected a non-empty array of integers")
    return [_integer(v, f"{path}[{i}]", minimum=1) for i, v in enumerate(value)]


def _parse_model(value, path):
    spec = _as_dict(value, path)
    kind = spec.get("kind")
    if kind == "linear":
        allowed = {"kind"}
        maker = ModelFunction.linear
        args = ()
    elif kind == "power":
        allowed = {"kind", "gamma"}
        if "gamma" not in spec:
            raise ConfigError(f"{path}.gamma: required for power model")
        maker = ModelFunction.truncated_power
        args = (_number(spec["gamma"], f"{path}.gamma"),)
    elif kind == "exp":
        allowed = {"kind", "rho"}
        if "rho" not in spec:
            raise ConfigError(f"{path}.rho: required for exp model")
        maker = ModelFunction.exp_tangential
        args = (_number(spec["rho"], f"{path}.rho"),)
    else:
        raise ConfigError(f"{path}.kind: expected linear | power | exp")
    for key in spec:
        if key not in allowed:
            raise ConfigError(f"{path}.{key}: unknown field")
    try:
        return maker(*args)
    except BlabError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def _parse_boundary(value, path, base_dir):
    if isinstance(value, str):
        full = value if os.path.isabs(value) else os.path.join(base_dir, value)
        try:
            return read_boundary(full)
        except OSError as exc:
            raise ConfigError(f"{path}: cannot read {full}: {exc}") from exc
        except (BlabError, json.JSONDecodeError, ValueError) as exc:
            raise ConfigError(f"{path}: bad boundary file {full}: {exc}") from exc
    if isinstance(value, dict):
        try:
            return BoundarySet.from_payload(value)
        except (BlabError, ValueError) as exc:
            raise ConfigError(f"{path}: {exc}") from exc
    raise ConfigError(f"{path}: expected a file path or an inline boundary object")


def _parse_law(value, path):
    spec = _as_dict(value, path)
    kind = spec.get("kind")
    try:
        if kind == "geometric":
            parsed = _fields(spec, path, {"kind": _string},
                             {"ratio": _positive})
            return GeometricLaw(parsed.get("ratio", 0.5))
        if kind == "power":
            parsed = _fields(spec, path, {"kind": _string, "exponent": _positive},
                             {"scale": _positive})
            return PowerLaw(parsed["exponent"], parsed.get("scale", 0.5))
    except BlabError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    raise ConfigError(f"{path}.kind: expected geometric | power")


def _parse_region(value, path, base_dir):
    parsed = _fields(value, path, {
        "model": _parse_model,
        "K": _positive,
        "set": lambda v, p: _parse_boundary(v, p, base_dir),
    }, {})
    return StolzSpec(parsed["model"], parsed["set"], parsed["K"])


def _parse_out(value, path, allowed):
    schema = {name: _string for name in allowed}
    return _fields(value, path, {}, schema)


def _law_payload(law):
    if isinstance(law, GeometricLaw):
        return {"kind": "geometric", "ratio": law.ratio}
    return {"kind": "power", "exponent": law.exponent, "scale": law.scale}


def _boundary_payload(bset):
    return bset.to_payload()


def _disk_points(rng, count):
    return np.sqrt(rng.uniform(0.0, 1.0, count)) * np.exp(
        2j * np.pi * rng.uniform(0.0, 1.0, count))


def _threads_config():
    raw = os.environ.get("BLAB_THREADS")
    if raw is None:
        return None
    try:
        val = int(raw)
    except ValueError:
        raise ConfigError(f"BLAB_THREADS: expected an integer, got {raw!r}") from None
    if val < 1:
        raise ConfigError("BLAB_THREADS: must be at least 1")
    return val


def _resolve_seed(parsed, args, required):
    seed = parsed.get("seed")
    if args.seed is not None:
        seed = args.seed
    if required and seed is None:
        raise ConfigError("config.seed: required for randomized experiments "
                          "(or pass --seed)")
    if not required and seed is not None:
        raise ConfigError("seed: this experiment is deterministic; "
                          "remove the seed (config field or --seed flag)")
    return seed


# ---------------------------------------------------------------------------
# subcommand runners: validate(cfg, args) -> plan dict; run(plan) -> exit code


def _prep_verify_lemma(cfg, args, base_dir):
    parsed = _fields(cfg, "config", {
        "region": lambda v, p: _parse_region(v, p, base_dir),
        "samples": _count,
    }, {
        "seed": _seed_field,
        "out": lambda v, p: _parse_out(v, p, ("report", "csv")),
    })
    parsed["seed"] = _resolve_seed(parsed, args, required=True)
    return parsed


def _run_verify_lemma(plan, out_dir, threads):
    spec = plan["region"]
    report = lemma_check(spec, plan["samples"], plan["seed"])
    payload = {
        "experiment": "verify-lemma",
        "inequality": LEMMA_TAG,
        "config": {
            "model": {"kind": spec.phi.kind, "param": spec.phi.param},
            "K": spec.k_const,
            "set": _boundary_payload(spec.boundary),
            "samples": plan["samples"],
            "seed": plan["seed"],
            "threads": threads,
        },
        "results": dict(report.to_payload(), bound=lemma_bound(spec.phi, spec.k_const)),
    }
    out = plan.get("out", {})
    write_report(os.path.join(out_dir, out.get("report", "verify-lemma.json")), payload)
    if "csv" in out:
        lines = ["rank,ratio,z_re,z_im,t_re,t_im,lambda_re,lambda_im"]
        for rank, w in enumerate(report.worst_k, 1):
            z, t, lam = w["z"], w["t"], w["lambda"]
            lines.append(f"{rank},{w['ratio']!r},{z.real!r},{z.imag!r},"
                         f"{t.real!r},{t.imag!r},{lam.real!r},{lam.imag!r}")
        from .fileio import atomic_write_text
        atomic_write_text(os.path.join(out_dir, out["csv"]), "\n".join(lines) + "\n")
    return 1 if report.violations else 0


def _prep_verify_theorem1(cfg, args, base_dir):
    parsed = _fields(cfg, "config", {
        "region": lambda v, p: _parse_region(v, p, base_dir),
        "products": lambda v, p: _fields(v, p, {
            "count": _count, "min_degree": _count, "max_degree": _count}, {}),
        "grid_points": _count,
    }, {
        "law": _parse_law,
        "seed": _seed_field,
        "out": lambda v, p: _parse_out(v, p, ("report", "csv")),
    })
    prod = parsed["products"]
    if prod["min_degree"] > prod["max_degree"]:
        raise ConfigError("config.products: min_degree exceeds max_degree")
    parsed["seed"] = _resolve_seed(parsed, args, required=True)
    parsed.setdefault("law", GeometricLaw(0.5))
    return parsed


def _run_verify_theorem1(plan, out_dir, threads):
    spec = plan["region"]
    seed = plan["seed"]
    prod = plan["products"]
    rows = []
    total_viol = 0
    worst = None
    for j in range(prod["count"]):
        rng = np.random.default_rng([seed, 101, j])
        n = int(rng.integers(prod["min_degree"], prod["max_degree"] + 1))
        zeros = sample_zeros(spec, n, seed=(seed, j), law=plan["law"])
        grid = _disk_points(np.random.default_rng([seed, 202, j]), plan["grid_points"])
        rep = theorem_check(BlaschkeProduct(zeros), grid, spec, check_zeros=False)
        total_viol += rep.violations
        rows.append((j, n, rep.worst_ratio, rep.violations))
        if worst is None or rep.worst_ratio > worst["ratio"]:
            worst = dict(rep.worst_witness, product=j, degree=n)
    payload = {
        "experiment": "verify-theorem1",
        "inequality": THEOREM_TAG,
        "config": {
            "model": {"kind": spec.phi.kind, "param": spec.phi.param},
            "K": spec.k_const,
            "set": _boundary_payload(spec.boundary),
            "products": prod,
            "grid_points": plan["grid_points"],
            "law": _law_payload(plan["law"]),
            "seed": seed,
            "threads": threads,
        },
        "results": {
            "samples": prod["count"] * plan["grid_points"],
            "violations": total_viol,
            "worst_ratio": worst["ratio"],
            "worst_witness": {
                "product": worst["product"],
                "degree": worst["degree"],
                "z": complex_pair(worst["z"]),
                "lhs": worst["lhs"],
                "rhs": worst["rhs"],
            },
        },
    }
    out = plan.get("out", {})
    write_report(os.path.join(out_dir, out.get("report", "verify-theorem1.json")), payload)
    if "csv" in out:
        lines = ["product,degree,worst_ratio,violations"]
        lines.extend(f"{j},{n},{r!r},{v}" for j, n, r, v in rows)
        from .fileio import atomic_write_text
        atomic_write_text(os.path.join(out_dir, out["csv"]), "\n".join(lines) + "\n")
    return 1 if total_viol else 0


def _zeros_field(value, path):
    return _string(value, path)


def _prep_critical_points(cfg, args, base_dir):
    parsed = _fields(cfg, "config", {
        "zeros": _zeros_field,
    }, {
        "seed": _seed_field,
        "out": lambda v, p: _parse_out(v, p, ("report", "points", "residuals")),
    })
    _resolve_seed(parsed, args, required=False)
    full = parsed["zeros"]
    if not os.path.isabs(full):
        full = os.path.join(base_dir, full)
    try:
        parsed["zero_seq"] = read_zeros(full)
    except OSError as exc:
        raise ConfigError(f"config.zeros: cannot read {full}: {exc}") from exc
    except BlabError as exc:
        raise ConfigError(f"config.zeros: {exc}") from exc
    return parsed


def _run_critical_points(plan, out_dir, threads):
    cs = critical_points(BlaschkeProduct(plan["zero_seq"]))
    out = plan.get("out", {})
    points_name = out.get("points", "critical_points.txt")
    residuals_name = out.get("residuals", "critical_points_residuals.json")
    write_zeros(os.path.join(out_dir, points_name), cs.points,
                header="critical points, one per line: re im")
    from .fileio import atomic_write_text
    atomic_write_text(os.path.join(out_dir, residuals_name),
                      canonical_json({"residuals": [float(r) for r in cs.residuals]}))
    payload = {
        "experiment": "critical-points",
        "config": {"zeros": plan["zeros"], "threads": threads},
        "results": {
            "degree": cs.degree,
            "count": cs.count,
            "max_residual": float(np.max(cs.residuals)) if cs.count else 0.0,
            "points_file": points_name,
            "residuals_file": residuals_name,
        },
    }
    write_report(os.path.join(out_dir, out.get("report", "critical-points.json")), payload)
    return 0


def _prep_critical_sum(cfg, args, base_dir):
    parsed = _fields(cfg, "config", {
        "zeros": _zeros_field,
        "set": lambda v, p: _parse_boundary(v, p, base_dir),
        "rho": _positive,
        "beta": _real,
        "eps": _positive,
    }, {
        "seed": _seed_field,
        "out": lambda v, p: _parse_out(v, p, ("report", "csv")),
    })
    _resolve_seed(parsed, args, required=False)
    full = parsed["zeros"]
    if not os.path.isabs(full):
        full = os.path.join(base_dir, full)
    try:
        parsed["zero_seq"] = read_zeros(full)
    except OSError as exc:
        raise ConfigError(f"config.zeros: cannot read {full}: {exc}") from exc
    except BlabError as exc:
        raise ConfigError(f"config.zeros: {exc}") from exc
    return parsed


def _run_critical_sum(plan, out_dir, threads):
    cs = critical_points(BlaschkeProduct(plan["zero_seq"]))
    weighted = critical_sum(cs, plan["set"], plan["rho"], plan["beta"], plan["eps"])
    logw = log_weighted_sum(cs, plan["eps"])
    unweighted = protas_sum(cs, 1.0) if cs.count else 0.0
    payload = {
        "experiment": "critical-sum",
        "inequality": CRITICAL_SUM_TAG,
        "config": {
            "zeros": plan["zeros"],
            "set": _boundary_payload(plan["set"]),
            "rho": plan["rho"], "beta": plan["beta"], "eps": plan["eps"],
            "threads": threads,
        },
        "results": {
            "critical_count": cs.count,
            "weighted_total": weighted.total,
            "log_weighted_total": logw.total,
            "unweighted_total": unweighted,
        },
    }
    out = plan.get("out", {})
    write_report(os.path.join(out_dir, out.get("report", "critical-sum.json")), payload)
    if "csv" in out:
        write_series_csv(os.path.join(out_dir, out["csv"]), weighted)
    return 0


def _prep_beta_estimate(cfg, args, base_dir):
    parsed = _fields(cfg, "config", {
        "set": lambda v, p: _parse_boundary(v, p, base_dir),
    }, {
        "k_min": lambda v, p: _integer(v, p, minimum=1),
        "k_max": lambda v, p: _integer(v, p, minimum=2),
        "seed": _seed_field,
        "out": lambda v, p: _parse_out(v, p, ("report",)),
    })
    _resolve_seed(parsed, args, required=False)
    k_min = parsed.setdefault("k_min", 4)
    k_max = parsed.setdefault("k_max", 14)
    if k_max - k_min < 3:
        raise ConfigError("config.k_max: need at least 4 dyadic scales (k_max >= k_min + 3)")
    return parsed


def _run_beta_estimate(plan, out_dir, threads):
    grid = 0.5 ** np.arange(plan["k_min"], plan["k_max"] + 1, dtype=np.float64)
    beta = type_beta(plan["set"], grid)
    measures = [float(plan["set"].neighborhood_measure(x)) for x in grid]
    payload = {
        "experiment": "beta-estimate",
        "config": {
            "set": _boundary_payload(plan["set"]),
            "k_min": plan["k_min"], "k_max": plan["k_max"],
            "threads": threads,
        },
        "results": {
            "beta": beta,
            "x_grid": [float(x) for x in grid],
            "neighborhood_measures": measures,
        },
    }
    out = plan.get("out", {})
    write_report(os.path.join(out_dir, out.get("report", "beta-estimate.json")), payload)
    return 0


def _parse_family(value, path, base_dir):
    spec = _as_dict(value, path)
    kind = spec.get("kind")
    if kind == "radial_geometric":
        parsed = _fields(spec, path, {"kind": _string}, {"ratio": _positive})
        ratio = parsed.get("ratio", 0.5)
        if not ratio < 1.0:
            raise ConfigError(f"{path}.ratio: must lie in (0, 1)")
        return {"kind": kind, "ratio": ratio}
    if kind == "region_sampled":
        parsed = _fields(spec, path, {
            "kind": _string,
            "region": lambda v, p: _parse_region(v, p, base_dir),
            "law": _parse_law,
        }, {})
        return {"kind": kind, "region": parsed["region"], "law": parsed["law"]}
    raise ConfigError(f"{path}.kind: expected radial_geometric | region_sampled")


def _prep_means_trend(cfg, args, base_dir):
    parsed = _fields(cfg, "config", {
        "family": lambda v, p: _parse_family(v, p, base_dir),
        "p_list": lambda v, p: _number_list(v, p, positive=True),
        "truncations": _int_list,
    }, {
        "r_grid": _number_list,
        "seed": _seed_field,
        "out": lambda v, p: _parse_out(v, p, ("report", "csv")),
    })
    randomized = parsed["family"]["kind"] == "region_sampled"
    parsed["seed"] = _resolve_seed(parsed, args, required=randomized)
    r_grid = parsed.setdefault("r_grid", [0.9, 0.99, 0.999])
    if any(not 0.0 <= r < 1.0 for r in r_grid):
        raise ConfigError("config.r_grid: radii must lie in [0, 1)")
    return parsed


def _run_means_trend(plan, out_dir, threads):
    fam = plan["family"]
    if fam["kind"] == "radial_geometric":
        family = radial_geometric_family(fam["ratio"])
        fam_payload = {"kind": fam["kind"], "ratio": fam["ratio"]}
    else:
        spec, law, seed = fam["region"], fam["law"], plan["seed"]

        def family(n):
            return sample_zeros(spec, n, seed=seed, law=law)

        fam_payload = {
            "kind": fam["kind"],
            "model": {"kind": spec.phi.kind, "param": spec.phi.param},
            "K": spec.k_const,
            "set": _boundary_payload(spec.boundary),
            "law": _law_payload(law),
        }
    all_rows = []
    sups = {}
    for p in plan["p_list"]:
        table = hp_trend(family, p, plan["truncations"], plan["r_grid"])
        all_rows.extend(table.rows)
        for (n, pp), v in table.sup_over_r().items():
            sups[f"N={n},p={pp}"] = v
    payload = {
        "experiment": "means-trend",
        "config": {
            "family": fam_payload,
            "p_list": plan["p_list"],
            "truncations": plan["truncations"],
            "r_grid": plan["r_grid"],
            "seed": plan["seed"],
            "threads": threads,
        },
        "results": {"sup_over_r": sups},
    }
    out = plan.get("out", {})
    write_report(os.path.join(out_dir, out.get("report", "means-trend.json")), payload)
    if "csv" in out:
        from .means import MeansTable
        write_means_csv(os.path.join(out_dir, out["csv"]), MeansTable(all_rows))
    return 0


def _prep_envelope_fit(cfg, args, base_dir):
    parsed = _fields(cfg, "config", {
        "rho": _positive,
    }, {
        "zeros": _zeros_field,
        "sampling": lambda v, p: _fields(v, p, {
            "region": lambda vv, pp: _parse_region(vv, pp, base_dir),
            "law": _parse_law,
            "count": _count,
        }, {}),
        "set": lambda v, p: _parse_boundary(v, p, base_dir),
        "grid": lambda v, p: _fields(v, p, {}, {
            "depth": lambda vv, pp: _integer(vv, pp, minimum=2),
            "rays": lambda vv, pp: _integer(vv, pp, minimum=1),
            "ring": lambda vv, pp: _integer(vv, pp, minimum=8),
        }),
        "seed": _seed_field,
        "out": lambda v, p: _parse_out(v, p, ("report",)),
    })
    has_zeros = "zeros" in parsed
    has_sampling = "sampling" in parsed
    if has_zeros == has_sampling:
        raise ConfigError("config: exactly one of zeros | sampling is required")
    parsed["seed"] = _resolve_seed(parsed, args, required=has_sampling)
    if has_zeros:
        full = parsed["zeros"]
        if not os.path.isabs(full):
            full = os.path.join(base_dir, full)
        try:
            parsed["zero_seq"] = read_zeros(full)
        except OSError as exc:
            raise ConfigError(f"config.zeros: cannot read {full}: {exc}") from exc
        except BlabError as exc:
            raise ConfigError(f"config.zeros: {exc}") from exc
        if "set" not in parsed:
            raise ConfigError("config.set: required when zeros come from a file")
    elif "set" not in parsed:
        parsed["set"] = parsed["sampling"]["region"].boundary
    return parsed


def _run_envelope_fit(plan, out_dir, threads):
    if "zero_seq" in plan:
        zeros = plan["zero_seq"]
        source = {"zeros": plan["zeros"]}
    else:
        samp = plan["sampling"]
        zeros = sample_zeros(samp["region"], samp["count"], seed=plan["seed"],
                             law=samp["law"])
        source = {
            "sampling": {
                "model": {"kind": samp["region"].phi.kind, "param": samp["region"].phi.param},
                "K": samp["region"].k_const,
                "set": _boundary_payload(samp["region"].boundary),
                "law": _law_payload(samp["law"]),
                "count": samp["count"],
            }
        }
    grid_cfg = plan.get("grid", {})
    grid = envelope_grid(plan["set"], **grid_cfg)
    fit = envelope_fit(BlaschkeProduct(zeros), plan["set"], plan["rho"], grid)
    payload = {
        "experiment": "envelope-fit",
        "inequality": ENVELOPE_TAG,
        "config": dict(source, set=_boundary_payload(plan["set"]), rho=plan["rho"],
                       grid={"depth": grid_cfg.get("depth", 14),
                             "rays": grid_cfg.get("rays", 12),
                             "ring": grid_cfg.get("ring", 64)},
                       seed=plan["seed"], threads=threads),
        "results": {"c1": fit.c1, "c2": fit.c2, "rho": fit.rho,
                    "grid_size": fit.grid_size},
    }
    out = plan.get("out", {})
    write_report(os.path.join(out_dir, out.get("report", "envelope-fit.json")), payload)
    return 0


def _prep_region_boundary(cfg, args, base_dir):
    parsed = _fields(cfg, "config", {
        "model": _parse_model,
        "K": _positive,
        "resolution": lambda v, p: _integer(v, p, minimum=2),
    }, {
        "vertex_angle": _real,
        "seed": _seed_field,
        "out": lambda v, p: _parse_out(v, p, ("report", "csv")),
    })
    _resolve_seed(parsed, args, required=False)
    parsed.setdefault("vertex_angle", 0.0)
    return parsed


def _run_region_boundary(plan, out_dir, threads):
    pts = region_boundary(plan["model"], plan["K"], plan["vertex_angle"],
                          plan["resolution"])
    out = plan.get("out", {})
    csv_name = out.get("csv", "region_boundary.csv")
    write_points_csv(os.path.join(out_dir, csv_name), pts)
    payload = {
        "experiment": "region-boundary",
        "config": {
            "model": {"kind": plan["model"].kind, "param": plan["model"].param},
            "K": plan["K"],
            "vertex_angle": plan["vertex_angle"],
            "resolution": plan["resolution"],
            "threads": threads,
        },
        "results": {"points": int(pts.size), "csv_file": csv_name},
    }
    write_report(os.path.join(out_dir, out.get("report", "region-boundary.json")), payload)
    return 0


_RUNNERS = {
    "verify-lemma": (_prep_verify_lemma, _run_verify_lemma),
    "verify-theorem1": (_prep_verify_theorem1, _run_verify_theorem1),
    "critical-points": (_prep_critical_points, _run_critical_points),
    "critical-sum": (_prep_critical_sum, _run_critical_sum),
    "beta-estimate": (_prep_beta_estimate, _run_beta_estimate),
    "means-trend": (_prep_means_trend, _run_means_trend),
    "envelope-fit": (_prep_envelope_fit, _run_envelope_fit),
    "region-boundary": (_prep_region_boundary, _run_region_boundary),
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="blab",
        description="Blaschke-product laboratory: seeded, file-driven experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _RUNNERS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="experiment config JSON")
        p.add_argument("--seed", type=int, default=None,
                       help="override the config seed")
        p.add_argument("--out", default=".", help="output directory")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        threads = _threads_config()
        try:
            with open(args.config, encoding="utf-8") as fh:
                cfg = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(
                f"{args.config}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}"
            ) from exc
        prep, run = _RUNNERS[args.command]
        plan = prep(cfg, args, os.path.dirname(os.path.abspath(args.config)))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    out_dir = args.out
    os.makedirs(out_dir, exist_ok=True)
    try:
        return run(plan, out_dir, threads)
    except BlabError as exc:
        print(f"numerical failure ({type(exc).__name__}): {exc}", file=sys.stderr)
        return 3


def entry():
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
