"""Command-line driver: JSON study configs in, CSV/JSON reports out.

Exit codes are a CI contract: 0 clean, 1 config or domain error, 2 any
certified-inequality violation.  Reports are byte-deterministic for a fixed
config except for the single # generated_at= header line.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from datetime import datetime, timezone

import numpy as np

from . import clark, harness, reconstruct, sieve
from .inner import InnerFunctionSpec, enlarge, from_dict
from .kernel import SincKernelSpec, higher_power_bound, sinc, xi_product_integral, \
    xi_power_product_integral

COMMANDS = ("nodes", "reconstruct", "decay", "density", "certify-sieve",
            "certify-bernstein", "lemma-checks")

# comparison slack for declaring a certified inequality violated
VIOLATION_TOL = 1e-9


class ConfigError(Exception):
    pass


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _now_line() -> str:
    return f"# generated_at={datetime.now(timezone.utc).isoformat()}"


def _write_report(path: str, headers: dict, columns, rows) -> None:
    lines = [_now_line()]
    for key, val in headers.items():
        lines.append(f"# {key}={val}")
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(row))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}")


def _as_params(config: dict) -> dict:
    params = config.get("params", {})
    if not isinstance(params, dict):
        raise ConfigError("params: expected an object")
    return params


def _num(params: dict, key: str, default=None):
    if key not in params:
        if default is None:
            raise ConfigError(f"params.{key}: required")
        return default
    val = params[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ConfigError(f"params.{key}: expected a number, got {val!r}")
    return float(val)


def _int(params: dict, key: str, default=None):
    if key not in params:
        if default is None:
            raise ConfigError(f"params.{key}: required")
        return default
    val = params[key]
    if isinstance(val, bool) or not isinstance(val, int):
        raise ConfigError(f"params.{key}: expected an integer, got {val!r}")
    return val


def _num_list(params: dict, key: str, default=None):
    if key not in params:
        if default is None:
            raise ConfigError(f"params.{key}: required")
        return list(default)
    val = params[key]
    if not isinstance(val, list) or not val or any(
            isinstance(v, bool) or not isinstance(v, (int, float)) for v in val):
        raise ConfigError(f"params.{key}: expected a nonempty number list, got {val!r}")
    return [float(v) for v in val]


def _inner_spec(config: dict) -> InnerFunctionSpec:
    if "inner" not in config:
        raise ConfigError("inner: required for this command")
    try:
        return from_dict(config["inner"], where="inner")
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc))


def _measure_spec(config: dict) -> sieve.MeasureSpec:
    if "measure" not in config:
        raise ConfigError("measure: required for this command")
    try:
        return sieve.measure_from_dict(config["measure"], where="measure")
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc))


def _out_path(config: dict, out_dir: str, default_name: str) -> str:
    name = config.get("output", default_name)
    if not isinstance(name, str) or not name:
        raise ConfigError(f"output: expected a nonempty string, got {name!r}")
    return os.path.join(out_dir, name)


def _corpus(spec, params):
    size = _int(params, "size", 20)
    count = _int(params, "count", 5)
    seed = _int(params, "seed", 1)
    if size < 1 or count < 1:
        raise ConfigError("params.size and params.count must be >= 1")
    funcs = [harness.random_model_function(spec, count, seed + 1000 * i)
             for i in range(size)]
    return funcs, seed, count


def _cmd_nodes(config, out_dir):
    spec = _inner_spec(config)
    params = _as_params(config)
    gamma = _num(params, "gamma", 0.0)
    n_min = _int(params, "n_min")
    n_max = _int(params, "n_max")
    grid = clark.solve_nodes(spec, gamma, n_min, n_max)
    path = _out_path(config, out_dir, "nodes.csv")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(_now_line() + "\n")
        clark.write_grid_csv(grid, fh, extra_header={"command": "nodes"})
    return 0


def _band_target(spec, params):
    """Band-limited reference target for the uniform-grid methods."""
    if spec.zeros:
        raise ConfigError("shannon/pw_oversample need an inner spec without zeros")
    band = spec.c / 2.0
    if band <= 0.0:
        raise ConfigError("shannon/pw_oversample need c > 0")
    shift = _num(params, "shift", 0.4)

    def target(x):
        return np.asarray(sinc(band * (np.asarray(x, dtype=float) - shift)), dtype=complex)

    return target, band


def _reconstruct_once(spec, method, window, params, xs):
    """Returns (truth values, reconstruction values) on xs."""
    if method in ("shannon", "pw_oversample"):
        target, band = _band_target(spec, params)
        if method == "shannon":
            b = band
            nodes = np.arange(-window, window + 1) * (math.pi / b)
            rec = reconstruct.shannon_reconstruct(target(nodes), b, xs)
        else:
            kspec = SincKernelSpec(power=_int(params, "N", 2), a=_num(params, "a", 0.5), c=band)
            nodes = np.arange(-window, window + 1) * (math.pi / kspec.b)
            rec = reconstruct.pw_oversample_reconstruct(target(nodes), kspec, xs)
        return target(xs), rec
    f = harness.random_model_function(spec, _int(params, "count", 5), _int(params, "seed", 1))
    gamma = _num(params, "gamma", 0.0)
    if method == "clark":
        grid = clark.solve_nodes(spec, gamma, -window, window)
        rec = reconstruct.clark_reconstruct(reconstruct.sample_function(f, grid), spec, xs)
    else:
        over_c = _num(params, "over_c", 1.0)
        m = _int(params, "m", 2)
        big = enlarge(spec, over_c, ())
        grid = clark.solve_nodes(big, gamma, -window, window)
        rec = reconstruct.model_oversample_reconstruct(
            reconstruct.sample_function(f, grid), spec, over_c, m, xs)
    return f(xs), rec


def _cmd_reconstruct(config, out_dir):
    spec = _inner_spec(config)
    params = _as_params(config)
    method = params.get("method")
    if method not in reconstruct._METHODS:
        raise ConfigError(f"params.method: expected one of {reconstruct._METHODS}, got {method!r}")
    window = _int(params, "window", 300)
    lo = _num(params, "x_min", -3.0)
    hi = _num(params, "x_max", 3.0)
    n = _int(params, "x_count", 101)
    if not (hi > lo and n >= 2):
        raise ConfigError("need x_max > x_min and x_count >= 2")
    xs = np.linspace(lo, hi, n)
    truth, rec = _reconstruct_once(spec, method, window, params, xs)
    rows = [(_fmt(x), _fmt(t.real), _fmt(t.imag), _fmt(r.real), _fmt(r.imag),
             _fmt(abs(r - t))) for x, t, r in zip(xs, truth, rec)]
    _write_report(_out_path(config, out_dir, f"reconstruct_{method}.csv"),
                  {"command": "reconstruct", "method": method, "window": window},
                  ("x", "truth_re", "truth_im", "recon_re", "recon_im", "abs_error"),
                  rows)
    return 0


def _cmd_decay(config, out_dir):
    spec = _inner_spec(config)
    params = _as_params(config)
    methods = params.get("methods", ["shannon", "pw_oversample"])
    if not isinstance(methods, list) or any(m not in reconstruct._METHODS for m in methods):
        raise ConfigError(f"params.methods: expected a list drawn from {reconstruct._METHODS}")
    windows = [int(k) for k in _num_list(params, "windows", (25, 50, 100, 200, 400))]
    if any(k < 1 for k in windows):
        raise ConfigError("params.windows: entries must be >= 1")
    uniform = any(m in ("shannon", "pw_oversample") for m in methods)
    lo = _num(params, "x_min", -1.0 if uniform else -3.0)
    hi = _num(params, "x_max", 1.0 if uniform else 3.0)
    xs = np.linspace(lo, hi, _int(params, "x_count", 101))
    for method in methods:
        rows = []
        for window in windows:
            truth, rec = _reconstruct_once(spec, method, window, params, xs)
            err = np.abs(rec - truth)
            rows.append((str(window), _fmt(err.max()),
                         _fmt(float(np.sqrt(np.mean(err**2))))))
        _write_report(os.path.join(out_dir, f"decay_{method}.csv"),
                      {"command": "decay", "method": method},
                      ("K", "sup_error", "l2_error"), rows)
    return 0


def _cmd_density(config, out_dir):
    measure = _measure_spec(config)
    params = _as_params(config)
    deltas = _num_list(params, "deltas")
    adapted = params.get("adapted", False)
    if not isinstance(adapted, bool):
        raise ConfigError(f"params.adapted: expected true/false, got {adapted!r}")
    spec = _inner_spec(config) if adapted else None
    rows = []
    for delta in sorted(deltas):
        rep = sieve.d_mu_theta(measure, spec, delta) if adapted else sieve.d_mu(measure, delta)
        rows.append((_fmt(delta), _fmt(rep.value), _fmt(rep.witness[0]), _fmt(rep.witness[1])))
    _write_report(_out_path(config, out_dir, "density.csv"),
                  {"command": "density", "adapted": str(adapted).lower()},
                  ("delta", "value", "witness_left", "witness_right"), rows)
    return 0


def _p_label(p: float) -> str:
    return format(p, "g").replace(".", "_")


def _cmd_certify_sieve(config, out_dir):
    spec = _inner_spec(config)
    measure = _measure_spec(config)
    params = _as_params(config)
    deltas = _num_list(params, "deltas", (0.1, 0.5, 1.0, 2.0))
    p_list = _num_list(params, "p", (1.0, 2.0))
    funcs, seed, count = _corpus(spec, params)
    violations = 0
    for p in p_list:
        grids = [harness.to_grid_function(f, p) for f in funcs]
        rows = []
        for delta in sorted(deltas):
            dens = sieve.d_mu(measure, delta).value
            bound = sieve.model_sieve_bound(spec, delta, dens, p)
            ratios = [sieve.empirical_embedding_ratio(g, measure, p) for g in grids]
            worst = max(ratios)
            margin = bound - worst
            if margin < -VIOLATION_TOL * max(1.0, bound):
                violations += 1
            rows.append((_fmt(delta), _fmt(dens), _fmt(bound), _fmt(worst), _fmt(margin)))
        _write_report(os.path.join(out_dir, f"certify_sieve_p{_p_label(p)}.csv"),
                      {"command": "certify-sieve", "p": _fmt(p), "corpus_size": len(funcs)},
                      ("delta", "D", "bound", "max_ratio", "margin"), rows)
    manifest = harness.corpus_manifest(spec, seed, count, len(funcs))
    manifest["measure"] = sieve.measure_to_dict(measure)
    with open(os.path.join(out_dir, "certify_sieve_manifest.json"), "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return 2 if violations else 0


def _cmd_certify_bernstein(config, out_dir):
    spec = _inner_spec(config)
    params = _as_params(config)
    p_list = _num_list(params, "p", (1.0, 2.0, 4.0))
    funcs, seed, count = _corpus(spec, params)
    rows = []
    violations = 0
    for p in p_list:
        worst = 0.0
        for f in funcs:
            lhs, rhs = harness.bernstein_check(f, p)
            worst = max(worst, lhs / rhs)
        if worst > 1.0 + VIOLATION_TOL:
            violations += 1
        rows.append((_fmt(p), _fmt(worst), _fmt(1.0 - worst)))
    _write_report(os.path.join(out_dir, "certify_bernstein.csv"),
                  {"command": "certify-bernstein", "corpus_size": len(funcs)},
                  ("p", "max_ratio", "margin"), rows)
    manifest = harness.corpus_manifest(spec, seed, count, len(funcs))
    with open(os.path.join(out_dir, "certify_bernstein_manifest.json"), "w",
              encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return 2 if violations else 0


def _cmd_lemma_checks(config, out_dir):
    params = _as_params(config)
    seed = _int(params, "seed", 1)
    pairs = _int(params, "pairs", 50)
    m_pairs = _int(params, "m_pairs", 20)
    rng = harness.SplitMix64(seed)
    rows = []
    violations = 0

    worst = math.inf
    for _ in range(pairs):
        a = -15.0 + 30.0 * rng.uniform()
        gap = 30.0 * rng.uniform()
        val = xi_product_integral(a, a + gap)
        worst = min(worst, 8.0 * math.pi / (4.0 + gap * gap) - val)
    if worst < -VIOLATION_TOL:
        violations += 1
    rows.append(("squared_product_bound", str(pairs), _fmt(worst)))

    worst = math.inf
    for _ in range(m_pairs):
        a = -10.0 + 20.0 * rng.uniform()
        gap = 12.0 * rng.uniform()
        val = xi_power_product_integral(a, a + gap, 2)
        worst = min(worst, higher_power_bound(2, gap) - val)
    if worst < -VIOLATION_TOL:
        violations += 1
    rows.append(("fourth_power_bound", str(m_pairs), _fmt(worst)))

    if "inner" in config:
        spec = _inner_spec(config)
        funcs, _, _ = _corpus(spec, {**params, "size": _int(params, "size", 5)})
        worst = math.inf
        for f in funcs:
            for delta in _num_list(params, "deltas", (0.25, 1.0)):
                for p in _num_list(params, "p", (1.0, 2.0)):
                    left, right = harness.sup_sample_check(f, delta, p)
                    worst = min(worst, right - left)
        if worst < -VIOLATION_TOL:
            violations += 1
        rows.append(("window_sup_budget", str(len(funcs)), _fmt(worst)))

    _write_report(_out_path(config, out_dir, "lemma_checks.csv"),
                  {"command": "lemma-checks", "seed": seed},
                  ("check", "cases", "min_margin"), rows)
    return 2 if violations else 0


_DISPATCH = {
    "nodes": _cmd_nodes,
    "reconstruct": _cmd_reconstruct,
    "decay": _cmd_decay,
    "density": _cmd_density,
    "certify-sieve": _cmd_certify_sieve,
    "certify-bernstein": _cmd_certify_bernstein,
    "lemma-checks": _cmd_lemma_checks,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="modelspace",
        description="Sampling-grid, reconstruction and density-certificate studies")
    parser.add_argument("--config", required=True, help="path to a JSON study config")
    parser.add_argument("--out", default=".", help="directory for report files")
    parser.add_argument("--threads", type=int, default=0,
                        help="worker hint, 0 = auto (operations are vectorized; "
                             "accepted for interface stability)")
    args = parser.parse_args(argv)
    try:
        if args.threads < 0:
            raise ConfigError(f"--threads must be >= 0, got {args.threads}")
        config = _load_json(args.config)
        if not isinstance(config, dict):
            raise ConfigError("config root must be an object")
        command = config.get("command")
        if command not in _DISPATCH:
            raise ConfigError(f"command: expected one of {COMMANDS}, got {command!r}")
        os.makedirs(args.out, exist_ok=True)
        return _DISPATCH[command](config, args.out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, TypeError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
