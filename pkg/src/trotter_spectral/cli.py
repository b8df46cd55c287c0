"""Batch front-end: ``trotter-spectral <command> --config run.toml [--strict] [--out DIR]``.

Configuration documents are TOML. See ``configs/`` in the repository for one
example per command and the README for the full schema.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import logging
import math
import os
import re
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import __version__
from .bounds import (
    BoundReport,
    appF_derivative_bounds,
    das_bound_report,
    lemma3_energy_bound,
    magnus_h,
    magnus_static_bound,
    qpe_requirements,
    tc_optimal,
)
from .das import CSV_COLUMNS, das_sweep, effective_h_of_s, min_path_gap
from .hamiltonian import (
    DEFAULT_LAMBDA,
    DEFAULT_MAX_SITES,
    LayeredHamiltonian,
    counterexample_model,
    heisenberg_ff,
    interaction_constants,
    nearest_neighbor_chain,
    random_real_local,
    tfim,
    tfim_pair,
)
from .linalg import Tolerances, hermitian_eig, operator_norm
from .qpe import qpe_distribution, qpe_trotter_shift, rpe_extract
from .trotter import (
    dense_hamiltonian,
    effective_hamiltonian,
    error_decomposition,
    leading_correction,
    leakage_rate,
    model_spectrum,
    off_diagonal_residual,
    projector_distance,
    spectral_comparison,
)

log = logging.getLogger(__name__)

COMMANDS = ("spectrum", "trotter-error", "das-sweep", "qpe", "rpe", "bounds", "leakage")
THREADS_ENV = "TROTTER_SPECTRAL_THREADS"

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_STRICT = 3
EXIT_NUMERICAL = 4


class ConfigError(ValueError):
    pass


class StrictModeError(RuntimeError):
    pass


# --------------------------------------------------------------------------
# configuration

MODEL_KINDS = ("tfim", "heisenberg_ff", "counterexample", "random_real", "nn_chain", "explicit")
MODEL_KEYS = {"kind", "n_sites", "seed", "diag_values", "terms", "final_terms", "layering",
              "transverse", "longitudinal", "coupling"}
PARAM_KEYS = {"dt", "L", "T_list", "M", "M_ref", "l", "xi", "t0", "k", "idx0", "idx1",
              "subspace", "T", "lambda", "tolerances"}
TOP_KEYS = {"command", "seed", "strict", "model", "params", "output"}
OUTPUT_KEYS = {"path", "format"}
REQUIRED = {
    "spectrum": ("dt",),
    "trotter-error": ("dt", "L"),
    "das-sweep": ("M", "T_list"),
    "qpe": ("dt", "t0", "l"),
    "rpe": ("dt", "L"),
    "bounds": ("dt",),
    "leakage": ("dt", "L", "subspace"),
}


@dataclass(frozen=True)
class ModelSpec:
    kind: str
    n_sites: int | None = None
    seed: int | None = None
    diag_values: tuple[float, ...] = DEFAULT_LAMBDA
    terms: tuple = ()
    final_terms: tuple = ()
    layering: str = "bonds"
    transverse: float = 1.0
    longitudinal: float = 1.0
    coupling: float = 1.0


@dataclass(frozen=True)
class ExperimentConfig:
    command: str
    model: ModelSpec
    params: dict = field(default_factory=dict)
    output_path: str = "."
    output_format: str = "csv"
    seed: int = 0
    strict: bool = False

    def echo(self) -> dict:
        d = asdict(self)
        d["model"] = {k: list(v) if isinstance(v, tuple) else v for k, v in d["model"].items()}
        return d


def _toml_loads(text: str) -> dict:
    if sys.version_info >= (3, 11):
        import tomllib
    else:
        import tomli as tomllib
    try:
        return tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"syntax error: {exc}") from exc


def _reject_unknown(section: str, data: dict, allowed: set) -> None:
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise ConfigError(f"unknown key(s) in [{section}]: {', '.join(unknown)}")


_EVEN = re.compile(r"^\s*even\s*:\s*(\d+)\s*:\s*\[\s*([^,\]]+)\s*,\s*([^\]]+)\s*\]\s*$")


def parse_grid(spec) -> list[float]:
    """``"even:N:[lo,hi]"`` or an explicit list of numbers."""
    if isinstance(spec, str):
        m = _EVEN.match(spec)
        if not m:
            raise ConfigError(f"cannot parse grid {spec!r}; expected 'even:N:[lo,hi]'")
        n, lo, hi = int(m.group(1)), float(m.group(2)), float(m.group(3))
        if n < 1 or not lo < hi:
            raise ConfigError(f"invalid grid {spec!r}")
        return [float(x) for x in np.linspace(lo, hi, n)]
    if isinstance(spec, list) and spec and all(isinstance(x, (int, float)) for x in spec):
        return [float(x) for x in spec]
    raise ConfigError(f"grid must be a string 'even:N:[lo,hi]' or a list of numbers, got {spec!r}")


def _as_int_list(name: str, value) -> list[int]:
    values = value if isinstance(value, list) else [value]
    if not values or not all(isinstance(v, int) and not isinstance(v, bool) for v in values):
        raise ConfigError(f"{name} must be an integer or a list of integers")
    return values


def _check_params(command: str, params: dict, model: ModelSpec) -> dict:
    missing = [k for k in REQUIRED[command] if k not in params]
    if missing:
        raise ConfigError(f"command {command!r} requires param(s): {', '.join(missing)}")
    out = dict(params)

    def positive(key):
        if key in out:
            v = out[key]
            if not isinstance(v, (int, float)) or isinstance(v, bool) or not v > 0:
                raise ConfigError(f"range violation: {key} must be > 0 (got {v!r})")

    for key in ("dt", "xi", "t0", "T", "lambda"):
        positive(key)
    for key in ("M", "M_ref"):
        if key in out:
            if not isinstance(out[key], int) or out[key] < 1:
                raise ConfigError(f"range violation: {key} must be an integer >= 1 (got {out[key]!r})")
    if "L" in out:
        out["L"] = _as_int_list("L", out["L"])
        if min(out["L"]) < 0:
            raise ConfigError("range violation: L must be >= 0")
    if "l" in out and (not isinstance(out["l"], int) or not 1 <= out["l"] <= 20):
        raise ConfigError(f"range violation: l must be an integer in [1, 20] (got {out['l']!r})")
    for key in ("k", "idx0", "idx1"):
        if key in out and (not isinstance(out[key], int) or out[key] < 0):
            raise ConfigError(f"range violation: {key} must be a non-negative integer")
    if "subspace" in out:
        out["subspace"] = _as_int_list("subspace", out["subspace"])
    if "T_list" in out:
        out["T_list"] = parse_grid(out["T_list"])
        if min(out["T_list"]) <= 0:
            raise ConfigError("range violation: schedule times must be > 0")
    if "tolerances" in out:
        tol = out["tolerances"]
        if not isinstance(tol, dict):
            raise ConfigError("tolerances must be a table")
        _reject_unknown("params.tolerances", tol, set(Tolerances.__dataclass_fields__))
    return out


def _parse_model(data: dict) -> ModelSpec:
    _reject_unknown("model", data, MODEL_KEYS)
    kind = data.get("kind")
    if kind not in MODEL_KINDS:
        raise ConfigError(f"model.kind must be one of {', '.join(MODEL_KINDS)} (got {kind!r})")
    n = data.get("n_sites")
    if kind not in ("counterexample",) and n is None and kind != "explicit":
        raise ConfigError(f"model kind {kind!r} requires n_sites")
    if kind == "explicit" and not data.get("terms"):
        raise ConfigError("explicit model requires a non-empty terms list")
    if n is not None:
        if not isinstance(n, int) or n < 1:
            raise ConfigError(f"range violation: n_sites must be a positive integer (got {n!r})")
        if n > DEFAULT_MAX_SITES:
            raise ConfigError(f"range violation: n_sites = {n} exceeds cap {DEFAULT_MAX_SITES}")

    def term_tuple(rows, key):
        out = []
        for row in rows:
            if (not isinstance(row, list) or len(row) != 3 or not isinstance(row[1], str)
                    or not isinstance(row[2], int)):
                raise ConfigError(f"model.{key} entries must be [coefficient, letters, layer]")
            out.append((float(row[0]), row[1], row[2]))
        return tuple(out)

    return ModelSpec(
        kind=kind,
        n_sites=n,
        seed=data.get("seed"),
        diag_values=tuple(float(x) for x in data.get("diag_values", DEFAULT_LAMBDA)),
        terms=term_tuple(data.get("terms", []), "terms"),
        final_terms=term_tuple(data.get("final_terms", []), "final_terms"),
        layering=data.get("layering", "bonds"),
        transverse=float(data.get("transverse", 1.0)),
        longitudinal=float(data.get("longitudinal", 1.0)),
        coupling=float(data.get("coupling", 1.0)),
    )


def parse_config(text: str, command: str | None = None) -> ExperimentConfig:
    data = _toml_loads(text)
    _reject_unknown("top level", data, TOP_KEYS)
    cmd = data.get("command", command)
    if command is not None and cmd != command:
        raise ConfigError(f"config command {cmd!r} does not match requested {command!r}")
    if cmd not in COMMANDS:
        raise ConfigError(f"command must be one of {', '.join(COMMANDS)} (got {cmd!r})")
    if "model" not in data or not isinstance(data["model"], dict):
        raise ConfigError("missing [model] section")
    model = _parse_model(data["model"])
    params = data.get("params", {})
    if not isinstance(params, dict):
        raise ConfigError("[params] must be a table")
    _reject_unknown("params", params, PARAM_KEYS)
    params = _check_params(cmd, params, model)
    output = data.get("output", {})
    _reject_unknown("output", output, OUTPUT_KEYS)
    fmt = output.get("format", "csv")
    if fmt not in ("csv", "json"):
        raise ConfigError(f"output.format must be csv or json (got {fmt!r})")
    seed = data.get("seed", 0)
    if not isinstance(seed, int):
        raise ConfigError("seed must be an integer")
    return ExperimentConfig(cmd, model, params, str(output.get("path", ".")), fmt, seed,
                            bool(data.get("strict", False)))


def derive_seed(seed: int, key: str) -> int:
    """Stable per-task seed from the top-level seed and a task key."""
    digest = hashlib.sha256(f"{seed}:{key}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


# --------------------------------------------------------------------------
# model construction


def _explicit(n: int, rows) -> LayeredHamiltonian:
    n_layers = max(r[2] for r in rows) + 1
    groups: list[list] = [[] for _ in range(n_layers)]
    for coef, letters, layer in rows:
        groups[layer].append((coef, letters))
    if any(not g for g in groups):
        raise ConfigError("explicit layer indices must be contiguous from 0")
    return LayeredHamiltonian.from_terms(n, groups)


def build_model(cfg: ExperimentConfig) -> LayeredHamiltonian:
    """Single layered Hamiltonian for the static commands."""
    m = cfg.model
    seed = m.seed if m.seed is not None else derive_seed(cfg.seed, "model") % 2**32
    if m.kind == "tfim":
        return tfim(m.n_sites, m.transverse, m.longitudinal, m.coupling)
    if m.kind == "heisenberg_ff":
        return heisenberg_ff(m.n_sites)
    if m.kind == "counterexample":
        return counterexample_model(m.diag_values)
    if m.kind == "random_real":
        return random_real_local(m.n_sites, seed)
    if m.kind == "nn_chain":
        return nearest_neighbor_chain(m.n_sites, seed, m.layering)
    n = m.n_sites or len(m.terms[0][1])
    return _explicit(n, m.terms)


def build_pair(cfg: ExperimentConfig) -> tuple[LayeredHamiltonian, LayeredHamiltonian]:
    """Initial and final Hamiltonians for the interpolating commands."""
    m = cfg.model
    if m.kind == "tfim":
        return tfim_pair(m.n_sites)
    if m.kind == "explicit" and m.final_terms:
        n = m.n_sites or len(m.terms[0][1])
        return _explicit(n, m.terms), _explicit(n, m.final_terms)
    raise ConfigError("this command needs an interpolation pair: model.kind = 'tfim' "
                      "or 'explicit' with final_terms")


def _has_pair(cfg: ExperimentConfig) -> bool:
    return cfg.model.kind == "tfim" or (cfg.model.kind == "explicit" and bool(cfg.model.final_terms))


# --------------------------------------------------------------------------
# commands; each returns (columns, rows, summary)


def _threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def _ordered_map(fn: Callable, items: list) -> list:
    n = _threads()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def _tolerances(cfg: ExperimentConfig) -> Tolerances:
    return Tolerances(**cfg.params.get("tolerances", {}))


def cmd_spectrum(cfg):
    h = build_model(cfg)
    dt = cfg.params["dt"]
    cmp = spectral_comparison(dense_hamiltonian(h), effective_hamiltonian(h, dt, _tolerances(cfg)))
    rows = [[k, p.E, p.E_tilde, p.shift, p.overlap, p.gap] for k, p in enumerate(cmp.pairs)]
    summary = {
        "dt": dt,
        "max_shift": cmp.max_shift,
        "sorted_identity": cmp.is_sorted_identity,
        "off_diagonal_residual": off_diagonal_residual(h),
    }
    return ["k", "E", "E_tilde", "shift", "overlap", "gap"], rows, summary


def cmd_trotter_error(cfg):
    h = build_model(cfg)
    p = cfg.params
    psi = model_spectrum(h).eigenvectors[:, p.get("k", 0)]
    reports = _ordered_map(lambda L: error_decomposition(h, p["dt"], L, psi), p["L"])
    rows = [[r.L, r.dt, r.t, r.f, r.theta, r.delta, r.euclid] for r in reports]
    summary = {"k": p.get("k", 0), "sandwich_checked": [r.sandwich_holds() for r in reports
                                                        if r.delta <= 1 / math.sqrt(2)]}
    return ["L", "dt", "t", "f", "theta", "delta", "euclid"], rows, summary


def cmd_das_sweep(cfg):
    hi, hf = build_pair(cfg)
    p = cfg.params
    result = das_sweep(hi, hf, p["M"], p["T_list"], p.get("k", 0), p.get("M_ref"))
    rows = [r.as_row() for r in result.records]
    summary = {
        "turning_point_T": result.turning_point_T,
        "turning_point_ratio": result.turning_point_T / p["M"],
        "slope_adb": result.slope_adb,
        "slope_adb_r2": result.slope_adb_r2,
    }
    return list(CSV_COLUMNS), rows, summary


def cmd_qpe(cfg):
    h = build_model(cfg)
    p = cfg.params
    k = p.get("k", 0)
    l = p["l"]
    shift = qpe_trotter_shift(h, p["dt"], p["t0"], k)
    t = shift.t0
    sp = model_spectrum(h)
    sp_eff = hermitian_eig(effective_hamiltonian(h, p["dt"], _tolerances(cfg)))
    psi = sp.eigenvectors[:, k]
    # U = exp(-i H t) has eigenphase -E t, i.e. -E t / 2 pi turns
    exact = qpe_distribution([-sp.eigenvalues[k] * t / (2 * math.pi)], [1.0], l)
    weights = np.abs(sp_eff.eigenvectors.conj().T @ psi) ** 2
    weights /= weights.sum()
    trot = qpe_distribution(-sp_eff.eigenvalues * t / (2 * math.pi), weights, l)
    rows = [[a, a / 2**l, exact.distribution[a], trot.distribution[a]] for a in range(2**l)]
    summary = {
        "theta_exact": shift.theta_exact,
        "theta_eff": shift.theta_eff,
        "phase_error": shift.phase_error,
        "overlap_penalty": shift.overlap_penalty,
        "L": shift.L,
        "t0_used": t,
    }
    if "xi" in p:
        req = qpe_requirements(p["xi"], p["t0"], h.n_sites, sp.gap(k),
                               off_diagonal_residual(h) <= 1e-10)
        summary["requirements"] = {name: _report_dict(r) for name, r in req.items()}
        _check_preconditions(cfg, list(req.values()))
    return ["a", "phase", "p_exact", "p_trotter"], rows, summary


def cmd_rpe(cfg):
    h = build_model(cfg)
    p = cfg.params
    i0, i1 = p.get("idx0", 0), p.get("idx1", 1)
    readings = _ordered_map(lambda L: rpe_extract(h, p["dt"], L, i0, i1), p["L"])
    rows = [[L, L * p["dt"], r.P_alpha, r.P_beta, r.extracted_phase, r.predicted_phase, r.error]
            for L, r in zip(p["L"], readings)]
    return (["L", "t", "P_alpha", "P_beta", "extracted", "predicted", "error"], rows,
            {"idx0": i0, "idx1": i1})


def cmd_leakage(cfg):
    h = build_model(cfg)
    p = cfg.params
    sub = p["subspace"]
    dp = projector_distance(h, p["dt"], sub)
    values = _ordered_map(lambda L: leakage_rate(h, p["dt"], L, sub), p["L"])
    rows = [[L, v, 4 * dp**2] for L, v in zip(p["L"], values)]
    return ["L", "leakage", "ceiling"], rows, {"projector_distance": dp, "subspace": sub}


def _check_preconditions(cfg: ExperimentConfig, reports: list[BoundReport]) -> None:
    """Warn about violated preconditions, or fail in strict mode."""
    bad = [r for r in reports if not r.preconditions_met]
    if bad and cfg.strict:
        raise StrictModeError(f"preconditions violated for: {', '.join(r.name for r in bad)}")
    for r in bad:
        log.warning("%s: %s", r.name, "; ".join(r.violations))


def _report_dict(r: BoundReport) -> dict:
    d = r.as_dict()
    # a ceiling that diverges because its precondition fails is reported as null
    if not math.isfinite(d["value"]) and r.violations:
        d["value"] = None
    return d


def _path_gap(hi, hf, dtbar, k=0) -> tuple[float, list[str]]:
    """Smallest tracked gap over ``H(s)`` and the split-step generator ``H_eff(s)``."""
    gap = min_path_gap(hi, hf, k)
    notes = []
    try:
        from .trotter import follow_eigenstate
        _, gaps, _ = follow_eigenstate(
            lambda s: effective_h_of_s(hi, hf, s, dtbar), np.linspace(0, 1, 65), k)
        gap = min(gap, float(gaps.min()))
    except ValueError as exc:
        notes.append(f"effective path gap unavailable: {exc}")
    return gap, notes


def cmd_bounds(cfg):
    p = cfg.params
    dt = p["dt"]
    reports: list[BoundReport] = []
    h = build_model(cfg)
    consts = interaction_constants(h)
    sp = model_spectrum(h)
    lam_k = sp.gap(p.get("k", 0))
    v_norm = operator_norm(leading_correction(h))
    reports.append(magnus_h(consts, dt))
    reports.append(magnus_static_bound(consts, dt))
    reports.append(lemma3_energy_bound(consts, v_norm, lam_k, dt))
    summary: dict[str, Any] = {"static_constants": asdict(consts), "gap_k": lam_k}
    if _has_pair(cfg):
        hi, hf = build_pair(cfg)
        pc = interaction_constants(hi, hf)
        summary["pair_constants"] = asdict(pc)
        M = p.get("M", 1000)
        t_c = 2 * M * pc.D / (3 * pc.C1)
        T = p.get("T", t_c)
        lam, notes = (p["lambda"], []) if "lambda" in p else _path_gap(hi, hf, T / M, p.get("k", 0))
        summary["lambda"] = lam
        summary["lambda_notes"] = notes
        d1, d2 = appF_derivative_bounds(pc, T / M)
        reports += [d1, d2, das_bound_report(pc, T, M, lam)]
        t_c, eps = tc_optimal(pc, M, lam)
        summary["T_c"] = t_c
        reports.append(eps)
    if "xi" in p and "t0" in p:
        req = qpe_requirements(p["xi"], p["t0"], h.n_sites, lam_k,
                               off_diagonal_residual(h) <= 1e-10)
        reports += list(req.values())
    summary["reports"] = [_report_dict(r) for r in reports]
    _check_preconditions(cfg, reports)
    return None, None, summary


HANDLERS = {
    "spectrum": cmd_spectrum,
    "trotter-error": cmd_trotter_error,
    "das-sweep": cmd_das_sweep,
    "qpe": cmd_qpe,
    "rpe": cmd_rpe,
    "bounds": cmd_bounds,
    "leakage": cmd_leakage,
}


# --------------------------------------------------------------------------
# artifacts


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.17g}"


def _finite(obj) -> bool:
    if isinstance(obj, dict):
        return all(_finite(v) for v in obj.values())
    if isinstance(obj, (list, tuple)):
        return all(_finite(v) for v in obj)
    if isinstance(obj, (float, np.floating)):
        return math.isfinite(obj)
    return True


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def render_csv(columns, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(x) for x in row])
    return buf.getvalue()


def render_json(obj) -> str:
    return json.dumps(_plain(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


def execute(cfg: ExperimentConfig) -> dict[str, str]:
    """Run a command and return ``{filename: content}`` without touching disk."""
    columns, rows, summary = HANDLERS[cfg.command](cfg)
    if not _finite(rows or []) or not _finite(summary):
        raise FloatingPointError("non-finite value in results")
    stem = cfg.command.replace("-", "_")
    files = {}
    if columns is not None:
        if cfg.output_format == "csv":
            files[f"{stem}.csv"] = render_csv(columns, rows)
            files[f"{stem}_summary.json"] = render_json(summary)
        else:
            records = [dict(zip(columns, r)) for r in rows]
            files[f"{stem}.json"] = render_json({"records": records, "summary": summary})
    else:
        files[f"{stem}.json"] = render_json(summary)
    return files


def run(cfg: ExperimentConfig, out_dir: str | os.PathLike | None = None) -> int:
    """Execute ``cfg`` and write artifacts plus ``manifest.json``; returns an exit status."""
    out = Path(out_dir if out_dir is not None else cfg.output_path)
    start = time.perf_counter()
    try:
        files = execute(cfg)
    except StrictModeError as exc:
        log.error("%s", exc)
        return EXIT_STRICT
    except ConfigError as exc:
        log.error("config error: %s", exc)
        return EXIT_CONFIG
    except (ValueError, FloatingPointError, np.linalg.LinAlgError) as exc:
        log.error("numerical failure: %s", exc)
        return EXIT_NUMERICAL
    manifest = {
        "config": cfg.echo(),
        "version": __version__,
        "wall_time_s": time.perf_counter() - start,
        "artifacts": sorted(files),
    }
    files["manifest.json"] = json.dumps(_plain(manifest), sort_keys=True, indent=2) + "\n"
    written = []
    try:
        out.mkdir(parents=True, exist_ok=True)
        for name in sorted(files):
            path = out / name
            with open(path, "w", newline="\n") as fh:
                fh.write(files[name])
            written.append(path)
    except OSError as exc:
        for path in written:
            path.unlink(missing_ok=True)
        log.error("could not write artifacts: %s", exc)
        return EXIT_NUMERICAL
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="trotter-spectral", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", required=True, help="TOML experiment description")
    parser.add_argument("--strict", action="store_true",
                        help="treat violated bound preconditions as errors")
    parser.add_argument("--out", help="output directory (overrides output.path)")
    parser.add_argument("-v", "--verbose", action="store_true")
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        text = Path(args.config).read_text()
        cfg = parse_config(text, args.command)
    except (OSError, ConfigError) as exc:
        log.error("config error: %s", exc)
        return EXIT_CONFIG
    if args.strict:
        cfg = ExperimentConfig(cfg.command, cfg.model, cfg.params, cfg.output_path,
                               cfg.output_format, cfg.seed, True)
    return run(cfg, args.out)


if __name__ == "__main__":
    sys.exit(main())
