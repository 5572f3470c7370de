"""Experiment runner: validate a config, dispatch, persist artifacts and a run record.

Layout of one run directory::

    <out>/<command>-<hash12>/
        record.json      header (timestamp, versions) + checks + artifact list
        *.csv, *.json, *.svg

Numeric outputs depend only on the canonical config; the timestamp lives in
the record header and nowhere else.
"""
from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import math
import platform
import sys
import time
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from . import __version__
from . import constants as _const
from . import doubling as dbl
from . import gap
from . import nodal
from . import spectral
from . import weight as wt
from .poly import Polynomial

log = logging.getLogger("nodal_lab")

COMMANDS = ("density", "doubling", "weight", "theorem3", "theorem4", "schrodinger", "gap", "ibp")
RECORD_NAME = "record.json"


class ConfigError(ValueError):
    """Every violated precondition, listed."""

    def __init__(self, violations: list[str]):
        self.violations = list(violations)
        super().__init__("invalid config: " + "; ".join(self.violations))


# ---------------------------------------------------------------------------
# configuration


DEFAULTS: dict[str, dict[str, Any]] = {
    "density": {"manifold": "torus", "family": "sin", "Ns": list(range(1, 65)), "samples_per_period": 64,
                "k": 2, "n": 5, "svg": False},
    "doubling": {"u": "x1^2", "k": 1, "d": 2, "m": 2, "gammas": None, "rs": [0.1], "center": None},
    "weight": {"d": 3, "m": 2, "gammas": None, "r": 0.1, "r0": wt.DEFAULT_R0, "alpha": None},
    "theorem3": {"k": 6, "d": 2, "lambdas": [1e3, 1e4, 1e5, 1e6], "max_variation": 0.2},
    "theorem4": {"d": 2, "m": 2, "lower": 0.0, "R": 0.2, "u": None},
    "schrodinger": {"d": 3, "ks": list(range(1, 21)), "r": 0.1, "min_r2": 0.999},
    "gap": {"mode": "lp", "Ns": list(range(2, 17)), "interval": [0.45, 0.55], "delta": 1e-3,
            "random": 200, "max_size": 20},
    "ibp": {"d": 3, "m": 2, "gammas": None, "r": 0.1, "u": ["1", "|x|^2", "x1^2"]},
}

TOLERANCES = {"density_rel": 0.05, "density_spread": 1.5, "density_isolated": 1.2}


@dataclass(frozen=True)
class ExperimentConfig:
    command: str
    params: dict
    out: str = "runs"
    threads: int = 1
    seed: int = 0
    tolerances: dict = field(default_factory=dict)

    def resolved(self) -> dict:
        p = dict(DEFAULTS.get(self.command, {}))
        p.update(self.params)
        return p

    def tol(self, key: str) -> float:
        return float(self.tolerances.get(key, TOLERANCES[key]))

    def canonical_bytes(self) -> bytes:
        """Everything that influences numbers; output location and thread count do not."""
        body = {"command": self.command, "params": self.resolved(), "seed": self.seed,
                "tolerances": {k: self.tol(k) for k in TOLERANCES}}
        return json.dumps(body, sort_keys=True, separators=(",", ":")).encode()

    @property
    def hash(self) -> str:
        return hashlib.sha256(self.canonical_bytes()).hexdigest()


def load_config_file(path) -> dict:
    with open(path, "rb") as fh:
        return tomllib.load(fh)


def merge_config(command: str, cli: dict, file: dict | None) -> ExperimentConfig:
    """CLI values overlaid by the config file; a conflict keeps the file value and warns."""
    file = dict(file or {})
    if "command" in file and file["command"] != command:
        raise ConfigError([f"config file is for command {file['command']!r}, not {command!r}"])
    merged = {"params": dict(cli.get("params", {}))}
    for key in ("out", "threads", "seed"):
        if cli.get(key) is not None:
            merged[key] = cli[key]
    for key in ("out", "threads", "seed"):
        if key in file:
            if key in merged and merged[key] != file[key]:
                warnings.warn(f"config file overrides --{key}: {merged[key]!r} -> {file[key]!r}", stacklevel=2)
            merged[key] = file[key]
    for key, value in dict(file.get("params", {})).items():
        if key in merged["params"] and merged["params"][key] != value:
            warnings.warn(f"config file overrides parameter {key}: {merged['params'][key]!r} -> {value!r}",
                          stacklevel=2)
        merged["params"][key] = value
    return ExperimentConfig(command, merged["params"], str(merged.get("out", "runs")), int(merged.get("threads", 1)),
                            int(merged.get("seed", 0)), dict(file.get("tolerances", {})))


def _int_at_least(p, key, lo, out):
    v = p.get(key)
    if not isinstance(v, (int, np.integer)) or isinstance(v, bool) or v < lo:
        out.append(f"{key} >= {lo}")


def _gammas(p) -> tuple[float, ...]:
    g = p.get("gammas")
    return tuple(float(x) for x in g) if g is not None else (0.0,) * int(p["m"])


def validate(cfg: ExperimentConfig) -> list[str]:
    if cfg.command not in COMMANDS:
        return [f"unknown command {cfg.command!r}"]
    p = cfg.resolved()
    out: list[str] = []
    unknown = sorted(set(cfg.params) - set(DEFAULTS[cfg.command]))
    if unknown:
        out.append("unknown parameters: " + ", ".join(unknown))
    if cfg.threads < 1:
        out.append("threads >= 1")
    if cfg.seed < 0 or cfg.seed >= 2 ** 64:
        out.append("seed is an unsigned 64-bit integer")
    c = cfg.command
    if c in ("doubling", "weight", "ibp", "theorem4"):
        _int_at_least(p, "d", 1, out)
        _int_at_least(p, "m", 1, out)
    if c in ("doubling", "weight", "ibp") and not out:
        if p.get("gammas") is not None and len(p["gammas"]) != p["m"]:
            out.append("gamma list has length m")
        if c in ("doubling", "ibp") and p["d"] > 3:
            out.append("quadrature is implemented for d <= 3")
        rs = p["rs"] if c == "doubling" else [p["r"]]
        for r in rs:
            out += [v for v in wt.WeightConfig(p["d"], p["m"], _gammas(p), float(r),
                                               r0=float(p.get("r0", wt.DEFAULT_R0)),
                                               alpha=p.get("alpha")).violations() if v not in out]
    if c == "doubling" and p["u"] not in ("1", "x1^2", "|x|^2k"):
        out.append("u in {1, x1^2, |x|^2k}")
    if c == "density":
        if p["family"] not in ("sin", "pair", "isolated"):
            out.append("family in {sin, pair, isolated}")
        if p["family"] == "isolated" and not (0 <= p["k"] < p["n"]):
            out.append("0 <= k < n")
        if any(int(n) < 1 for n in p["Ns"]):
            out.append("every N >= 1")
        if p["samples_per_period"] < nodal.SAMPLES_PER_OSCILLATION:
            out.append(f"samples_per_period >= {nodal.SAMPLES_PER_OSCILLATION}")
    if c == "theorem3":
        if p["k"] % 2 or p["k"] <= 4:
            out.append("k even and > 4")
        if any(x <= 0 for x in p["lambdas"]):
            out.append("every lambda > 0")
    if c == "theorem4" and not out:
        if 4 * p["R"] > 1:
            out.append("4R <= 1")
        if p["d"] > 3:
            out.append("quadrature is implemented for d <= 3")
    if c == "schrodinger":
        if p["d"] < 3:
            out.append("d >= 3")
        if any(int(k) < 1 for k in p["ks"]):
            out.append("every k >= 1")
    if c == "gap":
        if p["mode"] not in ("lp", "ko"):
            out.append("mode in {lp, ko}")
        if p["delta"] <= 0:
            out.append("delta > 0")
        if any(int(n) < 1 for n in p["Ns"]):
            out.append("every N >= 1")
    return out


# ---------------------------------------------------------------------------
# run records


@dataclass
class CheckResult:
    check: str
    anchor: str
    passed: bool
    margin: float | None = None
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"check": self.check, "anchor": self.anchor, "passed": bool(self.passed),
                "margin": _clean(self.margin), "details": _clean(self.details)}


@dataclass
class RunRecord:
    config_hash: str
    timestamp: str
    command: str
    checks: list[CheckResult]
    artifacts: list[str]
    constants_version: str
    directory: str
    error: str | None = None

    @property
    def passed(self) -> bool:
        return self.error is None and bool(self.checks) and all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {
            "header": {"config_hash": self.config_hash, "timestamp": self.timestamp,
                       "constants_version": self.constants_version, "nodal_lab": __version__,
                       "python": platform.python_version(), "numpy": np.__version__},
            "command": self.command,
            "passed": self.passed,
            "error": self.error,
            "checks": [c.to_json() for c in self.checks],
            "artifacts": self.artifacts,
        }


def _clean(x):
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else str(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def _write_csv(path: Path, columns, rows) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([repr(float(row[c])) if isinstance(row[c], (float, np.floating)) else row[c] for c in columns])
    path.write_text(buf.getvalue())


def _write_json(path: Path, data) -> None:
    path.write_text(json.dumps(_clean(data), indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# experiments: each returns (checks, artifact names)


def _density(cfg, p, out: Path):
    checks, arts = [], []
    if p["family"] == "isolated":
        f = spectral.isolated_zero_example(p["k"], p["n"])
        zk, _ = spectral.zonal_harmonic(p["k"])
        at_pole = float(abs(spectral.evaluate(f, np.array([[0.0, 0.0, 1.0]]))[0]))
        radii = {}
        for tag, g in (("combination", f), ("zonal", zk)):
            field_ = nodal.sample(g, nodal.resolution_for(g, p["samples_per_period"]))
            df = nodal.distance_field(field_, nodal.extract_zero_set(field_), workers=cfg.threads)
            radii[tag] = nodal.density_radius(df)
            if p["svg"]:
                nodal.write_svg(field_, nodal.extract_zero_set(field_), out / f"{tag}.svg")
                arts.append(f"{tag}.svg")
        ratio = radii["combination"] / radii["zonal"]
        checks.append(CheckResult("isolated_zero_at_pole", "isolated zeros on the sphere", at_pole <= 1e-10,
                                  1.0 - at_pole / 1e-10, {"value": at_pole}))
        lim = cfg.tol("density_isolated")
        checks.append(CheckResult("isolated_density_ratio", "Theorem 1 (density radius)", ratio <= lim,
                                  1.0 - ratio / lim, {"ratio": ratio, **radii}))
        _write_json(out / "isolated.json", {"at_pole": at_pole, "radii": radii, "ratio": ratio})
        return checks, arts + ["isolated.json"]
    if p["family"] == "sin":
        def family(n):
            return spectral.EigenSum.torus([(1.0, "sin", (n,))])
    else:
        def family(n):
            return spectral.EigenSum.torus([(1.0, "sin", (n,)), (0.5, "sin", (2 * n,))])
    rows = nodal.scaling_experiment(family, [int(n) for n in p["Ns"]], p["samples_per_period"], cfg.threads)
    nodal.write_scaling_csv(rows, out / "scaling.csv")
    arts.append("scaling.csv")
    prods = np.array([r.product_radius_sqrtlambda for r in rows])
    if p["family"] == "sin":
        target = math.pi / 2
        worst = 0.0
        for r in rows:
            allowed = cfg.tol("density_rel") * target + r.grid_error * math.sqrt(r.lambda1)
            worst = max(worst, abs(r.product_radius_sqrtlambda - target) / allowed)
        checks.append(CheckResult("density_scaling_single", "Theorem 1 (density radius)", worst <= 1.0, 1.0 - worst,
                                  {"min": prods.min(), "max": prods.max(), "target": target}))
    else:
        spread = float(prods.max() / prods.min())
        lim = cfg.tol("density_spread")
        checks.append(CheckResult("density_scaling_pair", "Theorem 1 (density radius)", spread <= lim,
                                  1.0 - spread / lim, {"spread": spread}))
    if p["svg"]:
        f = family(int(p["Ns"][-1]))
        field_ = nodal.sample(f, nodal.resolution_for(f, p["samples_per_period"]))
        nodal.write_svg(field_, nodal.extract_zero_set(field_), out / "field.svg")
        arts.append("field.svg")
    return checks, arts


def _subsolution(p) -> dbl.Subsolution:
    g = _gammas(p)
    if p["u"] == "1":
        return dbl.constant_one(p["d"], g)
    if p["u"] == "x1^2":
        return dbl.coordinate_square(p["d"], g)
    return dbl.radial_power(int(p["k"]), p["d"], g)


def _doubling(cfg, p, out: Path):
    u = _subsolution(p)
    rows, checks = [], []
    for r in p["rs"]:
        v = dbl.verify_theorem2(u, wt.WeightConfig(p["d"], p["m"], _gammas(p), float(r)),
                                center=p["center"])
        rows.append({"d": p["d"], "m": p["m"], "gamma_max": wt.gamma_max(_gammas(p)), "r": float(r),
                     "ratio": v.ratio, "bound": v.bound, "margin": v.margin, "pass": int(v.passed)})
        checks.append(CheckResult(f"doubling_r={r:g}", "Theorem 2 (doubling estimate)", v.passed, v.margin,
                                  v.to_json()))
    _write_csv(out / "doubling.csv", dbl.SWEEP_COLUMNS, rows)
    return checks, ["doubling.csv"]


def _weight(cfg, p, out: Path):
    wc = wt.WeightConfig(p["d"], p["m"], _gammas(p), float(p["r"]), r0=float(p["r0"]), alpha=p["alpha"])
    rep = wt.verify_lemma1(wc)
    # margins: distance of the measured value to its threshold
    offsets = {"ii": 1.0 - 1e-9, "iii": -1e-9}
    checks = [CheckResult(f"property_{c.name}", f"Lemma 1 ({c.name})", c.passed,
                          c.value - offsets[c.name] if c.name in offsets else None, c.to_json()) for c in rep.checks]
    for c in wt.lemma4_checks(rep.alpha, wc.m, wc.d):
        checks.append(CheckResult(c.name, "Lemma 4 (Taylor remainder)", c.passed, None, c.to_json()))
    _write_json(out / "weight.json", rep.to_json())
    return checks, ["weight.json"]


def _theorem3(cfg, p, out: Path):
    rows = []
    for lam in p["lambdas"]:
        res = wt.verify_theorem3_threshold(int(p["k"]), int(p["d"]), float(lam), float(lam))
        rows.append(res.to_json() | {"r_min_sqrt_lambda": res.r_min_sqrt_lambda1})
    vals = np.array([r["r_min_sqrt_lambda"] for r in rows])
    variation = float(vals.max() / vals.min() - 1.0)
    _write_csv(out / "theorem3.csv", ("lambda1", "lambda2", "r_min", "r_star", "ratio", "r_min_sqrt_lambda"), rows)
    lim = float(p["max_variation"])
    return [CheckResult("threshold_scaling", "Theorem 3 (polynomial weight threshold)", variation < lim,
                        1.0 - variation / lim, {"variation": variation})], ["theorem3.csv"]


def _theorem4(cfg, p, out: Path):
    d, m = int(p["d"]), int(p["m"])
    lower = {}
    if p["lower"] and m > 1:
        lower = {e: -float(p["lower"]) * v for e, v in Polynomial.radial_power(m - 1, d).terms.items()}
    op = dbl.GeneralOperator2m.polyharmonic(d, m, lower)
    gallery = dbl.theorem4_gallery(d, m)
    if p["u"] is not None:
        gallery = [(t, u) for t, u in gallery if t in p["u"]]
    checks, rows = [], []
    for tag, u in gallery:
        v = dbl.verify_theorem4(op, u, float(p["R"]), tag=tag)
        checks.append(CheckResult(f"theorem4_{tag}", "Theorem 4 (general operators)", v.passed, v.margin, v.to_json()))
        rows.append({"u": tag, "ratio": v.ratio, "bound": v.bound, "margin": v.margin, "pass": int(v.passed)})
    _write_csv(out / "theorem4.csv", ("u", "ratio", "bound", "margin", "pass"), rows)
    return checks, ["theorem4.csv"]


def linear_r2(x, y) -> float:
    x, y = np.asarray(x, float), np.asarray(y, float)
    slope, icpt = np.polyfit(x, y, 1)
    resid = y - (slope * x + icpt)
    return float(1.0 - np.sum(resid ** 2) / np.sum((y - y.mean()) ** 2))


def _schrodinger(cfg, p, out: Path):
    rows = [dbl.schrodinger_case(int(k), int(p["d"]), float(p["r"])) for k in p["ks"]]
    exact = all(abs(r.log2_ratio - (2 * r.k + r.d)) <= 1e-8 * (2 * r.k + r.d) for r in rows)
    etas = all(r.eta == 2 * r.k * (2 * r.k + r.d - 2) for r in rows)
    r2 = linear_r2([math.sqrt(r.eta) for r in rows], [math.log(r.ratio) for r in rows]) if len(rows) > 2 else 1.0
    _write_csv(out / "schrodinger.csv", ("k", "d", "eta", "ratio", "exact_ratio", "bound", "residual", "passed"),
               [r.to_json() | {"passed": int(r.passed)} for r in rows])
    return [
        CheckResult("log2_ratio_exact", "Proposition 1 (sharpness)", exact, None),
        CheckResult("eta_formula", "Proposition 1 (sharpness)", etas, None),
        CheckResult("sqrt_eta_linear_fit", "Proposition 1 (sharpness)", r2 > float(p["min_r2"]), r2 - float(p["min_r2"]),
                    {"r2": r2}),
        CheckResult("ratio_below_bound", "Proposition 1 (doubling estimate)", all(r.passed for r in rows), None),
    ], ["schrodinger.csv"]


def _gap(cfg, p, out: Path):
    if p["mode"] == "lp":
        results = gap.gap_sweep([int(n) for n in p["Ns"]], tuple(p["interval"]), float(p["delta"]), cfg.threads)
        gap.write_sweep_csv(results, out / "gap_sweep.csv")
        arts = ["gap_sweep.csv"]
        for r in results:
            name = f"certificate_N{r.N}.json"
            gap.write_certificate(r, out / name)
            arts.append(name)
        length = p["interval"][1] - p["interval"][0]
        checks = [CheckResult(f"lp_N={r.N}", "sharpness of the density radius", r.feasible and r.certified
                              and r.positive_arc >= length, None, r.to_json() | {"coefficients": len(r.to_json()["coefficients"])})
                  for r in results]
        return checks, arts
    rng = np.random.default_rng(cfg.seed)
    rows, fails = [], 0
    polys = [(f"cos{n}", gap.GapPolynomial.from_trig({int(n): 1.0})) for n in p["Ns"]]
    polys += [(f"random{i}", gap.random_gap_polynomial(rng, int(p["max_size"]))) for i in range(int(p["random"]))]
    for tag, poly in polys:
        v = gap.verify_ko_density(poly)
        fails += not v.passed
        rows.append({"poly": tag, "size": len(poly.spectrum), "max_gap": v.max_gap, "R": v.radius, "pass": int(v.passed)})
    _write_csv(out / "ko_density.csv", ("poly", "size", "max_gap", "R", "pass"), rows)
    return [CheckResult("ko_density", "density radius of gap polynomials", fails == 0, None,
                        {"tested": len(polys), "failures": fails})], ["ko_density.csv"]


def _ibp(cfg, p, out: Path):
    wc = wt.WeightConfig(p["d"], p["m"], _gammas(p), float(p["r"]))
    gal = {"1": dbl.constant_one, "|x|^2": lambda d, g: dbl.radial_power(1, d, g), "x1^2": dbl.coordinate_square}
    checks, rows = [], []
    for tag in p["u"]:
        res = dbl.check_integration_by_parts(gal[tag](p["d"], _gammas(p)), wc)
        checks.append(CheckResult(f"ibp_{tag}", "integration by parts against the weight", res.passed,
                                  1.0 - res.residual / (10 * res.error) if res.error else None, res.to_json()))
        rows.append(res.to_json())
    _write_csv(out / "ibp.csv", ("u", "lhs", "rhs", "residual", "error", "passed"), rows)
    return checks, ["ibp.csv"]


EXPERIMENTS: dict[str, Callable] = {
    "density": _density, "doubling": _doubling, "weight": _weight, "theorem3": _theorem3,
    "theorem4": _theorem4, "schrodinger": _schrodinger, "gap": _gap, "ibp": _ibp,
}


def run_directory(cfg: ExperimentConfig) -> Path:
    return Path(cfg.out) / f"{cfg.command}-{cfg.hash[:12]}"


def run(cfg: ExperimentConfig) -> RunRecord:
    """Validate, execute and persist.  Raises :class:`ConfigError` before touching the disk."""
    problems = validate(cfg)
    if problems:
        raise ConfigError(problems)
    out = run_directory(cfg)
    out.mkdir(parents=True, exist_ok=True)
    stamp = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
    try:
        version = _const.constants_version()
    except (_const.CalibrationMissingError, OSError):
        version = "missing"
    (out / "config.json").write_text(cfg.canonical_bytes().decode() + "\n")
    try:
        checks, arts = EXPERIMENTS[cfg.command](cfg, cfg.resolved(), out)
        rec = RunRecord(cfg.hash, stamp, cfg.command, checks, ["config.json"] + arts, version, str(out))
    except (ValueError, ArithmeticError, RuntimeError, _const.CalibrationMissingError) as exc:
        # a failed run is recorded as failed, never as passing
        log.error("%s failed: %s", cfg.command, exc)
        rec = RunRecord(cfg.hash, stamp, cfg.command, [], ["config.json"], version, str(out),
                        error=f"{type(exc).__name__}: {exc}")
    _write_json(out / RECORD_NAME, rec.to_json())
    return rec


# ---------------------------------------------------------------------------
# reports


@dataclass
class Report:
    rows: list[dict]
    problems: list[str]
    warnings: list[str]

    @property
    def passed(self) -> bool:
        return not self.problems and all(r["passed"] for r in self.rows)

    def markdown(self) -> str:
        lines = ["# nodal-lab run summary", "", "| run | check | anchor | result | margin |",
                 "|---|---|---|---|---|"]
        for r in self.rows:
            margin = "" if r["margin"] is None else (f"{r['margin']:.3g}" if isinstance(r["margin"], float) else str(r["margin"]))
            lines.append(f"| {r['run']} | {r['check']} | {r['anchor']} | {'pass' if r['passed'] else 'FAIL'} | {margin} |")
        if self.problems:
            lines += ["", "## Problems", ""] + [f"- {p}" for p in self.problems]
        if self.warnings:
            lines += ["", "## Warnings", ""] + [f"- {w}" for w in self.warnings]
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {"passed": self.passed, "rows": self.rows, "problems": self.problems, "warnings": self.warnings}


def _failure_detail(check: dict) -> str:
    d = check.get("details") or {}
    # Lemma 1 checks carry a radius; the Taylor-remainder checks live in the unit frame
    if d.get("name") in ("i", "ii", "iii", "iv") and d.get("location") is not None:
        return f"property ({d.get('name')}) violated at |x| = {d['location']:.6g}"
    return ""


def report(directory) -> Report:
    """Summarise every record under ``directory``; corrupt or incomplete records are listed."""
    root = Path(directory)
    rows, problems, warns = [], [], []
    if not root.is_dir():
        return Report([], [f"{root} is not a directory"], [])
    records = sorted(root.rglob(RECORD_NAME))
    if not records:
        warns.append(f"no run records under {root}")
    for path in records:
        run_name = path.parent.name
        try:
            data = json.loads(path.read_text())
            checks = data["checks"]
        except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
            problems.append(f"{path}: unreadable record ({type(exc).__name__})")
            continue
        if data.get("error"):
            problems.append(f"{run_name}: run failed: {data['error']}")
        for c in checks:
            row = {"run": run_name, "check": c.get("check"), "anchor": c.get("anchor"), "passed": bool(c.get("passed")),
                   "margin": c.get("margin")}
            if not row["passed"]:
                detail = _failure_detail(c)
                if detail:
                    row["check"] = f"{row['check']}: {detail}"
            rows.append(row)
    return Report(rows, problems, warns)


def write_report(rep: Report, directory) -> list[Path]:
    root = Path(directory)
    root.mkdir(parents=True, exist_ok=True)
    md, js = root / "summary.md", root / "summary.json"
    md.write_text(rep.markdown())
    _write_json(js, rep.to_json())
    return [md, js]
