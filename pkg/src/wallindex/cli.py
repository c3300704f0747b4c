"""Experiment driver.

`wallindex run <config.toml>` builds the configured wall data, executes the
selected verification suites, prints a fixed-width summary, and persists
report.json plus plot-data CSVs. `wallindex report <report.json>` re-renders
a stored report. `wallindex presets` lists the named field configurations.

Exit status: 0 when every selected suite passes, 1 on suite failures, 2 on
configuration problems.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # 3.10
    import tomli as tomllib

from .charclasses import (
    a_hat,
    a_hat_polynomial,
    chern_character,
    chern_character_polynomial,
    curvature,
    transgression,
)
from .cylinder import (
    collar_limit,
    cylinder_integral,
    paste_cylinder,
    rsa_via_cylinders,
)
from .dirac import build_dirac, index_report
from .forms import Form, FormError, ext_d, integrate, wedge
from .presets import (
    FRAME_PRESETS,
    PRESETS,
    band_limited_field,
    build_wall,
    random_frame,
    random_gauge,
)
from .report import Check, RunReport, SuiteResult, render_report, write_csv
from .rsa import WallData, flat_wall_report, generalized_rsa

SUITES = ("forms", "transgression", "rsa", "index", "cylinder")


class ConfigError(Exception):
    pass


def _get_table(raw: dict, name: str) -> dict:
    table = raw.get(name, {})
    if not isinstance(table, dict):
        raise ConfigError(f"[{name}] must be a table")
    return dict(table)


def _take(table: dict, section: str, key: str, kind, default):
    if key not in table:
        return default
    val = table.pop(key)
    if kind is float and isinstance(val, int) and not isinstance(val, bool):
        val = float(val)
    if not isinstance(val, kind) or isinstance(val, bool) and kind is not bool:
        raise ConfigError(f"{section}.{key} must be {kind.__name__}, got {val!r}")
    return val


def load_config(path: Path) -> dict:
    """Parse and validate a TOML experiment config into a flat record."""
    try:
        raw = tomllib.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc

    manifold = _get_table(raw, "manifold")
    fields = _get_table(raw, "fields")
    run = _get_table(raw, "run")
    for extra in set(raw) - {"manifold", "fields", "run"}:
        raise ConfigError(f"unknown table [{extra}]")

    cfg = {}
    cfg["manifold.dimension"] = _take(manifold, "manifold", "dimension", int, 2)
    if cfg["manifold.dimension"] not in (2, 4):
        raise ConfigError("manifold.dimension must be 2 or 4")
    cfg["manifold.points"] = _take(manifold, "manifold", "points", int, 16)
    if cfg["manifold.points"] < 8:
        raise ConfigError("manifold.points must be at least 8")
    lengths = _take(manifold, "manifold", "lengths", list,
                    [2.0 * math.pi] * cfg["manifold.dimension"])
    try:
        cfg["manifold.lengths"] = [float(x) for x in lengths]
    except (TypeError, ValueError) as exc:
        raise ConfigError("manifold.lengths must be numbers") from exc
    cfg["manifold.wall_axis"] = _take(manifold, "manifold", "wall_axis", int, 0)
    cfg["manifold.wall_index"] = _take(manifold, "manifold", "wall_index", int, 0)
    if manifold:
        raise ConfigError(f"unknown manifold key {sorted(manifold)[0]!r}")

    cfg["fields.rank"] = _take(fields, "fields", "rank", int, 1)
    cfg["fields.gauge"] = _take(fields, "fields", "gauge", str, "free")
    cfg["fields.frame"] = _take(fields, "fields", "frame", str, "zero")
    if cfg["fields.gauge"] not in PRESETS:
        raise ConfigError(f"fields.gauge: unknown preset {cfg['fields.gauge']!r}")
    if cfg["fields.frame"] not in FRAME_PRESETS:
        raise ConfigError(f"fields.frame: unknown preset {cfg['fields.frame']!r}")
    for key in ("jump", "flux", "winding", "seed", "scale", "band",
                "frame_seed", "frame_scale"):
        if key in fields:
            val = fields.pop(key)
            if isinstance(val, bool) or not isinstance(val, (int, float)):
                raise ConfigError(f"fields.{key} must be a number, got {val!r}")
            cfg[f"fields.{key}"] = val
    if fields:
        raise ConfigError(f"unknown fields key {sorted(fields)[0]!r}")

    suites = _take(run, "run", "suites", list, ["all"])
    if not all(isinstance(s, str) for s in suites):
        raise ConfigError("run.suites must be a list of suite names")
    cfg["run.suites"] = suites
    cfg["run.out_dir"] = _take(run, "run", "out_dir", str, "")
    cfg["run.parallelism"] = _take(run, "run", "parallelism", int, 1)
    if cfg["run.parallelism"] < 1:
        raise ConfigError("run.parallelism must be at least 1")
    cfg["run.tolerance_scale"] = _take(run, "run", "tolerance_scale", float, 1.0)
    if cfg["run.tolerance_scale"] <= 0.0:
        raise ConfigError("run.tolerance_scale must be positive")
    if run:
        raise ConfigError(f"unknown run key {sorted(run)[0]!r}")
    return cfg


def resolve_suites(names, dimension: int) -> list:
    """Expand and validate suite selections. 'all' quietly omits the index
    suite off a two-torus; naming it directly there is a config error."""
    out = []
    for name in names:
        for part in name.split(","):
            part = part.strip()
            if not part:
                continue
            if part == "all":
                out.extend(s for s in SUITES
                           if s != "index" or dimension == 2)
                continue
            if part not in SUITES:
                raise ConfigError(f"unknown suite {part!r} (have: "
                                  + ", ".join(SUITES) + ", all)")
            if part == "index" and dimension != 2:
                raise ConfigError("the index suite needs a two-dimensional "
                                  "config")
            out.append(part)
    seen = []
    for s in out:
        if s not in seen:
            seen.append(s)
    return seen


def build_wall_from_config(cfg: dict) -> WallData:
    params = {k.split(".", 1)[1]: v for k, v in cfg.items()
              if k.startswith("fields.") and k.split(".", 1)[1]
              not in ("rank", "gauge", "frame")}
    try:
        return build_wall(dimension=cfg["manifold.dimension"],
                          points=cfg["manifold.points"],
                          lengths=cfg["manifold.lengths"],
                          wall_axis=cfg["manifold.wall_axis"],
                          wall_index=cfg["manifold.wall_index"],
                          rank=cfg["fields.rank"],
                          gauge=cfg["fields.gauge"],
                          frame=cfg["fields.frame"], **params)
    except (ValueError, FormError) as exc:
        raise ConfigError(str(exc)) from exc


def _scalar_one_form(grid, rng) -> Form:
    comps = {(ax,): band_limited_field(grid, 1, rng)[..., None, None]
             for ax in range(grid.dim)}
    return Form(grid, 1, comps, "scalar", 1)


def _suite_forms(w: WallData, scale: float) -> tuple:
    g = w.grid
    rng = np.random.default_rng(101)
    checks = []
    f0 = Form(g, 0, {(): band_limited_field(g, 2, rng)[..., None, None]},
              "scalar", 1)
    ddf = ext_d(ext_d(f0))
    checks.append(Check.from_residual("d-after-d-on-functions", 0.0,
                                      ddf.max_abs(), 1e-10 * scale))
    if g.dim >= 3:
        dda = ext_d(ext_d(_scalar_one_form(g, rng)))
        checks.append(Check.from_residual("d-after-d-on-one-forms", 0.0,
                                          dda.max_abs(), 1e-10 * scale))
    beta = _scalar_one_form(g, rng)
    for _ in range(g.dim - 2):
        beta = wedge(beta, _scalar_one_form(g, rng))
    boundary = integrate(ext_d(beta), "full")
    checks.append(Check.from_residual("closed-manifold-stokes", 0.0,
                                      abs(boundary), 1e-8 * scale))
    a1, b1 = _scalar_one_form(g, rng), _scalar_one_form(g, rng)
    anti = (wedge(a1, b1) + wedge(b1, a1)).max_abs()
    checks.append(Check.from_residual("odd-wedge-alternation", 0.0, anti,
                                      1e-12 * scale))
    return SuiteResult("forms", checks), {}


def _transgression_residual(poly, char, a1, a0) -> float:
    tv = transgression(poly, a1, a0)
    diff = char(curvature(a1).curvature) - char(curvature(a0).curvature)
    worst = 0.0
    for p in tv.degrees:
        if p + 1 > a1.grid.dim:
            continue
        worst = max(worst, (ext_d(tv.degree_part(p))
                            - diff.degree_part(p + 1)).max_abs())
    return worst


def _suite_transgression(w: WallData, scale: float) -> tuple:
    g = w.grid
    checks = []
    worst_ch = 0.0
    worst_ah = 0.0
    d = max(2, w.rank)
    for trial in range(5):
        rng = np.random.default_rng(7000 + trial)
        a0 = random_gauge(g, rng, d)
        a1 = random_gauge(g, rng, d)
        worst_ch = max(worst_ch, _transgression_residual(
            chern_character_polynomial(), chern_character, a1, a0))
        if g.dim >= 4:
            g0 = random_frame(g, rng, g.dim)
            g1 = random_frame(g, rng, g.dim)
            worst_ah = max(worst_ah, _transgression_residual(
                a_hat_polynomial(), a_hat, g1, g0))
    checks.append(Check.from_residual("character-transgression-derivative",
                                      0.0, worst_ch, 1e-8 * scale))
    if g.dim >= 4:
        checks.append(Check.from_residual("frame-transgression-derivative",
                                          0.0, worst_ah, 1e-8 * scale))
    return SuiteResult("transgression", checks), {}


def _suite_rsa(w: WallData, scale: float) -> tuple:
    rep = flat_wall_report(w)
    checks = []
    gap = abs(rep.variants["ahat_plus"] - rep.variants["ahat_minus"])
    checks.append(Check.from_residual("assembly-variants-agree",
                                      rep.value, gap, 1e-6 * scale))
    if w.frame_jump.max_abs() == 0.0:
        checks.append(Check.from_residual("frame-term-vanishes", rep.frame_term,
                                          abs(rep.frame_term), 1e-12 * scale))
    if rep.seeley is not None:
        checks.append(Check.from_residual("local-formula-agrees", rep.seeley,
                                          abs(rep.seeley - rep.value),
                                          1e-6 * scale))
    if rep.spectral_difference is not None:
        checks.append(Check.from_residual("spectral-matched-mod-2",
                                          rep.spectral_difference,
                                          rep.matched_residual, 1e-8 * scale))
    return SuiteResult("rsa", checks), {}


def _suite_index(w: WallData, scale: float) -> tuple:
    rep = index_report(w)
    checks = [
        Check.from_residual("predicted-near-integer", rep.predicted,
                            abs(rep.predicted - rep.predicted_rounded),
                            0.05 * scale),
        Check.from_residual("spectral-equals-predicted", float(rep.spectral),
                            float(abs(rep.spectral - rep.predicted_rounded)),
                            0.5 * scale),
        Check.from_residual("spectrum-pairing", 0.0, rep.pairing_residual,
                            1e-9 * scale),
    ]
    if rep.min_purity is not None:  # vacuous when the kernel is empty
        checks.append(Check.from_residual("kernel-chirality-purity",
                                          rep.min_purity,
                                          1.0 - rep.min_purity, 0.01 * scale))
    op = build_dirac(w)
    vals, vecs = np.linalg.eigh(op.matrix)
    chi = np.sum(np.abs(vecs) ** 2 * op.chirality[:, None], axis=0).real
    rows = [(float(v), float(c)) for v, c in zip(vals, chi)]
    return SuiteResult("index", checks), {"spectra.csv": (("eigenvalue",
                                                           "chirality"), rows)}


def _suite_cylinder(w: WallData, scale: float) -> tuple:
    checks = []
    sweep = []
    vals = {}
    for eps in (1.0, 0.5, 0.25, 0.1):
        vals[eps] = cylinder_integral(paste_cylinder(w, eps=eps))
        sweep.append((float(eps), float(vals[eps])))
    spread = max(vals.values()) - min(vals.values())
    checks.append(Check.from_residual("thickness-independence", vals[0.1],
                                      spread, 1e-8 * scale))
    limit = collar_limit(paste_cylinder(w, eps=0.1))
    checks.append(Check.from_residual("zero-thickness-limit", limit,
                                      abs(vals[0.1] - limit), 1e-6 * scale))
    direct_p = generalized_rsa(w, "ahat_plus")
    direct_m = generalized_rsa(w, "ahat_minus")
    ff = rsa_via_cylinders(w, "frame-first")
    checks.append(Check.from_residual("two-collar-asymmetry", ff,
                                      abs(ff - direct_p), 1e-6 * scale))
    if abs(direct_p - direct_m) < 1e-6:
        gf = rsa_via_cylinders(w, "gauge-first")
        checks.append(Check.from_residual("interpolation-order-swap", gf,
                                          abs(ff - gf), 1e-6 * scale))
    return SuiteResult("cylinder", checks), {"sweep.csv": (("eps", "value"),
                                                           sweep)}


_SUITE_FNS = {
    "forms": _suite_forms,
    "transgression": _suite_transgression,
    "rsa": _suite_rsa,
    "index": _suite_index,
    "cylinder": _suite_cylinder,
}


def _run_one(name: str, wall: WallData, scale: float) -> tuple:
    start = time.perf_counter()
    try:
        result, extras = _SUITE_FNS[name](wall, scale)
    except Exception as exc:  # a crashed suite is a failed suite
        result, extras = SuiteResult(name, error=f"{type(exc).__name__}: {exc}"), {}
    result.seconds = time.perf_counter() - start
    return result, extras


def run_experiment(cfg: dict, suites: list, parallelism: int) -> tuple:
    wall = build_wall_from_config(cfg)
    scale = cfg["run.tolerance_scale"]
    results = []
    extras = {}
    if parallelism > 1 and len(suites) > 1:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            futs = [pool.submit(_run_one, name, wall, scale) for name in suites]
            gathered = [f.result() for f in futs]
    else:
        gathered = [_run_one(name, wall, scale) for name in suites]
    for result, extra in gathered:
        results.append(result)
        extras.update(extra)
    echo = {k: v for k, v in cfg.items() if k != "run.out_dir"}
    echo["run.suites"] = ",".join(suites)
    report = RunReport(config=echo, suites=results)
    return report, extras


def _resolve_out_dir(flag_value, cfg: dict, config_path: Path) -> Path:
    if flag_value:
        return Path(flag_value)
    env = os.environ.get("WALLINDEX_OUT")
    if env:
        return Path(env)
    if cfg["run.out_dir"]:
        return Path(cfg["run.out_dir"])
    return Path("runs") / config_path.stem


def _cmd_run(args) -> int:
    config_path = Path(args.config)
    cfg = load_config(config_path)
    if args.tolerance_scale is not None:
        if args.tolerance_scale <= 0.0:
            raise ConfigError("--tolerance-scale must be positive")
        cfg["run.tolerance_scale"] = args.tolerance_scale
    if args.parallelism is not None:
        if args.parallelism < 1:
            raise ConfigError("--parallelism must be at least 1")
        cfg["run.parallelism"] = args.parallelism
    names = args.suite if args.suite else cfg["run.suites"]
    suites = resolve_suites(names, cfg["manifold.dimension"])
    if not suites:
        raise ConfigError("no suites selected")

    report, extras = run_experiment(cfg, suites, cfg["run.parallelism"])
    out_dir = _resolve_out_dir(args.out_dir, cfg, config_path)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "report.json").write_bytes(report.json_bytes())
    timings = {"seconds": {k: round(v, 6) for k, v in report.timings.items()}}
    (out_dir / "timings.json").write_text(json.dumps(timings, indent=2,
                                                     sort_keys=True) + "\n",
                                          encoding="ascii")
    for fname, (header, rows) in sorted(extras.items()):
        write_csv(out_dir / fname, header, rows)

    sys.stdout.write(render_report(report.to_dict()))
    total = sum(report.timings.values())
    sys.stdout.write(f"wrote {out_dir / 'report.json'} "
                     f"({total:.2f} s computed)\n")
    return 0 if report.passed else 1


def _cmd_report(args) -> int:
    path = Path(args.report)
    try:
        payload = json.loads(path.read_text(encoding="ascii"))
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    for key in ("schema_version", "suites", "passed"):
        if key not in payload:
            raise ConfigError(f"{path}: not a run report (missing {key!r})")
    sys.stdout.write(render_report(payload))
    return 0


def _cmd_presets(_args) -> int:
    lines = ["gauge presets:"]
    for name, (hint, desc) in PRESETS.items():
        label = f"{name} {hint}".strip()
        lines.append(f"  {label:<40}{desc}")
    lines.append("frame presets:")
    for name, (hint, desc) in FRAME_PRESETS.items():
        label = f"{name} {hint}".strip()
        lines.append(f"  {label:<40}{desc}")
    lines.append("suites: " + ", ".join(SUITES)
                 + ", all (index needs dimension 2)")
    sys.stdout.write("\n".join(lines) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wallindex",
        description="Verification driver for wall-index configurations.")
    sub = parser.add_subparsers(dest="command", required=True)

    runp = sub.add_parser("run", help="execute suites from a TOML config")
    runp.add_argument("config", help="path to the experiment config")
    runp.add_argument("--suite", action="append", default=None,
                      metavar="NAME", help="suite to run (repeatable, "
                      "comma-separable); overrides the config")
    runp.add_argument("--out-dir", default=None,
                      help="output directory (overrides WALLINDEX_OUT and "
                      "the config)")
    runp.add_argument("--parallelism", type=int, default=None,
                      help="max suites evaluated concurrently")
    runp.add_argument("--tolerance-scale", type=float, default=None,
                      help="multiply every check tolerance by this factor")
    runp.set_defaults(fn=_cmd_run)

    repp = sub.add_parser("report", help="render a stored report.json")
    repp.add_argument("report", help="path to report.json")
    repp.set_defaults(fn=_cmd_report)

    prep = sub.add_parser("presets", help="list named field configurations")
    prep.set_defaults(fn=_cmd_presets)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        sys.stderr.write(f"config error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
