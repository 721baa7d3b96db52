"""Experiment sweeps: scenario specs, figure recipes, and CSV emission.

A spec file (YAML) names a base scenario plus sweep lists; each figure
recipe expands into simulator or channel-model runs and lands in its own
CSV.  Runs fan out across worker threads, results are merged by key, and
files are written in a fixed order with fixed float formatting, so a
repeated invocation reproduces every output byte for byte.
"""

from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field, replace
from pathlib import Path

import yaml

from .admission import (AccessStats, Origin, OverheadModel, SchemeKind,
                        ServiceKind, access_ratio, batch_admit_priority)
from .allocation import power_speed_curve
from .simulator import (KMH_TO_MPS, ScenarioConfig, Simulator, _link_quality)
from .channel import STANDARD_CONFIGS

FIGURES = ("fig3", "fig4", "fig5", "fig6", "fig7", "fig8")
DEFAULT_SPEEDS_KMH = (50.0, 100.0, 150.0, 200.0, 250.0, 300.0, 350.0, 400.0)
DEFAULT_SEEDS = tuple(range(1, 21))

# Experiment-level scenario defaults: long enough for the offered load to
# saturate the overlap capacity, decision slots wide enough to batch
# simultaneous requests.
DEFAULT_DURATION_S = 7200.0
DEFAULT_EPOCH_S = 10.0

ACCESS_HEADER = ("speed_kmh", "scheme", "seed", "service", "origin",
                 "accepted", "total", "access_ratio")
SINR_HEADER = ("speed_kmh", "antenna_config", "mean_sinr_db", "sem_db")
POWER_HEADER = ("speed_kmh", "solver", "seed", "total_power_w")


class SpecError(Exception):
    """Base for experiment-spec problems."""


class SpecSyntaxError(SpecError):
    """The spec file is not valid YAML / not a mapping."""


class SpecValidationError(SpecError):
    """The spec parsed but violates a constraint; message names the key."""


@dataclass(frozen=True)
class ExperimentSpec:
    scenario: ScenarioConfig = field(default_factory=lambda: ScenarioConfig(
        duration_s=DEFAULT_DURATION_S, epoch_s=DEFAULT_EPOCH_S))
    speeds_kmh: tuple = DEFAULT_SPEEDS_KMH
    schemes: tuple = tuple(SchemeKind)
    seeds: tuple = DEFAULT_SEEDS
    figures: tuple = FIGURES
    out_dir: str = "results"

    def __post_init__(self):
        if not self.speeds_kmh:
            raise SpecValidationError("sweep.speeds must not be empty")
        for v in self.speeds_kmh:
            if not (v > 0 and math.isfinite(v)):
                raise SpecValidationError(
                    f"sweep.speeds entries must be positive, got {v!r}")
        if not self.seeds:
            raise SpecValidationError("sweep.seeds must not be empty")
        for fig in self.figures:
            if fig not in FIGURES:
                raise SpecValidationError(
                    f"outputs.figures entry {fig!r} not one of {FIGURES}")
        for scheme in self.schemes:
            if not isinstance(scheme, SchemeKind):
                raise SpecValidationError(
                    f"sweep.schemes entry {scheme!r} is not a scheme")


_SCENARIO_KEYS = ("speed_kmh", "duration_s", "epoch_s", "cell_radius_m",
                  "overlap_m", "carrier_hz", "tx_power_w", "noise_psd",
                  "traffic_scale", "allocator", "ho_threshold_mbps",
                  "stop_on_reject", "link_draws", "seed")


def _parse_seeds(value):
    if isinstance(value, str):
        first, sep, last = value.partition("..")
        if not sep:
            raise SpecValidationError(
                "sweep.seeds string must be a range like '1..20'")
        try:
            lo, hi = int(first), int(last)
        except ValueError as exc:
            raise SpecValidationError(f"sweep.seeds range {value!r}: {exc}")
        if hi < lo:
            raise SpecValidationError("sweep.seeds range must be ascending")
        return tuple(range(lo, hi + 1))
    if isinstance(value, (list, tuple)):
        try:
            return tuple(int(v) for v in value)
        except (TypeError, ValueError):
            raise SpecValidationError("sweep.seeds entries must be integers")
    raise SpecValidationError("sweep.seeds must be a list or an 'a..b' range")


def _parse_schemes(value):
    if not isinstance(value, (list, tuple)):
        raise SpecValidationError("sweep.schemes must be a list")
    out = []
    for name in value:
        try:
            out.append(SchemeKind(name))
        except ValueError:
            choices = ", ".join(s.value for s in SchemeKind)
            raise SpecValidationError(
                f"sweep.schemes entry {name!r} not one of: {choices}")
    return tuple(out)


def parse_spec(path) -> ExperimentSpec:
    """Load and validate a YAML experiment spec; omitted keys get defaults.

    An empty file yields the documented default experiment (standard
    scenario, full speed sweep, seeds 1-20, all figures).
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"spec file not found: {path}")
    try:
        raw = yaml.safe_load(path.read_text())
    except yaml.YAMLError as exc:
        raise SpecSyntaxError(f"spec file {path} is not valid YAML: {exc}")
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise SpecSyntaxError("spec top level must be a mapping")
    for key in raw:
        if key not in ("scenario", "sweep", "outputs"):
            raise SpecValidationError(
                f"unknown top-level key {key!r} "
                "(expected scenario, sweep, outputs)")

    scenario_raw = raw.get("scenario") or {}
    if not isinstance(scenario_raw, dict):
        raise SpecValidationError("scenario must be a mapping")
    for key in scenario_raw:
        if key not in _SCENARIO_KEYS:
            raise SpecValidationError(
                f"scenario.{key} is not a recognized setting")
    fields = {"duration_s": DEFAULT_DURATION_S, "epoch_s": DEFAULT_EPOCH_S}
    fields.update(scenario_raw)
    try:
        scenario = ScenarioConfig(**fields)
    except (TypeError, ValueError) as exc:
        raise SpecValidationError(f"scenario: {exc}")

    sweep = raw.get("sweep") or {}
    if not isinstance(sweep, dict):
        raise SpecValidationError("sweep must be a mapping")
    for key in sweep:
        if key not in ("speeds", "schemes", "seeds"):
            raise SpecValidationError(f"sweep.{key} is not a recognized key")
    speeds = sweep.get("speeds", DEFAULT_SPEEDS_KMH)
    if not isinstance(speeds, (list, tuple)):
        raise SpecValidationError("sweep.speeds must be a list")
    try:
        speeds = tuple(float(v) for v in speeds)
    except (TypeError, ValueError):
        raise SpecValidationError("sweep.speeds entries must be numbers")
    seeds = (_parse_seeds(sweep["seeds"]) if "seeds" in sweep
             else DEFAULT_SEEDS)
    schemes = (_parse_schemes(sweep["schemes"]) if "schemes" in sweep
               else tuple(SchemeKind))

    outputs = raw.get("outputs") or {}
    if not isinstance(outputs, dict):
        raise SpecValidationError("outputs must be a mapping")
    for key in outputs:
        if key not in ("dir", "figures"):
            raise SpecValidationError(f"outputs.{key} is not a recognized key")
    figures = outputs.get("figures", FIGURES)
    if not isinstance(figures, (list, tuple)):
        raise SpecValidationError("outputs.figures must be a list")
    out_dir = outputs.get("dir", "results")

    return ExperimentSpec(scenario=scenario, speeds_kmh=speeds,
                          schemes=schemes, seeds=seeds,
                          figures=tuple(figures), out_dir=str(out_dir))


# ---------------------------------------------------------------------------
# recipe machinery

def _fmt(value) -> str:
    if isinstance(value, float):
        return "%.9g" % value
    return str(value)


def _write_csv(path: Path, header, rows) -> int:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
    return len(rows)


def _parallel(fn, keys, max_workers):
    """Evaluate fn over keys on a thread pool; results keyed, order-free."""
    if max_workers is not None and max_workers <= 1:
        return {key: fn(key) for key in keys}
    workers = max_workers or min(8, os.cpu_count() or 1)
    results = {}
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = {pool.submit(fn, key): key for key in keys}
        for fut in as_completed(futures):
            key = futures[fut]
            try:
                results[key] = fut.result()
            except SpecError:
                raise
            except Exception as exc:
                raise RuntimeError(f"run {key} failed: {exc}") from exc
    return results


def _stats_rows(speed: float, scheme: SchemeKind, seed: int,
                stats: AccessStats):
    rows = []
    for kind in ServiceKind:
        for origin in Origin:
            acc = stats.accepted(kind, origin)
            tot = stats.total(kind, origin)
            rows.append((speed, scheme.value, seed, kind.value, origin.value,
                         acc, tot, access_ratio(acc, tot)))
    return rows


def _simulate(config: ScenarioConfig):
    return Simulator(config).run()


def _overhead_replay(report) -> AccessStats:
    """Re-decide every recorded batch with overhead-inflated demands.

    Identical request streams and identical per-batch budgets isolate the
    effect of the overhead model from closed-loop occupancy drift.
    """
    stats = AccessStats()
    for remaining, requests, bits in report.batch_log or ():
        models = {kind: OverheadModel(bits_per_symbol=b)
                  for kind, b in bits.items()}
        outcome = batch_admit_priority(list(requests), remaining,
                                       overhead=models, stop_on_reject=True)
        for req, ok in outcome.decisions:
            stats.record(req.kind, req.origin, ok)
    return stats


def _access_recipe(spec: ExperimentSpec, scheme: SchemeKind, max_workers,
                   **overrides):
    keys = [(speed, seed) for speed in spec.speeds_kmh for seed in spec.seeds]

    def one(key):
        speed, seed = key
        cfg = replace(spec.scenario, speed_kmh=speed, seed=seed,
                      scheme=scheme, **overrides)
        return _simulate(cfg)

    reports = _parallel(one, keys, max_workers)
    rows = []
    for key in keys:
        rows.extend(_stats_rows(key[0], scheme, key[1], reports[key].stats))
    return rows


def _fig3_rows(spec: ExperimentSpec):
    scn = spec.scenario
    rows = []
    for speed in spec.speeds_kmh:
        for label in ("2x4", "1x2", "2x2", "1x1"):
            engine = _link_quality(STANDARD_CONFIGS[label], scn.ofdm,
                                   scn.carrier_hz, scn.tx_power_w,
                                   scn.noise_psd, scn.link_draws)
            mean, sem = engine.mean_sinr_with_sem(speed * KMH_TO_MPS)
            mean_db = 10.0 * math.log10(mean)
            sem_db = 10.0 * sem / (mean * math.log(10.0))
            rows.append((speed, label, mean_db, sem_db))
    return rows


def _fig4_rows(spec: ExperimentSpec, max_workers):
    scenario = spec.scenario.allocator_scenario
    keys = [(solver, seed) for solver in ("exact", "greedy")
            for seed in spec.seeds]

    def one(key):
        solver, seed = key
        return power_speed_curve(scenario, spec.speeds_kmh, solver=solver,
                                 seeds=[seed])

    samples = _parallel(one, keys, max_workers)
    rows = []
    for key in keys:
        for s in samples[key]:
            rows.append((s.speed_kmh, s.solver, s.seed, s.total_power_w))
    return rows


def _fig7_rows(spec: ExperimentSpec, max_workers):
    keys = [(speed, seed) for speed in spec.speeds_kmh for seed in spec.seeds]

    def one(key):
        speed, seed = key
        cfg = replace(spec.scenario, speed_kmh=speed, seed=seed,
                      scheme=SchemeKind.PRIORITY, stop_on_reject=True,
                      record_batches=True)
        report = _simulate(cfg)
        return report.stats, _overhead_replay(report)

    results = _parallel(one, keys, max_workers)
    rows = []
    for key in keys:
        plain, inflated = results[key]
        rows.extend(_stats_rows(key[0], SchemeKind.PRIORITY, key[1], plain))
        rows.extend(_stats_rows(key[0], SchemeKind.PRIORITY_OVERHEAD, key[1],
                                inflated))
    return rows


def _fig8_rows(spec: ExperimentSpec, max_workers):
    rows = []
    for scheme in (SchemeKind.PRIORITY_OVERHEAD, SchemeKind.BASELINE):
        rows.extend(_access_recipe(spec, scheme, max_workers))
    return rows


def _generic_rows(spec: ExperimentSpec, max_workers):
    rows = []
    for scheme in spec.schemes:
        rows.extend(_access_recipe(spec, scheme, max_workers))
    return rows


@dataclass
class ExperimentResult:
    files: dict
    rows: dict

    def summary_lines(self):
        return [f"{name}: {self.rows[name]} rows -> {path}"
                for name, path in sorted(self.files.items())]


def run_experiment(spec: ExperimentSpec,
                   max_workers: int | None = None) -> ExperimentResult:
    """Execute every selected figure recipe (or the generic sweep) and
    write the CSV outputs.  Re-running an identical spec rewrites identical
    bytes."""
    out = Path(spec.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files: dict = {}
    rows_written: dict = {}

    def emit(name, filename, header, rows):
        path = out / filename
        rows_written[name] = _write_csv(path, header, rows)
        files[name] = path

    if not spec.figures:
        emit("access", "access.csv", ACCESS_HEADER,
             _generic_rows(spec, max_workers))
    for fig in spec.figures:
        if fig == "fig3":
            emit(fig, "sinr.csv", SINR_HEADER, _fig3_rows(spec))
        elif fig == "fig4":
            emit(fig, "power.csv", POWER_HEADER,
                 _fig4_rows(spec, max_workers))
        elif fig == "fig5":
            emit(fig, "access_fig5.csv", ACCESS_HEADER,
                 _access_recipe(spec, SchemeKind.ADAPTIVE_RESERVATION,
                                max_workers))
        elif fig == "fig6":
            emit(fig, "access_fig6.csv", ACCESS_HEADER,
                 _access_recipe(spec, SchemeKind.PRIORITY, max_workers,
                                stop_on_reject=True))
        elif fig == "fig7":
            emit(fig, "access_fig7.csv", ACCESS_HEADER,
                 _fig7_rows(spec, max_workers))
        elif fig == "fig8":
            emit(fig, "access_fig8.csv", ACCESS_HEADER,
                 _fig8_rows(spec, max_workers))
    return ExperimentResult(files=files, rows=rows_written)
