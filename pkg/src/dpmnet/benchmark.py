"""
Replicated comparison experiments.

A :class:`BenchmarkPlan` names a data generator, a list of methods, a
replicate count and an optional sweep over sample size or noise. Replicate
``r`` uses seed ``plan.seed + r`` at every sweep point, so sweeps are
paired. A method that fails on a replicate (typically a singular Gram
matrix for a naive inversion) is recorded as a failure and left out of
that cell's mean and standard deviation.

Plans can be written as ``key = value`` text::

    generator = gs
    methods = cor, dpm, reg-dpm
    replicates = 20
    samples = 200
    noise_sigma = 1.0
    sweep_param = samples
    sweep_values = 30, 50, 100, 200
"""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

from .data import read_dataset, read_gold_standard
from .evaluate import evaluate
from .methods import METHODS, MethodParams, check_methods, score_methods
from .simulate import DEFAULT_EXPECTED_PARENTS, SimulationConfig, simulate_gaussian, simulate_gs

GENERATORS = ("gaussian", "gs", "external-files")
SWEEP_PARAMS = ("samples", "noise_sigma", "noise_variance")
DEFAULT_REPLICATES = 20


@dataclass(frozen=True)
class BenchmarkPlan:
    generator: str = "gs"
    methods: tuple[str, ...] = METHODS
    replicates: int = DEFAULT_REPLICATES
    config: SimulationConfig = SimulationConfig()
    sweep_param: str | None = None
    sweep_values: tuple[float, ...] = ()
    nodes: int = 50
    expected_parents: float = DEFAULT_EXPECTED_PARENTS
    params: MethodParams = MethodParams()
    data_files: tuple[str, ...] = ()
    gold_files: tuple[str, ...] = ()
    layout: str = "samples-in-rows"
    output: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "methods", check_methods(self.methods))
        object.__setattr__(self, "sweep_values", tuple(float(v) for v in self.sweep_values))
        object.__setattr__(self, "data_files", tuple(self.data_files))
        object.__setattr__(self, "gold_files", tuple(self.gold_files))
        if self.generator not in GENERATORS:
            raise ValueError(f"generator must be one of {GENERATORS}, got {self.generator!r}")
        if self.replicates < 1:
            raise ValueError("replicates must be >= 1")
        if self.sweep_param is not None:
            if self.sweep_param not in SWEEP_PARAMS:
                raise ValueError(f"sweep_param must be one of {SWEEP_PARAMS}, got {self.sweep_param!r}")
            if not self.sweep_values:
                raise ValueError("sweep_param given without sweep_values")
            if any(not v > 0 for v in self.sweep_values):
                raise ValueError("sweep values must be positive")
            if self.sweep_param == "samples" and any(v != int(v) or v < 3 for v in self.sweep_values):
                raise ValueError("sample-size sweep values must be integers >= 3")
        if self.generator == "external-files":
            if not self.data_files or len(self.data_files) != len(self.gold_files):
                raise ValueError("external-files needs matching data_files and gold_files lists")
            if self.sweep_param is not None:
                raise ValueError("external-files plans cannot sweep")

    def points(self) -> list:
        """Sweep points (file names for external files, ``[None]`` without a sweep)."""
        if self.generator == "external-files":
            return list(self.data_files)
        if self.sweep_param is None:
            return [None]
        if self.sweep_param == "samples":
            return [int(v) for v in self.sweep_values]
        return list(self.sweep_values)

    def replicate_config(self, point, replicate: int) -> SimulationConfig:
        cfg = replace(self.config, seed=self.config.seed + replicate)
        if self.sweep_param == "samples":
            cfg = replace(cfg, n=int(point))
        elif self.sweep_param == "noise_sigma":
            cfg = replace(cfg, noise_sigma=float(point))
        elif self.sweep_param == "noise_variance":
            cfg = replace(cfg, noise_sigma=math.sqrt(float(point)))
        return cfg

    def to_dict(self) -> dict:
        d = asdict(self)
        d["methods"] = list(self.methods)
        return d


@dataclass
class Cell:
    method: str
    point: object
    auroc: list = field(default_factory=list)
    auprc: list = field(default_factory=list)
    shrinkage: list = field(default_factory=list)
    errors: list = field(default_factory=list)

    @property
    def failures(self) -> int:
        return sum(v is None for v in self.auroc)

    def stats(self, metric: str) -> tuple[float, float]:
        return aggregate(getattr(self, metric))


def aggregate(values) -> tuple[float, float]:
    """Mean and sample standard deviation of the non-missing values.

    ``math.fsum`` makes the result independent of value order.
    """
    vals = [v for v in values if v is not None]
    if not vals:
        return math.nan, math.nan
    mean = math.fsum(vals) / len(vals)
    if len(vals) < 2:
        return mean, 0.0
    return mean, math.sqrt(math.fsum((v - mean) ** 2 for v in vals) / (len(vals) - 1))


@dataclass
class BenchmarkResult:
    plan: BenchmarkPlan
    cells: dict[tuple[str, object], Cell]

    def cell(self, method: str, point=None) -> Cell:
        return self.cells[(method, point)]

    def mean(self, method: str, metric: str = "auroc", point=None) -> float:
        return self.cell(method, point).stats(metric)[0]

    def to_dict(self) -> dict:
        cells = []
        for (method, point), c in self.cells.items():
            entry = {"method": method, "point": point, "replicates": len(c.auroc), "failures": c.failures}
            for metric in ("auroc", "auprc"):
                mean, sd = c.stats(metric)
                entry[metric] = {"mean": mean, "sd": sd, "values": list(getattr(c, metric))}
            if any(v is not None for v in c.shrinkage):
                entry["shrinkage_intensity"] = list(c.shrinkage)
            if c.failures:
                entry["errors"] = list(c.errors)
            cells.append(entry)
        plan = self.plan
        seeds = [plan.config.seed + r for r in range(plan.replicates)]
        return {
            "plan": plan.to_dict(),
            "sweep_param": plan.sweep_param,
            "cells": cells,
            "metadata": {
                "replicate_seeds": seeds,
                "method_params": asdict(plan.params),
                "pdcor_conditioning": "all remaining variables as one multivariate block",
                "dpm_gram_normalization": "unit-norm V-vectors",
                "shrinkage_target": "identity (unit-diagonal Gram)",
            },
        }

    def to_json(self) -> str:
        return json.dumps(_jsonable(self.to_dict()), indent=2, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        """Summary table: one row per sweep point, mean/sd columns per method."""
        plan = self.plan
        header = ["point"]
        for m in plan.methods:
            header += [f"{m}_auroc_mean", f"{m}_auroc_sd", f"{m}_auprc_mean", f"{m}_auprc_sd", f"{m}_failures"]
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for point in plan.points():
            row = ["" if point is None else point]
            for m in plan.methods:
                c = self.cells[(m, point)]
                row += [repr(x) for x in (*c.stats("auroc"), *c.stats("auprc"))] + [c.failures]
            w.writerow(row)
        return buf.getvalue()

    def write(self, json_path, csv_path=None) -> None:
        Path(json_path).write_text(self.to_json(), encoding="utf-8")
        if csv_path is not None:
            Path(csv_path).write_text(self.to_csv(), encoding="utf-8")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    return obj


def generate(plan: BenchmarkPlan, point, replicate: int):
    """Dataset and gold standard for one (sweep point, replicate) cell."""
    if plan.generator == "external-files":
        k = plan.data_files.index(point)
        d = read_dataset(plan.data_files[k], plan.layout)
        return d, read_gold_standard(plan.gold_files[k], d.names)
    cfg = plan.replicate_config(point, replicate)
    if plan.generator == "gs":
        return simulate_gs(cfg)
    return simulate_gaussian(plan.nodes, cfg, plan.expected_parents)


def _run_one(plan: BenchmarkPlan, point, replicate: int):
    d, g = generate(plan, point, replicate)
    scored = score_methods(d, plan.methods, plan.params, errors="collect")
    out = {}
    for method, m in scored.items():
        if isinstance(m, Exception):
            out[method] = (None, None, None, f"{type(m).__name__}: {m}")
        else:
            ev = evaluate(m, g)
            out[method] = (ev.auroc, ev.auprc, m.metadata.get("shrinkage_intensity"), None)
    return out


def run_benchmark(plan: BenchmarkPlan, threads: int = 1) -> BenchmarkResult:
    """Run every replicate of every sweep point and aggregate AUROC/AUPRC."""
    points = plan.points()
    replicates = 1 if plan.generator == "external-files" else plan.replicates
    tasks = [(pt, r) for pt in points for r in range(replicates)]
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            results = list(pool.map(lambda t: _run_one(plan, *t), tasks))
    else:
        results = [_run_one(plan, *t) for t in tasks]
    cells = {(m, pt): Cell(m, pt) for pt in points for m in plan.methods}
    for (pt, _), res in zip(tasks, results):
        for m, (auroc, auprc, lam, err) in res.items():
            c = cells[(m, pt)]
            c.auroc.append(auroc)
            c.auprc.append(auprc)
            c.shrinkage.append(lam)
            if err is not None:
                c.errors.append(err)
    return BenchmarkResult(plan, cells)


# ---------------------------------------------------------------------------
# plan files


def _split_list(value: str) -> list[str]:
    return [v.strip() for v in value.split(",") if v.strip()]


def parse_plan(text: str) -> BenchmarkPlan:
    """Parse the ``key = value`` plan format (``#`` starts a comment)."""
    raw: dict[str, str] = {}
    for k, line in enumerate(text.splitlines()):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"plan line {k + 1}: expected 'key = value'")
        raw[key.strip().replace("-", "_")] = value.strip()
    return plan_from_mapping(raw)


def plan_from_mapping(raw: dict) -> BenchmarkPlan:
    known = {
        "generator", "methods", "replicates", "samples", "noise_sigma", "seed", "nodes",
        "expected_parents", "sweep_param", "sweep_values", "bins", "dpi_epsilon", "nd_beta",
        "data_files", "gold_files", "layout", "output",
    }
    unknown = set(raw) - known
    if unknown:
        raise ValueError(f"unknown plan keys: {sorted(unknown)}")
    cfg = SimulationConfig(
        n=int(raw.get("samples", 200)),
        noise_sigma=float(raw.get("noise_sigma", 1.0)),
        seed=int(raw.get("seed", 0)),
    )
    bins = raw.get("bins")
    params = MethodParams(
        bins=None if bins in (None, "", "auto") else int(bins),
        dpi_epsilon=float(raw.get("dpi_epsilon", 0.0)),
        nd_beta=float(raw.get("nd_beta", 0.9)),
    )
    methods = raw.get("methods")
    return BenchmarkPlan(
        generator=raw.get("generator", "gs"),
        methods=tuple(_split_list(methods)) if methods else METHODS,
        replicates=int(raw.get("replicates", DEFAULT_REPLICATES)),
        config=cfg,
        sweep_param=raw.get("sweep_param") or None,
        sweep_values=tuple(float(v) for v in _split_list(raw.get("sweep_values", ""))),
        nodes=int(raw.get("nodes", 50)),
        expected_parents=float(raw.get("expected_parents", DEFAULT_EXPECTED_PARENTS)),
        params=params,
        data_files=tuple(_split_list(raw.get("data_files", ""))),
        gold_files=tuple(_split_list(raw.get("gold_files", ""))),
        layout=raw.get("layout", "samples-in-rows"),
        output=raw.get("output") or None,
    )


def load_plan(path) -> BenchmarkPlan:
    return parse_plan(Path(path).read_text(encoding="utf-8"))
