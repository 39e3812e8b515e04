"""Experiment harness: seeded sweeps over random ensembles, CSV out.

A sweep spec names a generator template, an axis (alpha_e or n) with its
value list, the number of instances per point, and the methods to run
(greedy / bpdu / bpspdu provers, or qdpll:vsids etc.).  Results land in two
files: raw.csv with one row per (point, instance, method) cell and
summary.csv with per-(point, method) aggregates.  Interrupted sweeps resume
from raw.csv, recomputing only missing cells; finished files are rewritten
in canonical sorted order so reruns are byte-stable apart from wall times.

Per-instance seeds derive from SeedSequence([global_seed, point_index,
instance_index]), so any single instance is reconstructible without running
the sweep.
"""

from __future__ import annotations

import csv
import os
import statistics
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import asdict, dataclass, replace
from typing import Optional

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

from .decimation import prove_unsat
from .gen import GeneratorSpec, gen_formula
from .mp_core import BpParams
from .qdpll import qdpll_solve

PROVER_METHODS = ("greedy", "bpdu", "bpspdu")
QDPLL_HEURISTICS = ("vsids", "bph", "bpdh", "index")

RAW_COLUMNS = (
    "point_index", "point_value", "instance_index", "method", "seed",
    "status", "decisions", "conflicts", "solutions", "propagations",
    "wall_time", "timed_out",
)
SUMMARY_COLUMNS = (
    "point_value", "method", "instances", "fraction_sat",
    "fraction_unsat_proved", "mean_decisions", "median_decisions",
    "mean_conflicts", "median_conflicts", "mean_solutions",
    "median_solutions", "mean_propagations", "median_propagations",
    "mean_wall_time", "timeouts",
)


@dataclass(frozen=True)
class SweepSpec:
    generator: GeneratorSpec
    axis: str
    values: tuple
    instances: int
    methods: tuple
    seed: int = 0
    time_limit: Optional[float] = None
    bp: BpParams = BpParams()

    def validate(self) -> None:
        if self.axis not in ("alpha_e", "n"):
            raise ValueError("axis must be alpha_e or n")
        if self.instances < 1:
            raise ValueError("instances per point must be >= 1")
        if not self.values:
            raise ValueError("empty value list")
        for method in self.methods:
            if method in PROVER_METHODS:
                continue
            if method.startswith("qdpll:") and method[6:] in QDPLL_HEURISTICS:
                continue
            raise ValueError(f"unknown method {method!r}")
        if self.axis == "n" and self.generator.existential_count == 0:
            raise ValueError("n axis needs a template with existential variables")


@dataclass(frozen=True)
class SweepRow:
    point_value: float
    method: str
    instances: int
    fraction_sat: float
    fraction_unsat_proved: float
    mean_decisions: float
    median_decisions: float
    mean_conflicts: float
    median_conflicts: float
    mean_solutions: float
    median_solutions: float
    mean_propagations: float
    median_propagations: float
    mean_wall_time: float
    timeouts: int


def load_sweep(path) -> SweepSpec:
    """Read a sweep spec from TOML ([sweep], [generator], optional [bp])."""
    with open(path, "rb") as fh:
        data = tomllib.load(fh)
    gen_fields = dict(data["generator"])
    gen_fields.setdefault("m", 0)
    generator = GeneratorSpec(**gen_fields)
    bp = BpParams(**data.get("bp", {}))
    sweep = data["sweep"]
    spec = SweepSpec(
        generator=generator,
        axis=sweep["axis"],
        values=tuple(sweep["values"]),
        instances=int(sweep["instances"]),
        methods=tuple(sweep["methods"]),
        seed=int(sweep.get("seed", 0)),
        time_limit=sweep.get("time_limit"),
        bp=bp,
    )
    spec.validate()
    return spec


def instance_seed(global_seed: int, point_index: int, instance_index: int) -> int:
    """Documented derivation: SeedSequence([global, point, instance])."""
    ss = np.random.SeedSequence([global_seed, point_index, instance_index])
    return int(ss.generate_state(1)[0])


def point_generator(spec: SweepSpec, point_index: int,
                    instance_index: int) -> GeneratorSpec:
    """Generator spec for one cell: axis value applied, seed derived.

    alpha_e axis: m = round(value * existential count).  n axis: block sizes
    scale to the value and m keeps the template's clause density
    m / existential count.
    """
    g = spec.generator
    value = spec.values[point_index]
    seed = instance_seed(spec.seed, point_index, instance_index)
    if spec.axis == "alpha_e":
        m = int(round(value * g.existential_count))
        return replace(g, m=m, seed=seed)
    size = int(value)
    alpha = g.m / g.existential_count
    if g.model == "lk":
        return replace(g, n_u=size, n_e=size, m=int(round(alpha * size)), seed=seed)
    return replace(
        g, n=size, m=int(round(alpha * size * (g.t // 2))), seed=seed
    )


def run_cell(spec: SweepSpec, point_index: int, instance_index: int,
             method: str) -> dict:
    """Generate and run one (point, instance, method) cell."""
    gspec = point_generator(spec, point_index, instance_index)
    f = gen_formula(gspec)
    bp = replace(spec.bp, seed=gspec.seed)
    row = {
        "point_index": point_index,
        "point_value": spec.values[point_index],
        "instance_index": instance_index,
        "method": method,
        "seed": gspec.seed,
    }
    if method in PROVER_METHODS:
        t0 = time.perf_counter()
        attempt = prove_unsat(f, method, bp)
        row.update(
            status=attempt.outcome,
            decisions=len(attempt.steps),
            conflicts=0,
            solutions=0,
            propagations=0,
            wall_time=time.perf_counter() - t0,
            timed_out=False,
        )
    else:
        name = method.split(":", 1)[1]
        result = qdpll_solve(
            f, heuristic=name, seed=gspec.seed, bp_params=bp,
            time_limit=spec.time_limit,
        )
        s = result.stats
        row.update(
            status=result.status,
            decisions=s.decisions,
            conflicts=s.conflicts,
            solutions=s.solutions,
            propagations=s.propagations,
            wall_time=s.wall_time,
            timed_out=result.status == "unknown",
        )
    return row


def _typed(row: dict) -> dict:
    out = dict(row)
    for key in ("point_index", "instance_index", "seed", "decisions",
                "conflicts", "solutions", "propagations"):
        out[key] = int(out[key])
    for key in ("point_value", "wall_time"):
        out[key] = float(out[key])
    out["timed_out"] = str(out["timed_out"]) == "True"
    return out


def _write_rows(path, columns, rows) -> None:
    with open(path, "w", newline="", encoding="ascii") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(columns))
        writer.writeheader()
        writer.writerows(rows)


def run_sweep(spec: SweepSpec, out_dir, workers: int = 1,
              progress=None) -> list:
    """Run (or resume) a sweep; returns the summary rows.

    Raw rows are appended and flushed as cells finish, so a killed sweep
    loses at most the in-flight cells.  `progress` is an optional callback
    taking (done, total).
    """
    spec.validate()
    os.makedirs(out_dir, exist_ok=True)
    raw_path = os.path.join(out_dir, "raw.csv")
    done: dict = {}
    if os.path.exists(raw_path):
        with open(raw_path, "r", newline="", encoding="ascii") as fh:
            for row in csv.DictReader(fh):
                typed = _typed(row)
                done[(typed["point_index"], typed["instance_index"],
                      typed["method"])] = typed
    tasks = [
        (p, i, method)
        for p in range(len(spec.values))
        for i in range(spec.instances)
        for method in spec.methods
        if (p, i, method) not in done
    ]
    total = len(done) + len(tasks)
    finished = len(done)

    if tasks:
        fresh = not os.path.exists(raw_path)
        with open(raw_path, "a", newline="", encoding="ascii") as fh:
            writer = csv.DictWriter(fh, fieldnames=list(RAW_COLUMNS))
            if fresh:
                writer.writeheader()

            def record(row):
                writer.writerow(row)
                fh.flush()
                done[(row["point_index"], row["instance_index"],
                      row["method"])] = row

            if workers > 1:
                with ProcessPoolExecutor(max_workers=workers) as pool:
                    futures = [
                        pool.submit(run_cell, spec, p, i, method)
                        for p, i, method in tasks
                    ]
                    for fut in as_completed(futures):
                        record(fut.result())
                        finished += 1
                        if progress:
                            progress(finished, total)
            else:
                for p, i, method in tasks:
                    record(run_cell(spec, p, i, method))
                    finished += 1
                    if progress:
                        progress(finished, total)

    rows = sorted(
        done.values(),
        key=lambda r: (r["point_index"], r["instance_index"], r["method"]),
    )
    _write_rows(raw_path, RAW_COLUMNS, rows)
    summary = summarize(rows)
    _write_rows(
        os.path.join(out_dir, "summary.csv"), SUMMARY_COLUMNS,
        [asdict(s) for s in summary],
    )
    return summary


def summarize(rows) -> list:
    """Aggregate raw rows into one SweepRow per (point, method)."""
    groups: dict = {}
    for row in rows:
        groups.setdefault((row["point_index"], row["method"]), []).append(row)
    out = []
    for (point_index, method) in sorted(groups):
        cells = groups[(point_index, method)]
        n = len(cells)
        unsat = ("unsat", "unsat_proved", "unsat_early")

        def stat(key):
            data = [c[key] for c in cells]
            return statistics.mean(data), statistics.median(data)

        mean_dec, med_dec = stat("decisions")
        mean_con, med_con = stat("conflicts")
        mean_sol, med_sol = stat("solutions")
        mean_pro, med_pro = stat("propagations")
        out.append(SweepRow(
            point_value=cells[0]["point_value"],
            method=method,
            instances=n,
            fraction_sat=sum(c["status"] == "sat" for c in cells) / n,
            fraction_unsat_proved=sum(c["status"] in unsat for c in cells) / n,
            mean_decisions=mean_dec,
            median_decisions=med_dec,
            mean_conflicts=mean_con,
            median_conflicts=med_con,
            mean_solutions=mean_sol,
            median_solutions=med_sol,
            mean_propagations=mean_pro,
            median_propagations=med_pro,
            mean_wall_time=statistics.mean(c["wall_time"] for c in cells),
            timeouts=sum(c["timed_out"] for c in cells),
        ))
    return out
