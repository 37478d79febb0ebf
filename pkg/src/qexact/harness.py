"""Campaign runner: seeded parallel experiment grids, CSV logs, figure data.

Every run's seed is derived from the base seed and the run's grid
coordinates with a keyed hash, so results never depend on scheduling or on
the worker count.  Records are collected, sorted by run id and written
single-threaded; only the wall_ms column varies between reruns.
"""

from __future__ import annotations

import csv
import hashlib
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import learner, qsim
from .boolfun import BooleanFunction, random_positive_kjunta
from .qsim import JOINT_STATE, PAPER_LITERAL, AmplificationSetup
from .schedule import (
    S_m0_total,
    figure_ratios,
    generic_schedule,
    generic_stage,
    m_max,
    naive_sample_count,
    refined_params,
    refined_schedule,
)

RUNS_HEADER = [
    "run_id", "mode", "n", "k", "m0", "function_id", "repeat", "seed",
    "phases", "total_shots", "toggles", "final_error_rate", "terminated", "wall_ms",
]
PHASES_HEADER = ["run_id", "phase", "m", "shots", "errors_measured", "toggled_count"]
VALIDATE_HEADER = ["n", "variant", "m0", "k", "m", "tv_distance", "mode"]

TV_GATE = 1e-9


def derive_seed(base_seed: int, *identifiers: object) -> int:
    """Stable 64-bit seed from the base seed and any identifier tuple.

    Hash-mixed (blake2b) so that distinct tuples give distinct seeds with
    overwhelming probability and execution order never matters.
    """
    h = hashlib.blake2b(str(base_seed).encode(), digest_size=8)
    for part in identifiers:
        h.update(b"\x1f")
        h.update(str(part).encode())
    return int.from_bytes(h.digest(), "big")


@dataclass(frozen=True, slots=True)
class RunTask:
    algo: str  # "naive" | "refined" | "junta"
    n: int
    k: int | None
    m0: int | None
    function_id: int
    repeat: int
    function_seed: int
    run_seed: int
    phase_cap: int | None

    @property
    def run_id(self) -> str:
        parts = [self.algo, f"n{self.n}"]
        if self.k is not None:
            parts.append(f"k{self.k}")
        if self.m0 is not None:
            parts.append(f"m0-{self.m0}")
        parts.append(f"f{self.function_id:03d}")
        parts.append(f"r{self.repeat:03d}")
        return "-".join(parts)


@dataclass(slots=True)
class RunRecord:
    run_id: str
    mode: str
    n: int
    k: int | None
    m0: int | None
    function_id: int
    repeat: int
    seed: int
    phases: int
    total_shots: int
    toggles: int
    final_error_rate: float
    terminated: str
    wall_ms: int
    update_phases: int
    phase_rows: list[tuple] = field(default_factory=list)

    def csv_row(self) -> list:
        return [
            self.run_id, self.mode, self.n,
            "" if self.k is None else self.k,
            "" if self.m0 is None else self.m0,
            self.function_id, self.repeat, self.seed, self.phases,
            self.total_shots, self.toggles, self.final_error_rate,
            self.terminated, self.wall_ms,
        ]


@dataclass
class CampaignConfig:
    mode: str  # "generic" | "junta"
    n_values: tuple[int, ...]
    m0_values: tuple[int, ...] = (0, 1, 2, 3, 4)
    k_spec: str = "2..n-1"  # resolved per n in junta mode
    functions_per_cell: int = 16
    repeats_per_function: int = 10
    base_seed: int = 1
    phase_cap: int | None = None
    out_dir: Path | None = None
    workers: int | None = None
    include_naive: bool = True

    def __post_init__(self) -> None:
        if self.mode not in ("generic", "junta"):
            raise ValueError(f"unknown campaign mode {self.mode!r}")
        if not self.n_values:
            raise ValueError("empty n range")
        if self.mode == "generic" and not self.m0_values:
            raise ValueError("empty m0 set")
        if self.functions_per_cell < 1 or self.repeats_per_function < 1:
            raise ValueError("functions_per_cell and repeats_per_function must be >= 1")


def resolve_k_values(spec: str, n: int) -> list[int]:
    """Parse a k range like "2..n-1" or "2..4" or "2,3" for a given n."""
    def _term(t: str) -> int:
        t = t.strip()
        if t.startswith("n"):
            offset = t[1:].replace(" ", "")
            return n + (int(offset) if offset else 0)
        return int(t)

    if ".." in spec:
        lo, hi = spec.split("..")
        return [k for k in range(_term(lo), _term(hi) + 1) if 1 <= k < n]
    return [k for k in (int(t) for t in spec.split(",")) if 1 <= k < n]


def _make_function(task: RunTask) -> BooleanFunction:
    rng = np.random.default_rng(task.function_seed)
    if task.algo == "junta":
        return random_positive_kjunta(task.n, task.k, rng)
    return BooleanFunction.random(task.n, rng)


def _execute_task(task: RunTask) -> RunRecord:
    target = _make_function(task)
    rng = np.random.default_rng(task.run_seed)
    start = time.perf_counter()
    if task.algo == "naive":
        result = learner.run_naive(target, rng, task.phase_cap)
    elif task.algo == "refined":
        result = learner.run_refined(target, task.m0, rng, task.phase_cap)
    else:
        result = learner.run_junta(target, task.k, rng, task.phase_cap)
    wall_ms = int(round((time.perf_counter() - start) * 1000))
    phase_rows = [
        (task.run_id, p.phase_index, s.m, s.shots, s.errors_measured, len(p.toggled))
        for p in result.phases
        for s in p.stages
    ]
    return RunRecord(
        run_id=task.run_id,
        mode=task.algo,
        n=task.n,
        k=task.k,
        m0=task.m0,
        function_id=task.function_id,
        repeat=task.repeat,
        seed=task.run_seed,
        phases=len(result.phases),
        total_shots=result.total_shots,
        toggles=result.toggles_total,
        final_error_rate=result.final_error_rate,
        terminated=result.terminated,
        wall_ms=wall_ms,
        update_phases=result.update_phase_count,
        phase_rows=phase_rows,
    )


def _campaign_tasks(cfg: CampaignConfig) -> list[RunTask]:
    tasks = []
    for n in cfg.n_values:
        if cfg.mode == "generic":
            cells: list[tuple[int | None, int | None, str]] = [
                (None, m0, "refined") for m0 in cfg.m0_values
            ]
            if cfg.include_naive:
                cells.append((None, None, "naive"))
            for fid in range(cfg.functions_per_cell):
                fseed = derive_seed(cfg.base_seed, "function", "generic", n, fid)
                for k, m0, algo in cells:
                    for rep in range(cfg.repeats_per_function):
                        rseed = derive_seed(cfg.base_seed, "run", algo, n, k, m0, fid, rep)
                        tasks.append(RunTask(algo, n, k, m0, fid, rep, fseed, rseed, cfg.phase_cap))
        else:
            for k in resolve_k_values(cfg.k_spec, n):
                for fid in range(cfg.functions_per_cell):
                    fseed = derive_seed(cfg.base_seed, "function", "junta", n, k, fid)
                    for rep in range(cfg.repeats_per_function):
                        rseed = derive_seed(cfg.base_seed, "run", "junta", n, k, 2, fid, rep)
                        tasks.append(RunTask("junta", n, k, 2, fid, rep, fseed, rseed, cfg.phase_cap))
    tasks.sort(key=lambda t: t.run_id)
    return tasks


def _worker_count(cfg_workers: int | None) -> int:
    env = os.environ.get("QEXACT_THREADS")
    if env:
        return max(1, int(env))
    if cfg_workers is not None:
        return max(1, cfg_workers)
    return os.cpu_count() or 1


def run_campaign(cfg: CampaignConfig) -> list[RunRecord]:
    """Run the configured grid; write runs.csv and phases.csv when out_dir set."""
    tasks = _campaign_tasks(cfg)
    workers = _worker_count(cfg.workers)
    if workers <= 1 or len(tasks) < 4:
        records = [_execute_task(t) for t in tasks]
    else:
        chunk = max(1, len(tasks) // (workers * 8))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_execute_task, tasks, chunksize=chunk))
    records.sort(key=lambda r: r.run_id)
    if cfg.out_dir is not None:
        write_run_files(records, Path(cfg.out_dir))
    return records


def write_csv(path: Path, header: list[str], rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def write_run_files(records: list[RunRecord], out_dir: Path) -> None:
    write_csv(out_dir / "runs.csv", RUNS_HEADER, (r.csv_row() for r in records))
    write_csv(
        out_dir / "phases.csv",
        PHASES_HEADER,
        (row for r in records for row in r.phase_rows),
    )


# --- schedule report -----------------------------------------------------------


def schedule_report_rows(n_values) -> tuple[list[list], list[list]]:
    """Stage rows (n,variant,m,shots) and totals (n,variant,total,naive_total,ratio)."""
    stage_rows: list[list] = []
    total_rows: list[list] = []

    def _add(n: int, variant: str, stages: list[tuple[int, int]]) -> None:
        naive_total = naive_sample_count(n)
        for m, shots in stages:
            stage_rows.append([n, variant, m, shots])
        total = sum(shots for _, shots in stages)
        total_rows.append([n, variant, total, naive_total, total / naive_total])

    for n in n_values:
        _add(n, "inc1", [(m, generic_stage(n, m).shots) for m in range(m_max(n) + 1)])
        _add(n, "pow2", [(s.m, s.shots) for s in generic_schedule(n).stages])
        for m0 in range(5):
            _add(n, f"refined({m0})", [(s.m, s.shots) for s in refined_schedule(n, m0).stages])
    return stage_rows, total_rows


# --- backend validation --------------------------------------------------------


def _validation_setups(n: int) -> list[AmplificationSetup]:
    setups = [AmplificationSetup.improved(n)]
    setups += [AmplificationSetup.refined(n, m0) for m0 in (0, 2, 4)]
    setups += [AmplificationSetup.junta(n, k) for k in (2, 3) if k < n]
    return setups


def _setup_m_cap(setup: AmplificationSetup) -> int:
    if setup.variant == qsim.IMPROVED:
        return m_max(setup.n)
    if setup.variant == qsim.REFINED:
        return refined_params(setup.n, setup.m0)[1]
    return refined_params(setup.n, 2)[1]


def backend_validation_rows(
    n_max: int = 5, pairs: int = 5, base_seed: int = 1
) -> list[list]:
    """Worst-case TV distance between backends over a seeded (c, h) grid.

    Rows: n, variant, m0, k, m, tv_distance, mode.  The analytic model is
    compared against the dense simulator in both reflection conventions.
    """
    rows: list[list] = []
    for n in range(2, n_max + 1):
        for setup in _validation_setups(n):
            cap = _setup_m_cap(setup)
            rng = np.random.default_rng(derive_seed(base_seed, "validate", n, setup.label()))
            cs = [BooleanFunction.random(n, rng) for _ in range(pairs)]
            hs = [BooleanFunction.random(n, rng) for _ in range(pairs)]
            for m in range(cap + 1):
                for mode in (JOINT_STATE, PAPER_LITERAL):
                    dense_setup = AmplificationSetup(
                        setup.variant, n, m0=setup.m0, k=setup.k, reflection_mode=mode
                    )
                    worst = 0.0
                    for c, h in zip(cs, hs):
                        analytic = qsim.analytic_distribution(c, h, setup, m)
                        dense = qsim.dense_distribution(c, h, dense_setup, m)
                        worst = max(worst, qsim.tv_distance(analytic, dense))
                    rows.append(
                        [n, setup.label(), setup.m0 if setup.has_rot else "",
                         setup.k if setup.k is not None else "", m, worst, mode]
                    )
    return rows


def validation_passed(rows: list[list]) -> bool:
    return all(row[5] <= TV_GATE for row in rows if row[6] == JOINT_STATE)


# --- figure data ---------------------------------------------------------------


def _read_runs(in_dir: Path) -> list[dict]:
    path = Path(in_dir) / "runs.csv"
    if not path.exists():
        raise FileNotFoundError(f"{path} not found; run a campaign first")
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def updates_of(row: dict) -> int:
    """Update phases of a logged run (a converged run ends with a clean phase)."""
    phases = int(row["phases"])
    return phases - 1 if row["terminated"] == learner.CONVERGED else phases


def reproduce_figures(in_dir: Path | None, out_dir: Path, n_schedule=range(4, 21)) -> dict[str, Path]:
    """Emit the five figure-data CSV families; schedule-only ones need no runs."""
    out_dir = Path(out_dir)
    written: dict[str, Path] = {}

    ns = list(n_schedule)
    inc1 = dict(figure_ratios(ns, "inc1"))
    pow2 = dict(figure_ratios(ns, "pow2"))
    path = out_dir / "fig_ratio.csv"
    write_csv(path, ["n", "inc1", "pow2"], ([n, inc1[n], pow2[n]] for n in ns))
    written["ratio"] = path

    path = out_dir / "fig_Sm0.csv"
    write_csv(
        path,
        ["n", "m0", "ratio"],
        ([n, m0, S_m0_total(n, m0) / naive_sample_count(n)] for n in ns for m0 in range(5)),
    )
    written["Sm0"] = path

    if in_dir is None:
        return written
    runs = _read_runs(Path(in_dir))

    path = out_dir / "fig_final_error.csv"
    write_csv(
        path,
        ["mode", "n", "k", "m0", "final_error_rate"],
        ([r["mode"], r["n"], r["k"], r["m0"], r["final_error_rate"]] for r in runs),
    )
    written["final_error"] = path

    means: dict[tuple[int, str], list[int]] = {}
    for r in runs:
        if r["mode"] == "naive":
            key = (int(r["n"]), "naive")
        elif r["mode"] == "refined":
            key = (int(r["n"]), f"m0={r['m0']}")
        else:
            continue
        means.setdefault(key, []).append(int(r["total_shots"]))
    path = out_dir / "fig_mean_samples.csv"
    write_csv(
        path,
        ["n", "algo", "mean_samples"],
        ([n, algo, sum(v) / len(v)] for (n, algo), v in sorted(means.items())),
    )
    written["mean_samples"] = path

    path = out_dir / "fig_junta_updates.csv"
    write_csv(
        path,
        ["n", "k", "updates"],
        ([r["n"], r["k"], updates_of(r)] for r in runs if r["mode"] == "junta"),
    )
    written["junta_updates"] = path
    return written
