"""Instance generators and batch experiments that write CSV reports."""

from __future__ import annotations

import csv
import io
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .advice import simulate
from .core import Instance, ResourceGuardError, Weight, verify_packing
from .exact import brute_force_opt
from .greedy import first_fit, first_fit_increasing, rsff
from .online import SimulationError
from .ptas import ptas_solve, ratio_bound
from .reduction import construct_instance, random_bsp

FAMILIES = ("uniform", "small-heavy", "ffi-adversarial", "reduction-derived")
ALGORITHMS = ("ff", "ffi", "rsff", "ptas", "advice")

COLUMNS = (
    "instance",
    "family",
    "n",
    "m",
    "s",
    "seed",
    "algorithm",
    "eps",
    "eps_m_ge_1",
    "branch",
    "packed",
    "opt",
    "ratio",
    "bound_factor",
    "bound_additive",
    "advice_bits",
    "status",
)


def generate_instance(
    family: str, n: int, m: int, s: int, seed: int, eps: Weight | None = None
) -> Instance:
    """Deterministic random instance from one of :data:`FAMILIES`.

    ``small-heavy`` draws every weight at most ``eps`` (default 1/8);
    ``ffi-adversarial`` draws weights from ``[3/8, 5/8]``; for
    ``reduction-derived`` ``n`` is the separation-input length, so the
    instance has ``2n`` items and ``n`` bins and ``m``, ``s`` are ignored.
    """
    if n < 0 or m < 0 or s < 0:
        raise ValueError("n, m and s must be non-negative")
    rng = random.Random(f"{family}/{n}/{m}/{s}/{seed}")
    if family == "uniform":
        weights = [Weight(rng.randint(1, 1 << s), s) for _ in range(n)]
    elif family == "small-heavy":
        eps = eps if eps is not None else Weight(1, 3)
        top = eps.as_fraction() * (1 << s)
        if top < 1 or top.denominator != 1:
            raise ValueError(f"s = {s} is too small to draw weights below {eps}")
        weights = [Weight(rng.randint(1, int(top)), s) for _ in range(n)]
    elif family == "ffi-adversarial":
        if s < 3:
            raise ValueError("ffi-adversarial needs s >= 3")
        lo, hi = 3 << (s - 3), 5 << (s - 3)
        weights = [Weight(rng.randint(lo, hi), s) for _ in range(n)]
    elif family == "reduction-derived":
        inst, _ = construct_instance(random_bsp(n, rng))
        return inst
    else:
        raise ValueError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
    return Instance(tuple(weights), m)


@dataclass
class ExperimentConfig:
    family: str = "uniform"
    n: int = 12
    m: int = 3
    s: int = 4
    seed: int = 0
    count: int = 10
    algos: Sequence[str] = ALGORITHMS
    eps_grid: Sequence[Weight] = field(default_factory=lambda: [Weight(1, 2)])
    oracle: bool = True
    max_oracle_n: int = 20
    jobs: int = 1
    timing: bool = False


def _ratio_text(opt: Optional[int], packed: int) -> str:
    if opt is None:
        return ""
    if packed == 0:
        return "1" if opt == 0 else "inf"
    return f"{opt / packed:.6f}"


def _run_algorithm(inst: Instance, algo: str, eps: Weight, opt: Optional[int]) -> dict:
    row = {"branch": "", "bound_factor": "", "bound_additive": "", "advice_bits": ""}
    failures = []
    if algo == "ff":
        packing = first_fit(inst)
    elif algo == "ffi":
        packing = first_fit_increasing(inst)
        row["bound_factor"], row["bound_additive"] = "4/3", "1"
    elif algo == "rsff":
        r = rsff(inst)
        packing = r.packing
        row["branch"] = "eta=" + (str(r.eta) if r.eta is not None else "absent")
        if r.eta is not None and r.eta <= eps:
            row["bound_factor"], row["bound_additive"] = str(1 + eps.as_fraction()), "0"
    elif algo == "ptas":
        res = ptas_solve(inst, eps)
        packing = res.packing
        row["branch"] = res.branch
        row["bound_factor"], row["bound_additive"] = str(ratio_bound(eps)), "0"
    elif algo == "advice":
        rep = simulate(inst, eps, oracle=False)
        packing = rep.transcript.packing
        row["branch"] = f"{rep.mode}/k={rep.k}"
        row["advice_bits"] = str(rep.advice_bits)
        row["bound_factor"], row["bound_additive"] = str(ratio_bound(eps)), "0"
        failures.extend(rep.failures)
    else:
        raise ValueError(f"unknown algorithm {algo!r}")

    if not verify_packing(inst, packing).feasible:
        failures.append("infeasible packing")
    packed = packing.packed_count
    row["packed"] = str(packed)
    if opt is not None and row["bound_factor"]:
        factor = Fraction(row["bound_factor"])
        if opt > factor * packed + int(row["bound_additive"]):
            failures.append("ratio bound violated")
    row["ratio"] = _ratio_text(opt, packed)
    row["status"] = "ok" if not failures else "; ".join(failures)
    return row


def _instance_rows(task) -> list[dict]:
    idx, cfg = task
    seed = cfg.seed + idx
    # small-heavy instances target the finest epsilon of the grid
    inst = generate_instance(cfg.family, cfg.n, cfg.m, cfg.s, seed, min(cfg.eps_grid))
    return instance_rows(inst, cfg, str(idx), cfg.family, str(seed))


def instance_rows(inst: Instance, cfg: ExperimentConfig, label="0", family="", seed="") -> list[dict]:
    """One row per (algorithm, epsilon) of ``cfg`` on a fixed instance."""
    base = {
        "instance": label,
        "family": family,
        "n": str(inst.n),
        "m": str(inst.m),
        "s": str(inst.s),
        "seed": seed,
    }
    opt = None
    opt_note = ""
    if cfg.oracle:
        try:
            opt, _ = brute_force_opt(inst, cfg.max_oracle_n)
        except ResourceGuardError:
            opt_note = "oracle skipped"
    rows = []
    for algo in cfg.algos:
        for eps in cfg.eps_grid:
            row = dict(base, algorithm=algo, eps=str(eps))
            row["eps_m_ge_1"] = "yes" if eps * inst.m >= 1 else "no"
            row["opt"] = "" if opt is None else str(opt)
            started = time.perf_counter()
            try:
                row.update(_run_algorithm(inst, algo, eps, opt))
            except ResourceGuardError as exc:
                row.update(status=f"guard: {exc}", packed="", ratio="")
            except SimulationError as exc:
                row.update(status=f"simulation failure: {exc}", packed="", ratio="")
            if opt_note and row.get("status") == "ok":
                row["status"] = "ok (oracle skipped)"
            if cfg.timing:
                row["wall_ms"] = f"{1000 * (time.perf_counter() - started):.3f}"
            rows.append(row)
    return rows


def run_experiment(cfg: ExperimentConfig) -> list[dict]:
    """All rows, one per (instance, algorithm, epsilon), in a fixed order."""
    for a in cfg.algos:
        if a not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {a!r}")
    tasks = [(idx, cfg) for idx in range(cfg.count)]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(cfg.jobs) as pool:
            chunks = list(pool.map(_instance_rows, tasks))
    else:
        chunks = [_instance_rows(t) for t in tasks]
    rows = [r for chunk in chunks for r in chunk]
    algo_rank = {a: i for i, a in enumerate(ALGORITHMS)}
    eps_rank = {str(e): i for i, e in enumerate(cfg.eps_grid)}
    rows.sort(key=lambda r: (int(r["instance"]), algo_rank[r["algorithm"]], eps_rank[r["eps"]]))
    return rows


def row_failed(row: dict) -> bool:
    """True when a row records a broken invariant (guards are not failures)."""
    status = row.get("status", "")
    return not (status.startswith("ok") or status.startswith("guard"))


def rows_to_csv(rows: list[dict], timing: bool = False) -> str:
    columns = list(COLUMNS) + (["wall_ms"] if timing else [])
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n", extrasaction="ignore")
    writer.writeheader()
    for row in rows:
        writer.writerow({c: row.get(c, "") for c in columns})
    return buf.getvalue()
