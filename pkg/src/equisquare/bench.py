"""Benchmark rows: solver against the greedy baseline on generated instances."""
from __future__ import annotations

import csv
import io
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import astuple, dataclass, fields

from .oracle import greedy_baseline
from .square import compute_profile, gen_cyclic_latin, gen_random_bounded, gen_random_equi
from .solver import SolverParams, solve

KINDS = ("equi", "cyclic", "bounded")


@dataclass
class BenchRow:
    n: int
    kind: str
    beta_requested: str
    beta_actual: str
    seed: int
    solver_size: int
    solver_ratio: str
    greedy_size: int
    target: str
    reached_target: bool
    improvements: int
    wall_time_ms: str


HEADER = [f.name for f in fields(BenchRow)]


def make_instance(kind: str, n: int, seed: int, beta=None):
    if kind == "equi":
        return gen_random_equi(n, seed)
    if kind == "cyclic":
        return gen_cyclic_latin(n)
    if kind == "bounded":
        return gen_random_bounded(n, beta, seed)
    raise ValueError(f"unknown kind {kind!r}")


def bench_one(job) -> BenchRow:
    n, kind, beta, seed, epsilon, timing = job
    sq = make_instance(kind, n, seed, beta)
    start = time.perf_counter()
    res = solve(sq, SolverParams(epsilon=epsilon, mode="practical"))
    elapsed = (time.perf_counter() - start) * 1000
    greedy = greedy_baseline(sq)
    return BenchRow(
        n=n, kind=kind,
        beta_requested="" if beta is None else str(beta),
        beta_actual=f"{float(compute_profile(sq).beta):.6f}",
        seed=seed,
        solver_size=res.size,
        solver_ratio=f"{res.size / n:.6f}",
        greedy_size=len(greedy),
        target=f"{float(res.target):.6f}",
        reached_target=res.reached_target,
        improvements=res.improvements,
        wall_time_ms=f"{elapsed:.3f}" if timing else "",
    )


def bench_jobs(n_list, kinds, beta_list, trials, seed, epsilon, timing=True):
    """Jobs in fixed parameter order.  Trial k uses seed + k."""
    for n in n_list:
        for kind in kinds:
            betas = beta_list if kind == "bounded" else [None]
            for beta in betas:
                for trial in range(trials):
                    yield (n, kind, beta, seed + trial, epsilon, timing)


def run_bench(n_list, kinds, beta_list, trials, seed, epsilon, timing=True, jobs=1) -> list[BenchRow]:
    work = list(bench_jobs(n_list, kinds, beta_list, trials, seed, epsilon, timing))
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(jobs) as pool:
            return list(pool.map(bench_one, work))
    return [bench_one(job) for job in work]


def rows_to_csv(rows: list[BenchRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(HEADER)
    for row in rows:
        w.writerow(astuple(row))
    return buf.getvalue()
