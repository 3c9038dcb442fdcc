"""Exit criteria.  Each test records one PASS/FAIL line, printed in the pytest summary."""
import math
import random
import time

import numpy as np
import pytest

from equisquare.augment import (
    AugmentParams,
    build_Yt,
    check_counting_bounds,
    init_state,
    register_round,
    run_attempt,
)
from equisquare.bench import rows_to_csv, run_bench
from equisquare.oracle import greedy_baseline, max_transversal_exact
from equisquare.solver import SolverParams, params_from, solve
from equisquare.square import (
    Square,
    compute_profile,
    gen_cyclic_latin,
    gen_random_bounded,
    gen_random_equi,
    parse_square,
)
from equisquare.transversal import distinct_diagonal_count, validate_transversal

from support import E5_TEXT

REPORT: list[str] = []

RATIO_GATE = 0.70
# calibrated on the frozen instances below (observed means 0.979 / 0.989 / 0.995)
RATIO_FLOOR = 0.97
SLOPE_MAX = 4.0
N500_LIMIT_S = 300.0
FUZZ_LIMIT_S = 60.0


def report(num, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {detail}"
    REPORT.append(line)
    print(line)
    return ok


def fuzz_instances(count=500, seed=20240601):
    rng = random.Random(seed)
    for k in range(count):
        n = rng.randint(5, 64)
        if k % 2 == 0:
            yield gen_random_equi(n, rng.getrandbits(64))
        else:
            yield gen_random_bounded(n, rng.choice([0.25, 0.5, 1]), rng.getrandbits(64))


@pytest.fixture(scope="module")
def fuzz_runs():
    start = time.perf_counter()
    runs = [(sq, solve(sq)) for sq in fuzz_instances()]
    return runs, time.perf_counter() - start


def test_1_validity_fuzz(fuzz_runs):
    runs, elapsed = fuzz_runs
    bad = sum(validate_transversal(sq, r.transversal.cells) is not None for sq, r in runs)
    ok = len(runs) == 500 and bad == 0 and elapsed < FUZZ_LIMIT_S
    assert report(1, ok, f"{len(runs)} solves, {bad} invalid, {elapsed:.1f}s (limit {FUZZ_LIMIT_S:.0f}s)")


def oracle_instances():
    for bits in range(512):
        yield Square.from_rows([[(bits >> (3 * r + c)) & 1 for c in range(3)] for r in range(3)])
    rng = np.random.default_rng(77)
    for n in (4, 5):
        for k in range(200):
            kind = k % 3
            if kind == 0:
                yield gen_random_equi(n, int(rng.integers(2 ** 63)))
            elif kind == 1:
                yield gen_random_bounded(n, 0.5, int(rng.integers(2 ** 63)))
            else:
                yield Square.from_rows(rng.integers(0, n, size=(n, n)))


def test_2_oracle_agreement():
    count = over = invalid = 0
    for sq in oracle_instances():
        res = max_transversal_exact(sq)
        r = solve(sq)
        count += 1
        over += r.size > res.max_size
        invalid += validate_transversal(sq, res.witness.cells) is not None or res.exhausted
    e5 = parse_square(E5_TEXT)
    anchors = (max_transversal_exact(parse_square("0,1\n1,0")).max_size == 1
               and max_transversal_exact(gen_cyclic_latin(3)).max_size == 3
               and max_transversal_exact(e5).max_size == 4 and solve(e5).size == 4)
    ok = count == 912 and over == 0 and invalid == 0 and anchors
    assert report(2, ok, f"{count} squares, solver>oracle {over}, bad witnesses {invalid}, anchors {anchors}")


def test_3_structural_invariants():
    rng = random.Random(3)
    totals: dict = {}
    runs = 0
    for k in range(100):
        n = rng.randint(4, 90)
        kind = k % 4
        if kind == 0:
            sq = gen_random_equi(n, rng.getrandbits(32))
        elif kind == 1:
            sq = gen_random_bounded(n, rng.choice([0.25, 0.5, 1]), rng.getrandbits(32))
        elif kind == 2:
            # about n/2 symbols: many repeats on the diagonal, attempts go several rounds deep
            k_sym = max(3, n // 2)
            sq = Square.from_rows([[rng.randrange(k_sym) for _ in range(n)] for _ in range(n)])
        else:
            sq = gen_cyclic_latin(n)
        # debug mode raises InvariantViolation on any failed member, insertion,
        # disjointness, size or counting check
        r = solve(sq, SolverParams(debug_asserts=True))
        runs += 1
        for key, v in r.checks.items():
            totals[key] = totals.get(key, 0) + v
    # C = 4^tau with tau = 1, so symbols seen more than 4 times on a 12-long
    # diagonal take the singleton branch of R(i)
    for k in range(30):
        sq = Square.from_rows([[rng.randrange(4) for _ in range(12)] for _ in range(12)])
        att = run_attempt(sq, AugmentParams(tau=1, C=4, mode="paper"), debug=True)
        assert check_counting_bounds(att.state).ok
    expected = {"contains-symbol", "keeps-diagonal", "off-own-support", "inside-earlier-support",
                "insertion", "disjoint", "size", "subperm", "counting", "RI-cache"}
    ok = runs == 100 and expected <= set(totals)
    detail = ", ".join(f"{k}={totals.get(k, 0)}" for k in sorted(expected))
    assert report(3, ok, f"{runs} debug solves, 0 violations; checks run: {detail}")


def test_4_monotone_progress(fuzz_runs):
    runs, _ = fuzz_runs
    bad = 0
    for sq, r in runs:
        c = r.diagonal_counts
        bad += not (all(b > a for a, b in zip(c, c[1:])) and r.improvements <= sq.n
                    and c[0] == distinct_diagonal_count(sq) and r.size == c[-1])
    ok = bad == 0
    assert report(4, ok, f"{len(runs)} runs terminated, {bad} with non-increasing diagonal or > n improvements")


def test_5_determinism():
    rng = random.Random(5)
    mismatches = 0
    for k in range(20):
        n = rng.randint(5, 80)
        sq = gen_random_bounded(n, rng.choice([0.25, 0.5, 1]), rng.getrandbits(64))
        params = SolverParams(epsilon=rng.choice([0.05, 0.1, 0.25]), mode=rng.choice(["paper", "practical"]))
        mismatches += solve(sq, params).to_json(sq) != solve(sq, params).to_json(sq)
    args = ([5, 12], ["equi", "bounded", "cyclic"], [0.5, 1.0], 2, 11, 0.25)
    csv_a = rows_to_csv(run_bench(*args, timing=False))
    csv_b = rows_to_csv(run_bench(*args, timing=False))
    ok = mismatches == 0 and csv_a == csv_b
    assert report(5, ok, f"20 solve pairs, {mismatches} JSON mismatches; bench CSV identical {csv_a == csv_b}")


def test_6_ratio_floor():
    lines = []
    ok = True
    for n in (100, 200, 500):
        ratios, greedy = [], []
        for k in range(10):
            sq = gen_random_equi(n, 1000 * n + k)
            ratios.append(solve(sq).size / n)
            greedy.append(len(greedy_baseline(sq)) / n)
        mean, gmean = float(np.mean(ratios)), float(np.mean(greedy))
        ok &= mean >= RATIO_GATE and mean >= RATIO_FLOOR and mean >= gmean
        lines.append(f"n={n} solver {mean:.4f} greedy {gmean:.4f}")
    assert report(6, ok, "; ".join(lines) + f" (gate {RATIO_GATE}, floor {RATIO_FLOOR}, asymptote 0.75)")


def test_7_polynomial_scaling():
    sizes = [100, 200, 400, 800]
    times = []
    for n in sizes:
        sq = gen_random_equi(n, 4242 + n)
        best = math.inf
        for _ in range(2):
            start = time.perf_counter()
            solve(sq)
            best = min(best, time.perf_counter() - start)
        times.append(best)
    slope = float(np.polyfit(np.log(sizes), np.log(times), 1)[0])
    start = time.perf_counter()
    solve(gen_random_equi(500, 500500))
    t500 = time.perf_counter() - start
    ok = slope <= SLOPE_MAX and t500 < N500_LIMIT_S
    timing = ", ".join(f"n={n}: {t:.3f}s" for n, t in zip(sizes, times))
    assert report(7, ok, f"log-log slope {slope:.2f} (max {SLOPE_MAX}); {timing}; n=500 {t500:.2f}s")


def test_8_round_yield():
    sq = gen_random_equi(200, 8)
    eps = 0.25
    beta = compute_profile(sq).beta
    reference = eps * float(beta) * sq.n / 12
    r = solve(sq, SolverParams(epsilon=eps))
    recorded = all(s.y_size >= 0 and s.n_t >= 0 and s.m_t >= 0 for s in r.per_round)

    # full rounds on the starting diagonal, without stopping at the first winner
    aparams = params_from(eps, beta)
    state = init_state(sq, aparams)
    print(f"  reference eps*beta*n/12 = {reference:.2f}")
    print("   t  y_size   n_t   m_t  useless")
    full = []
    for _ in range(4):
        Y, _, s = build_Yt(state, stop_at_winner=False)
        full.append(s.y_size)
        print(f"  {s.t:2d} {s.y_size:7d} {s.n_t:5d} {s.m_t:5d} {s.useless_pairs:8d}")
        if not Y:
            break
        register_round(state, Y)
    ok = recorded and len(r.per_round) == r.rounds_total and r.rounds_total > 0 and len(full) > 0
    assert report(8, ok, f"{len(r.per_round)} solver rounds recorded; eps*beta*n/12 = {reference:.2f}; "
                         f"full-scan |Omega_t| on the initial diagonal: {full} (measured, not asserted)")
