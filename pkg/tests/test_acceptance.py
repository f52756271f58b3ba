"""Acceptance criteria, one test per criterion.

Each test records a PASS/FAIL line through ``conftest.record``; the lines are
printed in the terminal summary. Assertions use the stated tolerances as is.
"""

import math
import time

import numpy as np
import pytest

from conftest import coverage_stream, record, vector_stream
from slidingsub import (
    Bidirectional,
    SmoothHistogram,
    SyntheticSpec,
    ThresholdStream,
    WindowSpec,
    brute_force_opt,
    gen_synthetic,
    offline_greedy,
)
from slidingsub.cli import main
from slidingsub.errors import ConsistencyError
from slidingsub.functions import CoverageOracle, LogDetOracle, coverage_element, logdet_value
from slidingsub.window import window_start

EPS = 0.1
TOL = 1e-9

# Small streams for the brute-force checks.
COVERAGE_SEEDS = range(50)
LOGDET_SEEDS = range(20)
COV_SHAPE = dict(n=120, W=25)
LOG_SHAPE = dict(n=80, W=16)
K_SMALL = 3

# Desk-scale synthetic coverage for the quantitative checks, fixed up front.
BENCH = dict(universe=1000, lo=1, hi=10)


def bench_stream(n, seed):
    return gen_synthetic(SyntheticSpec("coverage", n=n, **BENCH), seed)


def small_cases():
    for seed in COVERAGE_SEEDS:
        yield "coverage", seed, COV_SHAPE["W"], coverage_stream(seed, COV_SHAPE["n"]), CoverageOracle
    for seed in LOGDET_SEEDS:
        yield "logdet", seed, LOG_SHAPE["W"], vector_stream(1000 + seed, LOG_SHAPE["n"]), LogDetOracle


@pytest.fixture(scope="module")
def window_opts():
    """Brute-force f_k of every window of every small stream, computed once."""
    out = []
    for kind, seed, W, stream, make in small_cases():
        o = make()
        opts = []
        for v in stream:
            window = stream[window_start(v.index, W) - 1 : v.index]
            opts.append(brute_force_opt(window, K_SMALL, o, size_cap=W).value)
        out.append((kind, seed, W, stream, make, opts))
    return out


def test_1_smooth_histogram_third(window_opts):
    began = time.perf_counter()
    violations, steps, worst = 0, 0, math.inf
    for kind, seed, W, stream, make, opts in window_opts:
        h = SmoothHistogram(WindowSpec(W=W, k=K_SMALL, epsilon=EPS), make(), debug=False)
        for v, opt in zip(stream, opts):
            h.process(v)
            value = h.solution()[1]
            steps += 1
            if value < (1 / 3 - EPS) * opt - TOL:
                violations += 1
            if opt > 0:
                worst = min(worst, value / opt)
    elapsed = time.perf_counter() - began
    ok = violations == 0 and elapsed < 60
    record("1 smooth-histogram >= (1/3 - eps) OPT", ok,
           f"{violations} violations over {steps} steps, worst ratio {worst:.3f}, {elapsed:.1f}s")
    assert violations == 0
    assert elapsed < 60


def test_2_bidirectional_half(window_opts):
    violations, steps, worst = 0, 0, math.inf
    for kind, seed, W, stream, make, opts in window_opts:
        for Wp in (W, math.ceil(math.sqrt(W))):
            b = Bidirectional(WindowSpec(W=W, k=K_SMALL, epsilon=EPS, subwindow=Wp), make(), debug=False)
            for v, opt in zip(stream, opts):
                b.process(v)
                value = b.solution()[1]
                steps += 1
                if value < (1 / 2 - EPS) * opt - TOL:
                    violations += 1
                if opt > 0:
                    worst = min(worst, value / opt)
    record("2 bidirectional >= (1/2 - eps) OPT", violations == 0,
           f"{violations} violations over {steps} steps, worst ratio {worst:.3f}")
    assert violations == 0


def test_3_threshold_prefix_bound():
    rng = np.random.default_rng(3)
    violations, checks = 0, 0
    for case in range(50):
        n, k = int(rng.integers(1, 16)), int(rng.integers(1, 5))
        delta = (0.1, 0.5)[case % 2]
        if case % 4 < 2:
            stream, make = coverage_stream(300 + case, n, universe=16, lo=1, hi=5), CoverageOracle
        else:
            stream, make = vector_stream(300 + case, n), LogDetOracle
        ts = ThresholdStream(k, delta, make())
        ref = make()
        for j, v in enumerate(stream, 1):
            ts.process(v)
            h = ts.value
            for kp in range(1, k + 1):
                f_kp = brute_force_opt(stream[:j], kp, ref).value
                checks += 1
                if h < (1 - delta) * k / (k + kp) * f_kp - TOL:
                    violations += 1
    record("3 threshold-stream prefix bound", violations == 0, f"{violations} violations over {checks} checks")
    assert violations == 0


def test_4_greedy_factor():
    rng = np.random.default_rng(4)
    violations = 0
    for case in range(100):
        n, k = int(rng.integers(1, 16)), int(rng.integers(1, 6))
        if case % 2:
            ground, o = coverage_stream(400 + case, n, universe=20, lo=1, hi=6), CoverageOracle()
        else:
            ground, o = vector_stream(400 + case, n), LogDetOracle()
        if offline_greedy(ground, k, o).value < (1 - 1 / math.e) * brute_force_opt(ground, k, o).value - TOL:
            violations += 1
    record("4 greedy >= (1 - 1/e) OPT", violations == 0, f"{violations} violations over 100 instances")
    assert violations == 0


def test_5_structural_invariants():
    violations, steps, max_s = [], 0, 0
    for kind, seed, W, stream, make in small_cases():
        spec = WindowSpec(W=W, k=K_SMALL, epsilon=EPS)
        algs = [SmoothHistogram(spec, make(), debug=False)]
        for Wp in (W, math.ceil(math.sqrt(W))):
            algs.append(Bidirectional(WindowSpec(W=W, k=K_SMALL, epsilon=EPS, subwindow=Wp), make(), debug=False))
        for v in stream:
            steps += 1
            for alg in algs:
                alg.process(v)
                try:
                    alg.check_invariants()
                except ConsistencyError as exc:
                    violations.append(f"{kind}/{seed}: {exc}")
                if isinstance(alg, SmoothHistogram):
                    max_s = max(max_s, alg.num_indices)
                    if alg.num_indices > alg.index_bound():
                        violations.append(f"{kind}/{seed}: s={alg.num_indices} > {alg.index_bound()}")
                if len(alg.solution()[0]) > K_SMALL:
                    violations.append(f"{kind}/{seed}: solution exceeds k")
    record("5 structural invariants", not violations,
           f"{len(violations)} violations over {steps} steps x 3 algorithms, max s {max_s}")
    assert not violations, violations[:5]


def smooth_evals_per_element(stream, W, k, eps):
    o = CoverageOracle()
    h = SmoothHistogram(WindowSpec(W=W, k=k, epsilon=eps), o, debug=False)
    peak = 0
    for v in stream:
        h.process(v)
        peak = max(peak, h.stored_items)
    return o.evals / len(stream), peak


@pytest.mark.slow
def test_6_work_independent_of_window():
    stream = bench_stream(10_000, 6)
    small, _ = smooth_evals_per_element(stream, 500, 10, 0.25)
    large, _ = smooth_evals_per_element(stream, 5_000, 10, 0.25)
    ok = large < 2 * small and small < 500 and large < 500
    record("6 evals/element flat in W", ok, f"W=500: {small:.1f}, W=5000: {large:.1f}, ratio {large / small:.2f}")
    assert large < 2 * small
    assert small < 500 and large < 500


@pytest.mark.slow
def test_7_speedup_over_greedy():
    W, k = 2_000, 10
    stream = bench_stream(2 * W, 7)
    per_element, _ = smooth_evals_per_element(stream, W, k, 0.25)
    recomputes = []
    for t in (W, 3 * W // 2, 2 * W):
        o = CoverageOracle()
        offline_greedy(stream[t - W : t], k, o)
        recomputes.append(o.evals)
    speedup = float(np.mean(recomputes)) / per_element
    record("7 speedup vs recompute-greedy >= 50", speedup >= 50,
           f"greedy {np.mean(recomputes):.0f} evals/recompute, smooth {per_element:.1f} evals/element, x{speedup:.1f}")
    assert speedup >= 50


@pytest.mark.slow
def test_8_memory_fraction():
    W = 10_000
    stream = bench_stream(2 * W, 8)
    _, peak = smooth_evals_per_element(stream, W, 10, 0.25)
    fraction = peak / W
    record("8 max stored_items / W <= 5%", fraction <= 0.05,
           f"peak {peak} stored items at W={W} -> {100 * fraction:.1f}%")
    assert fraction <= 0.05


@pytest.mark.slow
def test_9_quality_vs_greedy():
    W, n, every = 1_000, 3_000, 100
    stream = bench_stream(n, 9)
    means, details = {}, []
    for k in (5, 10):
        algs = {
            "smooth": SmoothHistogram(WindowSpec(W=W, k=k, epsilon=EPS), CoverageOracle(), debug=False),
            "bidir": Bidirectional(WindowSpec(W=W, k=k, epsilon=EPS), CoverageOracle(), debug=False),
        }
        ratios = {name: [] for name in algs}
        for v in stream:
            for alg in algs.values():
                alg.process(v)
            if v.index % every:
                continue
            window = stream[window_start(v.index, W) - 1 : v.index]
            greedy = offline_greedy(window, k, CoverageOracle()).value
            for name, alg in algs.items():
                ratios[name].append(alg.solution()[1] / greedy)
        for name, r in ratios.items():
            means[(name, k)] = float(np.mean(r))
            details.append(f"{name} k={k}: {means[(name, k)]:.3f}")
    ok = all(means[("smooth", k)] >= 0.70 and means[("bidir", k)] >= 0.80 for k in (5, 10))
    record("9 quality vs greedy", ok, ", ".join(details))
    for k in (5, 10):
        assert means[("smooth", k)] >= 0.70
        assert means[("bidir", k)] >= 0.80


def test_10_oracle_numerics():
    closed = [
        (logdet_value([[3.0, -1.0]]), 0.5 * math.log(2)),
        (logdet_value([[0.2, 0.4], [0.2, 0.4]]), 0.5 * math.log(3)),
        (logdet_value([[0.0, 0.0], [0.75, 0.0]], 0.75), 0.5 * math.log(4 - math.exp(-2))),
    ]
    closed_bad = sum(abs(a - b) > 1e-9 for a, b in closed)

    rng = np.random.default_rng(10)
    mono_bad = sub_bad = 0
    for sample in range(200):
        n = int(rng.integers(2, 9))
        if sample % 2:
            o = CoverageOracle()
            ground = [coverage_element(i + 1, rng.choice(16, size=int(rng.integers(0, 6)), replace=False).tolist())
                      for i in range(n)]
        else:
            o = LogDetOracle()
            ground = vector_stream(10_000 + sample, n, d=2)
        order = rng.permutation(n)
        T = [ground[j] for j in order[: n - 1]]
        S = T[: int(rng.integers(0, n))]
        v = ground[order[-1]]
        fS, fT = o.value(S), o.value(T)
        mono_bad += fT < fS - 1e-9 or o.value(T + [v]) < fT - 1e-9
        sub_bad += (o.value(S + [v]) - fS) < (o.value(T + [v]) - fT) - 1e-9
    ok = closed_bad == 0 and mono_bad == 0 and sub_bad == 0
    record("10 oracle numerics", ok,
           f"closed forms off: {closed_bad}/3, monotonicity violations {mono_bad}/200, "
           f"submodularity violations {sub_bad}/200")
    assert closed_bad == 0
    assert mono_bad == 0 and sub_bad == 0


RUNS = [
    ["--algorithm", "smooth", "--synthetic", "coverage:n=400,universe=200,sizes=1-8"],
    ["--algorithm", "bidir", "--subwindow", "7", "--synthetic", "coverage:n=400,universe=200,sizes=1-8"],
    ["--algorithm", "threshold", "--synthetic", "coverage:n=400,universe=200,sizes=1-8"],
    ["--algorithm", "greedy", "--report-every", "25", "--synthetic", "coverage:n=400,universe=200,sizes=1-8"],
    ["--algorithm", "random", "--report-every", "25", "--trials", "50",
     "--synthetic", "coverage:n=400,universe=200,sizes=1-8"],
    ["--algorithm", "smooth", "--function", "logdet", "--format", "csv", "--synthetic", "vectors:n=200,d=4"],
]


def test_11_cli_determinism(tmp_path):
    mismatched = []
    for j, extra in enumerate(RUNS):
        outputs = []
        for rep in range(2):
            out = tmp_path / f"run{j}_{rep}.out"
            rc = main(["--k", "4", "--window", "50", "--epsilon", "0.2", "--seed", "11", "--output", str(out), *extra])
            assert rc == 0
            outputs.append(out.read_bytes())
        if outputs[0] != outputs[1] or not outputs[0]:
            mismatched.append(" ".join(extra[:2]))
    record("11 CLI determinism", not mismatched, f"{len(RUNS) - len(mismatched)}/{len(RUNS)} configs byte-identical")
    assert not mismatched
