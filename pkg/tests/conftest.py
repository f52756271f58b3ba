import itertools
import math

import pytest

from slidingsub import SyntheticSpec, gen_synthetic
from slidingsub.functions import Element, coverage_element

ACCEPTANCE: dict[str, tuple[bool, str]] = {}


def record(criterion: str, ok: bool, detail: str) -> None:
    ACCEPTANCE[criterion] = (ok, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE, key=lambda s: int(s.split()[0])):
        ok, detail = ACCEPTANCE[name]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")


def cov(*sets, start=1):
    """Coverage elements from id iterables, indexed from ``start``."""
    return [coverage_element(start + j, s) for j, s in enumerate(sets)]


def coverage_stream(seed, n, universe=20, lo=1, hi=4):
    return gen_synthetic(SyntheticSpec("coverage", n=n, universe=universe, lo=lo, hi=hi), seed)


def vector_stream(seed, n, d=3):
    return gen_synthetic(SyntheticSpec("vectors", n=n, dim=d), seed)


def exhaustive_opt(oracle_value, ground, k):
    """Plain-loop f_k for cross-checking the vectorized brute force."""
    best = 0.0
    for r in range(1, min(k, len(ground)) + 1):
        for combo in itertools.combinations(ground, r):
            best = max(best, oracle_value(list(combo)))
    return best


@pytest.fixture
def half_ln2():
    return 0.5 * math.log(2)


__all__ = ["Element", "cov", "coverage_stream", "vector_stream", "exhaustive_opt", "record"]
