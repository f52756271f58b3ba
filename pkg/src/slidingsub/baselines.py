"""Offline baselines and the exhaustive optimum used as ground truth."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Sequence

import numpy as np

from .errors import SizeExceededError
from .functions import Element, SolutionSet, SubmodularOracle

DEFAULT_TRIALS = 1000


@dataclass
class OracleResult:
    solution: SolutionSet
    value: float
    exhausted: bool = False


def offline_greedy(ground: Sequence[Element], k: int, oracle: SubmodularOracle) -> OracleResult:
    """Classic greedy: ``k`` rounds of adding the max-marginal element.

    Ties go to the earliest arrival. Stops early once no element has positive gain.
    """
    sol = SolutionSet()
    remaining = list(ground)
    for _ in range(min(k, len(remaining))):
        best_i, best_gain, best = -1, 0.0, None
        for j, v in enumerate(remaining):
            value, state = oracle.extend(sol, v)
            gain = value - sol.value
            if gain > best_gain + oracle.tolerance:
                best_i, best_gain, best = j, gain, (value, state)
        if best is None:
            break
        sol.add(remaining.pop(best_i), *best)
    return OracleResult(sol, sol.value)


def random_k(ground: Sequence[Element], k: int, oracle: SubmodularOracle, trials: int = DEFAULT_TRIALS, seed: int = 0):
    """Mean value of ``trials`` uniform size-``min(k, n)`` samples; returns ``(mean, first_sample)``."""
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    n = len(ground)
    if n == 0:
        return 0.0, SolutionSet()
    rng = np.random.default_rng(seed)
    size = min(k, n)
    total = 0.0
    first = None
    for _ in range(trials):
        pick = np.sort(rng.choice(n, size=size, replace=False))
        members = [ground[j] for j in pick]
        value = oracle.value(members)
        if first is None:
            first = SolutionSet(members, value)
        total += value
    return total / trials, first


def brute_force_opt(ground: Sequence[Element], k: int, oracle: SubmodularOracle, size_cap: int = 20) -> OracleResult:
    """Exact ``max f(S)`` over ``|S| <= k`` by enumeration (size exactly ``min(k, n)`` by monotonicity)."""
    n = len(ground)
    if n > size_cap:
        raise SizeExceededError(f"ground set of {n} exceeds the enumeration cap {size_cap}")
    if n == 0:
        return OracleResult(SolutionSet(), 0.0, True)
    r = min(k, n)
    combos = np.fromiter(
        (j for c in combinations(range(n), r) for j in c), dtype=np.intp, count=comb(n, r) * r
    ).reshape(-1, r)
    values = oracle.batch_values(ground, combos)
    best = int(np.argmax(values))
    members = [ground[j] for j in combos[best]]
    return OracleResult(SolutionSet(members, float(values[best])), float(values[best]), True)
