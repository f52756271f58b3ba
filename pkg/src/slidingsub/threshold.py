"""Insertion-only streaming over geometric thresholds, lazily initialized.

For a stream ``u_1, u_2, ...`` the instance keeps one candidate set per
threshold ``tau_j = f(u_1)/(2k) * (1+delta)^j``, ``j = 0..m_t`` with
``m_t = floor(log_{1+delta}(2k * Delta_t / f(u_1)))`` and ``Delta_t`` the
running maximum singleton value. Each arriving element is offered to every
candidate set independently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidInputError, NoSolutionError
from .functions import Element, SolutionSet, SubmodularOracle, offer

LOG_GUARD = 1e-12


def top_exponent(k: int, delta: float, running_max: float, first_value: float) -> int:
    """``floor(log_{1+delta}(2k * running_max / first_value))`` with a round-off guard."""
    return math.floor(math.log(2 * k * running_max / first_value) / math.log1p(delta) + LOG_GUARD)


def threshold_ladder(k: int, delta: float, first_value: float, m: int) -> list[float]:
    taus = [first_value / (2 * k)]
    for _ in range(m):
        taus.append(taus[-1] * (1 + delta))
    return taus


def prune_unit_gains(taus: list[float]) -> int:
    """Number of leading thresholds to drop for integer-gain objectives.

    Every threshold in (0, 1] accepts exactly the gains >= 1, so only the
    largest of them is kept.
    """
    below = sum(1 for tau in taus if tau < 1.0)
    return max(below - 1, 0)


@dataclass
class ThresholdBucket:
    tau: float
    solution: SolutionSet


class ThresholdStream:
    """One running instance over a (sub)stream; ``h`` is its current answer."""

    def __init__(self, k: int, delta: float, oracle: SubmodularOracle, prune: bool = False, audit: bool = False):
        if k < 1:
            raise InvalidInputError(f"k must be >= 1, got {k}")
        if not delta > 0:
            raise InvalidInputError(f"delta must be positive, got {delta}")
        self.k = k
        self.delta = delta
        self.oracle = oracle
        self.prune = prune and oracle.kind == "coverage"
        self.first_value = 0.0
        self.running_max = 0.0
        self.start_index: int | None = None
        self.buckets: list[ThresholdBucket] = []
        self._m = -1
        self._best: ThresholdBucket | None = None
        self.audit: list[tuple[int, float, float]] | None = [] if audit else None

    @classmethod
    def start(cls, k, delta, first: Element, oracle, **kwargs) -> "ThresholdStream":
        inst = cls(k, delta, oracle, **kwargs)
        inst.process(first)
        return inst

    @property
    def m(self) -> int:
        return self._m

    @property
    def taus(self) -> list[float]:
        return [b.tau for b in self.buckets]

    def _init(self, v: Element, fv: float) -> None:
        if not fv > 0:
            raise InvalidInputError(f"first element {v.index} has zero value")
        self.start_index = v.index
        self.first_value = fv
        self.running_max = fv
        self._m = top_exponent(self.k, self.delta, fv, fv)
        taus = threshold_ladder(self.k, self.delta, fv, self._m)
        if self.prune:
            taus = taus[prune_unit_gains(taus):]
        self.buckets = [ThresholdBucket(tau, SolutionSet()) for tau in taus]

    def _grow(self, fv: float) -> None:
        if fv <= self.running_max:
            return
        self.running_max = fv
        m = top_exponent(self.k, self.delta, fv, self.first_value)
        tau = self.buckets[-1].tau if self.buckets else self.first_value / (2 * self.k)
        while self._m < m:
            tau *= 1 + self.delta
            self._m += 1
            self.buckets.append(ThresholdBucket(tau, SolutionSet()))

    def process(self, v: Element) -> None:
        fv = self.oracle.singleton_value(v)
        if self.start_index is None:
            self._init(v, fv)
        else:
            self._grow(fv)
        k = self.k
        for b in self.buckets:
            if len(b.solution) >= k:
                continue
            before = b.solution.value
            if offer(self.oracle, b.solution, v, fv, b.tau, k):
                if self.audit is not None:
                    self.audit.append((v.index, b.tau, b.solution.value - before))
                if self._best is None or b.solution.value > self._best.solution.value:
                    self._best = b
                elif b.solution.value == self._best.solution.value and b.tau < self._best.tau:
                    self._best = b

    @property
    def value(self) -> float:
        return self._best.solution.value if self._best is not None else 0.0

    def solution(self) -> tuple[SolutionSet, float]:
        if self._best is None:
            raise NoSolutionError("no element has been processed")
        return self._best.solution, self._best.solution.value

    @property
    def stored_items(self) -> int:
        return sum(len(b.solution) for b in self.buckets)
