"""Submodular smooth histogram over a count-based sliding window.

Keeps start indices ``x_1 < ... < x_s`` (``x_s`` is the newest element),
each running its own :class:`ThresholdStream`. Redundant middle indices are
dropped whenever ``h(x_{i+2}) >= (1 - beta) h(x_i)``; at most one expired
index is retained. With ``beta = delta = epsilon / 2`` the answer is a
``(1/3 - epsilon)``-approximation of the window optimum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConsistencyError, InvalidSequenceError, NoSolutionError
from .functions import Element, SolutionSet, StreamStats, SubmodularOracle
from .threshold import ThresholdStream
from .window import WindowSpec, window_start


@dataclass
class Entry:
    x: int
    instance: ThresholdStream

    @property
    def h(self) -> float:
        return self.instance.value


@dataclass(frozen=True)
class SuccessorEvent:
    """Audit record: ``succ`` became the successor of ``pred`` at time ``t``."""

    t: int
    pred: int
    succ: int
    adjacent: bool
    ratio_ok: bool

    @property
    def holds(self) -> bool:
        return self.adjacent or self.ratio_ok


class SmoothHistogram:
    def __init__(self, spec: WindowSpec, oracle: SubmodularOracle, prune: bool = False, audit: bool = False, debug: bool = True):
        self.spec = spec
        self.oracle = oracle
        self.beta = spec.epsilon / 2
        self.delta = spec.epsilon / 2
        self.prune = prune
        self.debug = debug
        self.entries: list[Entry] = []
        self.t = 0
        self.stats = StreamStats()
        self._first_index: int | None = None
        # Index of the most recent surviving element, for successor audits.
        self._last_seen: int | None = None
        self.events: list[SuccessorEvent] | None = [] if audit else None

    @property
    def num_indices(self) -> int:
        return len(self.entries)

    @property
    def indices(self) -> list[int]:
        return [e.x for e in self.entries]

    @property
    def stored_items(self) -> int:
        return sum(e.instance.stored_items for e in self.entries)

    def _advance(self, t: int) -> None:
        if t != self.t + 1:
            raise InvalidSequenceError(f"expected element {self.t + 1}, got {t}")
        self.t = t

    def _drop_expired(self) -> None:
        start = window_start(self.t, self.spec.W)
        while len(self.entries) >= 2 and self.entries[1].x < start:
            del self.entries[0]

    def skip(self, t: int) -> None:
        """Advance time past a filtered (zero-value) arrival."""
        self._advance(t)
        self._drop_expired()

    def process(self, v: Element) -> None:
        self._advance(v.index)
        t = self.t
        fv = self.oracle.singleton_value(v)
        self.stats.update(fv)
        if self._first_index is None:
            self._first_index = t

        new = Entry(t, ThresholdStream(self.spec.k, self.delta, self.oracle, prune=self.prune))
        self.entries.append(new)
        if self.events is not None and len(self.entries) >= 2:
            self.events.append(SuccessorEvent(t, self.entries[-2].x, t, self._last_seen == self.entries[-2].x, False))
        self._last_seen = t

        self._drop_expired()

        for e in self.entries:
            e.instance.process(v)

        self._compact()
        if self.debug:
            self.check_invariants()

    def _compact(self) -> None:
        keep = 1 - self.beta
        entries = self.entries
        i = 0
        while i + 2 < len(entries):
            if entries[i + 2].h >= keep * entries[i].h:
                if self.events is not None:
                    self.events.append(SuccessorEvent(self.t, entries[i].x, entries[i + 2].x, False, True))
                del entries[i + 1]
                i = 0
            else:
                i += 1

    def solution(self) -> tuple[SolutionSet, float]:
        if not self.entries:
            raise NoSolutionError("histogram is empty")
        start = window_start(self.t, self.spec.W)
        first = self.entries[0]
        if first.x == start:
            return first.instance.solution()
        if first.x > start:
            # Only possible when every arrival before x_1 was filtered out.
            if first.x != self._first_index:
                raise ConsistencyError(f"x_1={first.x} is inside the window but not the first arrival")
            return first.instance.solution()
        if len(self.entries) == 1:
            # Everything still in the window was filtered.
            return SolutionSet(), 0.0
        return self.entries[1].instance.solution()

    def check_invariants(self) -> None:
        entries = self.entries
        xs = [e.x for e in entries]
        if any(a >= b for a, b in zip(xs, xs[1:])):
            raise ConsistencyError(f"indices not increasing: {xs}")
        if entries and entries[-1].x != self.t:
            raise ConsistencyError(f"last index {entries[-1].x} != t={self.t}")
        start = window_start(self.t, self.spec.W)
        if sum(1 for x in xs if x < start) > 1 or any(x < start for x in xs[1:]):
            raise ConsistencyError(f"more than one expired index at t={self.t}: {xs}")
        keep = 1 - self.beta
        for i in range(len(entries) - 2):
            if entries[i + 2].h >= keep * entries[i].h:
                raise ConsistencyError(f"compaction predicate holds at i={i + 1}, t={self.t}")

    def index_bound(self) -> int:
        """``2 * ceil(log(k * spread) / log(1 / (1 - beta))) + 3``."""
        spread = self.stats.spread
        return 2 * math.ceil(math.log(self.spec.k * spread) / -math.log1p(-self.beta)) + 3
