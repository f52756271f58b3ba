"""Bidirectional sliding-window algorithm with sub-window checkpoints.

The stream is cut into sub-windows of ``W'`` arrivals. When a sub-window
completes, a backward threshold scan over its buffered elements produces,
per threshold, at most ``k + 1`` nested checkpoint sets keyed by the
earliest backward member (the anchor). Every later arrival is then offered
forward to each checkpoint of every still-active sub-window. The answer for
window ``A_t`` comes from the first active sub-window: per threshold, the
checkpoint with the smallest anchor still inside the window. With
``delta = epsilon`` this is a ``(1/2 - epsilon)``-approximation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import ConsistencyError, InvalidInputError, InvalidSequenceError, NoSolutionError
from .functions import Element, SolutionSet, SubmodularOracle, offer
from .threshold import ThresholdStream, prune_unit_gains, threshold_ladder, top_exponent
from .window import WindowSpec, window_start


@dataclass
class Checkpoint:
    anchor: int
    solution: SolutionSet
    backward: int = 0  # members contributed by the backward scan


@dataclass
class SubWindowFamily:
    """All checkpoints of one sub-window for one threshold, in creation order.

    Creation order is by descending anchor; the empty-backward checkpoint at
    the sub-window end comes first.
    """

    index: int
    tau: float
    checkpoints: list[Checkpoint] = field(default_factory=list)

    def select(self, start: int) -> Checkpoint | None:
        """Checkpoint with the smallest anchor ``>= start``; later-created wins ties."""
        for cp in reversed(self.checkpoints):
            if cp.anchor >= start:
                return cp
        return None


@dataclass
class SubWindowGroup:
    """Families of sub-window ``index`` across its threshold ladder."""

    index: int
    end: int
    anchor_value: float
    running_max: float
    m: int
    families: list[SubWindowFamily]

    @property
    def stored_items(self) -> int:
        return sum(len(cp.solution) for fam in self.families for cp in fam.checkpoints)


def backward_pass(elements, index, k, delta, oracle: SubmodularOracle, prune=False, end=None) -> SubWindowGroup:
    """Backward threshold scan over one completed sub-window.

    ``elements`` holds ``(element, f({element}))`` pairs in arrival order.
    ``end`` is the sub-window's last arrival position (defaults to the last
    element's index).
    """
    if not elements:
        raise InvalidInputError("backward pass over an empty sub-window")
    end = elements[-1][0].index if end is None else end
    anchor_value = elements[-1][1]
    running_max = max(fv for _, fv in elements)
    m = top_exponent(k, delta, running_max, anchor_value)
    taus = threshold_ladder(k, delta, anchor_value, m)
    if prune and oracle.kind == "coverage":
        taus = taus[prune_unit_gains(taus):]
    families = []
    for tau in taus:
        fam = SubWindowFamily(index, tau, [Checkpoint(end, SolutionSet())])
        acc = SolutionSet()
        for v, fv in reversed(elements):
            if len(acc) >= k:
                break
            if offer(oracle, acc, v, fv, tau, k):
                fam.checkpoints.append(Checkpoint(v.index, acc.copy(), len(acc)))
        families.append(fam)
    return SubWindowGroup(index, end, anchor_value, running_max, m, families)


class Bidirectional:
    def __init__(self, spec: WindowSpec, oracle: SubmodularOracle, prune: bool = False, debug: bool = True):
        self.spec = spec
        self.oracle = oracle
        self.Wp = spec.Wp
        self.delta = spec.epsilon
        self.prune = prune
        self.debug = debug
        self.t = 0
        self.buffer: list[tuple[Element, float]] = []
        self.groups: dict[int, SubWindowGroup] = {}
        # Forward-only sets for the stream prefix, live while i_t == 0.
        self.zero: ThresholdStream | None = ThresholdStream(spec.k, self.delta, oracle, prune=prune)

    def first_active(self, t: int | None = None) -> int:
        t = self.t if t is None else t
        return max(0, -((-(t - self.spec.W + 1)) // self.Wp))

    @property
    def stored_items(self) -> int:
        total = len(self.buffer) + sum(g.stored_items for g in self.groups.values())
        if self.zero is not None:
            total += self.zero.stored_items
        return total

    @property
    def num_indices(self) -> int:
        return 0

    def _advance(self, t: int) -> None:
        if t != self.t + 1:
            raise InvalidSequenceError(f"expected element {self.t + 1}, got {t}")
        self.t = t

    def _boundary(self) -> None:
        t = self.t
        if t % self.Wp:
            return
        i = t // self.Wp
        if self.buffer:
            self.groups[i] = backward_pass(self.buffer, i, self.spec.k, self.delta, self.oracle, self.prune, end=t)
        self.buffer = []

    def _expire(self) -> None:
        i_t = self.first_active()
        for i in [i for i in self.groups if i < i_t]:
            del self.groups[i]
        if i_t > 0:
            self.zero = None

    def skip(self, t: int) -> None:
        """Advance time past a filtered (zero-value) arrival."""
        self._advance(t)
        self._boundary()
        self._expire()

    def process(self, v: Element) -> None:
        self._advance(v.index)
        fv = self.oracle.singleton_value(v)
        if not fv > 0:
            raise InvalidInputError(f"element {v.index} has zero value")
        self.buffer.append((v, fv))
        self._boundary()
        self._expire()

        k = self.spec.k
        last = -(-self.t // self.Wp) - 1
        for i in sorted(self.groups):
            if i > last:
                continue
            group = self.groups[i]
            self._grow(group, fv)
            for fam in group.families:
                for cp in fam.checkpoints:
                    if len(cp.solution) < k:
                        offer(self.oracle, cp.solution, v, fv, fam.tau, k)
        if self.zero is not None:
            self.zero.process(v)
        if self.debug:
            self.check_invariants()

    def _grow(self, group: SubWindowGroup, fv: float) -> None:
        # Thresholds above every earlier singleton start with only the empty checkpoint.
        if fv <= group.running_max:
            return
        group.running_max = fv
        m = top_exponent(self.spec.k, self.delta, fv, group.anchor_value)
        tau = group.families[-1].tau
        while group.m < m:
            tau *= 1 + self.delta
            group.m += 1
            group.families.append(SubWindowFamily(group.index, tau, [Checkpoint(group.end, SolutionSet())]))

    def solution(self) -> tuple[SolutionSet, float]:
        if self.t == 0:
            raise NoSolutionError("no element has been processed")
        i_t = self.first_active()
        if i_t == 0:
            if self.zero is None or self.zero.start_index is None:
                return SolutionSet(), 0.0
            return self.zero.solution()
        start = window_start(self.t, self.spec.W)
        # A sub-window whose arrivals were all filtered has no group; the next one covers the window.
        for i in sorted(self.groups):
            if i < i_t:
                continue
            best: Checkpoint | None = None
            for fam in self.groups[i].families:
                cp = fam.select(start)
                if cp is not None and (best is None or cp.solution.value > best.solution.value):
                    best = cp
            if best is None:
                raise ConsistencyError(f"no eligible checkpoint in sub-window {i} at t={self.t}")
            return best.solution, best.solution.value
        return SolutionSet(), 0.0

    def check_invariants(self) -> None:
        k = self.spec.k
        start = window_start(self.t, self.spec.W)
        i_t = self.first_active()
        if len(self.buffer) > self.Wp:
            raise ConsistencyError("buffer exceeds sub-window size")
        for i, group in self.groups.items():
            if i < i_t:
                raise ConsistencyError(f"expired sub-window {i} still live at t={self.t}")
            for fam in group.families:
                if len(fam.checkpoints) > k + 1:
                    raise ConsistencyError(f"family ({i}, {fam.tau}) has {len(fam.checkpoints)} checkpoints")
                for cp in fam.checkpoints:
                    if len(cp.solution) > k:
                        raise ConsistencyError("checkpoint exceeds k members")
                    if cp.anchor >= start and any(m.index < start for m in cp.solution.members):
                        raise ConsistencyError(f"eligible checkpoint @{cp.anchor} holds expired members")
