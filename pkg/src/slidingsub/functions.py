"""Monotone submodular objectives and the evaluation-counting oracle contract.

Two objectives are provided: unweighted set coverage and the log-determinant
active-set-selection objective ``f(S) = 1/2 log det(I + K_SS)`` with an RBF
kernel. Every call that computes ``f`` on a set increments ``oracle.evals``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property, reduce
from operator import or_
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import InvalidArgumentError, InvalidInputError

DEFAULT_BANDWIDTH = 0.75
ABS_TOL = 1e-9
REL_TOL = 1e-7

Payload = Union[frozenset, tuple]


def close(a: float, b: float) -> bool:
    """Equality check used for cached values: abs 1e-9 or rel 1e-7, whichever is looser."""
    return abs(a - b) <= max(ABS_TOL, REL_TOL * max(abs(a), abs(b)))


@dataclass(frozen=True)
class Element:
    """One stream item. ``index`` is the 1-based arrival position."""

    index: int
    payload: Payload

    @cached_property
    def mask(self) -> int:
        return reduce(or_, (1 << i for i in self.payload), 0)

    @cached_property
    def vector(self) -> np.ndarray:
        return np.asarray(self.payload, dtype=float)


def coverage_element(index: int, ids: Iterable[int]) -> Element:
    return Element(index, frozenset(int(i) for i in ids))


def vector_element(index: int, coords: Iterable[float]) -> Element:
    return Element(index, tuple(float(c) for c in coords))


class SolutionSet:
    """Ordered members plus the memoized value of ``f`` on them.

    ``state`` is an oracle-specific summary (union bitmask for coverage,
    stacked points for log-det) so extending the set needs one evaluation.
    """

    __slots__ = ("members", "value", "state")

    def __init__(self, members=None, value=0.0, state=None):
        self.members: list[Element] = list(members) if members else []
        self.value = float(value)
        self.state = state

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __repr__(self):
        return f"SolutionSet({self.indices}, value={self.value:.6g})"

    @property
    def indices(self) -> list[int]:
        return [m.index for m in self.members]

    def __contains__(self, v: Element) -> bool:
        return any(m.index == v.index for m in self.members)

    def copy(self) -> "SolutionSet":
        return SolutionSet(self.members, self.value, self.state)

    def add(self, v: Element, value: float, state) -> None:
        self.members.append(v)
        self.value = value
        self.state = state


class SubmodularOracle:
    """Evaluation contract. Subclasses implement ``_evaluate`` and ``_extend``."""

    kind = "abstract"
    # Gain comparisons against thresholds allow this much round-off.
    tolerance = 0.0

    def __init__(self):
        self.evals = 0
        self._last_single: tuple[Element | None, float] = (None, 0.0)

    def value(self, elements: Sequence[Element]) -> float:
        self.evals += 1
        if not elements:
            return 0.0
        return self._evaluate(elements)

    def singleton_value(self, v: Element) -> float:
        """``f({v})``; repeated calls for the same element object are free."""
        last, fv = self._last_single
        if last is v:
            return fv
        fv = self.value([v])
        self._last_single = (v, fv)
        return fv

    def extend(self, base: SolutionSet, v: Element, known: float | None = None):
        """Return ``(f(base + v), new_state)``; counts one evaluation unless ``known``."""
        if known is None:
            self.evals += 1
        return self._extend(base, v, known)

    def batch_values(self, ground: Sequence[Element], combos: np.ndarray) -> np.ndarray:
        """Values of many equal-size subsets, given as rows of indices into ``ground``."""
        self.evals += len(combos)
        return self._batch(ground, combos)

    def _evaluate(self, elements):
        raise NotImplementedError

    def _extend(self, base, v, known):
        raise NotImplementedError

    def _batch(self, ground, combos):
        return np.array([self._evaluate([ground[j] for j in row]) for row in combos])


class CoverageOracle(SubmodularOracle):
    kind = "coverage"
    tolerance = 0.0

    def _evaluate(self, elements):
        return float(reduce(or_, (e.mask for e in elements), 0).bit_count())

    def _extend(self, base, v, known):
        state = (base.state or 0) | v.mask
        return (float(state.bit_count()) if known is None else known), state

    def _batch(self, ground, combos):
        ids = sorted(set().union(*(e.payload for e in ground)))
        pos = {u: j for j, u in enumerate(ids)}
        incidence = np.zeros((len(ground), max(len(ids), 1)), dtype=bool)
        for r, e in enumerate(ground):
            incidence[r, [pos[u] for u in e.payload]] = True
        out = np.empty(len(combos))
        for lo in range(0, len(combos), 50_000):
            chunk = combos[lo : lo + 50_000]
            out[lo : lo + len(chunk)] = incidence[chunk].any(axis=1).sum(axis=1)
        return out


class LogDetOracle(SubmodularOracle):
    kind = "logdet"
    tolerance = 1e-12

    def __init__(self, bandwidth: float = DEFAULT_BANDWIDTH):
        super().__init__()
        if not bandwidth > 0:
            raise InvalidArgumentError(f"bandwidth must be positive, got {bandwidth}")
        self.bandwidth = float(bandwidth)

    def _evaluate(self, elements):
        return _logdet_points(np.stack([e.vector for e in elements]), self.bandwidth)

    def _extend(self, base, v, known):
        pts = v.vector[None, :] if base.state is None else np.vstack([base.state, v.vector])
        if known is None:
            known = _logdet_points(pts, self.bandwidth)
        return known, pts

    def _batch(self, ground, combos):
        X = np.stack([e.vector for e in ground])
        out = np.empty(len(combos))
        m = combos.shape[1]
        eye = np.eye(m)
        for lo in range(0, len(combos), 20_000):
            P = X[combos[lo : lo + 20_000]]
            diff = P[:, :, None, :] - P[:, None, :, :]
            K = np.exp(-np.einsum("cijd,cijd->cij", diff, diff) / self.bandwidth**2)
            _, logdet = np.linalg.slogdet(eye + K)
            out[lo : lo + len(P)] = 0.5 * logdet
        return out


def make_oracle(kind: str, bandwidth: float = DEFAULT_BANDWIDTH) -> SubmodularOracle:
    if kind == "coverage":
        return CoverageOracle()
    if kind == "logdet":
        return LogDetOracle(bandwidth)
    raise InvalidArgumentError(f"unknown function kind {kind!r}")


def coverage_value(sets: Iterable[Iterable[int]]) -> int:
    """Size of the union of the given id-sets."""
    union: set[int] = set()
    for s in sets:
        union.update(s)
    return len(union)


def _logdet_points(X: np.ndarray, bandwidth: float) -> float:
    sq = np.sum(X * X, axis=1)
    d2 = np.maximum(sq[:, None] + sq[None, :] - 2.0 * X @ X.T, 0.0)
    M = np.exp(-d2 / bandwidth**2)
    M[np.diag_indices_from(M)] += 1.0
    L = np.linalg.cholesky(M)
    return float(np.sum(np.log(np.diag(L))))


def logdet_value(points: Sequence[Sequence[float]], bandwidth: float = DEFAULT_BANDWIDTH) -> float:
    """``1/2 log det(I + K)`` with ``K_ij = exp(-|p_i - p_j|^2 / bandwidth^2)``."""
    if not bandwidth > 0:
        raise InvalidArgumentError(f"bandwidth must be positive, got {bandwidth}")
    if len(points) == 0:
        return 0.0
    X = np.asarray(points, dtype=float)
    if X.ndim != 2:
        raise InvalidInputError("points must share one dimension")
    if not np.all(np.isfinite(X)):
        raise InvalidInputError("points contain non-finite entries")
    return _logdet_points(X, bandwidth)


def marginal_gain(oracle: SubmodularOracle, base: SolutionSet, v: Element) -> float:
    """``f(base + v) - f(base)`` using the cached ``f(base)``."""
    if v in base:
        raise InvalidArgumentError(f"element {v.index} is already in the base set")
    new_value, _ = oracle.extend(base, v)
    return new_value - base.value


def singleton_value(oracle: SubmodularOracle, v: Element) -> float:
    return oracle.singleton_value(v)


def offer(oracle: SubmodularOracle, sol: SolutionSet, v: Element, fv: float, tau: float, k: int) -> bool:
    """Threshold insertion rule: add ``v`` if ``|sol| < k`` and its gain is at least ``tau``.

    ``fv`` is ``f({v})``, reused when ``sol`` is empty so no evaluation is spent.
    """
    if len(sol) >= k:
        return False
    if not sol.members:
        if fv < tau - oracle.tolerance:
            return False
        _, state = oracle.extend(sol, v, known=fv)
        sol.add(v, fv, state)
        return True
    new_value, state = oracle.extend(sol, v)
    if new_value - sol.value >= tau - oracle.tolerance:
        sol.add(v, new_value, state)
        return True
    return False


@dataclass
class StreamStats:
    """Running max/min singleton values over the surviving stream."""

    running_max: float = 0.0
    running_min: float = math.inf
    count: int = field(default=0)

    def update(self, fv: float) -> None:
        if fv <= 0:
            raise InvalidInputError("stream statistics only track positive singleton values")
        self.running_max = max(self.running_max, fv)
        self.running_min = min(self.running_min, fv)
        self.count += 1

    @property
    def spread(self) -> float:
        return self.running_max / self.running_min if self.count else 1.0
