"""Stream sources: text-file loaders and seeded synthetic generators.

Arrival indices are line numbers, so blank (empty) coverage lines still
consume an index even though they are dropped.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

import numpy as np

from .errors import InvalidConfigError, StreamParseError
from .functions import Element

log = logging.getLogger(__name__)


class CoverageFile:
    """Iterable over a coverage stream file; counts filtered blank lines."""

    def __init__(self, path):
        self.path = Path(path)
        self.filtered = 0

    def __iter__(self) -> Iterator[Element]:
        self.filtered = 0
        with open(self.path) as fh:
            for lineno, line in enumerate(fh, 1):
                tokens = line.split()
                if not tokens:
                    self.filtered += 1
                    continue
                try:
                    ids = frozenset(int(tok) for tok in tokens)
                except ValueError:
                    raise StreamParseError(self.path, lineno, f"non-integer id in {line.strip()!r}") from None
                if any(i < 0 for i in ids):
                    raise StreamParseError(self.path, lineno, "ids must be non-negative")
                yield Element(lineno, ids)
        if self.filtered:
            log.warning("%s: dropped %d empty line(s)", self.path, self.filtered)


def load_coverage_stream(path) -> CoverageFile:
    return CoverageFile(path)


def load_vector_stream(path) -> Iterator[Element]:
    dim = None
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            tokens = line.split()
            if not tokens:
                continue
            try:
                coords = tuple(float(tok) for tok in tokens)
            except ValueError:
                raise StreamParseError(path, lineno, f"non-numeric value in {line.strip()!r}") from None
            if not all(math.isfinite(c) for c in coords):
                raise StreamParseError(path, lineno, "non-finite value")
            if dim is None:
                dim = len(coords)
            elif len(coords) != dim:
                raise StreamParseError(path, lineno, f"expected {dim} values, got {len(coords)}")
            yield Element(lineno, coords)


@dataclass(frozen=True)
class SyntheticSpec:
    kind: str = "coverage"
    n: int = 1000
    universe: int = 1000
    lo: int = 1
    hi: int = 10
    dim: int = 5

    def __post_init__(self):
        if self.kind not in ("coverage", "vectors"):
            raise InvalidConfigError(f"unknown synthetic kind {self.kind!r}")
        if self.n < 1:
            raise InvalidConfigError(f"stream length must be >= 1, got {self.n}")
        if self.kind == "coverage":
            if not 1 <= self.lo <= self.hi:
                raise InvalidConfigError(f"set sizes need 1 <= lo <= hi, got [{self.lo}, {self.hi}]")
            if self.hi > self.universe:
                raise InvalidConfigError("largest set size exceeds the universe")
        if self.dim < 1:
            raise InvalidConfigError(f"dimension must be >= 1, got {self.dim}")

    @classmethod
    def parse(cls, text: str) -> "SyntheticSpec":
        """Parse ``coverage:n=1000,universe=500,sizes=1-5`` or ``vectors:n=100,d=5``."""
        kind, _, rest = text.partition(":")
        fields = {"kind": kind.strip()}
        for item in filter(None, (s.strip() for s in rest.split(","))):
            key, sep, value = item.partition("=")
            if not sep:
                raise InvalidConfigError(f"bad synthetic field {item!r}")
            key = key.strip()
            try:
                if key == "sizes":
                    lo, _, hi = value.partition("-")
                    fields["lo"], fields["hi"] = int(lo), int(hi or lo)
                elif key in ("d", "dim"):
                    fields["dim"] = int(value)
                elif key in ("n", "universe", "lo", "hi"):
                    fields[key] = int(value)
                else:
                    raise InvalidConfigError(f"unknown synthetic field {key!r}")
            except ValueError:
                raise InvalidConfigError(f"bad value in synthetic field {item!r}") from None
        return cls(**fields)


def gen_synthetic(spec: SyntheticSpec, seed: int) -> list[Element]:
    rng = np.random.default_rng(seed)
    if spec.kind == "vectors":
        X = rng.standard_normal((spec.n, spec.dim))
        return [Element(t + 1, tuple(map(float, row))) for t, row in enumerate(X)]
    sizes = rng.integers(spec.lo, spec.hi + 1, size=spec.n)
    out = []
    for t, size in enumerate(sizes):
        ids = rng.choice(spec.universe, size=int(size), replace=False)
        out.append(Element(t + 1, frozenset(int(i) for i in ids)))
    return out
