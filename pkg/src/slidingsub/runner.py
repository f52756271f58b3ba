"""Stream driver: feeds elements to an algorithm and records step reports."""

from __future__ import annotations

import csv
import json
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from .baselines import DEFAULT_TRIALS, offline_greedy, random_k
from .bidirectional import Bidirectional
from .errors import InvalidConfigError, SlidingSubError
from .functions import DEFAULT_BANDWIDTH, Element, SolutionSet, make_oracle
from .histogram import SmoothHistogram
from .streams import SyntheticSpec, gen_synthetic, load_coverage_stream, load_vector_stream
from .threshold import ThresholdStream
from .window import StepReport, WindowSpec, window_start

ALGORITHMS = ("smooth", "bidir", "threshold", "greedy", "random")
FIELDS = ("t", "value", "solution", "evals_step", "evals_cum", "stored_items", "num_indices")


@dataclass
class RunConfig:
    algorithm: str = "smooth"
    function: str = "coverage"
    spec: WindowSpec = field(default_factory=lambda: WindowSpec(W=1000, k=10, epsilon=0.1))
    bandwidth: float = DEFAULT_BANDWIDTH
    input_path: str | None = None
    synthetic: SyntheticSpec | None = None
    seed: int = 0
    report_every: int = 1
    trials: int = DEFAULT_TRIALS
    output_path: str | None = None
    output_format: str = "jsonl"
    coverage_prune: bool = False

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise InvalidConfigError(f"unknown algorithm {self.algorithm!r}")
        if self.function not in ("coverage", "logdet"):
            raise InvalidConfigError(f"unknown function {self.function!r}")
        if (self.input_path is None) == (self.synthetic is None):
            raise InvalidConfigError("exactly one of an input file or a synthetic spec is required")
        if self.report_every < 1:
            raise InvalidConfigError("report cadence must be >= 1")
        if self.trials < 1:
            raise InvalidConfigError("trials must be >= 1")
        if self.output_format not in ("jsonl", "csv"):
            raise InvalidConfigError(f"unknown output format {self.output_format!r}")
        if self.synthetic is not None:
            want = "coverage" if self.function == "coverage" else "vectors"
            if self.synthetic.kind != want:
                raise InvalidConfigError(f"function {self.function!r} needs a {want!r} synthetic stream")

    def elements(self) -> Iterable[Element]:
        if self.synthetic is not None:
            return gen_synthetic(self.synthetic, self.seed)
        if self.function == "coverage":
            return load_coverage_stream(self.input_path)
        return load_vector_stream(self.input_path)


class _Prefix:
    """Adapter giving the insertion-only instance the windowed-algorithm interface."""

    num_indices = 0

    def __init__(self, k, delta, oracle, prune):
        self.inner = ThresholdStream(k, delta, oracle, prune=prune)
        self.t = 0

    def process(self, v):
        self.t = v.index
        self.inner.process(v)

    def skip(self, t):
        self.t = t

    def solution(self):
        if self.inner.start_index is None:
            return SolutionSet(), 0.0
        return self.inner.solution()

    @property
    def stored_items(self):
        return self.inner.stored_items


def build_algorithm(config: RunConfig, oracle):
    spec = config.spec
    if config.algorithm == "smooth":
        return SmoothHistogram(spec, oracle, prune=config.coverage_prune, debug=False)
    if config.algorithm == "bidir":
        return Bidirectional(spec, oracle, prune=config.coverage_prune, debug=False)
    if config.algorithm == "threshold":
        return _Prefix(spec.k, spec.epsilon, oracle, config.coverage_prune)
    return None


def iter_reports(config: RunConfig, elements: Iterable[Element] | None = None, oracle=None) -> Iterator[StepReport]:
    """Yield a report every ``report_every`` steps and at the final step."""
    oracle = oracle or make_oracle(config.function, config.bandwidth)
    alg = build_algorithm(config, oracle)
    spec = config.spec
    window: deque[Element] = deque()
    t = 0
    step_start = 0
    pending = None

    def step(t, v):
        nonlocal step_start
        step_start = oracle.evals
        try:
            if v is not None and oracle.singleton_value(v) <= 0:
                v = None
            if alg is None:
                if v is not None:
                    window.append(v)
                start = window_start(t, spec.W)
                while window and window[0].index < start:
                    window.popleft()
            elif v is None:
                alg.skip(t)
            else:
                alg.process(v)
        except SlidingSubError as exc:
            raise type(exc)(f"at step {t}: {exc}") from exc

    def report(t):
        if alg is None:
            ground = list(window)
            if config.algorithm == "greedy":
                res = offline_greedy(ground, spec.k, oracle)
                value, sol, stored = res.value, res.solution, len(ground)
            else:
                value, sol = random_k(ground, spec.k, oracle, config.trials, config.seed + t)
                stored = len(ground)
            num = 0
        else:
            sol, value = alg.solution()
            stored, num = alg.stored_items, alg.num_indices
        return StepReport(
            t=t,
            value=float(value),
            solution=sorted(sol.indices),
            evals_step=oracle.evals - step_start,
            evals_cum=oracle.evals,
            stored_items=stored,
            num_indices=num,
        )

    for v in (elements if elements is not None else config.elements()):
        while t + 1 < v.index:
            t += 1
            step(t, None)
            if t % config.report_every == 0:
                yield report(t)
        t = v.index
        step(t, v)
        if t % config.report_every == 0:
            yield report(t)
            pending = None
        else:
            pending = t
    if pending is not None:
        yield report(pending)


def run_stream(config: RunConfig, elements=None, oracle=None) -> list[StepReport]:
    return list(iter_reports(config, elements, oracle))


def _number(x: float) -> str:
    return repr(float(x))


def emit_reports(reports: Iterable[StepReport], fmt: str, path) -> int:
    """Write reports as JSONL or CSV; returns the number written."""
    path = Path(path)
    n = 0
    with open(path, "w", newline="") as fh:
        if fmt == "jsonl":
            for r in reports:
                fh.write(json.dumps(r.as_dict(), separators=(",", ":")) + "\n")
                n += 1
        elif fmt == "csv":
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(FIELDS)
            for r in reports:
                w.writerow([r.t, _number(r.value), ";".join(map(str, r.solution)),
                            r.evals_step, r.evals_cum, r.stored_items, r.num_indices])
                n += 1
        else:
            raise InvalidConfigError(f"unknown output format {fmt!r}")
    return n
