"""Count-based sliding-window bookkeeping shared by all algorithms."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InvalidConfigError


@dataclass(frozen=True)
class WindowSpec:
    W: int
    k: int
    epsilon: float = 0.1
    subwindow: int | None = None

    def __post_init__(self):
        if self.W < 1:
            raise InvalidConfigError(f"window size must be >= 1, got {self.W}")
        if self.k < 1:
            raise InvalidConfigError(f"k must be >= 1, got {self.k}")
        if not 0 < self.epsilon < 1:
            raise InvalidConfigError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if self.subwindow is not None and not 1 <= self.subwindow <= self.W:
            raise InvalidConfigError(
                f"sub-window size must satisfy 1 <= W' <= W, got W'={self.subwindow}, W={self.W}"
            )

    @property
    def Wp(self) -> int:
        return self.W if self.subwindow is None else self.subwindow


@dataclass(frozen=True)
class ActiveWindow:
    start: int
    end: int

    def __len__(self):
        return self.end - self.start + 1

    def __contains__(self, index: int) -> bool:
        return self.start <= index <= self.end


def window_start(t: int, W: int) -> int:
    return max(1, t - W + 1)


def active_window(t: int, spec: WindowSpec) -> ActiveWindow:
    if t < 1:
        raise InvalidConfigError(f"time must be >= 1, got {t}")
    return ActiveWindow(window_start(t, spec.W), t)


@dataclass
class StepReport:
    t: int
    value: float
    solution: list[int] = field(default_factory=list)
    evals_step: int = 0
    evals_cum: int = 0
    stored_items: int = 0
    num_indices: int = 0

    def as_dict(self) -> dict:
        return {
            "t": self.t,
            "value": float(self.value),
            "solution": list(self.solution),
            "evals_step": self.evals_step,
            "evals_cum": self.evals_cum,
            "stored_items": self.stored_items,
            "num_indices": self.num_indices,
        }
