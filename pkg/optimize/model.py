from dataclasses import dataclass, field
from typing import Any, Dict, Optional

from geoent.overlap.overlap import ProductParams, TyingPattern


__all__ = [
    "SampleConfig",
    "OptimizationResult",
]

DEFAULT_STALL_WINDOW = 10_000


@dataclass(frozen=True)
class SampleConfig:
    """
    Settings of one random-sampling run.

    stall_window is the number of trailing samples without improvement after
    which a run counts as steady; None means min(10_000, n_samples).
    """
    n_samples: int
    master_seed: int
    tying: TyingPattern
    include_boundary_rounding: bool = True
    stall_window: Optional[int] = None

    def __post_init__(self):
        if self.n_samples < 1:
            raise ValueError(f"n_samples must be >= 1, got {self.n_samples}")
        if self.stall_window is None:
            object.__setattr__(self, "stall_window", min(DEFAULT_STALL_WINDOW, self.n_samples))
        if not 0 <= self.master_seed < 2 ** 64:
            raise ValueError(f"master_seed must be a 64-bit unsigned integer, got {self.master_seed}")
        if not 1 <= self.stall_window <= self.n_samples:
            raise ValueError(f"stall_window must lie in [1, n_samples={self.n_samples}], got {self.stall_window}")

    @staticmethod
    def create(n_samples: int, master_seed: int, tying: TyingPattern, stall_window: int=DEFAULT_STALL_WINDOW, **kwargs) -> "SampleConfig":
        """ Clamp the stall window to the sample count """
        return SampleConfig(n_samples, master_seed, tying, stall_window=min(stall_window, n_samples), **kwargs)


@dataclass
class OptimizationResult:
    lambda_: float
    best_params: ProductParams
    samples_used: int
    improved_at: int
    method: str                         # sampling | refined | grid
    master_seed: Optional[int] = None
    tying: Optional[TyingPattern] = None
    stall_window: Optional[int] = None
    extra: Dict[str, Any] = field(default_factory=dict)

    @property
    def steady(self) -> Optional[bool]:
        """ Unchanged for at least stall_window trailing samples """
        if self.stall_window is None:
            return None
        return self.samples_used - 1 - self.improved_at >= self.stall_window

    def to_dict(self) -> Dict[str, Any]:
        return {
            "lambda": self.lambda_,
            "best_params": self.best_params.to_dict(),
            "samples_used": self.samples_used,
            "improved_at": self.improved_at,
            "method": self.method,
            "master_seed": self.master_seed,
            "tying": None if self.tying is None else self.tying.to_dict(),
            "steady": self.steady,
            **self.extra,
        }
