"""
    Brute-force grid oracle over tied product states.
"""

import logging
from typing import Optional

import numpy as np

from geoent.states.qstate import PureState, DimensionMismatch
from geoent.overlap.overlap import TyingPattern, expand_tied, overlap_sq, overlap_sq_batch
from .model import OptimizationResult
from .streams import block_size


__all__ = [
    "GRID_BUDGET",
    "GridBudgetExceeded",
    "grid_oracle",
]

logger = logging.getLogger(__name__)

GRID_BUDGET = 10 ** 9


class GridBudgetExceeded(RuntimeError):
    """
        Requested grid has more points than the budget allows
    """

    def __init__(self, required: int, budget: int, axes: int, resolution: int):
        RuntimeError.__init__(self, f"Grid needs {resolution}^{axes} = {required} points, budget is {budget}")
        self.required = required
        self.budget = budget
        self.axes = axes
        self.resolution = resolution


def _real_nonnegative(psi: PureState) -> bool:
    amps = psi.amplitudes
    return bool(np.all(np.abs(amps.imag) <= 1e-15) and np.all(amps.real >= -1e-15))


def grid_oracle(psi: PureState, tying: TyingPattern, resolution: int,
                budget: int=GRID_BUDGET, drop_phases: Optional[bool]=None) -> OptimizationResult:
    """
    Maximum of overlap_sq over a uniform grid of the class values:
    a on linspace(0, 1, R) (both endpoints included), theta on 2 pi j / R.

    For states with real nonnegative amplitudes equal phases are optimal, so
    the theta axes are dropped unless drop_phases=False. The budget counts the
    axes that are actually gridded.

    Raises:
        GridBudgetExceeded: resolution^axes > budget
    """
    if tying.n_sites != psi.n_sites:
        raise DimensionMismatch(f"Tying covers {tying.n_sites} sites, state has {psi.n_sites}")
    if resolution < 2:
        raise ValueError(f"Grid resolution must be >= 2, got {resolution}")

    if drop_phases is None:
        drop_phases = _real_nonnegative(psi)

    k = tying.n_classes
    axes = k if drop_phases else 2 * k
    required = resolution ** axes
    if required > budget:
        logger.warning("Grid oracle refused: %d^%d points exceed the budget %d", resolution, axes, budget)
        raise GridBudgetExceeded(required, budget, axes, resolution)

    a_axis = np.linspace(0.0, 1.0, resolution)
    theta_axis = 2 * np.pi * np.arange(resolution) / resolution
    shape = (resolution,) * axes
    sites = np.array(tying.class_of)
    batch = max(block_size(psi.n_sites), 1024)

    best_value, best_index = -1.0, 0
    for start in range(0, required, batch):
        flat = np.arange(start, min(start + batch, required))
        idx = np.stack(np.unravel_index(flat, shape), axis=1)
        a = a_axis[idx[:, :k]]
        theta = np.zeros_like(a) if drop_phases else theta_axis[idx[:, k:]]
        values = overlap_sq_batch(psi, a[:, sites], theta[:, sites])
        i = int(np.argmax(values))
        if values[i] > best_value:
            best_value, best_index = float(values[i]), start + i

    idx = np.unravel_index(best_index, shape)
    a = a_axis[list(idx[:k])]
    theta = np.zeros(k) if drop_phases else theta_axis[list(idx[k:])]
    params = expand_tied(tying, a, theta)
    logger.debug("Grid oracle: %d points, best %.9f", required, best_value)
    return OptimizationResult(overlap_sq(psi, params), params, required, best_index, "grid", None, tying, None,
                              {"resolution": resolution, "axes": axes, "phases_gridded": not drop_phases})
