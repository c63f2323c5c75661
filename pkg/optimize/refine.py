"""
    Deterministic local refinement of a tied product state: L-BFGS-B polish
    with the analytic gradient, alternated with bounded line searches along
    every class coordinate.
"""

import logging
from typing import Optional, Tuple

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from geoent.states.qstate import PureState, DimensionMismatch
from geoent.overlap.overlap import (ProductParams, TyingPattern, expand_tied, overlap_sq,
                                    overlap_sq_grad)
from .model import OptimizationResult


__all__ = [
    "refine",
]

logger = logging.getLogger(__name__)

LINE_XATOL = 1e-10
# Steps must beat the current value by more than rounding noise
ACCEPT_EPS = 1e-15


class _TiedObjective:
    """
    overlap_sq as a function of the stacked class values [a_0..a_k-1, theta_0..theta_k-1].
    """

    def __init__(self, psi: PureState, tying: TyingPattern):
        self.psi = psi
        self.tying = tying
        self.k = tying.n_classes
        self.evaluations = 0

    def params(self, x: np.ndarray) -> ProductParams:
        return expand_tied(self.tying, np.clip(x[:self.k], 0.0, 1.0), x[self.k:])

    def value(self, x: np.ndarray) -> float:
        self.evaluations += 1
        return overlap_sq(self.psi, self.params(x))

    def neg_value_and_grad(self, x: np.ndarray) -> Tuple[float, np.ndarray]:
        p = self.params(x)
        self.evaluations += 1
        g = overlap_sq_grad(self.psi, p)
        grad = np.concatenate([ self.tying.reduce(g.d_a), self.tying.reduce(g.d_theta) ])
        return -overlap_sq(self.psi, p), -grad


def _polish(obj: _TiedObjective, x: np.ndarray, value: float) -> Tuple[np.ndarray, float]:
    bounds = [ (0.0, 1.0) ] * obj.k + [ (None, None) ] * obj.k
    try:
        res = minimize(obj.neg_value_and_grad, x, jac=True, method="L-BFGS-B", bounds=bounds,
                       options={"ftol": 1e-15, "gtol": 1e-12, "maxiter": 500})
    except (ValueError, FloatingPointError) as e:
        logger.debug("Gradient polish failed: %s", e)
        return x, value

    cand = np.asarray(res.x, dtype=float)
    if not np.all(np.isfinite(cand)):
        return x, value
    cand[:obj.k] = np.clip(cand[:obj.k], 0.0, 1.0)
    cand_value = obj.value(cand)
    if cand_value > value + ACCEPT_EPS:
        return cand, cand_value
    return x, value


def _line_search(obj: _TiedObjective, x: np.ndarray, value: float, j: int) -> Tuple[np.ndarray, float]:
    """
    Best point along coordinate j. For an a-coordinate the endpoints 0 and 1
    are tried explicitly, for a theta-coordinate the window is one full turn.
    """
    def f(t):
        y = x.copy()
        y[j] = t
        return -obj.value(y)

    if j < obj.k:
        lo, hi = 0.0, 1.0
        trials = [0.0, 1.0]
    else:
        lo, hi = x[j] - np.pi, x[j] + np.pi
        trials = []

    res = minimize_scalar(f, bounds=(lo, hi), method="bounded", options={"xatol": LINE_XATOL})
    trials.append(float(res.x))

    best_x, best_value = x, value
    for t in trials:
        v = -f(t)
        if v > best_value + ACCEPT_EPS:
            best_x = x.copy()
            best_x[j] = t
            best_value = v
    return best_x, best_value


def refine(psi: PureState, start: ProductParams, tying: Optional[TyingPattern]=None,
           tol: float=1e-12, max_sweeps: int=10_000) -> OptimizationResult:
    """
    Local ascent of overlap_sq from start under the tying.

    Every iteration polishes with L-BFGS-B and then line-searches each class
    coordinate in turn. The loop stops when an iteration improves the overlap
    by less than tol or after max_sweeps iterations. Steps are accepted only
    when they increase the overlap, so the result is never below the start.

    Raises:
        ValueError: start does not respect the tying
    """
    if tying is None:
        tying = TyingPattern.free(start.n_sites)
    if tying.n_sites != psi.n_sites or start.n_sites != psi.n_sites:
        raise DimensionMismatch(f"State has {psi.n_sites} sites, tying {tying.n_sites}, start {start.n_sites}")
    for cls in tying.classes():
        if np.ptp(start.a[cls]) > 0 or np.ptp(start.theta[cls]) > 0:
            raise ValueError(f"Start point is not constant on tying class {cls}")

    obj = _TiedObjective(psi, tying)
    a0, theta0 = tying.restrict(start)
    x = np.concatenate([ a0, theta0 ])
    start_value = value = obj.value(x)

    sweeps = 0
    last_improvement = 0
    while sweeps < max_sweeps:
        before = value
        x, value = _polish(obj, x, value)
        for j in range(2 * obj.k):
            x, value = _line_search(obj, x, value, j)
        sweeps += 1
        if value > before:
            last_improvement = sweeps
        if value - before < tol:
            break

    logger.debug("Refinement stopped after %d sweeps (%d evaluations): %.12f -> %.12f",
                 sweeps, obj.evaluations, start_value, value)

    params = obj.params(x)
    return OptimizationResult(overlap_sq(psi, params), params, 0, 0, "refined", None, tying, None,
                              {"sweeps": sweeps, "last_improving_sweep": last_improvement,
                               "start_lambda": start_value})
