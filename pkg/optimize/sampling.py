"""
    Random sampling of tied product states.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Optional, Sequence, Tuple

import numpy as np

from geoent.states.qstate import PureState, DimensionMismatch
from geoent.overlap.overlap import ProductParams, TyingPattern, expand_tied, overlap_sq, overlap_sq_batch
from .model import SampleConfig, OptimizationResult
from .streams import block_size, draw_block


__all__ = [
    "sample_maximize",
]

logger = logging.getLogger(__name__)

# (lambda, sample index, class a, class theta)
_Best = Tuple[float, int, np.ndarray, np.ndarray]


def _evaluate_block(psi: PureState, cfg: SampleConfig, block: int, size: int, stream_key: Sequence[int]) -> _Best:
    """
    Best candidate of one block. The rounded companion of sample i only wins
    over sample i when it is strictly better; ties go to the earliest index.
    """
    bsize = block_size(psi.n_sites)
    a, theta = draw_block(cfg.master_seed, block, bsize, cfg.tying.n_classes, stream_key)
    a, theta = a[:size], theta[:size]
    sites = np.array(cfg.tying.class_of)

    values = overlap_sq_batch(psi, a[:, sites], theta[:, sites])
    cand_a = a
    if cfg.include_boundary_rounding:
        rounded = np.rint(a)
        values_r = overlap_sq_batch(psi, rounded[:, sites], theta[:, sites])
        better = values_r > values
        values = np.where(better, values_r, values)
        cand_a = np.where(better[:, None], rounded, a)

    i = int(np.argmax(values))
    return float(values[i]), block * bsize + i, cand_a[i].copy(), theta[i].copy()


def _product_shortcut(psi: PureState, cfg: SampleConfig) -> Optional[OptimizationResult]:
    """
    A basis state whose bits are constant on every class is reached exactly.
    """
    support = psi.support()
    if len(support) != 1:
        return None
    n = psi.n_sites
    bits = np.array([ (int(support[0]) >> (n - 1 - i)) & 1 for i in range(n) ], dtype=float)
    classes = cfg.tying.classes()
    if any(len(set(bits[c])) > 1 for c in classes):
        return None
    params = expand_tied(cfg.tying, [ bits[c[0]] for c in classes ], np.zeros(cfg.tying.n_classes))
    logger.debug("Product state, sampling skipped")
    return OptimizationResult(overlap_sq(psi, params), params, 0, 0, "sampling",
                              cfg.master_seed, cfg.tying, None, {"product": True})


def sample_maximize(psi: PureState, cfg: SampleConfig, stream_key: Sequence[int]=(), workers: int=1) -> OptimizationResult:
    """
    Best of cfg.n_samples random tied product states.

    Args:
        psi: Target state
        cfg: Sampling settings
        stream_key: Extra key separating independent runs with the same seed
        workers: Threads evaluating blocks concurrently (result does not depend on it)

    Returns:
        OptimizationResult with method "sampling"
    """
    if cfg.tying.n_sites != psi.n_sites:
        raise DimensionMismatch(f"Tying covers {cfg.tying.n_sites} sites, state has {psi.n_sites}")

    shortcut = _product_shortcut(psi, cfg)
    if shortcut is not None:
        return shortcut

    bsize = block_size(psi.n_sites)
    n_blocks = -(-cfg.n_samples // bsize)
    sizes = [ min(bsize, cfg.n_samples - b * bsize) for b in range(n_blocks) ]

    def job(b):
        return _evaluate_block(psi, cfg, b, sizes[b], stream_key)

    if workers > 1 and n_blocks > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            bests = list(pool.map(job, range(n_blocks)))
    else:
        bests = [ job(b) for b in range(n_blocks) ]

    # Reduction in block order keeps the earliest index on ties
    best = bests[0]
    for cand in bests[1:]:
        if cand[0] > best[0]:
            best = cand
        logger.debug("Block reduction: best %.9f at sample %d", best[0], best[1])

    value, index, a, theta = best
    params = expand_tied(cfg.tying, a, theta)
    return OptimizationResult(overlap_sq(psi, params), params, cfg.n_samples, index, "sampling",
                              cfg.master_seed, cfg.tying, cfg.stall_window)
