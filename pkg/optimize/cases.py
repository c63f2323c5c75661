"""
    The four tying ansaetze of a hybrid state:

        case 0: free (every site its own class)
        case 1: two classes from the seed of component 1
        case 2: two classes from the seed of component 2
        case 3: permutation invariant (one class)

    A seed case is redundant when its tying is the permutation-invariant one
    or its component is itself permutation invariant (GHZ, W).
"""

import logging
from dataclasses import dataclass, replace
from typing import Dict, Iterable, Optional, Tuple, Union

from geoent.states.qstate import PureState, HybridSpec, superpose, seed_of, is_permutation_invariant
from geoent.overlap.overlap import TyingPattern, tying_from_seed
from .model import SampleConfig, OptimizationResult
from .sampling import sample_maximize
from .refine import refine
from .streams import derive_seed


__all__ = [
    "CASES",
    "CaseOutcome",
    "case_tyings",
    "maximize_cases",
]

logger = logging.getLogger(__name__)

CASES = (0, 1, 2, 3)


@dataclass
class CaseOutcome:
    case: int
    tying: Optional[TyingPattern]
    redundant: bool
    reason: str = ""
    sampled: Optional[OptimizationResult] = None
    refined: Optional[OptimizationResult] = None

    @property
    def best(self) -> Optional[OptimizationResult]:
        return self.refined if self.refined is not None else self.sampled

    @property
    def lambda_(self) -> Optional[float]:
        return None if self.best is None else self.best.lambda_

    def to_dict(self):
        return {
            "case": self.case,
            "tying": None if self.tying is None else self.tying.to_dict(),
            "redundant": self.redundant,
            "reason": self.reason,
            "sampled": None if self.sampled is None else self.sampled.to_dict(),
            "refined": None if self.refined is None else self.refined.to_dict(),
        }


def _as_spec(psi_spec: Union[HybridSpec, PureState]) -> HybridSpec:
    if isinstance(psi_spec, PureState):
        return HybridSpec(((psi_spec, 1.0),))
    return psi_spec


def case_tyings(psi_spec: Union[HybridSpec, PureState]) -> Dict[int, Tuple[Optional[TyingPattern], bool, str]]:
    """
    case -> (tying, redundant, reason)
    """
    spec = _as_spec(psi_spec)
    n = spec.n_sites
    out = {
        0: (TyingPattern.free(n), False, ""),
        3: (TyingPattern.permutation_invariant(n), False, ""),
    }
    for case in (1, 2):
        if case > len(spec.components):
            out[case] = (None, True, "no such component")
            continue
        component = spec.states[case - 1]
        seed = seed_of(component)
        if seed is None:
            out[case] = (None, True, "component is not a basic TI state")
            continue
        tying = tying_from_seed(seed)
        if tying.is_permutation_invariant:
            out[case] = (tying, True, "seed tying is permutation invariant")
        elif is_permutation_invariant(component):
            out[case] = (tying, True, "component is permutation invariant")
        else:
            out[case] = (tying, False, "")
    return out


def maximize_cases(psi_spec: Union[HybridSpec, PureState],
                   n_samples: int=100_000,
                   master_seed: int=0,
                   label: str="",
                   refine_results: bool=True,
                   stall_window: int=10_000,
                   include_boundary_rounding: bool=True,
                   cases: Iterable[int]=CASES,
                   refine_tol: float=1e-12,
                   refine_max_sweeps: int=10_000,
                   workers: int=1) -> Dict[int, CaseOutcome]:
    """
    Sample (and refine) the hybrid state under every non-redundant case.

    Every case draws from its own stream seeded by derive_seed(master_seed, label, case).
    Redundant cases are returned with their tying and reason only; nothing is
    sampled for them.
    """
    spec = _as_spec(psi_spec)
    psi = superpose(spec)
    if psi.orthogonal is False:
        logger.warning("Components of %s are not orthogonal", label or psi.label)

    outcomes = {}
    for case, (tying, redundant, reason) in sorted(case_tyings(spec).items()):
        if case not in cases:
            continue
        outcome = CaseOutcome(case, tying, redundant, reason)
        outcomes[case] = outcome
        if redundant:
            logger.debug("%s case %d redundant: %s", label, case, reason)
            continue

        seed = derive_seed(master_seed, label, case)
        cfg = SampleConfig.create(n_samples, seed, tying, stall_window,
                                  include_boundary_rounding=include_boundary_rounding)
        outcome.sampled = sample_maximize(psi, cfg, workers=workers)
        logger.debug("%s case %d sampled %.6f", label, case, outcome.sampled.lambda_)

        if refine_results:
            r = refine(psi, outcome.sampled.best_params, tying, tol=refine_tol, max_sweeps=refine_max_sweeps)
            s = outcome.sampled
            outcome.refined = replace(r, samples_used=s.samples_used, improved_at=s.improved_at,
                                      master_seed=s.master_seed, stall_window=s.stall_window)
            logger.debug("%s case %d refined %.9f", label, case, outcome.refined.lambda_)

    return outcomes
