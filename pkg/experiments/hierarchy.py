"""
    Ordering of the basic TI states by the reach of their nearest product
    states, read off the table reports.

    For every two-component family (three rows, c = 1/4, 1/2, 3/4):

        "~"             the coefficient rule predicts all three winning
                        values within HIERARCHY_TOL
        "first > second" the ansatz of `first` wins in at least two rows
        "inconclusive"  anything else

    The ansatz of a component is its seed tying, or the permutation-invariant
    tying for GHZ_N and W_N. An ansatz wins a row when it reaches the row
    maximum and beats every other tied case (1, 2, 3) by more than
    HIERARCHY_TOL. The free case contains every tying and is not a
    competitor. Since the permutation-invariant tying is contained in every
    seed tying, a GHZ_N or W_N component only wins where the other seed case is
    redundant. Relations are reported per family with the rows supporting
    them; nothing is inferred transitively.

    Pairs in ASSERTED_BY_PAPER keep their published order and carry the
    "asserted-by-paper" flag.
"""

import logging
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from geoent.states.qstate import named_state, is_permutation_invariant
from geoent.optimize.cases import CASES
from .catalog import NOT_APPLICABLE
from .tables import CaseReport


__all__ = [
    "SIMILAR",
    "GREATER",
    "INCONCLUSIVE",
    "HIERARCHY_TOL",
    "PairRelation",
    "HierarchyOrdering",
    "infer_hierarchy",
]

logger = logging.getLogger(__name__)

SIMILAR = "~"
GREATER = ">"
INCONCLUSIVE = "inconclusive"

HIERARCHY_TOL = 1e-3

# Cases whose tying belongs to one component
TIED_CASES = (1, 2, 3)

# (larger, smaller) relations the published text sets by hand rather than derives from the tables
ASSERTED_BY_PAPER = frozenset({ ("W_4", "psi_4") })


@dataclass(frozen=True)
class PairRelation:
    """
    Relation between the two components of one family. For GREATER the
    larger one is `first`.
    """
    family: str
    first: str
    second: str
    relation: str
    evidence: Tuple[Tuple[str, Optional[int], Optional[str], Optional[float]], ...] = ()
    flag: Optional[str] = None

    def __str__(self):
        if self.relation == INCONCLUSIVE:
            return f"{self.first} ? {self.second}"
        return f"{self.first} {self.relation} {self.second}"

    def to_dict(self) -> Dict:
        return {
            "family": self.family,
            "first": self.first,
            "second": self.second,
            "relation": self.relation,
            "evidence": [ {"label": label, "case": case, "owner": owner, "lambda": value}
                          for label, case, owner, value in self.evidence ],
            "flag": self.flag,
        }


@dataclass
class HierarchyOrdering:
    relations: List[PairRelation] = field(default_factory=list)

    def relation(self, first: str, second: str) -> Optional[str]:
        """
        Relation seen from (first, second): ">", "<", "~", "inconclusive",
        or None when no family combines the two.
        """
        for r in self.relations:
            if (r.first, r.second) == (first, second):
                return r.relation
            if (r.first, r.second) == (second, first):
                return "<" if r.relation == GREATER else r.relation
        return None

    def for_family(self, family: str) -> Optional[PairRelation]:
        for r in self.relations:
            if r.family == family:
                return r
        return None

    def to_dict(self) -> Dict:
        return { "relations": [ r.to_dict() for r in self.relations ] }


def _case_owner(report: CaseReport, case: int) -> Optional[str]:
    """ Component whose ansatz is the given tied case """
    first, second = report.entry.components
    if case == 1:
        return first
    if case == 2:
        return second
    if case == 3:
        pi = [ name for name in (first, second) if is_permutation_invariant(named_state(name)) ]
        return pi[0] if len(pi) == 1 else None
    return None


def _row_winner(report: CaseReport, tol: float=HIERARCHY_TOL) -> Tuple[Optional[int], Optional[str]]:
    """ Tied case that wins the row by margin, and its owner """
    values = { k: report.case_lambda(k) for k in CASES }
    values = { k: v for k, v in values.items() if v is not None }
    if not values:
        return None, None
    row_max = max(values.values())
    for k in TIED_CASES:
        if k not in values or values[k] < row_max - tol:
            continue
        if all(values[k] - v > tol for j, v in values.items() if j in TIED_CASES and j != k):
            return k, _case_owner(report, k)
    return None, None


def _family_relation(family: str, reports: Sequence[CaseReport]) -> PairRelation:
    first, second = reports[0].entry.components
    wins = [ _row_winner(r) for r in reports ]
    owners = [ owner for _, owner in wins ]
    evidence = tuple((r.label, case, owner, r.lambda_) for r, (case, owner) in zip(reports, wins))
    flag = "asserted-by-paper" if (first, second) in ASSERTED_BY_PAPER or (second, first) in ASSERTED_BY_PAPER else None

    if len(reports) != 3:
        logger.warning("Family %s has %d rows, expected 3", family, len(reports))
        return PairRelation(family, first, second, INCONCLUSIVE, evidence, flag)

    if flag is not None:
        # label reproduced as published, whatever the rows say
        bigger, smaller = next(pair for pair in ASSERTED_BY_PAPER if set(pair) == {first, second})
        return PairRelation(family, bigger, smaller, GREATER, evidence, flag)

    if all(r.prediction != NOT_APPLICABLE and r.lambda_ is not None
           and abs(r.lambda_ - r.prediction) <= HIERARCHY_TOL for r in reports):
        return PairRelation(family, first, second, SIMILAR, evidence, flag)

    for name, other in ((first, second), (second, first)):
        if owners.count(name) >= 2:
            return PairRelation(family, name, other, GREATER, evidence, flag)

    return PairRelation(family, first, second, INCONCLUSIVE, evidence, flag)


def infer_hierarchy(reports: Sequence[CaseReport]) -> HierarchyOrdering:
    """
    Classify the component pair of every family present in the reports.
    """
    by_family: Dict[str, List[CaseReport]] = OrderedDict()
    for r in reports:
        by_family.setdefault(r.entry.family, []).append(r)

    ordering = HierarchyOrdering()
    for family, rows in by_family.items():
        relation = _family_relation(family, rows)
        logger.debug("%s: %s", family, relation)
        ordering.relations.append(relation)
    return ordering
