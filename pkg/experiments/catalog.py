"""
    Catalog of the hybrid TI entangled states reproduced by the tables:
    31 two-component families, each at c = 1/4, 1/2 and 3/4, together with
    the published per-case maximal overlaps.
"""

import os
import math
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple, Union

import numpy as np
import yaml

from geoent.states.qstate import (
    PureState, HybridSpec, UnknownFamily, named_state, superpose, term_periods, common_weight
)


__all__ = [
    "DASH",
    "NOT_APPLICABLE",
    "TABLE_PHI",
    "TABLE_SETS",
    "UnknownFamily",
    "HtieCatalogEntry",
    "load_paper_tables",
    "build_catalog",
    "select_set",
    "predict_coefficient_rule",
]

logger = logging.getLogger(__name__)

DASH = "dash"
NOT_APPLICABLE = "not-applicable"
TABLE_PHI = math.pi / 3
TABLE_SETS = ("A", "B", "C", "D", "E")

PaperValue = Union[Fraction, float, str]

_tables: Optional[Dict] = None


def load_paper_tables(reload: bool=False) -> Dict:
    """
    Load the embedded table data (cached).
    """
    global _tables
    if _tables is not None and not reload:
        return _tables
    with open(os.path.join(os.path.dirname(__file__), "paper_tables.yaml"), "r") as file:
        _tables = yaml.safe_load(file)
    return _tables


def _parse_value(raw) -> Tuple[PaperValue, bool]:
    """ Table cell -> (value, bold) """
    if isinstance(raw, (int, float)):
        return float(raw), False
    text = str(raw).strip()
    if text == "-":
        return DASH, False
    bold = text.startswith("*")
    text = text.lstrip("*")
    if "/" in text:
        return Fraction(text), bold
    return float(text), bold


@dataclass(frozen=True)
class HtieCatalogEntry:
    """
    One table row: sqrt(c)|first> + e^{i phi} sqrt(1-c)|second>.
    """
    label: str
    components: Tuple[str, str]
    c: Fraction
    phi: float
    paper_value_by_case: Dict[int, PaperValue] = field(compare=False)
    bold_cases: FrozenSet[int] = frozenset()
    table: str = ""
    note: Optional[str] = None

    @property
    def family(self) -> str:
        return self.label.split("-")[0]

    @property
    def bold_case(self) -> int:
        return min(self.bold_cases)

    @property
    def paper_value(self) -> float:
        """ Row maximum as printed (the bold value) """
        return max(float(self.paper_value_by_case[k]) for k in self.bold_cases)

    @property
    def paper_value_exact(self) -> bool:
        return all(isinstance(self.paper_value_by_case[k], Fraction) for k in self.bold_cases)

    def coefficients(self) -> Tuple[complex, complex]:
        c = float(self.c)
        return np.sqrt(c), np.exp(1j * self.phi) * np.sqrt(1 - c)

    def spec(self) -> HybridSpec:
        first, second = self.coefficients()
        return HybridSpec(((named_state(self.components[0]), first),
                           (named_state(self.components[1]), second)))

    def state(self) -> PureState:
        psi = superpose(self.spec())
        if psi.orthogonal is False:
            logger.warning("Table row %s has non-orthogonal components", self.label)
        return psi

    def to_dict(self) -> Dict:
        return {
            "label": self.label,
            "components": list(self.components),
            "c": self.c,
            "phi": self.phi,
            "paper": { str(k): v for k, v in sorted(self.paper_value_by_case.items()) },
            "bold": sorted(self.bold_cases),
            "note": self.note,
        }


def build_catalog(phi: float=TABLE_PHI) -> List[HtieCatalogEntry]:
    """
    All table rows in table order.
    """
    data = load_paper_tables()
    coefficients = { int(k): Fraction(v) for k, v in data["coefficients"].items() }
    notes = data.get("notes") or {}

    entries = []
    for label, raw in data["rows"].items():
        family_name, row = label.split("-")
        family = data["families"][family_name]
        values, bold = {}, set()
        for case, cell in enumerate(raw):
            values[case], is_bold = _parse_value(cell)
            if is_bold:
                bold.add(case)
        if family.get("swap_seed_columns"):
            values[1], values[2] = values[2], values[1]
            bold = { {1: 2, 2: 1}.get(k, k) for k in bold }

        entries.append(HtieCatalogEntry(
            label=label,
            components=tuple(family["components"]),
            c=coefficients[int(row)],
            phi=phi,
            paper_value_by_case=values,
            bold_cases=frozenset(bold),
            table=family["table"],
            note=notes.get(label),
        ))
    return entries


def select_set(entries: Sequence[HtieCatalogEntry], name: str) -> List[HtieCatalogEntry]:
    """
    Rows of one table ("A".."E") or "all". Unknown set names raise UnknownFamily.
    """
    if name == "all":
        return list(entries)
    if name not in TABLE_SETS:
        raise UnknownFamily(f"Unknown table set {name!r}, expected one of {', '.join(TABLE_SETS)} or all")
    return [ e for e in entries if e.family.startswith(name) ]


def predict_coefficient_rule(entry: HtieCatalogEntry) -> Union[float, str]:
    """
    Maximal overlap predicted from the superposition coefficients alone:
    the larger of c w_1 and (1 - c) w_2, w_k being the common squared
    amplitude of component k. Families with a component whose terms have
    period N give NOT_APPLICABLE.
    """
    c = float(entry.c)
    weights = []
    for name in entry.components:
        state = named_state(name)
        if state.n_sites in term_periods(state):
            return NOT_APPLICABLE
        w = common_weight(state)
        if w is None:
            return NOT_APPLICABLE
        weights.append(w)
    return max(c * weights[0], (1 - c) * weights[1])
