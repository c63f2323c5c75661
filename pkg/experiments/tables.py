"""
    Reproduce the overlap tables: every catalog row is maximized under the
    four tying cases, the winning case is picked and compared with the
    published values.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Optional, Sequence, TextIO, Tuple, Union

import pandas as pd

from geoent.core.config import load_globals
from geoent.core.manifest import RunManifest, dumps
from geoent.optimize.cases import CASES, CaseOutcome, maximize_cases
from .catalog import DASH, NOT_APPLICABLE, HtieCatalogEntry, predict_coefficient_rule


__all__ = [
    "WINNER_TOL",
    "TableConfig",
    "CaseReport",
    "pick_winner",
    "run_entry",
    "run_table",
    "reports_frame",
    "write_csv",
    "write_json",
]

logger = logging.getLogger(__name__)

# Cases within this distance of the row maximum share the win
WINNER_TOL = 1e-4


@dataclass(frozen=True)
class TableConfig:
    n_samples: int = 100_000
    master_seed: int = 0
    refine: bool = True
    stall_window: int = 10_000
    refine_tol: float = 1e-12
    refine_max_sweeps: int = 10_000
    workers: int = 1

    @staticmethod
    def from_globals(**overrides) -> "TableConfig":
        """
        Defaults from globals.yaml, None-valued overrides ignored.
        """
        settings = load_globals()
        kwargs = {
            "n_samples": int(settings["samples"]),
            "master_seed": int(settings["seed"]),
            "stall_window": int(settings["stall_window"]),
            "refine_tol": float(settings["refine_tol"]),
            "refine_max_sweeps": int(settings["refine_max_sweeps"]),
            "workers": int(settings["workers"]),
        }
        kwargs.update({ k: v for k, v in overrides.items() if v is not None })
        return TableConfig(**kwargs)


@dataclass
class CaseReport:
    entry: HtieCatalogEntry
    outcomes: Dict[int, CaseOutcome]
    winner: Optional[int]
    winning_cases: Tuple[int, ...]
    prediction: Union[float, str] = NOT_APPLICABLE

    @property
    def label(self) -> str:
        return self.entry.label

    @property
    def lambda_(self) -> Optional[float]:
        return None if self.winner is None else self.outcomes[self.winner].lambda_

    @property
    def geometric_entanglement(self) -> Optional[float]:
        return None if self.lambda_ is None else 1.0 - self.lambda_

    @property
    def paper_value(self) -> float:
        return self.entry.paper_value

    @property
    def delta(self) -> Optional[float]:
        return None if self.lambda_ is None else self.lambda_ - self.paper_value

    @property
    def agrees_with_paper(self) -> bool:
        """ The published bold cases meet the winning set """
        return bool(self.entry.bold_cases & set(self.winning_cases))

    def case_lambda(self, case: int, refined: bool=True) -> Optional[float]:
        outcome = self.outcomes.get(case)
        if outcome is None or outcome.redundant:
            return None
        result = outcome.refined if refined and outcome.refined is not None else outcome.sampled
        return None if result is None else result.lambda_

    def case_deltas(self) -> Dict[int, Optional[float]]:
        out = {}
        for case in CASES:
            paper = self.entry.paper_value_by_case.get(case, DASH)
            mine = self.case_lambda(case)
            out[case] = None if paper == DASH or mine is None else mine - float(paper)
        return out

    def to_row(self) -> Dict[str, Any]:
        row = { "label": self.label, "c": float(self.entry.c), "phi": self.entry.phi }
        for case in CASES:
            row[f"case{case}_sampled"] = self.case_lambda(case, refined=False)
        for case in CASES:
            row[f"case{case}_refined"] = self.case_lambda(case, refined=True)
        row["winner"] = self.winner
        row["paper_value"] = self.paper_value
        row["delta"] = self.delta
        row["E_g"] = self.geometric_entanglement
        return row

    def to_dict(self) -> Dict[str, Any]:
        return {
            "label": self.label,
            "components": list(self.entry.components),
            "c": self.entry.c,
            "phi": self.entry.phi,
            "cases": { str(k): v.to_dict() for k, v in sorted(self.outcomes.items()) },
            "winner": self.winner,
            "winning_cases": list(self.winning_cases),
            "lambda": self.lambda_,
            "E_g": self.geometric_entanglement,
            "paper": {
                "by_case": { str(k): v for k, v in sorted(self.entry.paper_value_by_case.items()) },
                "bold": sorted(self.entry.bold_cases),
                "value": self.paper_value,
                "note": self.entry.note,
            },
            "delta": self.delta,
            "case_deltas": { str(k): v for k, v in self.case_deltas().items() },
            "agrees_with_paper": self.agrees_with_paper,
            "coefficient_rule": self.prediction,
        }


def pick_winner(outcomes: Dict[int, CaseOutcome], tol: float=WINNER_TOL) -> Tuple[Optional[int], Tuple[int, ...]]:
    """
    Winning case among the non-redundant ones.

    Every case within tol of the best value belongs to the winning set; the
    winner is the member with the fewest tying classes, lowest case index on ties.
    """
    live = { k: o for k, o in outcomes.items() if not o.redundant and o.lambda_ is not None }
    if not live:
        return None, ()
    best = max(o.lambda_ for o in live.values())
    winning = tuple(sorted(k for k, o in live.items() if o.lambda_ >= best - tol))
    winner = min(winning, key=lambda k: (live[k].tying.n_classes, k))
    return winner, winning


def run_entry(entry: HtieCatalogEntry, cfg: TableConfig) -> CaseReport:
    """
    Maximize one catalog row under every case.
    """
    outcomes = maximize_cases(entry.spec(),
                              n_samples=cfg.n_samples,
                              master_seed=cfg.master_seed,
                              label=entry.label,
                              refine_results=cfg.refine,
                              stall_window=cfg.stall_window,
                              refine_tol=cfg.refine_tol,
                              refine_max_sweeps=cfg.refine_max_sweeps)
    winner, winning = pick_winner(outcomes)
    report = CaseReport(entry, outcomes, winner, winning, predict_coefficient_rule(entry))

    logger.info("%s: case %s wins with %.6f (published %.5f)", entry.label, winner,
                report.lambda_ if report.lambda_ is not None else float("nan"), report.paper_value)
    if not report.agrees_with_paper:
        logger.info("%s: winning cases %s differ from the published %s",
                    entry.label, list(winning), sorted(entry.bold_cases))
    return report


def run_table(entries: Iterable[HtieCatalogEntry], cfg: Optional[TableConfig]=None) -> List[CaseReport]:
    """
    Run every row. Rows are independent; with cfg.workers > 1 they are spread
    over worker processes, results are returned in entry order.
    """
    if cfg is None:
        cfg = TableConfig.from_globals()
    entries = list(entries)
    if cfg.workers > 1 and len(entries) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as executor:
            return list(executor.map(run_entry, entries, [cfg] * len(entries)))
    return [ run_entry(entry, cfg) for entry in entries ]


def reports_frame(reports: Sequence[CaseReport]) -> pd.DataFrame:
    """
    One row per report. Redundant cases are NaN.
    """
    df = pd.DataFrame([ r.to_row() for r in reports ])
    df["winner"] = df["winner"].astype("Int64")
    return df


def write_csv(reports: Sequence[CaseReport], file: TextIO, manifest: Optional[RunManifest]=None) -> None:
    """
    CSV with six significant digits, preceded by the manifest as comment lines.
    """
    if manifest is not None:
        for line in manifest.comment_lines():
            file.write(line + "\n")
    reports_frame(reports).to_csv(file, index=False, float_format="%.6g")


def write_json(reports: Sequence[CaseReport], file: TextIO, manifest: Optional[RunManifest]=None, **extra) -> Dict[str, Any]:
    """
    JSON document with full precision. Extra keyword arguments are added to
    the payload and covered by the manifest digest.
    """
    payload = { "rows": [ r.to_dict() for r in reports ], **extra }
    if manifest is not None:
        manifest.seal(payload)
        payload = { "manifest": manifest.to_dict(), **payload }
    file.write(dumps(payload, indent=2))
    file.write("\n")
    return payload
