"""
MIT License

Copyright (c) 2024-present stylomorph contributors

Permission is hereby granted, free of charge, to any person obtaining a copy
of this software and associated documentation files (the "Software"), to deal
in the Software without restriction, including without limitation the rights
to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
copies of the Software, and to permit persons to whom the Software is
furnished to do so, subject to the following conditions:

The above copyright notice and this permission notice shall be included in all
copies or substantial portions of the Software.

THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
SOFTWARE.
"""

# Experiment reports.
#
# An :class:`ExperimentReport` keeps the effective configuration, the
# cross-validation results and one record per attacked file. Every aggregate
# (success rates, histograms, the impersonation matrix and the family usage
# table) is computed from the records on demand, so a report read back from
# ``report.json`` yields the same aggregates as the one that was written.

from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from ._ntypes import AttackModeT, AttackRecordT, CvReportT
from .attack import AttackResult
from .features import FeatureSpace, changed_feature_ratio, loc_diff, vectorize
from .lang.program import SourceProgram
from .transform import TransformFamily
from .utils import read_json, write_json

__all__ = (
    "LOC_BIN_WIDTH",
    "FEATURE_BIN_WIDTH",
    "REPORT_FILES",
    "ExperimentReport",
    "attack_record",
    "binned",
)

LOC_BIN_WIDTH = 5
FEATURE_BIN_WIDTH = 0.05
REPORT_FILES = (
    "report.json",
    "impersonation_matrix.csv",
    "loc_hist.csv",
    "feat_hist.csv",
    "family_usage.csv",
)


def attack_record(
    *,
    file: str,
    source: str,
    target: Optional[str],
    mode: AttackModeT,
    model: str,
    template: bool,
    original: SourceProgram,
    result: AttackResult,
    space: FeatureSpace,
    verified: bool,
) -> AttackRecordT:
    """Summarise one attack.

    The line diff compares the canonical print of the original with the
    attacked file, which is always canonically printed.
    """
    added, removed, changed = loc_diff(original.canonical_text, result.final_program.canonical_text)
    ratio = changed_feature_ratio(vectorize(original, space), vectorize(result.final_program, space))
    return {
        "file": file,
        "source": source,
        "target": target or "",
        "mode": mode,
        "model": model,
        "template": template,
        "success": bool(result.success),
        "verified": bool(verified),
        "sequence": result.sequence.to_list(),
        "queries": int(result.queries),
        "outer_moves": int(result.outer_moves),
        "loc_diff": {"added": added, "removed": removed, "changed": changed},
        "changed_feature_ratio": ratio,
        "trace": [float(score) for score in result.trace],
        "family_usage": result.family_usage(),
    }


def binned(values: Sequence[float], width: float, upper: Optional[float] = None) -> pd.DataFrame:
    """Counts of ``values`` in bins ``[k * width, (k + 1) * width)`` starting at zero.

    The last bin also takes values equal to its upper edge, as ``np.histogram`` does.
    """
    top = upper if upper is not None else max([width, *values])
    n_bins = max(1, int(np.ceil(round(top / width, 9))))
    if upper is None and n_bins * width <= top:
        n_bins += 1
    edges = np.arange(n_bins + 1) * width
    counts, _ = np.histogram(np.asarray(values, dtype=float), bins=edges)
    return pd.DataFrame({"lower": edges[:-1].round(6), "upper": edges[1:].round(6), "count": counts.astype(int)})


def _rate(records: Sequence[AttackRecordT]) -> Optional[float]:
    if not records:
        return None
    return sum(record["success"] for record in records) / len(records)


@dataclass
class ExperimentReport:
    config: dict
    authors: List[str]
    cv: List[CvReportT] = field(default_factory=list)
    records: List[AttackRecordT] = field(default_factory=list)
    layout: Dict[str, float] = field(default_factory=dict)
    substitute: Dict[str, float] = field(default_factory=dict)

    def add(self, record: AttackRecordT) -> None:
        self.records.append(record)

    def select(
        self,
        mode: Optional[AttackModeT] = None,
        model: Optional[str] = None,
        template: Optional[bool] = None,
        success: Optional[bool] = None,
    ) -> List[AttackRecordT]:
        return [
            record
            for record in self.records
            if (mode is None or record["mode"] == mode)
            and (model is None or record["model"] == model)
            and (template is None or record["template"] == template)
            and (success is None or record["success"] == success)
        ]

    def success_rates(self) -> Dict[str, Optional[float]]:
        """Success rate per attack setting, keyed ``<mode>[+template|-template]/<model>``."""
        rates: Dict[str, Optional[float]] = {}
        for model in sorted({record["model"] for record in self.records}):
            untargeted = self.select("untargeted", model)
            if untargeted:
                rates[f"untargeted/{model}"] = _rate(untargeted)
            for template, tag in ((True, "+template"), (False, "-template")):
                targeted = self.select("targeted", model, template)
                if targeted:
                    rates[f"targeted{tag}/{model}"] = _rate(targeted)
        return rates

    def loc_histogram(self) -> pd.DataFrame:
        totals = [sum(record["loc_diff"].values()) for record in self.select(success=True)]
        return binned(totals, LOC_BIN_WIDTH)

    def feature_histogram(self) -> pd.DataFrame:
        ratios = [record["changed_feature_ratio"] for record in self.select(success=True)]
        return binned(ratios, FEATURE_BIN_WIDTH, upper=1.0)

    def impersonation_matrix(self) -> pd.DataFrame:
        """Targeted success rate per source (rows) and target (columns) author."""
        size = len(self.authors)
        hits = np.zeros((size, size))
        tries = np.zeros((size, size))
        index = {name: idx for idx, name in enumerate(self.authors)}
        for record in self.select("targeted"):
            src, dst = index.get(record["source"]), index.get(record["target"])
            if src is None or dst is None or src == dst:
                continue
            tries[src, dst] += 1
            hits[src, dst] += record["success"]
        rates = np.divide(hits, tries, out=np.zeros_like(hits), where=tries > 0)
        np.fill_diagonal(rates, 0.0)
        return pd.DataFrame(rates, index=pd.Index(self.authors, name="source"), columns=self.authors)

    def family_usage(self) -> pd.DataFrame:
        """Transformations per family in successful attacks, per attack mode."""
        families = [family.value for family in TransformFamily]
        table = pd.DataFrame(0, index=pd.Index(families, name="family"), columns=["untargeted", "targeted"])
        for record in self.select(success=True):
            for family, count in record["family_usage"].items():
                table.loc[family, record["mode"]] += count
        for column in ("untargeted", "targeted"):
            total = table[column].sum()
            table[f"{column}_share"] = (table[column] / total).round(6) if total else 0.0
        return table

    def aggregates(self) -> dict:
        return {
            "success_rates": self.success_rates(),
            "attacks": len(self.records),
            "successes": len(self.select(success=True)),
            "unverified": sum(not record["verified"] for record in self.records),
            "median_loc_diff": self._median_loc_diff(),
            "loc_hist": self.loc_histogram().to_dict(orient="records"),
            "feat_hist": self.feature_histogram().to_dict(orient="records"),
            "family_usage": self.family_usage().reset_index().to_dict(orient="records"),
        }

    def _median_loc_diff(self) -> Optional[float]:
        totals = [sum(record["loc_diff"].values()) for record in self.select("untargeted", success=True)]
        return float(np.median(totals)) if totals else None

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "authors": list(self.authors),
            "cv": list(self.cv),
            "layout": dict(self.layout),
            "substitute": dict(self.substitute),
            "records": list(self.records),
            "aggregates": self.aggregates(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentReport":
        return cls(
            config=data["config"],
            authors=list(data["authors"]),
            cv=list(data.get("cv", [])),
            records=list(data.get("records", [])),
            layout=dict(data.get("layout", {})),
            substitute=dict(data.get("substitute", {})),
        )

    def write(self, directory: Path) -> List[Path]:
        directory.mkdir(parents=True, exist_ok=True)
        write_json(directory / "report.json", self.to_dict())
        self.impersonation_matrix().to_csv(directory / "impersonation_matrix.csv", float_format="%.6f")
        self.loc_histogram().to_csv(directory / "loc_hist.csv", index=False)
        self.feature_histogram().to_csv(directory / "feat_hist.csv", index=False)
        self.family_usage().to_csv(directory / "family_usage.csv")
        return [directory / name for name in REPORT_FILES]

    @classmethod
    def read(cls, directory: Path) -> "ExperimentReport":
        return cls.from_dict(read_json(directory / "report.json"))
