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

import numpy as np
import pandas as pd
import pytest

from stylomorph.attack import AttackResult
from stylomorph.features import fit_space
from stylomorph.report import REPORT_FILES, ExperimentReport, attack_record, binned
from stylomorph.transform import TransformationSequence

AUTHORS = ["author00", "author01", "author02"]


def _record(source, target="", mode="untargeted", model="random_forest", template=False, success=True, **extra):
    record = {
        "file": f"corpus/{source}/sorting.mc",
        "source": source,
        "target": target,
        "mode": mode,
        "model": model,
        "template": template,
        "success": success,
        "verified": True,
        "sequence": [],
        "queries": 10,
        "outer_moves": 1,
        "loc_diff": {"added": 1, "removed": 0, "changed": 2},
        "changed_feature_ratio": 0.12,
        "trace": [0.5],
        "family_usage": {},
    }
    record.update(extra)
    return record


@pytest.fixture
def report():
    report = ExperimentReport(config={"attack": {"patience": 2}}, authors=list(AUTHORS))
    report.add(_record("author00", family_usage={"control": 2, "misc": 1}))
    report.add(_record("author01", success=False))
    report.add(_record("author00", "author01", mode="targeted", template=True))
    report.add(_record("author00", "author01", mode="targeted", template=True, success=False))
    report.add(_record("author01", "author02", mode="targeted", family_usage={"template": 1}))
    report.add(_record("author02", "author00", mode="targeted", model="linear_softmax", success=False))
    return report


class TestBinned:
    def test_counts(self):
        table = binned([3, 7, 12], 5)
        assert list(table["lower"]) == [0, 5, 10]
        assert list(table["count"]) == [1, 1, 1]

    def test_upper_edge_goes_to_last_bin(self):
        table = binned([0.0, 0.5, 1.0], 0.05, upper=1.0)
        assert len(table) == 20
        assert table["count"].sum() == 3
        assert table["count"].iloc[0] == 1
        assert table["count"].iloc[-1] == 1

    def test_empty(self):
        assert binned([], 5)["count"].sum() == 0


class TestAggregates:
    def test_success_rates(self, report):
        rates = report.success_rates()
        assert rates["untargeted/random_forest"] == pytest.approx(0.5)
        assert rates["targeted+template/random_forest"] == pytest.approx(0.5)
        assert rates["targeted-template/random_forest"] == pytest.approx(1.0)
        assert rates["targeted-template/linear_softmax"] == pytest.approx(0.0)
        assert "untargeted/linear_softmax" not in rates

    def test_impersonation_matrix(self, report):
        matrix = report.impersonation_matrix()
        assert matrix.shape == (3, 3)
        assert list(matrix.columns) == AUTHORS
        assert matrix.loc["author00", "author01"] == pytest.approx(0.5)
        assert matrix.loc["author01", "author02"] == pytest.approx(1.0)
        assert matrix.loc["author02", "author00"] == 0.0
        assert np.all(np.diag(matrix.to_numpy()) == 0.0)

    def test_family_usage(self, report):
        table = report.family_usage()
        assert table.loc["control", "untargeted"] == 2
        assert table.loc["template", "targeted"] == 1
        assert table.loc["control", "untargeted_share"] == pytest.approx(0.666667)
        assert table["targeted_share"].sum() == pytest.approx(1.0)

    def test_histograms(self, report):
        assert report.loc_histogram()["count"].sum() == len(report.select(success=True))
        assert report.feature_histogram()["count"].sum() == len(report.select(success=True))

    def test_summary(self, report):
        aggregates = report.aggregates()
        assert aggregates["attacks"] == 6
        assert aggregates["successes"] == 3
        assert aggregates["unverified"] == 0
        assert aggregates["median_loc_diff"] == 3.0


class TestPersistence:
    def test_write_and_read(self, report, tmp_path):
        paths = report.write(tmp_path)
        assert [path.name for path in paths] == list(REPORT_FILES)
        assert all(path.exists() for path in paths)
        restored = ExperimentReport.read(tmp_path)
        assert restored.aggregates() == report.aggregates()
        assert restored.records == report.records

    def test_matrix_csv(self, report, tmp_path):
        report.write(tmp_path)
        matrix = pd.read_csv(tmp_path / "impersonation_matrix.csv", index_col=0)
        assert matrix.loc["author00", "author01"] == pytest.approx(0.5)


class TestAttackRecord:
    def test_unchanged_program(self, small_corpus):
        programs = [program for program, _ in small_corpus.dataset()]
        space = fit_space(programs, selection_cap=100)
        original = programs[0]
        result = AttackResult(
            success=False,
            sequence=TransformationSequence(),
            final_program=original,
            final_scores=np.zeros(4),
            outer_moves=2,
            queries=7,
        )
        record = attack_record(
            file="corpus/author00/sum_pairs.mc",
            source="author00",
            target=None,
            mode="untargeted",
            model="random_forest",
            template=False,
            original=original,
            result=result,
            space=space,
            verified=True,
        )
        assert record["target"] == ""
        assert record["loc_diff"] == {"added": 0, "removed": 0, "changed": 0}
        assert record["changed_feature_ratio"] == 0.0
        assert record["queries"] == 7
        assert record["sequence"] == []
