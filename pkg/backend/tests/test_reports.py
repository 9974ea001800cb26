import json

import pandas as pd
import pytest

from models import ProtocolConfig
from utils.campaign import run_campaign
from utils.errors import InvalidArgumentError
from utils.reports import ReportGenerator
from utils.verification import GOLDEN_TABLE_I, GOLDEN_TABLE_III


class TestTables:
    @pytest.mark.parametrize("which, expected", [("I", "I"), ("ii", "II"), ("3", "III")])
    def test_table_name(self, which, expected):
        assert ReportGenerator.table_name(which) == expected

    def test_unknown_table(self):
        with pytest.raises(InvalidArgumentError):
            ReportGenerator.table_name("IV")

    def test_table_i_csv(self):
        text = ReportGenerator.render_table(ReportGenerator.table_frame("I"), "csv")
        lines = text.splitlines()
        assert lines[0] == "public,Alice,Bob"
        assert lines[1:] == [",".join(row) for row in sorted(GOLDEN_TABLE_I)]

    def test_table_iii_columns(self):
        frame = ReportGenerator.table_frame("III")
        assert list(frame.columns) == ["public", "Alice", "Bob", "Carol", "David", "probability"]
        rows = set(frame.drop(columns="probability").itertuples(index=False, name=None))
        assert rows == set(GOLDEN_TABLE_III)

    def test_table_json(self):
        records = json.loads(ReportGenerator.render_table(ReportGenerator.table_frame("II"), "json"))
        assert len(records) == 64
        assert records[0]["probability"] == pytest.approx(1 / 64)

    def test_unsupported_format(self):
        with pytest.raises(InvalidArgumentError):
            ReportGenerator.render_table(ReportGenerator.table_frame("I"), "xml")

    def test_table_report(self):
        report = ReportGenerator.generate_table_report("I")
        assert report["report_type"] == "Table I"
        assert report["columns"] == ["public", "Alice", "Bob"]
        assert report["row_count"] == 16

    def test_excel_export(self, tmp_path):
        path = tmp_path / "out" / "table_i.xlsx"
        ReportGenerator.export_to_excel(ReportGenerator.table_frame("I"), str(path), sheet_name="Table I")
        frame = pd.read_excel(path, sheet_name="Table I", dtype=str, engine="openpyxl")
        assert list(frame.columns) == ["public", "Alice", "Bob", "probability"]
        assert list(frame["Alice"][:4]) == ["00", "01", "10", "11"]


class TestCampaignReports:
    @pytest.fixture(scope="class")
    def report(self):
        return run_campaign(ProtocolConfig.from_settings({"rounds": 40, "seed": 1}))

    def test_text(self, report):
        text = ReportGenerator.render_campaign(report[0], "text")
        assert "keep_rate: 1.000000" in text
        assert "alarm: false" in text
        assert "eve: none" in text
        assert "eve_accuracy: n/a" in text

    def test_json(self, report):
        data = json.loads(ReportGenerator.render_campaign(report[0], "json"))
        assert data["report_type"] == "Campaign Report"
        assert data["rounds"] == 40

    def test_unsupported_format(self, report):
        with pytest.raises(InvalidArgumentError):
            ReportGenerator.render_campaign(report[0], "yaml")

    def test_transcript(self, report):
        lines = list(ReportGenerator.transcript_lines(report[1]))
        assert len(lines) == 40
        assert json.loads(lines[7])["round_index"] == 7

    def test_summary(self, report):
        frame = ReportGenerator.campaign_summary([report[0], report[0]])
        assert len(frame) == 2
        assert frame.loc[0, "protocol"] == "two_party_es"
        assert frame.loc[0, "keep_rate"] == 1.0
