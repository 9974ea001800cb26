"""
Reports Utility Functions
Correspondence-table and campaign report generation, with CSV, JSON, text and
Excel output.
"""

import json
import os
from datetime import datetime
from typing import Dict, Iterable, Iterator

import pandas as pd

from models import CampaignReport, Protocol, RoundRecord
from utils.errors import InvalidArgumentError
from utils.inference import PROBABILITY, PUBLIC, inference_table

# table name -> (protocol, parties, public label filter)
TABLES = {
    "I": (Protocol.TWO_PARTY_ES, 2, None),
    "II": (Protocol.MULTIPARTY_ES, 3, None),
    "III": (Protocol.MULTIPARTY_ES, 4, "0000"),
}
_TABLE_ALIASES = {"1": "I", "2": "II", "3": "III"}

TABLE_FORMATS = ("csv", "json", "xlsx")
REPORT_FORMATS = ("text", "json")


class ReportGenerator:
    """Handles table and campaign report generation."""

    @staticmethod
    def table_name(which: str) -> str:
        name = str(which).strip().upper()
        name = _TABLE_ALIASES.get(name, name)
        if name not in TABLES:
            raise InvalidArgumentError(f"unknown table {which!r}; expected I, II or III")
        return name

    @staticmethod
    def table_frame(which: str) -> pd.DataFrame:
        """
        Regenerate a correspondence table from the statevector enumeration.

        Args:
            which: Table name ('I', 'II', 'III')

        Returns:
            DataFrame with the public label, one column per party and the
            probability of each row, ordered by (public, Alice, ...)
        """
        protocol, parties, public = TABLES[ReportGenerator.table_name(which)]
        table = inference_table(protocol, parties)
        if public is not None:
            table = table.filter({PUBLIC: public})
        return table.frame.reset_index(drop=True)

    @staticmethod
    def generate_table_report(which: str) -> Dict:
        name = ReportGenerator.table_name(which)
        frame = ReportGenerator.table_frame(name)
        columns = [column for column in frame.columns if column != PROBABILITY]
        return {
            'report_type': f'Table {name}',
            'generated_at': datetime.now().isoformat(),
            'columns': columns,
            'row_count': len(frame),
            'rows': frame.to_dict(orient='records'),
        }

    @staticmethod
    def render_table(frame: pd.DataFrame, format_type: str = 'csv') -> str:
        if format_type == 'csv':
            labels = frame.drop(columns=[PROBABILITY], errors='ignore')
            return labels.to_csv(index=False, lineterminator='\n')
        if format_type == 'json':
            return json.dumps(frame.to_dict(orient='records'), indent=2) + '\n'
        raise InvalidArgumentError(f"tables render as csv or json, not {format_type!r}")

    @staticmethod
    def export_to_excel(frame: pd.DataFrame, file_path: str, sheet_name: str = 'table') -> str:
        """
        Export a table to an Excel workbook.

        Args:
            frame: Table to export
            file_path: Destination .xlsx path

        Returns:
            Path to the generated Excel file
        """
        directory = os.path.dirname(os.path.abspath(file_path))
        os.makedirs(directory, exist_ok=True)
        frame.to_excel(file_path, sheet_name=sheet_name, index=False, engine='openpyxl')
        return file_path

    @staticmethod
    def render_campaign(report: CampaignReport, format_type: str = 'text') -> str:
        data = report.to_dict()
        if format_type == 'json':
            return json.dumps(data, indent=2) + '\n'
        if format_type != 'text':
            raise InvalidArgumentError(f"campaign reports render as text or json, not {format_type!r}")

        config = data.pop('config')
        data.pop('report_type')
        lines = [f"{key}: {_format_value(value)}" for key, value in data.items()]
        lines.append(f"eve: {config['eve']['kind']}")
        if config['eve']['return_policy']:
            lines.append(f"eve_policy: {config['eve']['return_policy']}")
        lines.extend(f"{key}: {_format_value(config[key])}" for key in ('num_parties', 'seed', 'comparison_fraction'))
        return '\n'.join(lines) + '\n'

    @staticmethod
    def campaign_summary(reports: Iterable[CampaignReport]) -> pd.DataFrame:
        """One row per campaign, for side-by-side comparison."""
        rows = []
        for report in reports:
            data = report.to_dict()
            rows.append({
                'protocol': data['protocol'],
                'parties': data['config']['num_parties'],
                'eve': data['config']['eve']['kind'],
                'keep_rate': data['keep_rate'],
                'tested': data['tested'],
                'mismatch_rate': data['mismatch_rate'],
                'mismatch_stderr': data['mismatch_stderr'],
                'eve_accuracy': data['eve_accuracy'],
            })
        return pd.DataFrame(rows)

    @staticmethod
    def transcript_lines(records: Iterable[RoundRecord]) -> Iterator[str]:
        """JSON Lines transcript, one round per line."""
        for record in records:
            yield json.dumps(record.to_dict(), sort_keys=True)


def _format_value(value) -> str:
    if value is None:
        return "n/a"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.6f}"
    return str(value)
