"""
Markdown summaries of sweep and validation results.
"""

import logging
import os
from typing import Any, List, Optional, Sequence, Union

import pandas as pd

logger = logging.getLogger(__name__)


def _format_cell(value: Any, digits: int) -> str:
    if isinstance(value, float):
        return f"{value:.{digits}g}"
    return str(value)


class ReportGenerator:
    """Generate markdown reports for crossover runs."""

    def __init__(self, output_dir: str = "results", digits: int = 6):
        self.output_dir = output_dir
        self.digits = digits
        self.report_content: List[str] = []

    def add_header(self, title: str, level: int = 1):
        """Add a header to the report."""
        self.report_content.append(f"{'#' * level} {title}\n")

    def add_text(self, text: str):
        """Add plain text to the report."""
        self.report_content.append(f"{text}\n")

    def add_table(self, data: Union[pd.DataFrame, Sequence[Sequence[Any]]],
                  headers: Optional[Sequence[str]] = None):
        """
        Add a table with columns padded to a fixed width.

        Args:
            data: DataFrame, or a list of rows when headers are given
            headers: Column titles; taken from the DataFrame when omitted
        """
        if isinstance(data, pd.DataFrame):
            headers = list(data.columns) if headers is None else list(headers)
            rows = [list(row) for row in data.itertuples(index=False)]
        else:
            if headers is None:
                raise ValueError("headers are required for a list of rows")
            rows = [list(row) for row in data]

        cells = [[str(h) for h in headers]] + [[_format_cell(v, self.digits) for v in row] for row in rows]
        widths = [max(len(row[i]) for row in cells) for i in range(len(headers))]

        def line(row: Sequence[str]) -> str:
            return "|" + "|".join(f" {cell:<{widths[i]}} " for i, cell in enumerate(row)) + "|"

        self.report_content.append(line(cells[0]))
        self.report_content.append("|" + "|".join(" " + "-" * w + " " for w in widths) + "|")
        for row in cells[1:]:
            self.report_content.append(line(row))
        self.report_content.append("")

    def add_list(self, items: Sequence[str], ordered: bool = False):
        """Add a list to the report."""
        for i, item in enumerate(items, 1):
            self.report_content.append(f"{i}. {item}" if ordered else f"- {item}")
        self.report_content.append("")

    def add_code_block(self, code: str, language: str = ""):
        """Add a code block to the report."""
        self.report_content.append(f"```{language}")
        self.report_content.append(code)
        self.report_content.append("```\n")

    def render(self) -> str:
        return '\n'.join(self.report_content)

    def save_report(self, filename: str = "crossover_report.md") -> str:
        """Save the report to a markdown file."""
        if self.output_dir:
            os.makedirs(self.output_dir, exist_ok=True)
        filepath = os.path.join(self.output_dir, filename)
        with open(filepath, 'w', encoding='utf-8') as f:
            f.write(self.render())
        logger.info(f"Report saved to: {filepath}")
        return filepath
