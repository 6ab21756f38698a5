import pandas as pd
import pytest

from src.reporting.report_generator import ReportGenerator


def test_table_from_frame():
    report = ReportGenerator(digits=3)
    report.add_table(pd.DataFrame({'branch': [0, 1], 'x': [-0.51234, 0.5]}))
    lines = report.render().splitlines()
    assert lines[0] == "| branch | x      |"
    assert lines[1] == "| ------ | ------ |"
    assert lines[2] == "| 0      | -0.512 |"
    assert lines[3] == "| 1      | 0.5    |"


def test_table_from_rows_needs_headers():
    report = ReportGenerator()
    with pytest.raises(ValueError):
        report.add_table([[1, 2]])
    report.add_table([[1, 2]], headers=['a', 'b'])
    assert "| a | b |" in report.render()


def test_sections_and_save(tmp_path):
    report = ReportGenerator(output_dir=str(tmp_path / "reports"))
    report.add_header("Run")
    report.add_header("Settings", level=2)
    report.add_list(["mode = toy", "format = csv"])
    report.add_list(["first", "second"], ordered=True)
    report.add_code_block("mode = toy", language="ini")
    report.add_text("done")
    path = report.save_report("run.md")
    text = (tmp_path / "reports" / "run.md").read_text(encoding='utf-8')
    assert path.endswith("run.md")
    assert text.startswith("# Run\n")
    assert "## Settings" in text
    assert "- mode = toy" in text
    assert "2. second" in text
    assert "```ini\nmode = toy\n```" in text
