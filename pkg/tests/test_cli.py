import json
import os
from fractions import Fraction

import pandas as pd
import pytest

from src.cli.config import RunConfig, load_config, parse_config, parse_yaml_config, with_overrides
from src.cli.runner import (EXIT_CONFIG_ERROR, EXIT_NUMERIC_FAILURE, EXIT_OK, build_table,
                            grid_points, run, write_report)
from src.main import main
from src.models.errors import ConfigError

RUNS_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "config", "runs")


def read_csv(path):
    with open(path, encoding='utf-8') as f:
        lines = f.read().splitlines()
    header = {}
    for line in lines:
        if not line.startswith('#'):
            break
        key, value = line[2:].split(' = ', 1)
        header[key] = value
    return header, pd.read_csv(path, comment='#')


class TestParseConfig:
    def test_defaults(self):
        config = parse_config("")
        assert config == RunConfig()
        assert config.mode == 'spectrum'
        assert config.lambdas == (Fraction(1),)
        assert config.inv_as_range == (Fraction(-10), Fraction(10), Fraction(1, 10))
        assert config.branches == (0, 1, 2)
        assert config.K_schedule == (8, 12, 16, 20)
        assert config.resolved_output_path() == 'results/spectrum.csv'

    def test_full_file(self):
        text = """
        # cigar trap
        mode = entanglement
        lambda = 5/6
        r0_ratio = 0.04
        inv_as_range = -10, 40, 0.5   # hi included
        branches = 1
        K_schedule = 8, 12
        tol = 1e-3
        format = json
        output_path = out/ent.json
        """
        config = parse_config(text)
        assert config.mode == 'entanglement'
        assert config.lambdas == (Fraction(5, 6),)
        assert config.r0_ratio == Fraction(1, 25)
        assert config.inv_as_range == (Fraction(-10), Fraction(40), Fraction(1, 2))
        assert config.branches == (1,)
        assert config.K_schedule == (8, 12)
        assert config.tol == Fraction(1, 1000)
        assert config.resolved_output_path() == 'out/ent.json'

    def test_multiple_lambdas(self):
        config = parse_config("lambda = 5/6, 1, 7/6")
        assert config.lambdas == (Fraction(5, 6), Fraction(1), Fraction(7, 6))

    def test_range_aliases(self):
        config = parse_config("lo = -2\nhi = 3\nstep = 1/4")
        assert config.inv_as_range == (Fraction(-2), Fraction(3), Fraction(1, 4))

    def test_negative_step_names_key_and_line(self):
        with pytest.raises(ConfigError) as info:
            parse_config("mode = spectrum\nstep = -1\n")
        assert info.value.key == 'step'
        assert info.value.line == 2
        assert "line 2" in str(info.value)

    @pytest.mark.parametrize("text,key", [
        ("mode = spectra", 'mode'),
        ("format = xml", 'format'),
        ("lambda = 0", 'lambda'),
        ("lambda = abc", 'lambda'),
        ("r0_ratio = -0.1", 'r0_ratio'),
        ("inv_as_range = 1, 0, 0.1", 'inv_as_range'),
        ("inv_as_range = 0, 1", 'inv_as_range'),
        ("branches = 0, -1", 'branches'),
        ("branches = 1.5", 'branches'),
        ("K_schedule = 8, 7", 'K_schedule'),
        ("K_schedule = 12, 8", 'K_schedule'),
        ("tol = 0", 'tol'),
        ("colour = red", 'colour'),
    ])
    def test_invalid_values(self, text, key):
        with pytest.raises(ConfigError) as info:
            parse_config(text)
        assert info.value.key == key

    def test_duplicate_key(self):
        with pytest.raises(ConfigError) as info:
            parse_config("tol = 0.01\ntol = 0.02")
        assert info.value.line == 2

    def test_missing_equals(self):
        with pytest.raises(ConfigError) as info:
            parse_config("mode spectrum")
        assert info.value.line == 1

    def test_yaml(self):
        config = parse_yaml_config("mode: toy\nlambda: [5/6, 1]\ng_range: [0, 2, 0.5]\nformat: json\n")
        assert config.mode == 'toy'
        assert config.lambdas == (Fraction(5, 6), Fraction(1))
        assert config.g_range == (Fraction(0), Fraction(2), Fraction(1, 2))

    def test_yaml_must_be_mapping(self):
        with pytest.raises(ConfigError):
            parse_yaml_config("- mode\n- toy\n")

    def test_load_by_extension(self, tmp_path):
        text_file = tmp_path / "run.cfg"
        text_file.write_text("mode = toy\n", encoding='utf-8')
        yaml_file = tmp_path / "run.yaml"
        yaml_file.write_text("mode: validate\n", encoding='utf-8')
        assert load_config(str(text_file)).mode == 'toy'
        assert load_config(str(yaml_file)).mode == 'validate'
        with pytest.raises(ConfigError):
            load_config(str(tmp_path / "missing.cfg"))

    def test_overrides(self):
        config = with_overrides(RunConfig(), mode='toy', format=None)
        assert config.mode == 'toy'
        assert config.format == 'csv'
        with pytest.raises(ConfigError):
            with_overrides(RunConfig(), format='xml')


class TestGridPoints:
    def test_includes_hi(self):
        assert grid_points(Fraction(-1), Fraction(1), Fraction(1, 2)) == [-1.0, -0.5, 0.0, 0.5, 1.0]

    def test_exact_steps(self):
        points = grid_points(Fraction(-10), Fraction(10), Fraction(1, 10))
        assert len(points) == 201
        assert points[100] == 0.0
        assert points[-1] == 10.0
        assert points[3] == -9.7

    def test_hi_off_grid(self):
        assert grid_points(Fraction(0), Fraction(1), Fraction(2, 5)) == [0.0, 0.4, 0.8]


class TestRun:
    def test_toy_csv(self, tmp_path, settings):
        path = tmp_path / "toy.csv"
        config = RunConfig(mode='toy', g_range=(Fraction(0), Fraction(2), Fraction(1, 2)),
                           output_path=str(path))
        assert run(config, settings) == EXIT_OK
        header, df = read_csv(path)
        assert header['mode'] == 'toy'
        assert header['g_range'] == '0, 2, 1/2'
        assert 'version' in header
        assert list(df.columns) == ['g_over_gap', 'entropy']
        assert list(df['g_over_gap']) == [0.0, 0.5, 1.0, 1.5, 2.0]
        assert df['entropy'].iloc[0] == 0.0

    def test_toy_json(self, tmp_path, settings):
        path = tmp_path / "toy.json"
        config = RunConfig(mode='toy', format='json', g_range=(Fraction(0), Fraction(1), Fraction(1, 2)),
                           output_path=str(path))
        assert run(config, settings) == EXIT_OK
        data = json.loads(path.read_text(encoding='utf-8'))
        assert data['header']['format'] == 'json'
        assert [row['g_over_gap'] for row in data['rows']] == [0.0, 0.5, 1.0]
        assert set(data['rows'][0]) == {'g_over_gap', 'entropy'}

    def test_deterministic_output(self, tmp_path, settings):
        outputs = []
        for name in ("a.csv", "b.csv"):
            path = tmp_path / name
            config = RunConfig(inv_as_range=(Fraction(-1), Fraction(1), Fraction(1)),
                               branches=(0, 1), output_path=str(path))
            assert run(config, settings) == EXIT_OK
            outputs.append(path.read_bytes().replace(name.encode(), b''))
        assert outputs[0] == outputs[1]

    def test_spectrum_rows_sorted_with_lambda_column(self, settings):
        config = RunConfig(lambdas=(Fraction(7, 6), Fraction(5, 6)),
                           inv_as_range=(Fraction(0), Fraction(1), Fraction(1, 2)), branches=(1, 0))
        df = build_table(config, settings)
        assert list(df.columns) == ['inv_as', 'branch', 'x', 'beta2', 'lambda']
        assert len(df) == 12
        keys = list(zip(df['lambda'], df['branch'], df['inv_as']))
        assert keys == sorted(keys)
        assert df['lambda'].iloc[0] == pytest.approx(5.0 / 6.0)

    def test_single_lambda_has_no_lambda_column(self, settings):
        config = RunConfig(inv_as_range=(Fraction(0), Fraction(1), Fraction(1)), branches=(1,))
        assert list(build_table(config, settings).columns) == ['inv_as', 'branch', 'x', 'beta2']

    def test_entanglement_columns(self, settings):
        config = RunConfig(mode='entanglement', inv_as_range=(Fraction(0), Fraction(1), Fraction(1)),
                           branches=(1,), K_schedule=(4, 6))
        df = build_table(config, settings)
        assert list(df.columns) == ['inv_as', 'branch', 'K', 'spatial_entropy', 'total_entropy',
                                    'converged', 'extrapolated']
        assert len(df) == 2

    def test_report(self, tmp_path, settings):
        report = tmp_path / "summary.md"
        config = RunConfig(inv_as_range=(Fraction(0), Fraction(1), Fraction(1)), branches=(1,),
                           output_path=str(tmp_path / "s.csv"), report=str(report))
        assert run(config, settings) == EXIT_OK
        text = report.read_text(encoding='utf-8')
        assert text.startswith("# Crossover run: spectrum")
        assert "min_x" in text
        assert "```ini\nmode = spectrum\n" in text

    def test_validate_report_lists_failed_checks(self, tmp_path):
        df = pd.DataFrame({'check': ['toy_model:saturation', 'curve_shape'],
                           'passed': [True, False], 'value': [1.0, 0.5],
                           'target': [1.0, 0.6], 'detail': ['', '']})
        path = write_report(df, RunConfig(mode='validate'), {'mode': 'validate'},
                            str(tmp_path / "validate.md"))
        text = open(path, encoding='utf-8').read()
        assert "**Passed:** 1 of 2" in text
        assert text.split("### Failed", 1)[1].strip().splitlines()[0] == "- curve_shape"

    def test_numeric_failure_exit(self, tmp_path):
        settings_file = tmp_path / "tight.yaml"
        settings_file.write_text("spectrum:\n  lower_bound_limit: -2.0\n", encoding='utf-8')
        config_file = tmp_path / "run.cfg"
        config_file.write_text(f"inv_as_range = -10, -9, 1\nbranches = 0\n"
                               f"output_path = {tmp_path / 'out.csv'}\n", encoding='utf-8')
        assert main(str(config_file), settings_path=str(settings_file)) == EXIT_NUMERIC_FAILURE

    def test_config_error_exit(self, tmp_path):
        config_file = tmp_path / "bad.cfg"
        config_file.write_text("step = -1\n", encoding='utf-8')
        assert main(str(config_file)) == EXIT_CONFIG_ERROR
        assert main(None, mode='toy', fmt='xml') == EXIT_CONFIG_ERROR


@pytest.mark.parametrize("name", sorted(os.listdir(RUNS_DIR)))
def test_shipped_run_configs_parse(name):
    config = load_config(os.path.join(RUNS_DIR, name))
    assert config.mode in ('spectrum', 'entanglement', 'toy', 'validate')
