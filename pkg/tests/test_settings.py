import pytest

from src.models.settings import (DEFAULT_CONFIG_PATH, SolverSettings, default_settings,
                                 load_settings, with_overrides)


class TestLoadSettings:
    def test_repository_file_matches_defaults(self):
        assert load_settings(DEFAULT_CONFIG_PATH) == SolverSettings()
        assert default_settings() is default_settings()

    def test_partial_file(self, tmp_path):
        path = tmp_path / "settings.yaml"
        path.write_text("entangle:\n  k_schedule: [4, 8]\n  tol: 1e-4\n", encoding='utf-8')
        settings = load_settings(str(path))
        assert settings.entangle.k_schedule == (4, 8)
        assert settings.entangle.tol == 1e-4
        assert settings.spectrum == SolverSettings().spectrum

    def test_int_field_coerced(self, tmp_path):
        path = tmp_path / "settings.yaml"
        path.write_text("spectrum:\n  num_samples: 32.0\n  lower_bound_limit: -100\n", encoding='utf-8')
        settings = load_settings(str(path))
        assert settings.spectrum.num_samples == 32
        assert isinstance(settings.spectrum.lower_bound_limit, float)

    def test_unknown_key(self, tmp_path):
        path = tmp_path / "settings.yaml"
        path.write_text("specfun:\n  series_tolerance: 1e-10\n", encoding='utf-8')
        with pytest.raises(ValueError, match="series_tolerance"):
            load_settings(str(path))

    def test_unknown_section(self, tmp_path):
        path = tmp_path / "settings.yaml"
        path.write_text("entangel:\n  tol: 1.0e-4\n", encoding='utf-8')
        with pytest.raises(ValueError, match="entangel"):
            load_settings(str(path))

    def test_non_mapping_file(self, tmp_path):
        path = tmp_path / "settings.yaml"
        path.write_text("- specfun\n", encoding='utf-8')
        with pytest.raises(ValueError, match="mapping"):
            load_settings(str(path))

    def test_missing_explicit_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_settings(str(tmp_path / "absent.yaml"))


def test_with_overrides_leaves_original():
    base = SolverSettings()
    tight = with_overrides(base, 'spectrum', xtol=1e-12)
    assert tight.spectrum.xtol == 1e-12
    assert base.spectrum.xtol == 1e-10
    assert tight.specfun is base.specfun
