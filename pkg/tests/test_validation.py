import math

import numpy as np
import pytest

from src.analysis.pairstate import assemble_amplitude, relative_expansion
from src.analysis.validation import (LIMIT_ENTROPIES, AcceptanceSuite, CheckResult,
                                     dense_singular_weights, quadrature_overlap)
from src.models.settings import SolverSettings, with_overrides


def test_check_result_coerces_numpy_values():
    result = CheckResult('x', np.bool_(True), np.float64(1.5), 2)
    assert result.passed is True
    assert type(result.value) is float
    assert result.target == 2.0
    assert math.isnan(CheckResult('y', False).value)


def test_quadrature_overlap_ground():
    assert quadrature_overlap(0, 0, 0) == pytest.approx(1.0, abs=1e-13)


def test_dense_weights_sum_to_one():
    amp = assemble_amplitude(relative_expansion(0.25, 1.0, 4))
    weights = dense_singular_weights(amp)
    assert np.sum(weights) == pytest.approx(1.0, abs=1e-12)
    assert np.all(np.diff(weights) <= 0)


def test_limit_table_values():
    assert LIMIT_ENTROPIES[(5 / 6, 1)] == pytest.approx(1.0397, abs=1e-4)
    assert LIMIT_ENTROPIES[(7 / 6, 1)] == pytest.approx(1.3863, abs=1e-4)
    assert LIMIT_ENTROPIES[(1.0, 1)] == pytest.approx(1.5890, abs=1e-4)


class TestAcceptanceSuite:
    def test_cheap_checks_pass(self):
        suite = AcceptanceSuite(SolverSettings(), K_schedule=(4, 6), num_random_points=3)
        df = suite.run(['special_function', 'unitarity_roots', 'toy_model', 'oracles'])
        assert list(df.columns) == ['check', 'passed', 'value', 'target', 'detail']
        assert df['passed'].all(), df.loc[~df['passed'], 'check'].tolist()
        assert 'oracles:dense_schmidt' in set(df['check'])

    def test_numeric_failure_becomes_failed_row(self):
        tight = with_overrides(SolverSettings(), 'spectrum', lower_bound_limit=-2.0)
        df = AcceptanceSuite(tight).run(['spectrum_monotonic'])
        assert len(df) == 1
        assert not df['passed'].iloc[0]
        assert df['detail'].iloc[0].startswith('GridPointError')

    def test_unknown_check(self):
        with pytest.raises(ValueError):
            AcceptanceSuite(SolverSettings()).run(['nonexistent'])

    @pytest.mark.slow
    def test_spectrum_checks(self):
        df = AcceptanceSuite(SolverSettings()).run(['spectrum_monotonic', 'molecular_fraction'])
        assert df['passed'].all(), df['detail'].tolist()

    @pytest.mark.slow
    def test_geometry_ordering(self):
        df = AcceptanceSuite(SolverSettings(), K_schedule=(8,)).run(['geometry_ordering'])
        assert df['passed'].all(), df['detail'].tolist()

    @pytest.mark.slow
    def test_geometry_ordering_compares_branches_within_lambda(self):
        df = AcceptanceSuite(SolverSettings(), K_schedule=(8,)).run(['geometry_ordering'])
        rows = df[df['check'].str.startswith('geometry_ordering:branch2_above_branch1')]
        assert rows['check'].tolist() == ['geometry_ordering:branch2_above_branch1:lambda=0.05',
                                          'geometry_ordering:branch2_above_branch1:lambda=20']
        assert rows['passed'].all(), rows['detail'].tolist()
        assert (rows['value'] > rows['target']).all()

    @pytest.mark.slow
    def test_geometry_ordering_independent_of_earlier_checks(self):
        alone = AcceptanceSuite(SolverSettings(), K_schedule=(6, 8)).run(['geometry_ordering'])
        after = AcceptanceSuite(SolverSettings(), K_schedule=(6, 8)).run(
            ['branch1_limits', 'geometry_ordering'])
        after = after[after['check'].str.startswith('geometry_ordering')].reset_index(drop=True)
        assert after['check'].tolist() == alone['check'].tolist()
        np.testing.assert_allclose(after['value'], alone['value'], rtol=1e-12)
        np.testing.assert_allclose(after['target'], alone['target'], rtol=1e-12)
