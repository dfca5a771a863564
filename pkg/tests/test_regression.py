import numpy as np
import pytest

from pricedisp.regression import (
    DemeaningConvergenceError,
    Z_95,
    absorb_fixed_effects,
    absorbed_dof,
    design_matrix,
    dummy_columns,
    ols,
    ols_absorbed,
)


def with_intercept(*cols):
    return np.column_stack([np.ones(len(cols[0]))] + [np.asarray(c, float) for c in cols])


class TestOls:
    def test_exact_line(self):
        result = ols(np.array([1.0, 3.0, 5.0]), with_intercept([0.0, 1.0, 2.0]), ["const", "x"])
        assert result.coef("const") == pytest.approx(1.0, abs=1e-12)
        assert result.coef("x") == pytest.approx(2.0, abs=1e-12)
        assert result.r_squared == pytest.approx(1.0, abs=1e-12)

    def test_hand_derived_example(self):
        # Normal equations by hand: slope 3/2, intercept -1/6, R^2 = 27/28.
        result = ols(np.array([0.0, 1.0, 3.0]), with_intercept([0.0, 1.0, 2.0]), ["const", "x"])
        assert result.coef("x") == pytest.approx(1.5, abs=1e-10)
        assert result.coef("const") == pytest.approx(-1.0 / 6.0, abs=1e-10)
        assert result.r_squared == pytest.approx(27.0 / 28.0, abs=1e-10)

    def test_intercept_only_returns_mean_with_zero_r_squared(self):
        y = np.array([2.0, 4.0, 9.0, 5.0])
        result = ols(y, np.ones((4, 1)), ["const"])
        assert result.coef("const") == pytest.approx(y.mean())
        assert result.r_squared == 0.0

    def test_classical_standard_error_simple_case(self):
        rng = np.random.default_rng(3)
        x = rng.normal(size=200)
        y = 1.0 + 2.0 * x + rng.normal(size=200)
        X = with_intercept(x)
        result = ols(y, X, ["const", "x"])
        beta = np.linalg.lstsq(X, y, rcond=None)[0]
        resid = y - X @ beta
        sigma2 = resid @ resid / (200 - 2)
        cov = sigma2 * np.linalg.inv(X.T @ X)
        assert result.std_errors["x"] == pytest.approx(np.sqrt(cov[1, 1]), rel=1e-10)

    def test_confidence_interval_definition(self):
        rng = np.random.default_rng(4)
        x = rng.normal(size=50)
        y = x + rng.normal(size=50)
        result = ols(y, with_intercept(x), ["const", "x"])
        lo, hi = result.ci("x")
        assert lo == pytest.approx(result.coef("x") - Z_95 * result.std_errors["x"])
        assert hi == pytest.approx(result.coef("x") + Z_95 * result.std_errors["x"])

    def test_svd_oracle_on_random_instances(self):
        rng = np.random.default_rng(12)
        for _ in range(100):
            n = int(rng.integers(20, 80))
            k = int(rng.integers(2, 8))
            X = np.column_stack([np.ones(n), rng.normal(size=(n, k))])
            y = rng.normal(size=n)
            result = ols(y, X)
            oracle = np.linalg.pinv(X) @ y
            fitted = np.array([result.coefficients[f"x{j}"] for j in range(k + 1)])
            assert np.max(np.abs(fitted - oracle)) < 1e-8

    def test_residual_orthogonality(self):
        rng = np.random.default_rng(5)
        X = np.column_stack([np.ones(100), rng.normal(size=(100, 4))])
        y = rng.normal(size=100)
        result = ols(y, X)
        beta = np.array([result.coefficients[f"x{j}"] for j in range(5)])
        resid = y - X @ beta
        assert np.max(np.abs(X.T @ resid)) < 1e-8 * np.abs(X.T @ y).max()

    def test_r_squared_never_decreases_with_regressor(self):
        rng = np.random.default_rng(6)
        for _ in range(20):
            n = 60
            x1, x2 = rng.normal(size=n), rng.normal(size=n)
            y = rng.normal(size=n)
            small = ols(y, with_intercept(x1))
            big = ols(y, with_intercept(x1, x2))
            assert big.r_squared >= small.r_squared - 1e-12

    def test_t_ratio_affine_invariance(self):
        rng = np.random.default_rng(8)
        x = rng.normal(size=80)
        y = 0.5 + 1.2 * x + rng.normal(size=80)
        base = ols(y, with_intercept(x), ["const", "x"])
        for k in (2.0, -3.0, 1e4):
            scaled = ols(y, with_intercept(x * k), ["const", "x"])
            assert scaled.coef("x") == pytest.approx(base.coef("x") / k, rel=1e-10)
            assert scaled.std_errors["x"] == pytest.approx(base.std_errors["x"] / abs(k), rel=1e-10)
            t_base = base.coef("x") / base.std_errors["x"]
            t_scaled = scaled.coef("x") / scaled.std_errors["x"]
            assert abs(t_scaled) == pytest.approx(abs(t_base), rel=1e-10)

    def test_collinear_column_dropped_deterministically(self):
        rng = np.random.default_rng(9)
        x = rng.normal(size=30)
        X = np.column_stack([np.ones(30), x, 2.0 * x])
        result = ols(rng.normal(size=30), X, ["const", "x", "x_copy"])
        assert result.dropped_terms == ["x_copy"]
        assert "x_copy" not in result.coefficients

    def test_dummy_trap_resolved(self):
        labels = np.array(["a", "a", "b", "b", "c", "c"])
        mat, names = dummy_columns(labels, "g")
        X = np.column_stack([np.ones(6), mat])
        result = ols(np.arange(6.0), X, ["const"] + names)
        assert result.dropped_terms == ["g[c]"]

    def test_insufficient_observations(self):
        with pytest.raises(ValueError, match="insufficient"):
            ols(np.array([1.0, 2.0]), with_intercept([0.0, 1.0]))


class TestAbsorb:
    def test_single_group_equals_grand_mean(self):
        y = np.array([1.0, 2.0, 6.0])
        y_dm, _ = absorb_fixed_effects(y, None, [np.zeros(3)])
        assert y_dm == pytest.approx(y - y.mean())

    def test_two_group_toy_matches_explicit_dummies(self):
        y = np.array([1.0, 2.0, 3.0, 7.0, 8.0, 10.0])
        x = np.array([0.0, 1.0, 2.0, 0.0, 1.0, 3.0])
        groups = np.array([0, 0, 0, 1, 1, 1])
        within = ols_absorbed(y, x[:, None], ["x"], [groups])
        dmat, dnames = dummy_columns(groups, "g")
        full = ols(y, np.column_stack([x, dmat]), ["x"] + dnames)
        assert within.coef("x") == pytest.approx(full.coef("x"), abs=1e-8)
        assert within.std_errors["x"] == pytest.approx(full.std_errors["x"], rel=1e-8)

    def test_two_factor_frisch_waugh(self):
        rng = np.random.default_rng(10)
        n = 120
        f1 = rng.integers(0, 6, n)
        f2 = rng.integers(0, 4, n)
        x = rng.normal(size=(n, 2))
        y = x @ np.array([1.5, -0.7]) + f1 * 0.3 + f2 * 1.1 + rng.normal(size=n)
        within = ols_absorbed(y, x, ["x1", "x2"], [f1, f2])
        d1, n1 = dummy_columns(f1, "f1")
        d2, n2 = dummy_columns(f2, "f2")
        full = ols(y, np.column_stack([x, np.ones(n), d1, d2]), ["x1", "x2", "const"] + n1 + n2)
        assert within.coef("x1") == pytest.approx(full.coef("x1"), abs=1e-8)
        assert within.coef("x2") == pytest.approx(full.coef("x2"), abs=1e-8)

    def test_dof_charged_for_absorbed_groups(self):
        rng = np.random.default_rng(11)
        n = 40
        f1 = rng.integers(0, 5, n)
        x = rng.normal(size=(n, 1))
        y = rng.normal(size=n)
        within = ols_absorbed(y, x, ["x"], [f1])
        assert within.dof == n - 1 - 5
        assert absorbed_dof([f1]) == 5
        f2 = rng.integers(0, 3, n)
        assert absorbed_dof([f1, f2]) == 5 + 3 - 1

    def test_standard_errors_match_explicit_dummies_after_dof_adjustment(self):
        rng = np.random.default_rng(13)
        n = 60
        f1 = rng.integers(0, 4, n)
        x = rng.normal(size=(n, 1))
        y = x[:, 0] * 2.0 + f1 * 0.5 + rng.normal(size=n)
        within = ols_absorbed(y, x, ["x"], [f1])
        d1, n1 = dummy_columns(f1, "g")
        full = ols(y, np.column_stack([x, d1]), ["x"] + n1)
        assert within.std_errors["x"] == pytest.approx(full.std_errors["x"], rel=1e-8)

    def test_absorbing_dependent_structure_flagged(self):
        groups = np.array([0, 0, 1, 1])
        y = np.array([3.0, 3.0, 8.0, 8.0])  # exactly group means
        x = np.array([[0.1], [0.4], [0.2], [0.9]])
        with pytest.raises(ValueError, match="absorb all variation"):
            ols_absorbed(y, x, ["x"], [groups])

    def test_factor_length_mismatch(self):
        with pytest.raises(ValueError, match="length"):
            absorb_fixed_effects(np.ones(4), None, [np.zeros(3)])

    def test_empty_factor_list(self):
        with pytest.raises(ValueError, match="factor"):
            absorb_fixed_effects(np.ones(4), None, [])


class TestDesignHelpers:
    def test_design_matrix_prepends_intercept(self):
        X, names = design_matrix([np.array([1.0, 2.0])], ["x"])
        assert names == ["const", "x"]
        assert np.array_equal(X[:, 0], np.ones(2))

    def test_dummy_columns_partition(self):
        mat, names = dummy_columns(["b", "a", "b"], "g")
        assert names == ["g[a]", "g[b]"]
        assert mat.sum(axis=1) == pytest.approx(np.ones(3))
