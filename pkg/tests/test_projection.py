import numpy as np
import pytest

from linf1ball.l1ball import project_l1_sort
from linf1ball.oracle import bisect_project
from linf1ball.projection import (
    ActiveSet,
    SearchEval,
    SolverOptions,
    eval_search,
    initial_gamma,
    linf1_norm,
    newton_project,
    newton_step,
    trivial_check,
)

B22 = np.array([[0.5, 0.2], [0.1, 0.1]])


def test_linf1_norm():
    assert linf1_norm(B22) == pytest.approx(0.6)
    assert linf1_norm(np.zeros((3, 4))) == 0.0


class TestTrivialCheck:
    def test_interior_point_returns_input(self):
        B = np.array([[0.2, 0.1], [0.15, 0.05]])  # norm 0.35
        res = trivial_check(B, 0.5)
        assert res is not None
        np.testing.assert_array_equal(res.X, B)
        assert res.iterations == 0
        assert res.converged

    def test_zero_radius_returns_zero_matrix(self):
        res = trivial_check(B22, 0.0)
        np.testing.assert_array_equal(res.X, np.zeros((2, 2)))
        assert res.gamma_star == pytest.approx(0.7)

    def test_exterior_point_defers_to_solver(self):
        B = np.array([[0.5, 0.2], [0.3, 0.1]])  # norm 0.8
        assert trivial_check(B, 0.3) is None

    def test_negative_radius_rejected(self):
        with pytest.raises(ValueError):
            trivial_check(B22, -0.1)


class TestInitialGamma:
    def test_worked_example(self):
        # row 2 fails the max-magnitude guard; row 1 shrinks to [0.2, 0]
        assert initial_gamma(B22, 0.3) == pytest.approx(0.2, abs=1e-15)

    def test_all_entries_below_radius_gives_zero(self):
        B = np.array([[0.5, 0.2], [0.4, 0.1]])  # norm 0.9 > tau, max 0.5
        assert initial_gamma(B, 0.55) == 0.0

    def test_single_row(self):
        assert initial_gamma(np.array([[1.0, 0.4]]), 0.5) == pytest.approx(0.5)

    def test_never_right_of_root(self):
        rng = np.random.default_rng(17)
        for _ in range(50):
            M, N = rng.integers(1, 40), rng.integers(1, 15)
            B = rng.normal(0, 1, (M, N))
            tau = rng.uniform(0.05, 0.95) * linf1_norm(B)
            g0 = initial_gamma(B, tau)
            active = ActiveSet(B)
            ev = eval_search(active, g0, tau, prune=False)
            assert ev.f_value >= -1e-10


class TestEvalSearch:
    def test_at_zero_gives_norm_minus_radius(self):
        ev = eval_search(ActiveSet(B22), 0.0, 0.3)
        assert ev.f_value == pytest.approx(0.3, abs=1e-15)
        # row 2 has a two-way tie at its max, so its support counts twice
        assert ev.sum_inv_support == pytest.approx(1.5)

    def test_at_root(self):
        active = ActiveSet(B22)
        ev = eval_search(active, 0.2, 0.3)
        assert ev.f_value == pytest.approx(0.0, abs=1e-15)
        assert active.count == 1  # row 2 pruned at equality

    def test_all_rows_pruned(self):
        ev = eval_search(ActiveSet(B22), 0.7, 0.3)
        assert ev.f_value == pytest.approx(-0.3)
        assert ev.sum_inv_support == 0.0

    def test_pruned_rows_stay_out(self):
        active = ActiveSet(B22)
        eval_search(active, 0.25, 0.3)
        assert list(active.indices) == [0]
        eval_search(active, 0.25, 0.3)
        assert list(active.indices) == [0]


class TestNewtonStep:
    def test_direct_formula(self):
        ev = SearchEval(0.3, 1.5, np.empty(0), np.empty(0))
        assert newton_step(0.1, ev) == pytest.approx(0.3)

    def test_fixed_point_at_root(self):
        ev = SearchEval(0.0, 2.0, np.empty(0), np.empty(0))
        assert newton_step(0.25, ev) == 0.25

    def test_step_from_zero_stays_in_bracket(self):
        active = ActiveSet(B22)
        ev = eval_search(active, 0.0, 0.3)
        cand = newton_step(0.0, ev)
        root = bisect_project(B22, 0.3).gamma_star
        assert 0.0 < cand <= root + 1e-12
        assert eval_search(ActiveSet(B22), cand, 0.3).f_value >= -1e-12

    def test_empty_active_set_rejected(self):
        ev = SearchEval(-0.3, 0.0, np.empty(0), np.empty(0))
        with pytest.raises(ValueError):
            newton_step(0.5, ev)


class TestNewtonProject:
    def test_worked_example(self):
        res = newton_project(B22, 0.3)
        np.testing.assert_allclose(res.X, [[0.3, 0.2], [0.0, 0.0]], atol=1e-12)
        assert res.gamma_star == pytest.approx(0.2, abs=1e-12)
        assert res.converged

    def test_interior_input_is_untouched(self):
        B = np.array([[0.1, 0.05], [0.02, 0.01]])
        res = newton_project(B, 1.0)
        np.testing.assert_array_equal(res.X, B)
        assert res.iterations == 0

    def test_matches_bisection_oracle(self):
        rng = np.random.default_rng(23)
        for _ in range(30):
            M, N = rng.integers(1, 50), rng.integers(1, 20)
            B = rng.uniform(-0.5, 0.5, (M, N))
            tau = rng.uniform(0.01, 0.8) * linf1_norm(B)
            if tau == 0:
                continue
            res = newton_project(B, tau)
            ref = bisect_project(B, tau)
            assert res.converged
            assert np.linalg.norm(res.X - ref.X) <= 1e-8 * np.linalg.norm(B)

    def test_feasibility_and_structure_at_convergence(self):
        rng = np.random.default_rng(29)
        for _ in range(40):
            B = rng.normal(0, 1, (rng.integers(2, 60), rng.integers(1, 25)))
            tau = rng.uniform(0.05, 0.9) * linf1_norm(B)
            res = newton_project(B, tau)
            assert res.converged
            assert abs(linf1_norm(res.X) - tau) <= 1e-12 * max(1, tau)
            levels = np.abs(res.X).max(axis=1)
            # every row is zero or an elementwise clamp at its level
            for m in range(B.shape[0]):
                if levels[m] == 0:
                    np.testing.assert_array_equal(res.X[m], 0)
                else:
                    clamp = np.sign(B[m]) * np.minimum(np.abs(B[m]), levels[m])
                    np.testing.assert_allclose(res.X[m], clamp, atol=1e-12)
            assert abs(levels.sum() - tau) <= 1e-12 * max(1, tau)

    def test_gamma_trace_monotone_and_inside_band(self):
        rng = np.random.default_rng(31)
        for _ in range(25):
            B = rng.uniform(-0.5, 0.5, (rng.integers(2, 80), rng.integers(2, 20)))
            tau = rng.uniform(0.01, 0.5) * linf1_norm(B)
            res = newton_project(B, tau)
            trace = np.asarray(res.gamma_trace)
            assert np.all(np.diff(trace) >= 0)
            for gamma in trace:
                f = eval_search(ActiveSet(B), gamma, tau, prune=False).f_value
                assert f >= -1e-12 * max(1, tau)

    def test_zero_rows_are_pruned_and_stay_zero(self):
        B = np.array([[0.0, 0.0], [0.5, 0.2], [0.0, 0.0], [0.3, 0.4]])
        res = newton_project(B, 0.3)
        np.testing.assert_array_equal(res.X[0], 0)
        np.testing.assert_array_equal(res.X[2], 0)
        assert res.active_counts[0] <= 2

    def test_scale_equivariance(self):
        rng = np.random.default_rng(37)
        B = rng.normal(0, 1, (15, 8))
        tau = 0.2 * linf1_norm(B)
        c = 5.3
        base = newton_project(B, tau)
        scaled = newton_project(c * B, c * tau)
        np.testing.assert_allclose(scaled.X, c * base.X, atol=1e-10)

    def test_row_permutation_equivariance(self):
        rng = np.random.default_rng(41)
        B = rng.normal(0, 1, (20, 6))
        tau = 0.15 * linf1_norm(B)
        perm = rng.permutation(20)
        base = newton_project(B, tau)
        shuffled = newton_project(B[perm], tau)
        np.testing.assert_allclose(shuffled.X, base.X[perm], atol=1e-12)

    def test_derivative_matches_finite_difference(self):
        rng = np.random.default_rng(43)
        checked = 0
        while checked < 20:
            B = rng.normal(0, 1, (10, 5))
            active = ActiveSet(B)
            hi = float(active.row_l1.max())
            gamma = rng.uniform(0.05, 0.95) * hi
            h = 1e-6 * hi
            lo_ev = eval_search(ActiveSet(B), gamma - h, 1.0, prune=False)
            hi_ev = eval_search(ActiveSet(B), gamma + h, 1.0, prune=False)
            mid = eval_search(ActiveSet(B), gamma, 1.0, prune=False)
            # skip samples whose window straddles a breakpoint
            if not np.array_equal(lo_ev.supports, hi_ev.supports):
                continue
            fd = -(hi_ev.f_value - lo_ev.f_value) / (2 * h)
            assert fd == pytest.approx(mid.sum_inv_support, rel=1e-4)
            checked += 1

    def test_single_row_reduces_to_inf_ball_clamp(self):
        res = newton_project(np.array([[1.0, 0.4]]), 0.5)
        np.testing.assert_allclose(res.X, [[0.5, 0.4]], atol=1e-12)

    def test_single_column_reduces_to_l1_projection(self):
        rng = np.random.default_rng(47)
        u = rng.normal(0, 1, 30)
        tau = 0.4 * np.abs(u).sum()
        res = newton_project(u[:, None], tau)
        ref = project_l1_sort(u, tau)
        np.testing.assert_allclose(res.X[:, 0], ref.projected, atol=1e-10)

    def test_no_pruning_matches_default(self):
        rng = np.random.default_rng(53)
        B = rng.uniform(-0.5, 0.5, (50, 10))
        tau = 0.05 * linf1_norm(B)
        a = newton_project(B, tau)
        b = newton_project(B, tau, SolverOptions(use_pruning=False))
        np.testing.assert_allclose(a.X, b.X, atol=1e-12)
        assert b.active_counts[0] == 50

    def test_max_iter_exhaustion_reports_failure(self):
        rng = np.random.default_rng(59)
        B = rng.uniform(-0.5, 0.5, (100, 20))
        tau = 0.1 * linf1_norm(B)
        res = newton_project(
            B, tau, SolverOptions(max_iter=2, use_initial_point=False)
        )
        assert not res.converged
        assert res.iterations == 2
        assert res.X.shape == B.shape

    def test_invalid_inputs_rejected(self):
        with pytest.raises(ValueError):
            newton_project(B22, -1.0)
        with pytest.raises(ValueError):
            newton_project(np.array([[np.inf, 0.0]]), 1.0)
        with pytest.raises(ValueError):
            newton_project(np.zeros(3), 1.0)

    def test_options_validation(self):
        with pytest.raises(ValueError):
            SolverOptions(tolerance=0.0)
        with pytest.raises(ValueError):
            SolverOptions(max_iter=0)
