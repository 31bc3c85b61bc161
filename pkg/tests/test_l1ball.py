import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from linf1ball.l1ball import (
    project_l1_michelot,
    project_l1_sort,
    row_thresholds_michelot,
    row_thresholds_sort,
    shrink,
)


def test_shrink_basic():
    np.testing.assert_allclose(
        shrink([0.5, -0.3, 0.1], 0.2), [0.3, -0.1, 0.0], atol=1e-15
    )


def test_shrink_zero_kappa_is_identity():
    v = np.array([0.4, -0.2, 0.0, 1.5])
    np.testing.assert_array_equal(shrink(v, 0.0), v)


def test_shrink_kills_small_entries():
    np.testing.assert_array_equal(shrink([0.1, -0.1], 0.5), [0.0, 0.0])


def test_shrink_rejects_negative_kappa():
    with pytest.raises(ValueError):
        shrink([1.0], -0.1)


def test_shrink_rejects_nonfinite():
    with pytest.raises(ValueError):
        shrink([np.nan, 1.0], 0.1)


def test_sort_projection_breakpoint_search():
    # hand-run of the sorted search: all three entries stay in the support,
    # threshold (1.0 - 0.6) / 3
    res = project_l1_sort([0.5, 0.3, 0.2], 0.6)
    assert res.threshold == pytest.approx(0.13333333333333333, abs=1e-15)
    np.testing.assert_allclose(
        res.projected,
        [0.3666666666666667, 0.16666666666666666, 0.06666666666666668],
        atol=1e-12,
    )
    assert res.support_size == 3
    assert abs(np.abs(res.projected).sum() - 0.6) < 1e-12


def test_sort_projection_interior_passthrough():
    res = project_l1_sort([0.1, 0.2], 1.0)
    np.testing.assert_array_equal(res.projected, [0.1, 0.2])
    assert res.threshold == 0.0
    assert res.support_size == 0


def test_sort_projection_single_survivor():
    # hand-run: the prefix search stops at L = 1
    res = project_l1_sort([1.0, 0.4], 0.5)
    assert res.threshold == pytest.approx(0.5, abs=1e-15)
    np.testing.assert_allclose(res.projected, [0.5, 0.0], atol=1e-15)
    assert res.support_size == 1


def test_sort_projection_rejects_bad_radius():
    with pytest.raises(ValueError):
        project_l1_sort([1.0], 0.0)
    with pytest.raises(ValueError):
        project_l1_sort([1.0], -1.0)


def test_michelot_matches_sort_on_worked_example():
    a = project_l1_sort([0.5, 0.3, 0.2], 0.6)
    b = project_l1_michelot([0.5, 0.3, 0.2], 0.6)
    np.testing.assert_allclose(b.projected, a.projected, atol=1e-15)
    assert b.threshold == pytest.approx(a.threshold, abs=1e-15)
    assert b.support_size == a.support_size


def test_michelot_interior_passthrough():
    res = project_l1_michelot([0.1, 0.2], 1.0)
    np.testing.assert_array_equal(res.projected, [0.1, 0.2])
    assert res.threshold == 0.0
    assert res.iterate_trace == ()


def test_michelot_sweep_against_sort():
    rng = np.random.default_rng(42)
    for _ in range(1000):
        u = rng.normal(0, 1, 50)
        s = project_l1_sort(u, 1.0)
        m = project_l1_michelot(u, 1.0)
        assert abs(s.threshold - m.threshold) < 1e-12
        np.testing.assert_allclose(m.projected, s.projected, atol=1e-12)


def test_michelot_trace_monotone_and_bounded():
    rng = np.random.default_rng(7)
    for _ in range(200):
        n = rng.integers(1, 120)
        u = rng.uniform(-2, 2, n)
        radius = rng.uniform(0.05, 2.0)
        res = project_l1_michelot(u, radius)
        if not res.iterate_trace:
            continue
        trace = np.asarray(res.iterate_trace)
        assert trace[0] > 0
        # few-ulp slack for the recomputed means
        assert np.all(np.diff(trace) >= -1e-13 * max(1.0, res.threshold))
        assert np.all(trace <= res.threshold + 1e-13 * max(1.0, res.threshold))


def test_feasibility_of_projection():
    rng = np.random.default_rng(11)
    for _ in range(200):
        n = rng.integers(1, 200)
        u = rng.normal(0, 3, n)
        radius = rng.uniform(0.01, 5.0)
        for solver in (project_l1_sort, project_l1_michelot):
            res = solver(u, radius)
            assert np.abs(res.projected).sum() <= radius + 1e-12 * max(1, radius)


def test_scale_equivariance():
    rng = np.random.default_rng(3)
    u = rng.normal(0, 1, 40)
    c = 3.7
    base = project_l1_sort(u, 0.8)
    scaled = project_l1_sort(c * u, c * 0.8)
    np.testing.assert_allclose(scaled.projected, c * base.projected, atol=1e-12)


def test_permutation_equivariance():
    rng = np.random.default_rng(5)
    u = rng.normal(0, 1, 60)
    perm = rng.permutation(60)
    base = project_l1_michelot(u, 1.3)
    shuffled = project_l1_michelot(u[perm], 1.3)
    np.testing.assert_allclose(shuffled.projected, base.projected[perm], atol=1e-14)


@settings(max_examples=200, deadline=None)
@given(
    u=arrays(
        np.float64,
        st.integers(min_value=1, max_value=200),
        elements=st.floats(-10, 10),
    ),
    radius=st.floats(1e-3, 20.0),
)
def test_property_michelot_equals_sort(u, radius):
    s = project_l1_sort(u, radius)
    m = project_l1_michelot(u, radius)
    assert abs(s.threshold - m.threshold) <= 1e-12
    np.testing.assert_allclose(m.projected, s.projected, atol=1e-12)


@settings(max_examples=100, deadline=None)
@given(
    u=arrays(
        np.float64,
        st.integers(min_value=1, max_value=100),
        elements=st.floats(-10, 10),
    ),
    radius=st.floats(1e-3, 20.0),
)
def test_property_shrink_identity(u, radius):
    res = project_l1_sort(u, radius)
    np.testing.assert_allclose(
        res.projected,
        np.sign(u) * np.maximum(np.abs(u) - res.threshold, 0.0),
        atol=1e-14,
    )


def test_row_kernels_agree_with_vector_solvers():
    rng = np.random.default_rng(19)
    A = np.abs(rng.normal(0, 1, (30, 17)))
    s = A.sum(axis=1)
    for radius in (0.0, 0.3, 2.0, 50.0):
        lam_m, n_m = row_thresholds_michelot(A, s, radius)
        lam_s, n_s = row_thresholds_sort(A, s, radius)
        np.testing.assert_allclose(lam_m, lam_s, atol=1e-12)
        np.testing.assert_array_equal(n_m, n_s)
        if radius > 0:
            for i in range(A.shape[0]):
                if s[i] > radius:
                    ref = project_l1_sort(A[i], radius)
                    assert abs(lam_m[i] - ref.threshold) < 1e-12
                    assert n_m[i] == ref.support_size
                else:
                    assert lam_m[i] == 0.0


def test_row_kernel_radius_zero_gives_row_max():
    A = np.array([[0.5, 0.2], [0.1, 0.1]])
    lam, n = row_thresholds_michelot(A, A.sum(axis=1), 0.0)
    np.testing.assert_array_equal(lam, [0.5, 0.1])
    np.testing.assert_array_equal(n, [1, 2])
