"""First-order solver tests: operator norm, steps, reduced costs, full solves."""

import numpy as np
import pytest
import scipy.sparse as sp

from hybridlp import (
    KktPoint,
    PdhgParams,
    StandardLp,
    check_relative_termination,
    estimate_opnorm,
    extract_reduced_costs,
    evaluate_general_point,
    restrict_point,
    ruiz_equilibrate,
    run_pdhg,
    to_standard_form,
    unscale_point,
)
from hybridlp.pdhg import initial_state, pdhg_step

from _desk import lp1, lp2, planted_equality_lp


class TestEstimateOpnorm:
    def test_scalar(self):
        assert estimate_opnorm(sp.csr_matrix([[3.0]])) == pytest.approx(3.0)

    def test_diagonal(self):
        A = sp.diags([1.0, 2.0, 5.0]).tocsr()
        lam = estimate_opnorm(A)
        assert lam <= 5.0 + 1e-9
        assert 5.0 <= 1.05 * lam

    def test_row_vector(self):
        lam = estimate_opnorm(sp.csr_matrix([[1.0, 1.0]]))
        assert lam == pytest.approx(np.sqrt(2.0), rel=0.05)

    @pytest.mark.parametrize("seed", range(5))
    def test_bracket_against_dense_svd(self, seed):
        rng = np.random.default_rng(seed)
        A = rng.standard_normal((6, 9))
        lam = estimate_opnorm(sp.csr_matrix(A), seed=seed)
        true = np.linalg.svd(A, compute_uv=False)[0]
        assert lam <= true + 1e-9
        assert true <= 1.05 * lam

    def test_zero_matrix_rejected(self):
        from hybridlp import InvalidModelError

        with pytest.raises(InvalidModelError):
            estimate_opnorm(sp.csr_matrix((2, 2)))


class TestPdhgStep:
    def _state(self, p, tau_sigma=None):
        st = initial_state(p, PdhgParams())
        if tau_sigma is not None:
            st.tau = st.sigma = tau_sigma
        return st

    def test_first_step_from_zero_lp1(self):
        """x+ = max(0, -tau c) = 0 and y+ = sigma b > 0 with omega = 1."""
        p, _ = to_standard_form(lp1().model)
        norm = estimate_opnorm(p.A)
        st = self._state(p, tau_sigma=0.5 / norm)
        pdhg_step(st, p)
        np.testing.assert_array_equal(st.x, [0.0, 0.0])
        np.testing.assert_allclose(st.y, [0.5 / norm * 1.0])
        assert st.y[0] > 0
        assert st.iterations == 1

    def test_saddle_point_is_fixed(self):
        p, _ = to_standard_form(lp1().model)
        st = self._state(p)
        st.x = np.array([1.0, 0.0])
        st.y = np.array([1.0])
        pdhg_step(st, p)
        np.testing.assert_allclose(st.x, [1.0, 0.0], atol=1e-15)
        np.testing.assert_allclose(st.y, [1.0], atol=1e-15)

    def test_negative_entries_clamped(self):
        p = StandardLp(np.array([[1.0]]), [1.0], [100.0])
        st = self._state(p)
        st.x = np.array([0.5])
        pdhg_step(st, p)
        assert st.x[0] == 0.0

    def test_projection_invariant_along_run(self):
        inst = planted_equality_lp(6, 11, seed=42)
        p, _ = to_standard_form(inst.model)
        st = initial_state(p, PdhgParams())
        for _ in range(500):
            pdhg_step(st, p)
            assert np.all(st.x >= 0.0)

    def test_merit_nonincreasing_in_saddle_metric(self):
        """The step-scaled saddle metric (with the PDHG cross term) never
        increases by more than 1e-9 per step on LP1 and LP2."""
        for inst, xs, ys in (
            (lp1(), np.array([1.0, 0.0]), np.array([1.0])),
            (lp2(), np.array([1.6, 1.2, 0.0, 0.0]), np.array([-0.4, -0.2])),
        ):
            p, _ = to_standard_form(inst.model)
            st = initial_state(p, PdhgParams())
            A = p.A.toarray()

            def merit(x, y):
                dx, dy = x - xs, y - ys
                return (
                    dx @ dx / st.tau + dy @ dy / st.sigma + 2.0 * dy @ (A @ dx)
                )

            prev = merit(st.x, st.y)
            for _ in range(2000):
                pdhg_step(st, p)
                cur = merit(st.x, st.y)
                assert cur <= prev + 1e-9
                prev = cur


class TestExtractReducedCosts:
    def test_lp1_at_optimal_dual(self):
        p, _ = to_standard_form(lp1().model)
        z = extract_reduced_costs(p, np.array([1.0]))
        np.testing.assert_array_equal(z, [0.0, 1.0])

    def test_zero_dual(self):
        p, _ = to_standard_form(lp1().model)
        z = extract_reduced_costs(p, np.zeros(1))
        np.testing.assert_array_equal(z, np.maximum(p.c, 0.0))

    def test_negative_part_becomes_dual_infeasibility(self):
        from hybridlp import residuals

        p = StandardLp(np.array([[1.0]]), [1.0], [0.7])
        y = np.array([1.0])  # c - A'y = -0.3
        z = extract_reduced_costs(p, y)
        assert z[0] == 0.0
        r = residuals(p, KktPoint([0.0], y, z))
        assert r.r_d[0] == pytest.approx(-0.3)


class TestRunPdhg:
    def test_lp1_converges_to_unique_optimum(self):
        p, _ = to_standard_form(lp1().model)
        pt, stats = run_pdhg(p, PdhgParams(eps_rel=1e-4))
        assert stats.status.value == "Optimal"
        np.testing.assert_allclose(pt.x, [1.0, 0.0], atol=1e-3)

    def test_lp2_unscaled_violation(self):
        inst = lp2()
        p, fmap = to_standard_form(inst.model)
        scaled, info = ruiz_equilibrate(p)
        pt, stats = run_pdhg(scaled, PdhgParams(eps_rel=1e-4))
        assert stats.status.value == "Optimal"
        x, y, _ = restrict_point(inst.model, fmap, unscale_point(info, pt))
        v = evaluate_general_point(inst.model, x, y)
        assert v.max_violation <= 1e-3

    def test_tolerance_monotone_iterations(self):
        p, _ = to_standard_form(lp1().model)
        iters = {}
        for eps in (1e-4, 1e-8):
            pt, stats = run_pdhg(p, PdhgParams(eps_rel=eps))
            assert stats.status.value == "Optimal"
            iters[eps] = stats.iterations
        assert iters[1e-8] >= iters[1e-4]

    def test_posthoc_termination_verifiable(self):
        """A point returned as Optimal re-passes the relative check."""
        for inst in (lp1(), lp2(), planted_equality_lp(10, 18, seed=7)):
            p, _ = to_standard_form(inst.model)
            scaled, _ = ruiz_equilibrate(p)
            pt, stats = run_pdhg(scaled, PdhgParams(eps_rel=1e-4))
            assert stats.status.value == "Optimal"
            assert check_relative_termination(scaled, pt, 1e-4).ok

    def test_deterministic_for_fixed_seed(self):
        inst = planted_equality_lp(8, 14, seed=5)
        p, _ = to_standard_form(inst.model)
        pt1, s1 = run_pdhg(p, PdhgParams(eps_rel=1e-4), seed=3)
        pt2, s2 = run_pdhg(p, PdhgParams(eps_rel=1e-4), seed=3)
        np.testing.assert_array_equal(pt1.x, pt2.x)
        np.testing.assert_array_equal(pt1.y, pt2.y)
        assert s1.iterations == s2.iterations

    def test_time_limit_zero_returns_best_so_far(self):
        p, _ = to_standard_form(lp2().model)
        pt, stats = run_pdhg(p, PdhgParams(eps_rel=1e-4, time_limit_s=0.0))
        assert stats.status.value == "TimeLimit"
        assert pt.x.size == p.n

    def test_iteration_limit(self):
        inst = planted_equality_lp(10, 18, seed=9)
        p, _ = to_standard_form(inst.model)
        pt, stats = run_pdhg(p, PdhgParams(eps_rel=1e-12, max_kkt_passes=128))
        assert stats.status.value == "IterationLimit"
        assert stats.iterations == 128

    def test_restarts_happen_and_never_hurt(self):
        """At least one restart on a planted instance, and the restart-score
        sequence is decreasing (each restart target beat the previous score)."""
        inst = planted_equality_lp(20, 35, seed=17)
        p, _ = to_standard_form(inst.model)
        scaled, _ = ruiz_equilibrate(p)
        pt, stats = run_pdhg(scaled, PdhgParams(eps_rel=1e-6))
        assert stats.status.value == "Optimal"
        assert stats.restarts >= 1
