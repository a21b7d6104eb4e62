from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import minimize

from brieskorn_eta.charts import constant_curvature, hopf_berger_lambda2, hopf_chart, random_chart, torus_chart
from brieskorn_eta.cheeger import (ActionChart, LieAlgebraData, compute_P, deformed_metric, find_t0,
                                   lift_plane_curvature_bound, lift_plane_decomposition, noncommuting_pair,
                                   orbit_splitting, plane_profile, scal_estimate, t_grid)

E = np.eye(3)


def so3_chart(P_scale: float = 1.0, sec: float = 0.0) -> ActionChart:
    """so(3) acting with orbit metric P_scale * Q on a 3-dimensional orbit."""
    return ActionChart(P_scale * np.eye(3), np.eye(3), LieAlgebraData.so(3), constant_curvature(sec), label="so3")


def berger_sec(lam2: float, a: np.ndarray, b: np.ndarray) -> float:
    """Berger sphere curvature of the plane <a, b> (coordinates in the frame fibre, e2, e3).

    With E1 = fibre / lam the frame is orthonormal and the curvature operator is
    diagonal on E1^E2, E1^E3, E2^E3 with eigenvalues lam^2, lam^2, 4 - 3 lam^2.
    """
    lam = np.sqrt(lam2)
    A = np.array([a[0] * lam, a[1], a[2]])
    B = np.array([b[0] * lam, b[1], b[2]])
    biv = np.array([A[0] * B[1] - A[1] * B[0], A[0] * B[2] - A[2] * B[0], A[1] * B[2] - A[2] * B[1]])
    k = np.array([lam2, lam2, 4 - 3 * lam2])
    return float(np.sum(k * biv ** 2) / np.sum(biv ** 2))


def brute_submersion_norm(chart: ActionChart, t: float, u: np.ndarray) -> float:
    """h_t(u, u) = min_Z h(u + Z*, u + Z*) + Q(Z, Z) / t, by numerical minimization."""
    Q, K, h = chart.algebra.Q, chart.killing, chart.h

    def cost(Z):
        v = u + K @ Z
        return v @ h @ v + Z @ Q @ Z / t

    res = minimize(cost, np.zeros(chart.algebra.dimension), method="BFGS", options={"gtol": 1e-12})
    return float(res.fun)


# --------------------------------------------------------------------------
# algebra and charts
# --------------------------------------------------------------------------
def test_so3_structure_and_validation():
    alg = LieAlgebraData.so(3)
    assert alg.dimension == 3
    assert not alg.is_abelian()
    with pytest.raises(ValueError):
        LieAlgebraData(alg.structure, np.diag([1.0, 2.0, 3.0]))  # not ad-invariant
    bad = alg.structure.copy()
    bad[0, 1, 2] += 1
    with pytest.raises(ValueError):
        LieAlgebraData(bad, np.eye(3))


def test_so_n_jacobi_holds():
    for n in (3, 4, 5):
        assert LieAlgebraData.so(n).dimension == n * (n - 1) // 2


def test_chart_validation():
    with pytest.raises(ValueError):
        ActionChart(-np.eye(2), np.zeros((2, 1)), LieAlgebraData.u1())
    with pytest.raises(ValueError):
        ActionChart(np.eye(2), np.zeros((3, 1)), LieAlgebraData.u1())


# --------------------------------------------------------------------------
# splitting and P
# --------------------------------------------------------------------------
def test_trivial_action_splitting():
    chart = ActionChart(np.eye(3), np.zeros((3, 2)), LieAlgebraData.abelian(2), constant_curvature(1.0))
    split = orbit_splitting(chart)
    assert split.vertical.shape == (3, 0)
    assert split.horizontal.shape == (3, 3)
    assert split.isotropy.shape == (2, 2)
    with pytest.raises(ValueError):
        compute_P(chart)


def test_hopf_splitting_dimensions_and_orthogonality():
    chart = hopf_chart()
    split = orbit_splitting(chart)
    assert split.vertical.shape[1] == 1 and split.horizontal.shape[1] == 2
    basis = np.hstack([split.vertical, split.horizontal])
    assert np.allclose(basis.T @ chart.h @ basis, np.eye(3), atol=1e-12)


@pytest.mark.parametrize("q", [0.5, 1.0, 3.0])
def test_hopf_P(q):
    # h(X*, X*) = 1 and Q(X, X) = q, hence P = 1/q
    P = compute_P(hopf_chart(q))
    assert np.allclose(P.as_operator(), [[1 / q]], atol=1e-14)


def test_P_identity_and_scaling():
    for lam in (1.0, 2.5):
        P = compute_P(so3_chart(lam))
        assert np.allclose(P.as_operator(), lam * np.eye(3), atol=1e-12)


def test_P_is_Q_symmetric_positive():
    rng = np.random.default_rng(5)
    for _ in range(20):
        chart = random_chart(rng)
        if orbit_splitting(chart).orbit_dimension == 0:
            continue
        P = compute_P(chart)
        op, Q = P.as_operator(), chart.algebra.Q
        assert np.allclose(Q @ op, (Q @ op).T, atol=1e-9)
        assert np.all(np.linalg.eigvalsh(P.matrix) > 0)


# --------------------------------------------------------------------------
# deformed metric
# --------------------------------------------------------------------------
def test_t_zero_is_identity():
    chart = hopf_chart()
    dm = deformed_metric(chart, 0)
    assert np.allclose(dm.C, np.eye(3))
    assert np.allclose(dm.h_t, chart.h)
    with pytest.raises(ValueError):
        deformed_metric(chart, -1)


def test_trivial_action_keeps_metric():
    chart = ActionChart(np.diag([1.0, 2.0]), np.zeros((2, 1)), LieAlgebraData.u1(), constant_curvature(0.0))
    assert np.allclose(deformed_metric(chart, 7.0).h_t, chart.h)


@pytest.mark.parametrize("q, t, frozen", [(1.0, 1.0, 0.5), (1.0, 0.5, 2 / 3), (2.0, 4.0, 1 / 3)])
def test_hopf_fibre_length_matches_brute_force(q, t, frozen):
    chart = hopf_chart(q)
    dm = deformed_metric(chart, t)
    assert abs(dm.h_t[0, 0] - frozen) < 1e-12
    assert abs(brute_submersion_norm(chart, t, E[0]) - frozen) < 1e-8


def test_submersion_metric_against_brute_force_random_charts():
    rng = np.random.default_rng(11)
    for _ in range(15):
        chart = random_chart(rng)
        t = float(rng.uniform(0.1, 5.0))
        dm = deformed_metric(chart, t)
        u = rng.normal(size=chart.dimension)
        assert abs(dm.metric(u, u) - brute_submersion_norm(chart, t, u)) < 1e-6 * max(1.0, u @ chart.h @ u)


def test_C_properties_on_random_charts():
    rng = np.random.default_rng(2)
    for _ in range(50):
        chart = random_chart(rng)
        t = float(rng.uniform(0, 20))
        dm = deformed_metric(chart, t)
        h = chart.h
        assert np.allclose(h @ dm.C, (h @ dm.C).T, atol=1e-12 * max(1, np.abs(h).max()))
        H = dm.splitting.horizontal
        assert np.allclose(dm.C @ H, H, atol=1e-12)
        L = np.linalg.cholesky(h)
        eig = np.linalg.eigvalsh(np.linalg.solve(L, np.linalg.solve(L, dm.h_t).T))
        assert eig.min() > 0 and eig.max() <= 1 + 1e-12


def test_lift_is_horizontal_for_product_metric():
    # C_t^-1 v = v + t (P v_m)*, and the lift carries Z = -t P v_m
    rng = np.random.default_rng(4)
    for _ in range(10):
        chart = random_chart(rng)
        dm = deformed_metric(chart, 2.0)
        v = rng.normal(size=chart.dimension)
        _, Z = dm.lift(v)
        assert np.allclose(dm.inverse_C(v), v - chart.killing @ Z, atol=1e-9)


# --------------------------------------------------------------------------
# curvature bound
# --------------------------------------------------------------------------
@pytest.mark.parametrize("t", [0.0, 1.0, 10.0, 100.0])
def test_torus_bound_is_zero(t):
    dm = deformed_metric(torus_chart(), t)
    assert lift_plane_curvature_bound(dm, np.array([1.0, 0.0]), np.array([0.3, 1.0])) == 0.0


def test_t_zero_gives_sec_h():
    dm = deformed_metric(so3_chart(1.0, sec=0.7), 0.0)
    dec = lift_plane_decomposition(dm, E[0], E[1])
    assert dec.alpha == pytest.approx(1.0) and dec.beta == 0.0 and dec.bound == pytest.approx(0.7)


@pytest.mark.parametrize("t", [0.0, 0.5, 1.0, 4.0])
def test_hopf_mixed_plane_matches_berger(t):
    dm = deformed_metric(hopf_chart(), t)
    lam2 = hopf_berger_lambda2(1.0, t)
    assert abs(lift_plane_curvature_bound(dm, E[0], E[1]) - berger_sec(lam2, E[0], E[1])) < 1e-8
    assert abs(dm.h_t[0, 0] - lam2) < 1e-12


def test_hopf_bound_below_true_berger_curvature():
    rng = np.random.default_rng(8)
    for t in (0.0, 0.5, 1.0, 4.0, 50.0):
        dm = deformed_metric(hopf_chart(), t)
        lam2 = hopf_berger_lambda2(1.0, t)
        for _ in range(30):
            v, w = rng.normal(size=3), rng.normal(size=3)
            true = berger_sec(lam2, dm.inverse_C(v), dm.inverse_C(w))
            assert lift_plane_curvature_bound(dm, v, w) <= true + 1e-8


def test_dependent_vectors_rejected():
    dm = deformed_metric(hopf_chart(), 1.0)
    with pytest.raises(ValueError):
        lift_plane_curvature_bound(dm, E[0], 2 * E[0])


def test_missing_curvature_callback():
    chart = ActionChart(np.eye(2), np.eye(2), LieAlgebraData.abelian(2))
    with pytest.raises(ValueError):
        lift_plane_curvature_bound(deformed_metric(chart, 1.0), E[0][:2], E[1][:2])


def test_alpha_beta_ranges_and_limits():
    chart = so3_chart(1.3, sec=0.5)
    for t in (0.01, 1.0, 50.0):
        dec = lift_plane_decomposition(deformed_metric(chart, t), E[0], E[1] + 0.2 * E[2])
        assert 0 < dec.alpha <= 1 and 0 < dec.beta <= 1 and dec.alpha + dec.beta <= 1 + 1e-12

def test_beta_tends_to_one_at_rate_one_over_t():
    # 1 - beta(t) = tr(G_Q^-1 G_h) / t + O(1/t^2), G_Q the Q-Gram matrix of PX, PY
    for scale in (1.3, 4.0):
        chart = so3_chart(scale, sec=0.5)
        G_h = scale * np.eye(2)
        G_Q = scale ** 2 * np.eye(2)
        rate = np.trace(np.linalg.solve(G_Q, G_h))
        for t in (1e3, 1e6):
            dec = lift_plane_decomposition(deformed_metric(chart, t), E[0], E[1])
            assert t * (1 - dec.beta) == pytest.approx(rate, rel=10 / t)
            assert 1 - dec.beta <= rate / t


def test_beta_literal_tolerance_when_orbit_tensor_is_large():
    # with tr(G_Q^-1 G_h) = 1/2 the gap is below 1e-3 at t = 1e3 and below 1e-6 at t = 1e6
    chart = so3_chart(4.0)
    for t, tol in ((1e3, 1e-3), (1e6, 1e-6)):
        dec = lift_plane_decomposition(deformed_metric(chart, t), E[0], E[1])
        assert abs(dec.beta - 1) < tol


def test_bound_at_least_alpha_sec_with_equality_when_commuting():
    rng = np.random.default_rng(3)
    for _ in range(40):
        chart = random_chart(rng)
        dm = deformed_metric(chart, float(rng.uniform(0, 10)))
        v, w = rng.normal(size=chart.dimension), rng.normal(size=chart.dimension)
        dec = lift_plane_decomposition(dm, v, w)
        assert dec.bound >= dec.alpha * dec.sec_h - 1e-12
        if dec.bracket_norm2 == 0:
            assert dec.bound == pytest.approx(dec.alpha * dec.sec_h, abs=1e-12)


def test_noncommuting_pair_examples():
    assert noncommuting_pair(torus_chart(3)) is None
    assert noncommuting_pair(hopf_chart()) is None
    pair = noncommuting_pair(so3_chart())
    assert pair is not None


def test_noncommuting_pair_gives_unbounded_tail():
    chart = so3_chart(1.0)
    X, Y = noncommuting_pair(chart)
    v, w = chart.killing @ X, chart.killing @ Y
    values = [lift_plane_curvature_bound(deformed_metric(chart, t), v, w) for t in (1, 10, 100, 1000)]
    assert all(b > a for a, b in zip(values, values[1:]))
    assert values[-1] > 100


def test_scal_estimate_routes_agree():
    rng = np.random.default_rng(9)
    for _ in range(20):
        chart = random_chart(rng)
        prof = plane_profile(chart)
        for t in (0.0, 0.3, 7.0):
            assert scal_estimate(deformed_metric(chart, t)) == pytest.approx(prof.estimate(t)[0], rel=1e-9, abs=1e-12)


def test_profile_basis_is_h_t_orthogonal():
    rng = np.random.default_rng(12)
    chart = random_chart(rng)
    while orbit_splitting(chart).orbit_dimension == 0:
        chart = random_chart(rng)
    prof = plane_profile(chart)
    for t in (0.0, 2.0):
        G = prof.basis.T @ deformed_metric(chart, t).h_t @ prof.basis
        assert np.allclose(G, np.diag(np.diag(G)), atol=1e-10)


# --------------------------------------------------------------------------
# t0 search
# --------------------------------------------------------------------------
def test_grid():
    g = t_grid(1e4, steps=64)
    assert g[0] == 0 and g[1] == pytest.approx(1e-3) and g[-1] == pytest.approx(1e4)
    assert len(g) == 1 + 64 * 7 + 1


def test_find_t0_examples():
    assert find_t0([hopf_chart(), so3_chart(1.0, sec=0.2)], 100.0) == 0.0
    assert find_t0([torus_chart(), torus_chart(3)], 100.0) is None
    with pytest.raises(ValueError):
        find_t0([], 10.0)


def test_find_t0_needs_deformation():
    # flat so(3) orbit: the estimate is 0 at t = 0 and positive for every t > 0
    assert find_t0([so3_chart(1.0, sec=0.0)], 10.0) == pytest.approx(1e-3)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6), st.floats(0.0, 100.0))
def test_deformation_never_expands(seed, t):
    chart = random_chart(np.random.default_rng(seed))
    dm = deformed_metric(chart, t)
    rng = np.random.default_rng(seed + 1)
    v = rng.normal(size=chart.dimension)
    assert dm.metric(v, v) <= v @ chart.h @ v * (1 + 1e-12)
    H = dm.splitting.horizontal
    if H.shape[1]:
        x = H @ rng.normal(size=H.shape[1])
        assert dm.metric(x, x) == pytest.approx(x @ chart.h @ x, rel=1e-10)
