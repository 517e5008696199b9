import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grangergraph import EstimationError, MixedGraph, ModelError
from grangergraph.markov import MarkovStatement, StatementKind
from grangergraph.var import (
    TimeSeries,
    VarModel,
    check_statement,
    companion_matrix,
    fit_var,
    is_stationary,
    power_iteration_radius,
    random_var,
    simulate_var,
    test_contemp,
    test_noncausal,
    test_regime,
    validate_var,
)

from strategies import mixed_graphs, trivariate_model


def edgeless(d):
    return MixedGraph([str(i) for i in range(1, d + 1)])


# -- model container ---------------------------------------------------------


def test_model_validation():
    with pytest.raises(ModelError):
        VarModel(("1", "2"), np.zeros((1, 2, 2)), np.array([[1.0, 2.0], [2.0, 1.0]]))
    with pytest.raises(ModelError):
        VarModel(("1", "2"), np.zeros((1, 2, 3)), np.eye(2))
    with pytest.raises(ModelError):
        VarModel(("1", "2"), np.zeros((1, 2, 2)), np.array([[1.0, 0.1], [0.0, 1.0]]))
    m = trivariate_model()
    assert m.order == 1 and m.dim == 3
    with pytest.raises(ValueError):
        m.phi[0, 0, 0] = 2.0


def test_json_round_trip():
    m = random_var(MixedGraph([1, 2, 3], [(1, 2)], [(2, 3)]), p=2, seed=3)
    assert VarModel.from_json(m.to_json()) == m


def test_csv_round_trip():
    s = simulate_var(trivariate_model(), 50, seed=1)
    back = TimeSeries.from_csv(s.to_csv())
    assert back.labels == s.labels
    np.testing.assert_allclose(back.data, s.data, rtol=1e-9)


# -- zero pattern -------------------------------------------------------------


def test_validate_examples(g3):
    m = trivariate_model()
    assert validate_var(m, g3) == []
    phi = np.array(m.phi)
    phi[0, 0, 2] = 0.5  # X3 -> X1 is not an edge of g3
    bad = VarModel(m.vertices, phi, m.sigma)
    v = validate_var(bad, g3)
    assert len(v) == 1
    assert (v[0].kind, v[0].source, v[0].target, v[0].lag) == ("directed", "3", "1", 1)
    assert "3 -> 1" in str(v[0])


def test_validate_concentration():
    g = edgeless(2)
    sigma = np.array([[1.0, 0.5], [0.5, 1.0]])
    v = validate_var(VarModel(("1", "2"), np.zeros((1, 2, 2)), sigma), g)
    assert [x.kind for x in v] == ["undirected"]
    ok = MixedGraph(["1", "2"], [], [("1", "2")])
    assert validate_var(VarModel(("1", "2"), np.zeros((1, 2, 2)), sigma), ok) == []
    with pytest.raises(ModelError):
        validate_var(VarModel(("1", "2"), np.zeros((1, 2, 2)), np.eye(2)), edgeless(3))


# -- stationarity -------------------------------------------------------------


def test_stationarity_examples():
    half = VarModel(("1", "2"), 0.5 * np.eye(2)[None], np.eye(2))
    ok, r = is_stationary(half)
    assert ok and r == pytest.approx(0.5)
    unit = VarModel(("1", "2"), np.eye(2)[None], np.eye(2))
    assert not is_stationary(unit)[0]
    ok, r = is_stationary(trivariate_model())
    assert ok and r == pytest.approx(0.5, abs=1e-9)


def test_power_iteration_cross_check():
    M = companion_matrix(np.array(trivariate_model().phi))
    assert power_iteration_radius(M) == pytest.approx(0.5, abs=0.01)
    rng = np.random.default_rng(0)
    for _ in range(20):
        A = rng.normal(size=(4, 4))
        A = A @ A.T  # symmetric: real spectrum, fast convergence
        assert power_iteration_radius(A) == pytest.approx(max(abs(np.linalg.eigvals(A))), rel=1e-4)


def test_companion_layout():
    phi = np.arange(8.0).reshape(2, 2, 2)
    C = companion_matrix(phi)
    np.testing.assert_array_equal(C[:2, :2], phi[0])
    np.testing.assert_array_equal(C[:2, 2:], phi[1])
    np.testing.assert_array_equal(C[2:, :2], np.eye(2))


# -- random models ------------------------------------------------------------


def test_random_var_g3(g3):
    m = random_var(g3, p=2, seed=1)
    assert validate_var(m, g3) == []
    ok, r = is_stationary(m)
    assert ok and r <= 0.8 + 1e-9


def test_random_var_edgeless_is_diagonal():
    m = random_var(edgeless(4), p=1, seed=2)
    off = m.phi[0] - np.diag(np.diag(m.phi[0]))
    assert np.all(off == 0)
    assert np.allclose(m.sigma, np.diag(np.diag(m.sigma)))


def test_random_var_deterministic(g5):
    assert random_var(g5, 2, seed=7) == random_var(g5, 2, seed=7)
    assert random_var(g5, 2, seed=7) != random_var(g5, 2, seed=8)


@settings(max_examples=40, deadline=None)
@given(mixed_graphs(min_vertices=1), st.integers(1, 3), st.integers(0, 2**31))
def test_random_var_always_valid(g, p, seed):
    m = random_var(g, p=p, seed=seed)
    assert validate_var(m, g) == []
    assert is_stationary(m)[0]


# -- simulation ---------------------------------------------------------------


def test_simulated_autocovariance():
    x3 = simulate_var(trivariate_model(), 5000, seed=0).data[:, 2]
    x3 = x3 - x3.mean()
    gamma1 = float(x3[1:] @ x3[:-1]) / len(x3)
    assert gamma1 == pytest.approx(2 / 3, abs=0.1)


def test_white_noise_moments():
    m = VarModel(("1", "2"), np.zeros((1, 2, 2)), np.array([[1.0, 0.4], [0.4, 2.0]]))
    x = simulate_var(m, 5000, seed=4).data
    assert np.all(np.abs(x.mean(axis=0)) < 0.1)
    assert np.all(np.abs(np.cov(x.T) - m.sigma) < 0.15)


def test_simulation_deterministic():
    m = trivariate_model()
    assert simulate_var(m, 100, seed=3) == simulate_var(m, 100, seed=3)
    assert simulate_var(m, 100, seed=3) != simulate_var(m, 100, seed=4)
    with pytest.raises(ModelError):
        simulate_var(VarModel(("1",), np.array([[[1.5]]]), np.eye(1)), 10)


# -- fitting ------------------------------------------------------------------


def test_fit_recovers_coefficients(g3):
    m = trivariate_model()
    fit = fit_var(simulate_var(m, 5000, seed=0), g3, 1)
    np.testing.assert_allclose(fit.phi, m.phi, atol=0.1)
    np.testing.assert_allclose(fit.sigma, m.sigma, atol=0.1)
    assert validate_var(fit, g3) == [] or all(v.kind == "undirected" for v in validate_var(fit, g3))


def test_fit_full_graph_is_ols():
    lab = ["1", "2", "3"]
    full = MixedGraph(lab, [(a, b) for a in lab for b in lab if a != b])
    s = simulate_var(trivariate_model(), 800, seed=5)
    fit = fit_var(s, full, 2)
    Y = s.data[2:]
    Z = np.hstack([s.data[1:-1], s.data[:-2]])
    B, *_ = np.linalg.lstsq(Z, Y, rcond=None)
    np.testing.assert_allclose(fit.phi[0], B[:3].T, atol=1e-10)
    np.testing.assert_allclose(fit.phi[1], B[3:].T, atol=1e-10)


def test_fit_white_noise_near_zero():
    s = simulate_var(VarModel(("1", "2"), np.zeros((1, 2, 2)), np.eye(2)), 5000, seed=6)
    fit = fit_var(s, MixedGraph(["1", "2"], [("1", "2"), ("2", "1")]), 1)
    assert np.all(np.abs(fit.phi) < 0.1)


def test_fit_needs_enough_data(g3):
    s = simulate_var(trivariate_model(), 20, seed=0)
    with pytest.raises(EstimationError):
        fit_var(s, g3, 1)


# -- empirical tests ----------------------------------------------------------


def test_white_noise_rejection_rate():
    m = VarModel(("1", "2", "3"), np.zeros((1, 3, 3)), np.eye(3))
    rej = 0
    for seed in range(200):
        s = simulate_var(m, 500, burnin=10, seed=seed)
        rej += test_noncausal(s, ["1"], ["2"], ["3"], p=1).decision_at_alpha
    assert rej / 200 <= 0.03


def test_noncausal_detects_planted_effect():
    s = simulate_var(trivariate_model(), 2000, seed=1)
    rep = test_noncausal(s, ["2"], ["1"], ["3"])
    assert rep.decision_at_alpha and rep.test == "granger-F"
    assert not test_noncausal(s, ["1"], ["3"], ["2"]).decision_at_alpha


def test_contemp_detects_concentration():
    sigma = np.linalg.inv(np.array([[1.0, 0.4, 0.0], [0.4, 1.0, 0.0], [0.0, 0.0, 1.0]]))
    s = simulate_var(VarModel(("1", "2", "3"), np.zeros((1, 3, 3)), sigma), 2000, seed=2)
    assert test_contemp(s, ["1"], ["2"], ["3"]).decision_at_alpha
    assert not test_contemp(s, ["1"], ["3"], ["2"]).decision_at_alpha


def test_regime_requires_two_targets():
    s = simulate_var(trivariate_model(), 500, seed=0)
    with pytest.raises(ValueError):
        test_regime(s, ["1"], ["2"])
    assert not test_regime(s, ["3"], ["1", "2"]).decision_at_alpha


def test_check_statement_dispatch():
    s = simulate_var(trivariate_model(), 1000, seed=0)
    nc = MarkovStatement(StatementKind.NONCAUSAL, ("1",), ("2", "3"), ("1", "2", "3"))
    reps = check_statement(s, nc)
    assert [r.test for r in reps] == ["granger-F", "regime-z"]
    assert all(r.statement == nc for r in reps)
    ci = MarkovStatement(StatementKind.CONTEMP_CI, ("1",), ("3",), ("1", "2", "3"))
    assert [r.test for r in check_statement(s, ci)] == ["fisher-z"]


def test_degenerate_series():
    const = TimeSeries(("1", "2"), np.column_stack([np.ones(200), np.random.default_rng(0).normal(size=200)]))
    with pytest.raises(EstimationError):
        test_noncausal(const, ["2"], ["1"])
    with pytest.raises(EstimationError):
        test_contemp(const, ["1"], ["2"])
    s = simulate_var(trivariate_model(), 100, seed=0)
    with pytest.raises(ValueError):
        test_noncausal(s, ["1"], ["1"])
