import math
import os

import pytest

import cxrisk as cx

SPACE = cx.ScenarioSpace([2, 1, 3])
X = cx.ScenarioVector(SPACE, [[1.0, -2.0], [0.5], [3.0, 0.0, -1.5]])


def linear():
    return cx.compose(cx.SimpleRiskStatistic.weighted_sum([1, 0.5, 2]),
                      cx.ClusteringFunction.neg_average(SPACE, [1, 1, 1]))


def test_eval_matches_hand_computation():
    # block means 0.5/2, 0.5, 1.5/3 -> phi = (0.5, -0.5, -0.5)
    phi = cx.eval_clustering(linear().clustering, X)
    assert phi == pytest.approx([0.5, -0.5, -0.5])
    assert cx.eval_complex(linear(), X) == pytest.approx(0.5 - 0.25 - 1.0)
    assert cx.block_sum(X) == pytest.approx([-1.0, 0.5, 1.5])


def test_lse_and_conjugates():
    r = cx.SimpleRiskStatistic.log_sum_exp(2, 1.0)
    assert r([0.0, 0.0]) == pytest.approx(math.log(2))
    assert cx.conjugate_simple(r, [0.5, 0.5]) == pytest.approx(math.log(0.5))
    assert math.isinf(cx.conjugate_simple(r, [0.7, 0.7]))
    assert cx.conjugate_maximizer(cx.SimpleRiskStatistic.max(3), [1, 5, 2]) == [0, 1, 0]


def test_decomposition_round_trip():
    rho = cx.compose(cx.SimpleRiskStatistic.log_sum_exp(3, 0.7),
                     cx.ClusteringFunction.expm1_link(SPACE, [1, 2, 0.5]))
    phi_hat = cx.reconstruct_clustering(rho, X)
    assert cx.reconstruct_simple(rho, phi_hat) == pytest.approx(rho(X), abs=1e-6)
    rebuilt = cx.decompose(rho)
    assert rebuilt.reconstructed
    assert rebuilt(X) == pytest.approx(rho(X), abs=1e-6)


def test_flat_ray_raises():
    rho = cx.compose(cx.SimpleRiskStatistic.max(2),
                     cx.ClusteringFunction.neg_average(cx.ScenarioSpace([1, 1]), [1, 1]))
    with pytest.raises(cx.NotInImageError):
        cx.reconstruct_simple(rho, [-2.0, -2.0])
    assert issubclass(cx.NotInImageError, cx.RangeError)


def test_axiom_suites_report():
    rep = cx.check_axiom(cx.SimpleRiskStatistic.max(3), "A2", trials=500, seed=3)
    assert rep.passed and rep.trials == 500 and rep.check == "A2"
    rep = cx.check_axiom(linear(), "C3", trials=200, seed=3)
    assert rep.passed and rep.skipped == 0
    with pytest.raises(ValueError):
        cx.check_axiom(linear(), "A1")
    rep = cx.check_set_monotonicity(linear().clustering, "convex", trials=300)
    assert rep.passed


def test_primal_and_dual_agree_on_linear_family():
    rho = linear()
    p = cx.primal_evaluate(rho, X, step=0.25, extent=1.0)
    assert p["analytic"] == rho(X)
    assert p["numeric"] >= p["analytic"]
    g = cx.duality_gap(rho, X)
    assert abs(g["raw"]) <= 1e-9
    assert g["dual"]["yhat"] == [1, 0.5, 2]
    a = cx.penalty_alpha(rho, [1, 0.5, 2], [-0.5, -0.5, -2 / 3])
    assert a["value"] == pytest.approx(0.0)
    assert math.isinf(cx.penalty_alpha(rho, [1, 0.5, 2], [0, 0, 0])["value"])
    assert cx.weak_duality_check(rho, X, trials=200, seed=1).passed


def test_custom_statistic_from_python():
    r = cx.SimpleRiskStatistic.custom(2, "sum", lambda v: v[0] + v[1])
    assert r([1.5, 2.0]) == 3.5


def test_shape_errors():
    with pytest.raises(cx.ShapeError):
        cx.ScenarioVector(SPACE, [[1.0], [0.5], [3.0, 0.0, -1.5]])
    with pytest.raises(ValueError):
        cx.SimpleRiskStatistic.weighted_sum([1, -1])


def test_config_run_is_deterministic():
    data = os.environ.get("CXRISK_TEST_DATA",
                          os.path.join(os.path.dirname(__file__), "..", "cli"))
    path = os.path.join(data, "linear.json")
    a, code = cx.run(path)
    b, _ = cx.run(path)
    assert a == b
    assert code == 0
    assert a["tool"] == "cxrisk"
    assert len(a["inputs"]) == 4
    with pytest.raises(cx.ConfigError):
        cx.run({"space": {"k": [1]}, "sed": 1})
