import numpy as np
import pytest

from troploc.core import segment_vertices, torus_equal
from troploc.gauges import (
    Aggregator,
    CustomGauge,
    HyperplaneGauge,
    SimplexGauge,
    TropLp,
    dual_gamma1,
    extend_monotone,
    gamma_p,
    gamma_simplex,
    gauge_from_config,
    gauge_to_config,
    hyperplane_dist,
)

CONVEX_KINDS = [TropLp(1.0), TropLp(2.0), TropLp(3.0), TropLp(np.inf), SimplexGauge(lam=np.array([1.0, 2.0, 0.5, 1.5]))]
STRICT_KINDS = [TropLp(1.0), TropLp(2.0), TropLp(3.0), SimplexGauge(lam=np.array([1.0, 2.0, 0.5, 1.5]))]


@pytest.mark.parametrize("p, expected", [(1, 3.0), (np.inf, 2.0), (2, np.sqrt(5.0))])
def test_gamma_p(p, expected):
    assert gamma_p([0, 1, 2], p) == pytest.approx(expected)


@pytest.mark.parametrize("p", [1, 2, 7.5, np.inf])
def test_gamma_p_zero_class(p):
    assert gamma_p([4.0, 4.0, 4.0], p) == 0.0


def test_gamma_p_rejects_small_p():
    with pytest.raises(ValueError):
        gamma_p([0, 1, 2], 0.25)
    with pytest.raises(ValueError):
        TropLp(0.5)


def test_gamma_simplex():
    assert gamma_simplex([0, 1, 2], [1, 1, 1]) == pytest.approx(3.0)
    assert gamma_simplex([0, 1, 2], [2, 1, 1]) == pytest.approx(3.0)
    assert gamma_simplex([7, 7, 7], [2, 1, 1]) == 0.0
    with pytest.raises(ValueError):
        gamma_simplex([0, 1, 2], [1, 0, 1])


def test_gamma_simplex_unit_weights_is_l1(rng):
    for x in rng.normal(size=(50, 4)):
        assert gamma_simplex(x, np.ones(4)) == pytest.approx(gamma_p(x, 1))


@pytest.mark.parametrize("diff, expected", [((0, 1, 2), 1.0), ((0, 0, 2), 0.0), ((5, 5, 5), 0.0)])
def test_hyperplane_dist(diff, expected):
    assert hyperplane_dist(np.zeros(3), np.array(diff, dtype=float)) == pytest.approx(expected)
    # depends on apex - a only
    assert hyperplane_dist(np.ones(3), np.array(diff, dtype=float) + 1.0) == pytest.approx(expected)


def test_extend_monotone_examples():
    ext = extend_monotone(lambda x: float(np.max(x)))
    assert ext(np.array([1.0, 2.0, 0.0])) == pytest.approx(2.0)
    assert ext(np.array([1.0, 1.0, 1.0])) == pytest.approx(2.0)
    assert ext(np.zeros(3)) == pytest.approx(0.0)


def test_extend_monotone_strict(rng):
    ext = extend_monotone(lambda x: float(np.sum(x)))
    for _ in range(300):
        x = rng.uniform(0, 2, size=4)
        x[int(rng.integers(4))] = 0.0 if rng.random() < 0.5 else x[0]
        y = x + rng.uniform(0, 1, size=4) * (rng.random(4) < 0.7)
        if np.all(y == x):
            continue
        assert ext(x) < ext(y)


def test_dual_gamma1():
    assert dual_gamma1([0, 1, 2]) == pytest.approx(1.0)
    assert dual_gamma1([3, 3, 3]) == 0.0


def test_dual_gamma1_integer_lattice(rng):
    for _ in range(100):
        x = rng.integers(-5, 6, size=4).astype(float)
        x -= x.mean()
        if not np.allclose(x, np.round(x)):
            continue
        v = dual_gamma1(x) * 4
        assert v == pytest.approx(round(v), abs=1e-9)


def test_eval_at_kernel_and_examples():
    k = np.array([0.0, 0.0, 0.0])
    assert TropLp(1.0).at(k)(np.array([0.0, 1.0, 2.0])) == pytest.approx(3.0)
    v = np.array([1.0, -2.0, 0.5])
    for g in CONVEX_KINDS[:4] + [HyperplaneGauge()]:
        assert g.at(v)(v) == 0.0
    x = np.array([3.0, 1.0, 0.0])
    assert HyperplaneGauge().at(v)(x) == pytest.approx(hyperplane_dist(v, x))


def test_eval_dimension_mismatch():
    with pytest.raises(ValueError):
        TropLp(1.0).at(np.zeros(3))(np.zeros(4))


def test_representative_invariance(rng):
    for g in CONVEX_KINDS:
        v = rng.normal(size=4)
        x = rng.normal(size=4)
        gv = g.at(v)
        assert gv(x + 2.75) == pytest.approx(gv(x))


def test_monotone_on_canonical_coordinates(rng):
    for g in STRICT_KINDS + [TropLp(np.inf)]:
        for _ in range(100):
            a = rng.uniform(0, 3, size=4)
            a[int(rng.integers(4))] = 0.0
            b = a + rng.uniform(0, 1, size=4)
            b[a == 0] = 0.0
            assert g.gamma(a) <= g.gamma(b) + 1e-12
            if g.strict and not np.allclose(a, b):
                assert g.gamma(a) < g.gamma(b)


def test_lp_monotone_in_p(rng):
    for x in rng.normal(size=(200, 5)):
        vals = [gamma_p(x, p) for p in (1, 1.5, 2, 4, np.inf)]
        assert all(vals[i] >= vals[i + 1] - 1e-12 for i in range(len(vals) - 1))


def test_sublevel_star(rng):
    for g in STRICT_KINDS:
        for _ in range(100):
            v, w = rng.normal(size=(2, 4)) * 2
            f = g.at(v)
            for u in segment_vertices(v, w):
                if not torus_equal(u, w):
                    assert f(u) < f(w)
    f = TropLp(np.inf)
    for _ in range(100):
        v, w = rng.normal(size=(2, 4)) * 2
        for u in segment_vertices(v, w):
            assert f.at(v)(u) <= f.at(v)(w) + 1e-12


def test_convexity_midpoints(rng):
    for g in CONVEX_KINDS:
        for _ in range(100):
            v, x, y = rng.normal(size=(3, 4)) * 2
            f = g.at(v)
            assert f((x + y) / 2) <= (f(x) + f(y)) / 2 + 1e-10


@pytest.mark.parametrize(
    "g, x, expected",
    [
        (TropLp(1.0), [1.0, 0.0, 2.0], [1.0, -2.0, 1.0]),
        (TropLp(np.inf), [0.0, 1.0, 2.0], [-1.0, 0.0, 1.0]),
    ],
)
def test_subgradient_examples(g, x, expected):
    np.testing.assert_allclose(g.at(np.zeros(3)).subgradient(np.array(x)), expected, atol=1e-12)


def test_subgradient_at_kernel_is_bounded():
    for g in CONVEX_KINDS:
        v = np.arange(4.0)
        s = g.at(v).subgradient(v)
        assert abs(s.sum()) < 1e-12
        assert np.linalg.norm(s) <= 8.0


def test_subgradient_ties_uniform():
    s = TropLp(np.inf).at(np.zeros(3)).subgradient(np.array([0.0, 0.0, 2.0]))
    np.testing.assert_allclose(s, [-0.5, -0.5, 1.0])


def test_subgradient_inequality(rng):
    for g in CONVEX_KINDS:
        for _ in range(100):
            v, x, y = rng.normal(size=(3, 4)) * 2
            f = g.at(v)
            s = f.subgradient(x)
            assert abs(s.sum()) < 1e-9
            assert f(y) - f(x) >= s @ (y - x) - 1e-9


def test_subgradient_finite_differences(rng):
    h = 1e-6
    for g in CONVEX_KINDS:
        for _ in range(60):
            v, x = rng.normal(size=(2, 4)) * 2
            f = g.at(v)
            y = x - v
            sorted_y = np.sort(y)
            if np.min(np.diff(sorted_y)) < 1e-3:
                continue
            d = rng.normal(size=4)
            d -= d.mean()
            fd = (f(x + h * d) - f(x - h * d)) / (2 * h)
            assert fd == pytest.approx(f.subgradient(x) @ d, rel=1e-6, abs=1e-6)


def test_hyperplane_generalized_gradient():
    g = HyperplaneGauge().at(np.zeros(3))
    np.testing.assert_allclose(g.grad(np.array([0.0, 1.0, 2.0])), [-1.0, 1.0, 0.0])
    np.testing.assert_allclose(g.grad(np.array([0.0, 0.0, 2.0])), [0.0, 0.0, 0.0])
    assert not g.convex


def test_custom_gauge():
    g = CustomGauge(fn=lambda z: float(np.max(z) ** 2), is_convex=True).at(np.zeros(3))
    assert g(np.array([0.0, 1.0, 3.0])) == pytest.approx(9.0)
    with pytest.raises(NotImplementedError):
        g.subgradient(np.array([0.0, 1.0, 3.0]))


def test_gauge_config_round_trip():
    for cfg in ({"kind": "lp", "p": 2}, {"kind": "lp", "p": "inf"}, {"kind": "simplex", "lambda": [1.0, 2.0, 3.0]}, {"kind": "hyperplane"}):
        g = gauge_from_config(cfg)
        back = gauge_to_config(g)
        assert back["kind"] == cfg["kind"]
        assert gauge_to_config(gauge_from_config(back)) == back
    with pytest.raises(ValueError):
        gauge_from_config({"kind": "banana"})


def test_strictness_flags():
    assert TropLp(1.0).strict and TropLp(2.0).strict and not TropLp(np.inf).strict
    assert SimplexGauge(lam=np.ones(3)).strict
    assert Aggregator("sum").strict and Aggregator("sum_squares").strict and not Aggregator("max").strict
    assert Aggregator("weighted_sum", [1.0, 2.0]).strict


def test_aggregators():
    f = np.array([1.0, 3.0, 3.0])
    assert Aggregator("sum")(f) == 7.0
    assert Aggregator("weighted_sum", [1, 2, 3])(f) == 16.0
    assert Aggregator("sum_squares")(f) == 19.0
    assert Aggregator("max")(f) == 3.0
    np.testing.assert_allclose(Aggregator("max").grad(f), [0.0, 0.5, 0.5])
    with pytest.raises(ValueError):
        Aggregator("weighted_sum", [1.0, -1.0])
    with pytest.raises(ValueError):
        Aggregator("median")
