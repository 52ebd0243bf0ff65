"""Smoke tests for the Python bindings."""

import math

import pytest

import jetspace as js


def test_multiindex_basics():
    assert js.enumerate_indices(2, 1) == [[1, 0], [0, 1]]
    assert js.enumerate_indices(2, 2) == [[2, 0], [1, 1], [0, 2]]
    assert js.index_count(2, 2) == 3
    assert js.index_factorial([2, 1]) == 2
    assert js.index_leq([1, 0], [1, 1])
    assert js.monomial([3.0, 2.0], [1, 2]) == 12.0


def test_group_operations():
    p = js.JetPoint(1, 1, [1.0], [3.0, 2.0])
    q = js.JetPoint(1, 1, [4.0], [6.0, 5.0])
    r = js.compose(p, q)
    assert r.base == [5.0]
    assert r.coords == [17.0, 7.0]

    assert js.inverse(p).coords == [-1.0, -2.0]
    assert js.dilate(2.0, p).coords == [12.0, 4.0]
    assert js.homogeneous_norm(p) == pytest.approx(2.0)
    assert js.box_distance(js.JetPoint.identity(1, 1), p) == pytest.approx(2.0)

    round_trip = js.JetPoint.from_json(p.to_json())
    assert round_trip.coords == p.coords


def test_jets_and_expressions():
    f1 = js.make_fk(1)
    jet = js.jet_eval(f1, [0.0], 2)
    assert jet[(0,)] == pytest.approx(0.0)
    assert jet[(1,)] == pytest.approx(0.0)
    assert jet[(2,)] == pytest.approx(2.0 * math.pi**2)
    assert js.eval_expr(f1, [math.pi / 2]) == pytest.approx(math.pi**4 / 16)
    assert "(pow" in f1.to_sexpr()


def test_embeddings():
    e = js.embed_circle(1, math.pi / 2)
    assert e.base[0] == pytest.approx(math.pi / 2)
    assert e.coord([0]) == pytest.approx(math.pi**4 / 16)

    body = js.make_body(2, 1)
    assert body.beta is None
    assert js.eval_expr(body.f, [0.0, 0.0]) == pytest.approx(1.0)
    assert js.eval_expr(body.f, [0.75, 0.0]) == pytest.approx(0.0625)

    north = js.polar_lift([0.0, 0.0])
    assert north.ambient == [0.0, 0.0, 1.0]
    jet = js.embed_sphere(body, north)
    assert jet.coord([0, 0]) == pytest.approx(1.0)

    u = js.lambda_map([1.0, 1.0])
    assert u[0] == pytest.approx(1.0 / math.sqrt(2.0))
    back = js.lambda_inv(u)
    assert back[0] == pytest.approx(1.0)


def test_forms_and_metrics():
    value, error = js.obstruction_integral(2, 1, 8)
    assert abs(value) > 10 * error

    cases = js.stokes_suite(3, count=3, seed=0, resolution=8)
    assert all(c["pass"] for c in cases)

    max_abs, extremal = js.comass_check(2, 1, samples=500, seed=0)
    assert max_abs <= 1.0 + 1e-9
    assert extremal == pytest.approx(1.0)

    report = js.distortion_scan("lambda", dim=2, pairs=2000)
    assert report["min_ratio"] >= 1.0 / 9.0 - 1e-9
    assert report["max_ratio"] <= 3.0 + 1e-9

    checks = js.group_check(1, 2, trials=100)
    assert checks["max_deviation"]["associativity"] <= 1e-10
