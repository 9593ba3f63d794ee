"""Smoke tests for the python module: one quick pass over each main operation."""

import math

import pytest

nl = pytest.importorskip("_nodalab")


def test_version():
    assert nl.__version__


def test_fields_and_frequency():
    u = nl.make_harmonic_poly(2, 4)
    assert u.dim == 2
    assert u.degree == 4
    assert abs(u.value([0.5, 0.0]) - 0.5**4) < 1e-15
    beta = nl.frequency_beta(u, [0.0, 0.0], 0.5)
    assert abs(beta - 4.5) < 1e-6

    t = nl.make_torus_eigen(2, [3, 4])
    assert t.eigenvalue == 25.0
    lift = nl.lift_eigenfunction(t)
    assert lift.dim == 3

    roundtrip = nl.field_from_descriptor(u.descriptor())
    assert roundtrip.value([0.3, 0.2]) == u.value([0.3, 0.2])


def test_doubling_and_sup():
    u = nl.make_harmonic_poly(2, 6)
    rep = nl.doubling_index_ball(u, [0.0, 0.0], 0.25)
    assert abs(rep.N - 6.0) < 1e-9
    sup = nl.sup_norm_ball(u, nl.Ball([0.0, 0.0], 0.5))
    assert abs(sup.value - 0.5**6) < 1e-12
    cube = nl.doubling_index_cube(u, nl.Cube([0.0, 0.0], 1.0), 3, 6)
    assert cube.N >= 6.0 - 1e-6


def test_growth_checks():
    u = nl.make_harmonic_poly(2, 8)
    rep = nl.check_growth_sandwich(u, [0.0, 0.0], 0.1, 4.0, 0.25)
    assert rep.holds
    residual, lhs, rhs = nl.check_log_integral(u, [0.0, 0.0], 0.1, 1.0)
    assert residual < 1e-8
    ratio, below, violation = nl.check_center_shift(u, [0.0, 0.0], [0.05, 0.0], 0.2, 4.0)
    assert ratio >= 0.99 and not violation


def test_nodal_measures():
    circ = nl.make_sphere_quadric([0.0, 0.0], 0.5)
    Q = nl.Cube([0.0, 0.0], 1.0)
    march = nl.nodal_measure_marching(circ, Q, depth=7)
    assert abs(march.value - math.pi) < 0.01 * math.pi
    croft = nl.nodal_measure_crofton(circ, Q, lines=4000, seed=5)
    assert abs(croft.value - math.pi) < 0.1 * math.pi
    again = nl.nodal_measure_crofton(circ, Q, lines=4000, seed=5, threads=4)
    assert again.value == croft.value

    N, density = nl.thv_datapoint(nl.make_harmonic_poly(2, 3), Q, depth=7)
    assert abs(N - 3.0) < 1e-6
    assert density > 0.0


def test_yau_fit():
    family = [nl.make_torus_eigen(2, [m, m]) for m in (1, 2, 4, 8)]
    fit = nl.yau_scaling_fit(family, method="marching", depth=7)
    assert abs(fit.fitted_exponent - 0.5) < 0.02


def test_census_and_recursion():
    u = nl.make_harmonic_poly(2, 8)
    rep = nl.subcube_census(u, nl.Cube([0.0, 0.0], 1.0), 5, 0.5)
    assert rep.verdict
    assert len(rep.subcube_indices) == 25

    model = nl.recursion_exponent(2, 1.0)
    assert model.alpha == 3.0 and model.majorant_ok

    tree = nl.simulate_bad_cube_tree(1, 2, depth=10, j0=0, seed=1, spawn="always_max")
    assert tree.K_ok and tree.M_ok
    assert tree.K[3] == 1.5**3


def test_simplex_and_covering():
    tri = nl.Simplex([[0.0, 0.577350269189626], [-0.5, -0.288675134594813],
                      [0.5, -0.288675134594813]])
    metrics = nl.simplex_metrics(tri)
    assert abs(metrics.relative_width - math.sqrt(3) / 2) < 1e-6
    chk = nl.covering_check(tri, 2.0, 0.1)
    assert chk.holds
    delta = nl.delta_of_t(tri, 0, 1.0, 2.0)
    assert delta > 0.0

    res = nl.extract_wide_simplex([[0, 0], [1, 0], [1, 1], [0, 1]],
                                  nl.Cube([0.5, 0.5], 0.5))
    assert res.achieved_a >= 0.5 - 1e-9


def test_smallness():
    q = nl.Cube([0.5, 0.5], 0.5)
    face = nl.Face(q, axis=1, side=-1)
    rep = nl.sinh_smallness_experiment([6.0, 10.0, 14.0, 18.0], q, face)
    assert 0.0 < rep.fitted_alpha <= 1.0
    ok, slacks = nl.smallness_bound_check(rep, rep.envelope_C, rep.fitted_alpha)
    assert ok


def test_cli_roundtrip(tmp_path):
    cfg = tmp_path / "exp.json"
    cfg.write_text('{"experiment":"exponent","A":2,"c":1.0}')
    code = nl.run_cli(["exponent", "--config", str(cfg), "--out", str(tmp_path)])
    assert code == 0
    assert (tmp_path / "exponent.json").exists()
    assert (tmp_path / "exponent_manifest.json").exists()
