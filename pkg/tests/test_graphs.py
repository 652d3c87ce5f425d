import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from calibra.exterior import KVector
from calibra.forms import catalog_form, coassociative_form, graph_form, kahler_form, slag_form, volume_form
from calibra.graphs import (
    SQRT5_2,
    AffineGraph,
    HolomorphicGraph,
    LawsonOssermanGraph,
    PotentialGradientGraph,
    QuadraticGraph,
    ScherkGraph,
    area_integrand,
    difference_operator,
    graph_calibrated_defect,
    graph_residual,
    lawson_osserman_map,
    mse_coefficient_derivative,
    mse_coefficients,
    mss_residual,
    sample_domain,
    simons_mean_curvature,
    slag_phase,
    tangent_plane,
)


def test_area_integrand_examples():
    m = area_integrand(np.zeros((2, 2)))
    assert m.F == 1 and np.array_equal(m.g, np.eye(2))
    assert area_integrand([[1.0]]).F == pytest.approx(math.sqrt(2))
    assert area_integrand(np.eye(2)).F == pytest.approx(2)
    with pytest.raises(ValueError):
        area_integrand([[np.nan]])


def test_mss_residual_examples():
    assert np.all(mss_residual(AffineGraph([[1.0, 2.0], [0.5, -1.0]]), [0.3, 0.4]) == 0)
    u = QuadraticGraph(np.array([[2.0, 0.0], [0.0, 0.0]]))
    x = np.array([0.3, -0.1])
    g11 = 1.0 / (1.0 + (2 * x[0]) ** 2)
    assert mss_residual(u, x)[0] == pytest.approx(2 * g11)


def test_loc_mss_and_defect():
    u = LawsonOssermanGraph()
    xs = sample_domain(u, 50, seed=2)
    assert max(np.abs(mss_residual(u, x)).max() for x in xs) <= 1e-6
    assert graph_calibrated_defect(u, coassociative_form(), xs) <= 1e-6


def test_loc_value_at_e1():
    v = lawson_osserman_map([1, 0, 0, 0])
    assert np.allclose(v, [0, 0, SQRT5_2], atol=1e-15)
    with pytest.raises(ValueError):
        lawson_osserman_map(np.zeros(4))


def test_loc_derivatives_match_differences():
    u = LawsonOssermanGraph()
    for x in sample_domain(u, 10, seed=5):
        if np.linalg.norm(x) > 0.2:
            assert u.derivative_fd_error(x, 1e-5) < 1e-6


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.floats(0.1, 10.0))
def test_loc_homogeneous_and_norm(seed, t):
    x = np.random.default_rng(seed).normal(size=4)
    v = lawson_osserman_map(x)
    assert np.linalg.norm(v) == pytest.approx(SQRT5_2 * np.linalg.norm(x), rel=1e-12)
    assert np.allclose(lawson_osserman_map(t * x), t * v, rtol=1e-12, atol=1e-12)


def test_loc_singular_point_rejected():
    with pytest.raises(ValueError):
        LawsonOssermanGraph().point(np.zeros(4))
    with pytest.raises(ValueError):
        LawsonOssermanGraph().point([0.05, 0, 0, 0])


def test_mse_coefficients_examples():
    assert np.array_equal(mse_coefficients([0.0, 0.0]), np.eye(2))
    a = mse_coefficients([1.0, 0.0])
    assert a[0, 0] == pytest.approx(2**-1.5)
    assert a[1, 1] == pytest.approx(2**-0.5)
    with pytest.raises(ValueError):
        mse_coefficients(np.ones((2, 2)))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-5, 5), min_size=3, max_size=3))
def test_mse_eigen_bracket(p):
    p = np.array(p)
    W2 = 1 + p @ p
    ev = np.linalg.eigvalsh(mse_coefficients(p))
    assert ev.min() >= W2**-1.5 * (1 - 1e-12)
    assert ev.max() <= W2**-0.5 * (1 + 1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_mse_coefficient_derivative_fd(seed):
    p = np.random.default_rng(seed).normal(size=3)
    D = mse_coefficient_derivative(p)
    h = 1e-6
    for m in range(3):
        e = np.zeros(3)
        e[m] = h
        fd = (mse_coefficients(p + e) - mse_coefficients(p - e)) / (2 * h)
        assert np.allclose(D[:, :, m], fd, atol=1e-8)


def test_tangent_plane_examples():
    assert tangent_plane(AffineGraph(np.zeros((2, 3))), np.zeros(3)).plucker.isclose(KVector.basis(5, 1, 2, 3))
    P = tangent_plane(AffineGraph([[1.0]]), [0.0])
    assert np.allclose(P.plucker_array, np.array([1, 1]) / math.sqrt(2))
    # (z, z^2) at z = 1: complex line through (1, 2) in C^2 with coordinates (x1, x2, y1, y2)
    P = tangent_plane(HolomorphicGraph([0, 0, 1]), [1.0, 0.0])
    Q = tangent_plane(AffineGraph(np.array([[2.0, 0.0], [0.0, 2.0]]), axes=(0, 2, 1, 3)), [0.0, 0.0])
    assert np.allclose(P.plucker_array, Q.plucker_array, atol=1e-12)


def test_defect_examples():
    assert graph_calibrated_defect(AffineGraph(np.zeros((1, 2))), volume_form(2, 3), [[0.1, 0.2]]) == 0
    u = PotentialGradientGraph.quadratic([1.0, 1.0])
    xs = np.random.default_rng(0).uniform(-1, 1, (20, 2))
    assert graph_calibrated_defect(u, slag_form(4, 2 * math.pi / 4), xs) <= 1e-12
    u = PotentialGradientGraph.quadratic([1.0, 1.0, 1.0])
    xs = np.random.default_rng(0).uniform(-1, 1, (20, 3))
    assert graph_calibrated_defect(u, slag_form(6, 3 * math.pi / 4), xs) <= 1e-12
    assert graph_calibrated_defect(HolomorphicGraph([1, 2, 0.5j, 1]), kahler_form(4), xs[:, :2]) <= 1e-12


def test_defect_detects_wrong_phase():
    u = PotentialGradientGraph.quadratic([1.0, 1.0])
    assert graph_calibrated_defect(u, slag_form(4, 0.0), [[0.0, 0.0]]) > 0.2


def test_slag_phase_examples():
    assert slag_phase(PotentialGradientGraph.quadratic([1, 1, 1]), np.zeros(3)) == pytest.approx(3 * math.pi / 4)
    assert slag_phase(PotentialGradientGraph.quadratic([1, -1]), np.zeros(2)) == pytest.approx(0)
    c = [0.3, -2.0, 5.0]
    assert slag_phase(PotentialGradientGraph.quadratic(c), np.zeros(3)) == pytest.approx(sum(map(math.atan, c)))


def test_scherk_solves_mse():
    u = ScherkGraph()
    for x in sample_domain(u, 20, seed=1):
        assert abs(graph_residual(u, x)[0]) < 1e-12
        assert u.derivative_fd_error(x) < 1e-6


def test_simons_cone_minimal():
    p = np.array([1, 0.5, -0.2, 0.3, 0.8, 0.1, 0.6, -0.4])
    p[4:] *= np.linalg.norm(p[:4]) / np.linalg.norm(p[4:])
    assert abs(simons_mean_curvature(p)) < 1e-6


def test_calibrated_implies_stationary():
    cases = [
        (LawsonOssermanGraph(), coassociative_form()),
        (ScherkGraph(), graph_form(ScherkGraph())),
        (HolomorphicGraph([0, 0, 1]), kahler_form(4)),
        (PotentialGradientGraph.quadratic([1, 1]), slag_form(4, math.pi / 2)),
        (AffineGraph([[0.3, -0.2]]), catalog_form("graph:affine:0.3,-0.2")),
    ]
    for u, phi in cases:
        xs = sample_domain(u, 25, seed=4)
        for x in xs:
            if graph_calibrated_defect(u, phi, [x]) <= 1e-6:
                assert np.abs(mss_residual(u, x)).max() <= 1e-3


def test_difference_operator_same_graph():
    u = ScherkGraph()
    x = np.array([0.2, -0.4])
    L = difference_operator(u, u, x)
    assert np.allclose(L.a, mse_coefficients(u.jacobian(x)[0]), atol=1e-14)
    assert np.allclose(L.apply(np.zeros((1, 2)), np.zeros((1, 2, 2))), 0)


def test_difference_operator_affine_exact():
    u = AffineGraph([[0.4, -0.3]])
    v = AffineGraph([[-1.0, 0.2]], c=[0.5])
    x = np.array([0.1, 0.2])
    L = difference_operator(u, v, x)
    w = u.jacobian(x) - v.jacobian(x)
    assert L.apply(w, np.zeros((1, 2, 2)))[0] == 0


def test_difference_operator_higher_codim():
    u = HolomorphicGraph([0, 1, 0.3])
    v = HolomorphicGraph([0.2, -0.5, 0.0, 0.1])
    for x in np.random.default_rng(1).uniform(-0.5, 0.5, (10, 2)):
        L = difference_operator(u, v, x)
        Dw = u.jacobian(x) - v.jacobian(x)
        D2w = u.hessian(x) - v.hessian(x)
        assert np.abs(L.apply(Dw, D2w)).max() < 1e-12
        lo, hi = L.bracket
        M = max(np.linalg.norm(u.jacobian(x), 2), np.linalg.norm(v.jacobian(x), 2))
        assert lo == pytest.approx(1 / (1 + M * M))
        ev = L.eigenvalues()
        assert lo - 1e-12 <= ev.min() and ev.max() <= hi + 1e-12


def test_difference_operator_rejects_non_solution():
    u = QuadraticGraph(np.array([[2.0, 0.0], [0.0, 0.0]]))
    with pytest.raises(ValueError):
        difference_operator(u, AffineGraph([[0.0, 0.0]]), [0.1, 0.1])


def test_difference_operator_scherk_translates():
    # translates of Scherk's surface are two exact solutions on a common box
    u = ScherkGraph()

    def shifted(x, s=np.array([0.1, -0.05])):
        y = x + s
        return u.jacobian(y), u.hessian(y)

    for x in np.random.default_rng(3).uniform(-0.8, 0.8, (20, 2)):
        Dv, D2v = shifted(x)
        L = difference_operator(u, (Dv, D2v), x, lipschitz=3.0)
        r = L.apply(u.jacobian(x) - Dv, u.hessian(x) - D2v)
        assert abs(r[0]) < 1e-12
        assert L.bracket[0] <= L.eigenvalues().min()


def test_graph_domain_and_axes_validation():
    with pytest.raises(ValueError):
        AffineGraph([[1.0]], axes=(0, 0))
    with pytest.raises(ValueError):
        ScherkGraph(2.0)
    with pytest.raises(ValueError):
        ScherkGraph().point([1.3, 0.0])
