import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from calibra.complex import Chain, SimplicialComplex
from calibra.currents import (
    boundary,
    calibration_defect,
    cone_chain,
    density_estimate,
    density_template,
    fill_cycle,
    mass,
    pair,
    simplex_quadrature,
    stokes_check,
    transport,
    unit_ball_volume,
)
from calibra.demos import (
    annulus,
    circle_chain,
    demo_complexes,
    full_chain,
    grid_square,
    holomorphic_graph_complex,
    polygon_disc,
    tilted_square,
)
from calibra.forms import constant_form, dx, kahler_form, volume_form

from polyforms import random_polynomial_form


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.lists(st.integers(0, 2), min_size=4, max_size=4))
def test_quadrature_dirichlet_moments(k, a):
    # mean of prod lambda_i^a_i over the simplex = k! prod a_i! / (k + sum a)!
    a = a[: k + 1]
    order = sum(a)
    nodes, w = simplex_quadrature(k, max(order, 1))
    val = w @ np.prod(nodes ** np.array(a), axis=1)
    exact = math.factorial(k) * math.prod(math.factorial(x) for x in a) / math.factorial(k + order)
    assert val == pytest.approx(exact, rel=1e-12)


def test_pair_examples():
    T = full_chain(grid_square(2, dim=3), 2)
    assert pair(T, volume_form(2, 3)) == pytest.approx(1)
    assert pair(T, constant_form(dx(3, 1, 3))) == pytest.approx(0)
    theta = 0.7
    T = full_chain(tilted_square(theta), 2)
    assert pair(T, volume_form(2, 3)) == pytest.approx(math.cos(theta), abs=1e-12)


def test_calibration_defect_examples():
    T = full_chain(grid_square(2, dim=3), 2)
    assert calibration_defect(T, volume_form(2, 3)) == pytest.approx(0, abs=1e-12)
    theta = 0.7
    T = full_chain(tilted_square(theta), 2)
    assert calibration_defect(T, volume_form(2, 3)) == pytest.approx(1 - math.cos(theta), abs=1e-12)
    with pytest.raises(ValueError):
        calibration_defect(T, volume_form(2, 3).scaled(2))


def test_holomorphic_graph_defect_second_order():
    d = [calibration_defect(full_chain(holomorphic_graph_complex(nx=n), 2), kahler_form(4)) for n in (6, 12, 24)]
    assert all(x >= -1e-12 for x in d)
    assert d[2] < 5e-3
    assert math.log2(d[1] / d[2]) > 1.8


def test_pair_with_polynomial_matches_exact_integral():
    # int over the unit square of x*y dx^dy = 1/4
    from calibra.forms import FormField

    phi = FormField(2, 2, lambda p: np.array([p[0] * p[1]]))
    assert pair(full_chain(grid_square(3), 2), phi) == pytest.approx(0.25, abs=1e-14)


def test_stokes_with_exact_derivative():
    rng = np.random.default_rng(4)
    for name, T in demo_complexes().items():
        n = T.complex.dim
        psi, dpsi = random_polynomial_form(T.degree - 1, n, 3, rng)
        exact = abs(pair(boundary(T), psi) - pair(T, dpsi))
        assert exact <= 1e-12, name
        assert stokes_check(T, psi) <= 1e-5, name


def test_stokes_degree_check():
    with pytest.raises(ValueError):
        stokes_check(full_chain(grid_square(1), 2), volume_form(2, 2))


def test_unit_ball_volume():
    assert unit_ball_volume(1) == pytest.approx(2)
    assert unit_ball_volume(2) == pytest.approx(math.pi)
    assert unit_ball_volume(3) == pytest.approx(4 * math.pi / 3)


def test_density_template_fractions():
    for k in (1, 2, 3):
        cen, frac = density_template(k, 3)
        assert frac.sum() == pytest.approx(1)
        assert np.allclose(cen.sum(axis=1), 1)


def test_density_examples():
    T = full_chain(grid_square(8), 2)
    assert density_estimate(T, [0.5, 0.5], [0.1])[0] == pytest.approx(1, rel=0.02)
    assert density_estimate(T, [0.5, 0.0], [0.1])[0] == pytest.approx(0.5, rel=0.02)
    assert density_estimate(2 * T, [0.5, 0.5], [0.1])[0] == pytest.approx(2, rel=0.02)
    assert density_estimate(T, [0.0, 0.0], [0.1])[0] == pytest.approx(0.25, rel=0.03)
    assert density_estimate(Chain(T.complex, 2), [0.5, 0.5], [0.1])[0] == 0


def test_density_curve_and_errors():
    K = polygon_disc(64)
    C = circle_chain(K, 64)
    assert density_estimate(C, [1.0, 0.0], [0.05])[0] == pytest.approx(1, rel=0.02)
    with pytest.raises(ValueError):
        density_estimate(full_chain(grid_square(2), 2), [3.0, 0.0], [0.1])
    with pytest.raises(ValueError):
        density_estimate(full_chain(grid_square(2), 2), [0.5, 0.5], [0.0])


def test_fill_triangle():
    K = SimplicialComplex([[0, 0], [1, 0], [0, 1]], {2: [[0, 1, 2]]})
    S = fill_cycle(boundary(Chain(K, 2, [1])))
    assert S == Chain(K, 2, [1])


def test_fill_annulus_equator_infeasible():
    K = annulus(12)
    assert fill_cycle(circle_chain(K, 12)) is None


def test_fill_sum_of_boundaries():
    K = grid_square(2)
    T = Chain(K, 2, [1, 0, 0, 0, 0, 0, 2, 0])
    S = fill_cycle(boundary(T))
    assert S is not None and boundary(S) == boundary(T)


def test_fill_rejects_non_cycle():
    K = grid_square(1)
    with pytest.raises(ValueError):
        fill_cycle(Chain(K, 1, [1, 0, 0, 0, 0]))


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=18, max_size=18))
def test_fill_random_boundaries(c):
    K = grid_square(3)
    b = boundary(Chain(K, 2, c))
    S = fill_cycle(b)
    assert S is not None and boundary(S) == b


def test_cone_16gon_and_64gon():
    for n in (16, 64):
        K = polygon_disc(n)
        link = Chain.from_simplices(
            SimplicialComplex(K.vertices[:n], {1: [[i, (i + 1) % n] for i in range(n)]}), 1,
            [((i, (i + 1) % n), 1) for i in range(n)],
        )
        C = cone_chain(link, [0.0, 0.0])
        assert mass(C) == pytest.approx(n / 2 * math.sin(2 * math.pi / n), rel=1e-12)
        assert boundary(C) == transport(link, C.complex)
        assert pair(C, volume_form(2, 2)) == pytest.approx(mass(C), rel=1e-12)


def test_cone_over_great_circle_is_flat_disc():
    n = 24
    ang = 2 * np.pi * np.arange(n) / n
    V = np.stack([np.cos(ang), np.sin(ang), np.zeros(n)], axis=1)
    K = SimplicialComplex(V, {1: [[i, (i + 1) % n] for i in range(n)]})
    link = Chain(K, 1, np.ones(n, dtype=np.int64))
    C = cone_chain(link, [0, 0, 0])
    assert calibration_defect(C, volume_form(2, 3)) == pytest.approx(0, abs=1e-12)


def test_cone_rejects_off_sphere():
    K = SimplicialComplex([[1, 0], [0, 2]], {1: [[0, 1]]})
    with pytest.raises(ValueError):
        cone_chain(Chain(K, 1, [1]), [0, 0])


def test_transport_between_complexes():
    K = grid_square(1)
    L = SimplicialComplex(K.vertices, {2: [[0, 3, 2], [0, 1, 3]]})
    T = Chain.from_simplices(K, 2, [((0, 2, 3), 1)])
    assert mass(transport(T, L)) == pytest.approx(mass(T))
