import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from calibra.exterior import KCovector, KVector, pair
from calibra.forms import dx, kahler_covector
from calibra.grassmannian import (
    SimplePlane,
    maximize_over_grassmannian,
    plane_angle,
    plane_from_frame,
    random_frames,
)


def test_plane_from_frame_examples():
    assert plane_from_frame([[1, 0, 0], [0, 1, 0]]).plucker.isclose(KVector.basis(3, 1, 2))
    assert plane_from_frame([[1, 0, 0], [1, 1, 0]]).plucker.isclose(KVector.basis(3, 1, 2))
    assert plane_from_frame([[0, 2, 0], [1, 0, 0]]).plucker.isclose(-KVector.basis(3, 1, 2))


def test_plane_from_frame_rejects_dependent():
    with pytest.raises(ValueError):
        plane_from_frame([[1, 0, 0], [2, 0, 0]])
    with pytest.raises(ValueError):
        SimplePlane([[1, 0], [1, 0]])


def test_plane_angle_examples():
    a = plane_from_frame([[1, 0, 0], [0, 1, 0]])
    assert plane_angle(a, a) == pytest.approx(0, abs=1e-7)
    assert plane_angle(a, a.reversed()) == pytest.approx(math.pi)
    assert plane_angle(a, plane_from_frame([[1, 0, 0], [0, 0, 1]])) == pytest.approx(math.pi / 2)


def test_completion_is_orthonormal():
    P = plane_from_frame([[1, 2, 0, 1], [0, 1, 1, 0]])
    Q = P.completion()
    assert np.allclose(Q.T @ Q, np.eye(4), atol=1e-12)
    assert np.array_equal(Q[:, :2], P.frame.T)


def test_maximize_examples():
    _, v = maximize_over_grassmannian(dx(3, 1, 2), 2, 3)
    assert v == pytest.approx(1, abs=1e-6)
    _, v = maximize_over_grassmannian(kahler_covector(4), 2, 4)
    assert v == pytest.approx(1, abs=1e-6)


def brute_force_max(phi, k, n, count, seed):
    """Dense random sampling with minors computed by determinants."""
    from calibra.exterior import multi_indices

    rng = np.random.default_rng(seed)
    idx = multi_indices(n, k)
    c = phi.to_array()
    best = -np.inf
    for _ in range(count):
        Q = np.linalg.qr(rng.normal(size=(n, k)))[0]
        pl = np.array([np.linalg.det(Q[[a - 1 for a in I], :]) for I in idx])
        best = max(best, abs(c @ pl))
    return best


def test_maximize_sqrt2_against_sampling():
    phi = KCovector.basis(3, 1, 2) + KCovector.basis(3, 1, 3)
    P, v = maximize_over_grassmannian(phi, 2, 3)
    assert v == pytest.approx(math.sqrt(2), abs=1e-6)
    assert P.pair(phi) == pytest.approx(v, abs=1e-12)
    sampled = brute_force_max(phi, 2, 3, 4000, 7)
    assert math.sqrt(2) - 1e-2 < sampled <= v + 1e-9


def test_maximize_callable_matches_covector_route():
    phi = KCovector.basis(4, 1, 2) + 0.5 * KCovector.basis(4, 3, 4) + 0.3 * KCovector.basis(4, 1, 3)
    _, v1 = maximize_over_grassmannian(phi, 2, 4, restarts=16)
    _, v2 = maximize_over_grassmannian(lambda P: P.pair(phi), 2, 4, restarts=16, iters=300)
    assert v1 == pytest.approx(v2, abs=1e-6)


def test_maximize_deterministic():
    phi = kahler_covector(6)
    a = maximize_over_grassmannian(phi, 2, 6, seed=5)
    b = maximize_over_grassmannian(phi, 2, 6, seed=5)
    assert a[1] == b[1] and np.array_equal(a[0].frame, b[0].frame)


def test_random_frames_orthonormal():
    V = random_frames(3, 7, 10, 0)
    assert V.shape == (10, 7, 3)
    assert np.allclose(np.einsum("bnk,bnl->bkl", V, V), np.eye(3), atol=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 3))
def test_maximum_bounds_every_plane(seed, k):
    # maximum found is at least the pairing with any sampled plane and at most
    # the Euclidean norm of the covector
    n = 5
    rng = np.random.default_rng(seed)
    phi = KCovector.from_array(k, n, rng.normal(size=math.comb(n, k)))
    _, v = maximize_over_grassmannian(phi, k, n, restarts=16)
    for _ in range(20):
        P = plane_from_frame(rng.normal(size=(k, n)))
        assert P.pair(phi) <= v + 1e-9
    assert v <= phi.norm() + 1e-9


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_plucker_unit_and_simple(seed):
    from calibra.exterior import simplicity_defect

    rng = np.random.default_rng(seed)
    P = plane_from_frame(rng.normal(size=(3, 6)))
    assert P.plucker.norm() == pytest.approx(1, abs=1e-12)
    assert simplicity_defect(P.plucker) < 1e-10
    assert pair(KCovector.from_array(3, 6, P.plucker_array), P.plucker) == pytest.approx(1, abs=1e-12)
