"""Operations on integral chains viewed as currents: boundary, mass, pairing with forms,
density, filling and cones."""
from __future__ import annotations

import functools
import itertools
import math

import numpy as np
from scipy.special import roots_jacobi

from . import _kernels
from ._intlinalg import solve_integer
from .calibration import comass_values, derivative_form
from .complex import Chain, SimplicialComplex
from .forms import FormField

DEFAULT_QUAD_ORDER = 4


def boundary(T: Chain) -> Chain:
    if T.degree < 1:
        raise ValueError("boundary of a 0-chain is not defined")
    B = T.complex.boundary_matrix(T.degree)
    return Chain(T.complex, T.degree - 1, B @ T.coeffs)


def mass(T: Chain) -> float:
    return float(np.abs(T.coeffs) @ T.complex.volumes(T.degree))


# ---------------------------------------------------------------------------
# quadrature on simplices


@functools.lru_cache(maxsize=None)
def simplex_quadrature(k: int, order: int = DEFAULT_QUAD_ORDER):
    """Barycentric nodes (Q, k+1) and weights summing to 1, exact to degree ``order``.

    Collapsed-coordinate product of Gauss-Jacobi rules: coordinate i uses
    weight (1 - t)^(k-1-i) to absorb the Jacobian of the collapse.
    """
    if k == 0:
        return np.ones((1, 1)), np.ones(1)
    q = max(1, (order + 2) // 2)
    rules = []
    for i in range(k):
        s, w = roots_jacobi(q, k - 1 - i, 0)
        rules.append(((s + 1) / 2, w))
    nodes, weights = [], []
    for combo in itertools.product(range(q), repeat=k):
        xi = np.empty(k)
        rest = 1.0
        w = 1.0
        for i, c in enumerate(combo):
            t, wt = rules[i][0][c], rules[i][1][c]
            xi[i] = rest * t
            rest *= 1 - t
            w *= wt
        nodes.append(np.concatenate([[1 - xi.sum()], xi]))
        weights.append(w)
    weights = np.array(weights)
    return np.array(nodes), weights / weights.sum()


def _check_form(T: Chain, phi: FormField):
    if phi.degree != T.degree or phi.dim != T.complex.dim:
        raise ValueError("form degree/dimension does not match the chain")


def simplex_pairings(complex_: SimplicialComplex, degree: int, phi: FormField, indices=None, quad_order=DEFAULT_QUAD_ORDER):
    """int over each simplex of <phi, xi_s> (volume included), for the given indices."""
    idx = np.arange(complex_.count(degree)) if indices is None else np.asarray(indices, dtype=np.int64)
    if len(idx) == 0:
        return np.zeros(0)
    vol = complex_.volumes(degree)[idx]
    orient = complex_.orientations(degree)[idx]
    if phi.constant:
        c = phi.coeffs(complex_.vertices[complex_.simplices[degree][idx[0]][0]])
        for p in complex_.vertices[np.unique(complex_.simplices[degree][idx])]:
            if not phi.region.contains(p):
                raise ValueError(f"point {p.tolist()} outside the region of {phi.name or 'form'}")
        return vol * (orient @ c)
    bary, w = simplex_quadrature(degree, quad_order)
    pts = np.einsum("qv,svn->sqn", bary, complex_.vertex_coords(degree)[idx])
    C = phi.coeffs_many(pts.reshape(-1, complex_.dim)).reshape(len(idx), len(w), -1)
    return vol * np.einsum("sqc,q,sc->s", C, w, orient)


def pair(T: Chain, phi: FormField, quad_order: int = DEFAULT_QUAD_ORDER) -> float:
    """T(phi) = sum_s coef(s) int_s <phi, xi_s>."""
    _check_form(T, phi)
    sup = T.support
    if len(sup) == 0:
        return 0.0
    return float(simplex_pairings(T.complex, T.degree, phi, sup, quad_order) @ T.coeffs[sup])


def support_samples(T: Chain, limit: int = 64, quad_order: int = 2) -> np.ndarray:
    """Quadrature points on the chain's support (at most ``limit``, evenly spread)."""
    bary, _ = simplex_quadrature(T.degree, quad_order)
    pts = np.einsum("qv,svn->sqn", bary, T.complex.vertex_coords(T.degree)[T.support]).reshape(-1, T.complex.dim)
    if len(pts) > limit:
        pts = pts[np.linspace(0, len(pts) - 1, limit).round().astype(int)]
    return pts


def calibration_defect(T: Chain, phi: FormField, tol: float = 1e-6, quad_order: int = DEFAULT_QUAD_ORDER) -> float:
    """mass(T) - T(phi), after checking comass(phi) <= 1 + tol on the support."""
    _check_form(T, phi)
    if len(T.support) == 0:
        return 0.0
    c = comass_values(phi, support_samples(T))[0].max()
    if c > 1.0 + tol:
        raise ValueError(f"form has comass {c:.9g} > 1 on the chain's support")
    return mass(T) - pair(T, phi, quad_order)


# ---------------------------------------------------------------------------
# density


def _subdivide(simplex, levels):
    """Edge-midpoint subdivision of a triangle / segment (barycentric for higher k)."""
    k = len(simplex) - 1
    parts = [np.asarray(simplex, dtype=float)]
    for _ in range(levels):
        nxt = []
        for s in parts:
            if k == 1:
                m = (s[0] + s[1]) / 2
                nxt += [np.stack([s[0], m]), np.stack([m, s[1]])]
            elif k == 2:
                a, b, c = s
                ab, bc, ca = (a + b) / 2, (b + c) / 2, (c + a) / 2
                nxt += [np.stack(t) for t in ((a, ab, ca), (ab, b, bc), (ca, bc, c), (ab, bc, ca))]
            else:
                for perm in itertools.permutations(range(k + 1)):
                    verts = [s[list(perm[: j + 1])].mean(axis=0) for j in range(k + 1)]
                    nxt.append(np.stack(verts))
        parts = nxt
    return parts


@functools.lru_cache(maxsize=None)
def density_template(k: int, levels: int = 4):
    """Centroids (barycentric) and volume fractions of the subdivided reference simplex."""
    if k == 0:
        return np.ones((1, 1)), np.ones(1)
    lv = levels if k <= 2 else min(levels, 2)
    parts = _subdivide(np.eye(k + 1), lv)
    cen = np.array([p.mean(axis=0) for p in parts])
    return cen, np.full(len(parts), 1.0 / len(parts))


def unit_ball_volume(k: int) -> float:
    return math.pi ** (k / 2) / math.gamma(k / 2 + 1)


def density_estimate(T: Chain, p, radii, levels: int = 4) -> np.ndarray:
    """M(T restricted to B_r(p)) / (omega_k r^k) for each r.

    Each simplex is cut into equal-volume pieces (4^levels triangles,
    2^levels segments) and a piece counts when its centroid is in the ball.
    """
    p = np.asarray(p, dtype=float).reshape(-1)
    lo, hi = T.complex.bounding_box()
    if p.shape != lo.shape or np.any(p < lo - 1e-12) or np.any(p > hi + 1e-12):
        raise ValueError("point outside the complex's bounding box")
    radii = np.atleast_1d(np.asarray(radii, dtype=float))
    if np.any(radii <= 0):
        raise ValueError("radii must be positive")
    sup = T.support
    if len(sup) == 0:
        return np.zeros(len(radii))
    bary, frac = density_template(T.degree, levels)
    verts = T.complex.vertex_coords(T.degree)[sup]
    weights = np.abs(T.coeffs[sup]) * T.complex.volumes(T.degree)[sup]
    clipped = _kernels.clipped_mass(verts, weights.astype(float), bary, frac, p, radii)
    return clipped / (unit_ball_volume(T.degree) * radii**T.degree)


# ---------------------------------------------------------------------------
# filling, cones, Stokes


def fill_cycle(T: Chain) -> Chain | None:
    """An integral (k+1)-chain S with boundary T, or None when T is not a boundary."""
    K = T.complex
    if T.degree >= 1 and not boundary(T).is_zero():
        raise ValueError("chain is not a cycle")
    if T.is_zero():
        return Chain(K, T.degree + 1) if T.degree + 1 <= K.top else None
    if T.degree + 1 > K.top:
        return None
    B = K.boundary_matrix(T.degree + 1)
    rows = np.flatnonzero(np.abs(B).sum(axis=1) + np.abs(T.coeffs))
    cols = np.arange(B.shape[1])
    x = solve_integer(B[np.ix_(rows, cols)].tolist(), T.coeffs[rows].tolist())
    if x is None:
        return None
    S = Chain(K, T.degree + 1, np.array(x, dtype=np.int64))
    if not np.array_equal(boundary(S).coeffs, T.coeffs):
        raise RuntimeError("integer solve produced an invalid filling")
    return S


def transport(T: Chain, target: SimplicialComplex) -> Chain:
    """The same chain on another complex sharing the vertex indexing."""
    return Chain.from_simplices(target, T.degree, T.terms())


def cone_chain(link: Chain, apex, rtol: float = 1e-9) -> Chain:
    """apex * link on a new complex containing the link's complex and the cone simplices.

    The link's support vertices must be equidistant from the apex.  For a
    k-simplex s = (v0..vk) the cone simplex is (apex, v0..vk); then
    boundary(cone) = link - cone(boundary(link)).
    """
    K = link.complex
    apex = np.asarray(apex, dtype=float).reshape(K.dim)
    S = K.simplices[link.degree][link.support]
    used = np.unique(S)
    if len(used) == 0:
        raise ValueError("empty link")
    d = np.linalg.norm(K.vertices[used] - apex, axis=1)
    if d.min() <= 1e-12:
        raise ValueError("apex coincides with a link vertex")
    if d.max() - d.min() > rtol * d.max():
        raise ValueError("link does not lie on a sphere around the apex")
    a = len(K.vertices)
    verts = np.vstack([K.vertices, apex])
    simplices = {dd: K.simplices[dd].tolist() for dd in range(1, K.top + 1)}
    cone = [[a] + list(s) for s in S]
    simplices.setdefault(link.degree + 1, [])
    simplices[link.degree + 1] = simplices[link.degree + 1] + cone
    C = SimplicialComplex(verts, simplices)
    return Chain.from_simplices(C, link.degree + 1, [(tuple(c), int(v)) for c, v in zip(cone, link.coeffs[link.support])])


def stokes_check(T: Chain, psi: FormField, h: float = 1e-3, quad_order: int = DEFAULT_QUAD_ORDER) -> float:
    """|(boundary T)(psi) - T(d psi)| with d psi by central differences."""
    if psi.degree != T.degree - 1:
        raise ValueError("psi must have degree one less than the chain")
    return abs(pair(boundary(T), psi, quad_order) - pair(T, derivative_form(psi, h), quad_order))
