"""Graphs of maps u: R^k -> R^(n-k) as k-dimensional submanifolds of R^n."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .forms import Annulus, Box, FormField, whole_space
from .grassmannian import SimplePlane, plane_from_frame

SQRT5_2 = math.sqrt(5.0) / 2.0


class GraphMap:
    """Base class for graph maps.

    Subclasses provide ``value``, ``jacobian`` (codim, k) and ``hessian``
    (codim, k, k).  The graph point is placed in R^n by ``axes`` (ambient
    index of each of x_1..x_k, then of the target coordinates) after the
    target vector is multiplied by ``target_map``.  ``orientation`` = -1
    reverses the orientation induced from the domain.
    """

    k: int = 0
    codim: int = 1
    domain = None
    singular: tuple = ()
    orientation: int = 1
    is_affine: bool = False
    lipschitz: float | None = None

    def __init__(self, k: int, codim: int, domain=None, axes=None, target_map=None, orientation: int = 1):
        self.k = k
        self.codim = codim
        self.domain = domain if domain is not None else whole_space(k)
        self.axes = tuple(range(k + codim)) if axes is None else tuple(axes)
        if sorted(self.axes) != list(range(k + codim)):
            raise ValueError("axes must be a permutation of the ambient coordinates")
        self.target_map = np.eye(codim) if target_map is None else np.asarray(target_map, dtype=float)
        self.orientation = orientation

    @property
    def n(self) -> int:
        return self.k + self.codim

    def value(self, x) -> np.ndarray:
        raise NotImplementedError

    def jacobian(self, x) -> np.ndarray:
        raise NotImplementedError

    def hessian(self, x) -> np.ndarray:
        raise NotImplementedError

    def check_point(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float).reshape(self.k)
        for s in self.singular:
            if np.allclose(x, s, atol=1e-14):
                raise ValueError(f"x = {x.tolist()} is a singular point of the graph")
        if not self.domain.contains(x):
            raise ValueError(f"x = {x.tolist()} outside the graph's domain")
        return x

    def embed(self, x, y) -> np.ndarray:
        out = np.empty(self.n)
        out[list(self.axes[: self.k])] = x
        out[list(self.axes[self.k:])] = self.target_map @ np.asarray(y, dtype=float)
        return out

    def point(self, x) -> np.ndarray:
        x = self.check_point(x)
        return self.embed(x, self.value(x))

    def tangent_vectors(self, x) -> np.ndarray:
        """(k, n) rows: images of e_i, i.e. (e_i, du/dx_i) placed in R^n."""
        x = self.check_point(x)
        J = np.asarray(self.jacobian(x), dtype=float).reshape(self.codim, self.k)
        out = np.stack([self.embed(np.eye(self.k)[i], J[:, i]) for i in range(self.k)])
        if self.orientation < 0:
            out[0] = -out[0]
        return out

    def derivative_fd_error(self, x, h: float = 1e-5) -> float:
        """Max mismatch between analytic derivatives and central differences."""
        x = self.check_point(x)
        err = 0.0
        J = self.jacobian(x)
        H = self.hessian(x)
        for i in range(self.k):
            e = np.zeros(self.k)
            e[i] = h
            dv = (self.value(x + e) - self.value(x - e)) / (2 * h)
            dJ = (self.jacobian(x + e) - self.jacobian(x - e)) / (2 * h)
            err = max(err, float(np.abs(dv - J[:, i]).max()), float(np.abs(dJ - H[:, :, i]).max()))
        return err


class AffineGraph(GraphMap):
    """u(x) = A x + c."""

    is_affine = True

    def __init__(self, A, c=None, domain=None, **kw):
        A = np.atleast_2d(np.asarray(A, dtype=float))
        super().__init__(A.shape[1], A.shape[0], domain, **kw)
        self.A = A
        self.c = np.zeros(A.shape[0]) if c is None else np.asarray(c, dtype=float)
        self.lipschitz = float(np.linalg.norm(A, 2))

    def value(self, x):
        return self.A @ np.asarray(x, dtype=float) + self.c

    def jacobian(self, x):
        return self.A.copy()

    def hessian(self, x):
        return np.zeros((self.codim, self.k, self.k))


class QuadraticGraph(GraphMap):
    """u^s(x) = 1/2 x^T H_s x + b_s . x."""

    def __init__(self, H, b=None, domain=None, **kw):
        H = np.asarray(H, dtype=float)
        if H.ndim == 2:
            H = H[None]
        H = 0.5 * (H + H.transpose(0, 2, 1))
        super().__init__(H.shape[1], H.shape[0], domain, **kw)
        self.H = H
        self.b = np.zeros((H.shape[0], H.shape[1])) if b is None else np.atleast_2d(np.asarray(b, dtype=float))

    def value(self, x):
        x = np.asarray(x, dtype=float)
        return 0.5 * np.einsum("sij,i,j->s", self.H, x, x) + self.b @ x

    def jacobian(self, x):
        return self.H @ np.asarray(x, dtype=float) + self.b

    def hessian(self, x):
        return self.H.copy()


class PotentialGradientGraph(GraphMap):
    """Graph of Du for a potential u on R^m, placed in C^m = R^(2m).

    x_j sits at ambient index j and u_{x_j} at m + j, matching
    z_j = x_j + i y_j.  ``grad``/``hess`` give Du and D^2u; ``third`` the
    third derivatives (needed only for the stationarity residual).
    """

    def __init__(self, m: int, grad, hess, third=None, domain=None):
        super().__init__(m, m, domain)
        self._grad, self._hess, self._third = grad, hess, third

    @classmethod
    def quadratic(cls, c, domain=None):
        """u = 1/2 sum c_i x_i^2."""
        c = np.asarray(c, dtype=float)
        m = len(c)
        g = cls(m, lambda x: c * x, lambda x: np.diag(c), lambda x: np.zeros((m, m, m)), domain)
        g.is_affine = True
        g.lipschitz = float(np.abs(c).max())
        return g

    def potential_hessian(self, x) -> np.ndarray:
        return np.asarray(self._hess(np.asarray(x, dtype=float)), dtype=float)

    def value(self, x):
        return np.asarray(self._grad(np.asarray(x, dtype=float)), dtype=float)

    def jacobian(self, x):
        return self.potential_hessian(x)

    def hessian(self, x):
        if self._third is None:
            raise ValueError("third derivatives of the potential are not available")
        return np.asarray(self._third(np.asarray(x, dtype=float)), dtype=float)


class HolomorphicGraph(GraphMap):
    """Graph of a complex polynomial w = f(z) in C^2 = R^4.

    Ambient coordinates (x1, x2, y1, y2) with z = x1 + i y1, w = x2 + i y2;
    the domain coordinates (Re z, Im z) map to indices (0, 2) and
    (Re w, Im w) to (1, 3).  ``coeffs`` lists a_0, a_1, ... of f = sum a_j z^j.
    """

    def __init__(self, coeffs, domain=None):
        super().__init__(2, 2, domain if domain is not None else whole_space(2), axes=(0, 2, 1, 3))
        self.poly = np.polynomial.Polynomial(np.asarray(coeffs, dtype=complex))
        self.d1 = self.poly.deriv(1)
        self.d2 = self.poly.deriv(2) if len(self.poly.coef) > 2 else np.polynomial.Polynomial([0j])
        self.is_affine = len(self.poly.coef) <= 2

    def _z(self, x):
        return complex(x[0], x[1])

    def value(self, x):
        w = self.poly(self._z(x))
        return np.array([w.real, w.imag])

    def jacobian(self, x):
        d = self.d1(self._z(x))
        return np.array([[d.real, -d.imag], [d.imag, d.real]])

    def hessian(self, x):
        s = self.d2(self._z(x))
        a, b = s.real, s.imag
        return np.array([[[a, -b], [-b, -a]], [[b, a], [a, -b]]])


class ScherkGraph(GraphMap):
    """Scherk's surface u = log(cos y / cos x) on |x|, |y| < pi/2 (an exact MSE solution)."""

    def __init__(self, half_width: float = 1.2):
        if not 0 < half_width < math.pi / 2:
            raise ValueError("half width must be in (0, pi/2)")
        super().__init__(2, 1, Box((-half_width,) * 2, (half_width,) * 2))
        self.lipschitz = math.sqrt(2) * math.tan(half_width)

    def value(self, x):
        return np.array([math.log(math.cos(x[1]) / math.cos(x[0]))])

    def jacobian(self, x):
        return np.array([[math.tan(x[0]), -math.tan(x[1])]])

    def hessian(self, x):
        return np.array([[[1.0 / math.cos(x[0]) ** 2, 0.0], [0.0, -1.0 / math.cos(x[1]) ** 2]]])


# ---------------------------------------------------------------------------
# Lawson-Osserman cone


def _loc_parts(x):
    x1, x2, x3, x4 = x
    Q = np.array([2 * (x1 * x3 + x2 * x4), 2 * (x1 * x4 - x2 * x3), x1 * x1 + x2 * x2 - x3 * x3 - x4 * x4])
    DQ = 2 * np.array([[x3, x4, x1, x2], [x4, -x3, -x2, x1], [x1, x2, -x3, -x4]], dtype=float)
    D2Q = np.zeros((3, 4, 4))
    D2Q[0, 0, 2] = D2Q[0, 2, 0] = D2Q[0, 1, 3] = D2Q[0, 3, 1] = 2
    D2Q[1, 0, 3] = D2Q[1, 3, 0] = 2
    D2Q[1, 1, 2] = D2Q[1, 2, 1] = -2
    D2Q[2] = np.diag([2.0, 2.0, -2.0, -2.0])
    return Q, DQ, D2Q


def lawson_osserman_map(x, derivatives: bool = False):
    """L(x) = (sqrt5/2) |x| H(x/|x|) with the Hopf map H(z1, z2) = (2 conj(z1) z2, |z1|^2 - |z2|^2).

    With z1 = x1 + i x2, z2 = x3 + i x4 this is (sqrt5/2) Q(x)/|x| for the
    quadratic Q above.  With ``derivatives`` returns (value, D, D^2) from
    the closed-form derivatives of Q/r.
    """
    x = np.asarray(x, dtype=float).reshape(4)
    r2 = float(x @ x)
    if r2 == 0.0:
        raise ValueError("the Lawson-Osserman map is singular at 0")
    r = math.sqrt(r2)
    Q, DQ, D2Q = _loc_parts(x)
    val = SQRT5_2 * Q / r
    if not derivatives:
        return val
    r3 = r * r2
    r5 = r3 * r2
    D = SQRT5_2 * (DQ / r - np.outer(Q, x) / r3)
    xx = np.outer(x, x)
    H = (
        D2Q / r
        - (DQ[:, :, None] * x[None, None, :] + DQ[:, None, :] * x[None, :, None]) / r3
        - Q[:, None, None] * np.eye(4)[None] / r3
        + 3 * Q[:, None, None] * xx[None] / r5
    )
    return val, D, SQRT5_2 * H


class LawsonOssermanGraph(GraphMap):
    """Graph of the Lawson-Osserman map, placed so the coassociative form calibrates it.

    Ambient coordinates (x1..x4, x5, x6, x7) = (x, L3, -L2, L1), carrying the
    orientation opposite to the standard one of the domain.
    """

    TARGET = np.array([[0.0, 0.0, 1.0], [0.0, -1.0, 0.0], [1.0, 0.0, 0.0]])

    def __init__(self, r_in: float = 0.1, r_out: float = 1.0):
        super().__init__(4, 3, Annulus(4, r_out, r_in), target_map=self.TARGET, orientation=-1)
        self.singular = (np.zeros(4),)
        # |DL| is bounded by a constant on the cone (homogeneity of degree 1)
        self.lipschitz = None

    def value(self, x):
        return lawson_osserman_map(x)

    def jacobian(self, x):
        return lawson_osserman_map(x, True)[1]

    def hessian(self, x):
        return lawson_osserman_map(x, True)[2]


# ---------------------------------------------------------------------------
# induced metric and residuals


@dataclass(frozen=True)
class MetricData:
    g: np.ndarray
    g_inv: np.ndarray
    F: float


def area_integrand(Du) -> MetricData:
    """g = I + Du^T Du, its inverse, and F = sqrt(det g)."""
    Du = np.atleast_2d(np.asarray(Du, dtype=float))
    if not np.all(np.isfinite(Du)):
        raise ValueError("non-finite gradient")
    k = Du.shape[1]
    g = np.eye(k) + Du.T @ Du
    return MetricData(g, np.linalg.inv(g), math.sqrt(np.linalg.det(g)))


def mss_residual(u: GraphMap, x) -> np.ndarray:
    """(g^{ij} u^s_{ij})_s, the non-divergence minimal surface system."""
    x = u.check_point(x)
    J = np.asarray(u.jacobian(x), dtype=float).reshape(u.codim, u.k)
    H = np.asarray(u.hessian(x), dtype=float)
    return np.einsum("ij,sij->s", area_integrand(J).g_inv, H)


def mse_coefficients(Du) -> np.ndarray:
    """a^{ij} = (delta_ij - u_i u_j / W^2) / W, W = sqrt(1 + |Du|^2).

    a^{ij} u_ij = div(Du / W); eigenvalues W^-3 (along Du) and W^-1.
    """
    p = np.asarray(Du, dtype=float)
    if p.ndim == 2:
        if p.shape[0] != 1:
            raise ValueError("the minimal surface equation needs codimension one")
        p = p[0]
    if p.ndim != 1:
        raise ValueError("expected a gradient vector")
    W2 = 1.0 + float(p @ p)
    W = math.sqrt(W2)
    return (np.eye(len(p)) - np.outer(p, p) / W2) / W


def mse_coefficient_derivative(p) -> np.ndarray:
    """d a^{ij} / d p_m as an array [i, j, m]."""
    p = np.asarray(p, dtype=float)
    k = len(p)
    W2 = 1.0 + float(p @ p)
    W = math.sqrt(W2)
    I = np.eye(k)
    W3, W5 = W * W2, W * W2 * W2
    return (
        -I[:, :, None] * p[None, None, :] / W3
        + 3 * np.einsum("i,j,m->ijm", p, p, p) / W5
        - (I[:, None, :] * p[None, :, None] + p[:, None, None] * I[None, :, :]) / W3
    )


def mse_residual_divergence(Du, D2u) -> float:
    """a^{ij}(Du) u_ij = div(Du / W)."""
    return float(np.sum(mse_coefficients(Du) * np.asarray(D2u, dtype=float).reshape(len(np.ravel(Du)), -1)))


def tangent_plane(u: GraphMap, x) -> SimplePlane:
    return plane_from_frame(u.tangent_vectors(x))


def graph_calibrated_defect(u: GraphMap, phi: FormField, samples) -> float:
    """max over samples of 1 - <phi at the graph point, oriented tangent plane>."""
    if phi.degree != u.k or phi.dim != u.n:
        raise ValueError("form degree/dimension does not match the graph")
    worst = -math.inf
    for x in np.asarray(samples, dtype=float).reshape(-1, u.k):
        P = tangent_plane(u, x)
        val = float(phi.coeffs(u.point(x)) @ P.plucker_array)
        worst = max(worst, 1.0 - val)
    if worst == -math.inf:
        raise ValueError("empty sample set")
    return worst


def slag_phase(u, x) -> float:
    """sum of arctan of the Hessian eigenvalues of a potential."""
    if hasattr(u, "potential_hessian"):
        H = u.potential_hessian(x)
    elif callable(u):
        H = np.asarray(u(np.asarray(x, dtype=float)), dtype=float)
    else:
        raise ValueError("potential Hessian unavailable")
    H = 0.5 * (H + H.T)
    return float(np.arctan(np.linalg.eigvalsh(H)).sum())


def sample_domain(u: GraphMap, count: int, seed=0) -> np.ndarray:
    """Uniform samples inside the graph's domain (box or annulus)."""
    rng = np.random.default_rng(seed)
    dom = u.domain
    if isinstance(dom, Annulus):
        d = len(dom.axes)
        v = rng.standard_normal((count, d))
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        r = (rng.uniform(dom.r_in**d, dom.r_out**d, count)) ** (1.0 / d)
        out = np.zeros((count, dom.dim))
        out[:, list(dom.axes)] = np.asarray(dom.center) + v * r[:, None]
        return out
    lo = np.maximum(np.asarray(dom.lo, dtype=float), -1.0)
    hi = np.minimum(np.asarray(dom.hi, dtype=float), 1.0)
    return rng.uniform(lo, hi, (count, u.k))


# ---------------------------------------------------------------------------
# Simons cone


def simons_mean_curvature(p, h: float = 1e-3) -> float:
    """Mean curvature of {|x| = |y|} in R^8 at p, as div of the unit normal of f = |x|^2 - |y|^2.

    Fourth-order central differences for the divergence.
    """
    p = np.asarray(p, dtype=float).reshape(8)
    if np.linalg.norm(p[:4]) < 1e-6 or np.linalg.norm(p[4:]) < 1e-6:
        raise ValueError("point too close to the cone's singular set")

    def nu(q):
        g = 2 * np.concatenate([q[:4], -q[4:]])
        return g / np.linalg.norm(g)

    div = 0.0
    for a in range(8):
        e = np.zeros(8)
        e[a] = h
        div += (-nu(p + 2 * e)[a] + 8 * nu(p + e)[a] - 8 * nu(p - e)[a] + nu(p - 2 * e)[a]) / (12 * h)
    return div


# ---------------------------------------------------------------------------
# difference operator between two solutions


_GL_T, _GL_W = np.polynomial.legendre.leggauss(16)
GL_NODES = 0.5 * (_GL_T + 1.0)
GL_WEIGHTS = 0.5 * _GL_W


@dataclass(frozen=True)
class LinearOperator:
    """L w = a^{ij} w_ij + b . Dw + c w at a point.

    Codimension one: divergence-form MSE coefficients, b[j] multiplies w_j.
    Higher codimension: principally diagonal, b[s, t, m] multiplies w^t_m.
    """

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    bracket: tuple
    codim: int

    def apply(self, Dw, D2w) -> np.ndarray:
        Dw = np.asarray(Dw, dtype=float).reshape(self.codim, -1)
        D2w = np.asarray(D2w, dtype=float).reshape(self.codim, Dw.shape[1], Dw.shape[1])
        out = np.einsum("ij,sij->s", self.a, D2w)
        if self.codim == 1:
            out = out + self.b @ Dw[0]
        else:
            out = out + np.einsum("stm,tm->s", self.b, Dw)
        return out

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(0.5 * (self.a + self.a.T))


def _metric_inverse_derivative(P):
    """d (I + P^T P)^{-1} / d P^t_m as array [i, j, t, m]."""
    codim, k = P.shape
    gi = np.linalg.inv(np.eye(k) + P.T @ P)
    out = np.empty((k, k, codim, k))
    I = np.eye(k)
    for t in range(codim):
        for m in range(k):
            dg = np.outer(I[m], P[t]) + np.outer(P[t], I[m])
            out[:, :, t, m] = -gi @ dg @ gi
    return out


def difference_operator(u, v, x, tol: float = 1e-6, lipschitz: float | None = None) -> LinearOperator:
    """Linear operator L with L(u - v) = R(u) - R(v) = 0 at x, by the fundamental theorem of calculus.

    ``u`` and ``v`` are graph maps or (Du, D2u) pairs.  With P_t = Dv + t Dw,
    codimension one uses R = a^{ij}(Du) u_ij and
    a~ = int a(P_t), b^j = int da^{ij}/dp_m (P_t) (v_mi + t w_mi);
    higher codimension uses R = g^{ij}(Du) u_ij with the analogous average of
    g^{-1} and c = 0.  The ellipticity bracket comes from a Lipschitz bound
    M of u and v (given, or the larger of the graphs' bounds, or
    |Du(x)|, |Dv(x)|):  [(1+M^2)^-3/2, 1] for codimension one and
    [1/(1+M^2), 1] otherwise.
    """
    Du, D2u, lu = _derivs(u, x)
    Dv, D2v, lv = _derivs(v, x)
    if Du.shape != Dv.shape:
        raise ValueError("u and v have different shapes")
    codim, k = Du.shape
    for name, D, D2 in (("u", Du, D2u), ("v", Dv, D2v)):
        res = _residual(D, D2)
        if np.abs(res).max() > tol:
            raise ValueError(f"{name} is not a minimal surface solution at x (residual {np.abs(res).max():.3e})")
    Dw, D2w = Du - Dv, D2u - D2v
    if lipschitz is None:
        bounds = [b for b in (lu, lv) if b is not None]
        lipschitz = max(bounds) if len(bounds) == 2 else max(np.linalg.norm(Du, 2), np.linalg.norm(Dv, 2))
    M2 = lipschitz**2
    if codim == 1:
        a = np.zeros((k, k))
        b = np.zeros(k)
        for t, wt in zip(GL_NODES, GL_WEIGHTS):
            P = Dv[0] + t * Dw[0]
            a += wt * mse_coefficients(P)
            b += wt * np.einsum("ijm,mi->j", mse_coefficient_derivative(P), D2v[0] + t * D2w[0])
        bracket = ((1.0 + M2) ** -1.5, 1.0)
        c = np.zeros(1)
    else:
        a = np.zeros((k, k))
        b = np.zeros((codim, codim, k))
        for t, wt in zip(GL_NODES, GL_WEIGHTS):
            P = Dv + t * Dw
            a += wt * np.linalg.inv(np.eye(k) + P.T @ P)
            b += wt * np.einsum("ijtm,sij->stm", _metric_inverse_derivative(P), D2v + t * D2w)
        bracket = (1.0 / (1.0 + M2), 1.0)
        c = np.zeros((codim, codim))
    return LinearOperator(a, b, c, bracket, codim)


def _derivs(u, x):
    if isinstance(u, GraphMap):
        x = u.check_point(x)
        D = np.asarray(u.jacobian(x), dtype=float).reshape(u.codim, u.k)
        return D, np.asarray(u.hessian(x), dtype=float).reshape(u.codim, u.k, u.k), u.lipschitz
    D, D2 = u
    D = np.atleast_2d(np.asarray(D, dtype=float))
    return D, np.asarray(D2, dtype=float).reshape(D.shape[0], D.shape[1], D.shape[1]), None


def _residual(D, D2):
    if D.shape[0] == 1:
        return np.array([np.sum(mse_coefficients(D[0]) * D2[0])])
    return np.einsum("ij,sij->s", np.linalg.inv(np.eye(D.shape[1]) + D.T @ D), D2)


def graph_residual(u, x) -> np.ndarray:
    """The residual whose difference the operator linearizes (divergence form in codim 1)."""
    D, D2, _ = _derivs(u, x)
    return _residual(D, D2)
