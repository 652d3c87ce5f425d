"""Finite-difference Newton solver for the minimal surface equation on a disc.

The grid covers [-R, R]^2; unknowns are the nodes strictly inside the disc
whose 3x3 stencil stays on the grid, every other node holds the boundary
data g.  The discrete equation is the non-divergence form
(1 + u_y^2) u_xx - 2 u_x u_y u_xy + (1 + u_x^2) u_yy = 0 with second-order
central differences; its Jacobian is assembled analytically.
"""
from __future__ import annotations

import functools
import math

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.interpolate import RectBivariateSpline

from .forms import Annulus
from .graphs import GraphMap


def _ops(N: int, h: float):
    e = np.ones(N)
    D1 = sp.diags([-e[:-1], e[:-1]], [-1, 1], shape=(N, N)) / (2 * h)
    D2 = sp.diags([e[:-1], -2 * e, e[:-1]], [-1, 0, 1], shape=(N, N)) / h**2
    I = sp.identity(N)
    return (
        sp.kron(D1, I).tocsr(),
        sp.kron(I, D1).tocsr(),
        sp.kron(D2, I).tocsr(),
        sp.kron(D1, D1).tocsr(),
        sp.kron(I, D2).tocsr(),
    )


def mse_operator(Ux, Uy, Uxx, Uxy, Uyy):
    return (1 + Uy**2) * Uxx - 2 * Ux * Uy * Uxy + (1 + Ux**2) * Uyy


class GridGraph(GraphMap):
    """Numerical solution of the minimal surface equation on the disc |x| < R.

    At grid nodes the derivatives are the solver's own central differences;
    elsewhere a bicubic spline of the nodal values is used.
    """

    def __init__(self, boundary, radius: float = 1.0, n: int = 81, tol: float = 1e-12, max_newton: int = 50):
        super().__init__(2, 1, Annulus(2, radius))
        self.radius = radius
        self.grid_size = n
        xs = np.linspace(-radius, radius, n)
        self.xs = xs
        h = xs[1] - xs[0]
        self.h = h
        X, Y = np.meshgrid(xs, xs, indexing="ij")
        inside = X**2 + Y**2 < radius**2
        inside[[0, -1], :] = False
        inside[:, [0, -1]] = False
        self.inside = inside
        U = np.asarray(boundary(X, Y), dtype=float)
        self.boundary = boundary
        Dx, Dy, Dxx, Dxy, Dyy = _ops(n, h)
        idx = np.flatnonzero(inside.ravel())
        u = U.ravel().copy()
        self.newton_steps = 0
        res = math.inf
        for it in range(max_newton):
            ux, uy, uxx, uxy, uyy = (D @ u for D in (Dx, Dy, Dxx, Dxy, Dyy))
            G = mse_operator(ux, uy, uxx, uxy, uyy)[idx]
            res = float(np.abs(G).max())
            if res <= tol:
                break
            J = (
                sp.diags(1 + uy**2) @ Dxx
                + sp.diags(1 + ux**2) @ Dyy
                - sp.diags(2 * ux * uy) @ Dxy
                + sp.diags(2 * ux * uyy - 2 * uy * uxy) @ Dx
                + sp.diags(2 * uy * uxx - 2 * ux * uxy) @ Dy
            ).tocsr()[idx][:, idx]
            u[idx] -= spla.spsolve(J.tocsc(), G)
            self.newton_steps = it + 1
        self.grid_residual = res
        if not res <= 1e3 * tol:
            raise RuntimeError(f"Newton iteration did not converge (residual {res:.3e})")
        self.U = u.reshape(n, n)
        self._derivs = [(D @ u).reshape(n, n) for D in (Dx, Dy, Dxx, Dxy, Dyy)]
        self._spline = RectBivariateSpline(xs, xs, self.U, kx=3, ky=3)
        grad = np.hypot(self._derivs[0], self._derivs[1])[inside]
        self.lipschitz = float(grad.max())

    def interior_nodes(self, margin: int = 1) -> np.ndarray:
        """Coordinates of solver nodes whose derivative stencil only touches unknowns."""
        ok = self.inside.copy()
        for _ in range(margin):
            shrunk = ok.copy()
            shrunk[1:, :] &= ok[:-1, :]
            shrunk[:-1, :] &= ok[1:, :]
            shrunk[:, 1:] &= ok[:, :-1]
            shrunk[:, :-1] &= ok[:, 1:]
            ok = shrunk
        I, J = np.nonzero(ok)
        return np.stack([self.xs[I], self.xs[J]], axis=1)

    def _node(self, x):
        i = (x[0] + self.radius) / self.h
        j = (x[1] + self.radius) / self.h
        ri, rj = round(i), round(j)
        size = self.grid_size
        if abs(i - ri) < 1e-9 and abs(j - rj) < 1e-9 and 0 <= ri < size and 0 <= rj < size and self.inside[ri, rj]:
            return ri, rj
        return None

    def value(self, x):
        nd = self._node(x)
        if nd is not None:
            return np.array([self.U[nd]])
        return np.array([float(self._spline(x[0], x[1])[0, 0])])

    def jacobian(self, x):
        nd = self._node(x)
        if nd is not None:
            return np.array([[self._derivs[0][nd], self._derivs[1][nd]]])
        s = self._spline
        return np.array([[float(s(x[0], x[1], dx=1)[0, 0]), float(s(x[0], x[1], dy=1)[0, 0])]])

    def hessian(self, x):
        nd = self._node(x)
        if nd is not None:
            _, _, uxx, uxy, uyy = (d[nd] for d in self._derivs)
        else:
            s = self._spline
            uxx = float(s(x[0], x[1], dx=2)[0, 0])
            uxy = float(s(x[0], x[1], dx=1, dy=1)[0, 0])
            uyy = float(s(x[0], x[1], dy=2)[0, 0])
        return np.array([[[uxx, uxy], [uxy, uyy]]])


def boundary_u(x, y):
    return 0.3 * x**2 - 0.2 * y**2 + 0.1 * x * y


def boundary_v(x, y):
    return 0.2 * x - 0.25 * y**2 + 0.15 * x**3


@functools.lru_cache(maxsize=4)
def default_disc_solution(which: str = "u", n: int = 81) -> GridGraph:
    """Two fixed Dirichlet problems on the unit disc, solved once per process."""
    return GridGraph(boundary_u if which == "u" else boundary_v, 1.0, n)
