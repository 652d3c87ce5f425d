"""Oriented k-planes in R^n and multi-start ascent over G(k, R^n)."""
from __future__ import annotations

import math
from functools import cached_property

import numpy as np

from . import _kernels
from .exterior import KCovector, KVector, antisymmetric_tensor, multi_indices

ORTHO_TOL = 1e-10
DEFAULT_RESTARTS = 64
DEFAULT_ITERS = 200


def _qr_positive(A):
    """QR with positive diagonal of R; works on stacks of matrices."""
    Q, R = np.linalg.qr(A)
    d = np.sign(np.diagonal(R, axis1=-2, axis2=-1)).copy()
    d[d == 0] = 1.0
    return Q * d[..., None, :], R * d[..., :, None]


class SimplePlane:
    """An oriented k-plane through the origin, held as an orthonormal frame.

    ``frame`` has shape (k, n): one row per basis vector.
    """

    def __init__(self, frame, *, check: bool = True):
        frame = np.array(frame, dtype=float)
        if frame.ndim != 2:
            raise ValueError("frame must be a (k, n) array")
        if check:
            k = frame.shape[0]
            err = np.abs(frame @ frame.T - np.eye(k)).max(initial=0.0)
            if err > ORTHO_TOL:
                raise ValueError(f"frame not orthonormal (error {err:.2e}); use plane_from_frame")
        frame.setflags(write=False)
        self.frame = frame

    @property
    def k(self) -> int:
        return self.frame.shape[0]

    @property
    def n(self) -> int:
        return self.frame.shape[1]

    @cached_property
    def plucker_array(self) -> np.ndarray:
        if self.k == 0:
            return np.ones(1)
        combos = np.asarray(multi_indices(self.n, self.k)) - 1
        return _kernels.plucker(self.frame.T[None], combos)[0]

    @cached_property
    def plucker(self) -> KVector:
        return KVector.from_array(self.k, self.n, self.plucker_array)

    def pair(self, phi: KCovector) -> float:
        if phi.degree != self.k or phi.dim != self.n:
            raise ValueError("covector degree/dim does not match the plane")
        return float(phi.to_array() @ self.plucker_array)

    def completion(self) -> np.ndarray:
        """Orthonormal basis of R^n (columns) whose first k columns are the frame.

        QR of [frame^T | I] with positive diagonal: deterministic, and it
        reproduces the frame exactly because the frame is already orthonormal.
        """
        A = np.hstack([self.frame.T, np.eye(self.n)])
        Q = _qr_positive(A)[0][:, : self.n].copy()
        Q[:, : self.k] = self.frame.T
        return Q

    def reversed(self) -> "SimplePlane":
        f = self.frame.copy()
        f[0] = -f[0]
        return SimplePlane(f, check=False)

    def __repr__(self):
        return f"SimplePlane(k={self.k}, n={self.n}, frame={self.frame.tolist()})"


def plane_from_frame(vectors) -> SimplePlane:
    """Orthonormalize k linearly independent vectors, keeping orientation."""
    V = np.asarray(vectors, dtype=float)
    if V.ndim != 2 or V.shape[0] > V.shape[1]:
        raise ValueError("expected k <= n vectors of length n")
    if V.shape[0] == 0:
        return SimplePlane(V, check=False)
    Q, R = _qr_positive(V.T)
    diag = np.abs(np.diag(R))
    scale = max(np.abs(V).max(), 1.0)
    if diag.min() <= 1e-12 * scale:
        raise ValueError("vectors are linearly dependent")
    return SimplePlane(Q.T, check=False)


def plane_angle(a: SimplePlane, b: SimplePlane) -> float:
    if (a.k, a.n) != (b.k, b.n):
        raise ValueError("planes live in different Grassmannians")
    c = float(a.plucker_array @ b.plucker_array)
    return math.acos(min(1.0, max(-1.0, c)))


def random_frames(k: int, n: int, restarts: int, seed) -> np.ndarray:
    """(restarts, n, k) orthonormal frames; restart i uses its own spawned seed."""
    children = np.random.SeedSequence(seed).spawn(restarts)
    G = np.stack([np.random.default_rng(c).standard_normal((n, k)) for c in children])
    return _qr_positive(G)[0]


# ---------------------------------------------------------------------------
# analytic ascent for pairings with constant covectors


def _contract_tail(T, vecs):
    """Contract the trailing len(vecs) axes of T (B, n, ..., n) with vecs[i] (B, n)."""
    out = T
    for v in reversed(vecs):
        out = np.einsum("b...a,ba->b...", out, v)
    return out


def _value(T, V):
    k = V.shape[2]
    return _contract_tail(T, [V[:, :, i] for i in range(k)])


def _gradient(T, V):
    k = V.shape[2]
    G = np.empty_like(V)
    for i in range(k):
        others = [V[:, :, j] for j in range(k) if j != i]
        G[:, :, i] = (-1) ** i * _contract_tail(T, others)
    return G


def ascend_pairings(T, V, iters: int = DEFAULT_ITERS, gtol: float = 1e-13):
    """Riemannian gradient ascent of <T, v_1 ^ ... ^ v_k> for a batch of frames.

    T has shape (B, n, ..., n) (antisymmetric), V (B, n, k) orthonormal.
    Because the functional is alternating multilinear, V^T grad = f I and
    the horizontal gradient is grad - f V.  Step sizes adapt per batch item.
    Returns (frames, values).
    """
    V = np.array(V, dtype=float)
    f = _value(T, V)
    if not np.all(np.isfinite(f)):
        raise ValueError("non-finite functional values")
    t = np.full(len(V), 0.5)
    for _ in range(iters):
        H = _gradient(T, V) - V * f[:, None, None]
        active = np.sqrt((H * H).sum(axis=(1, 2))) > gtol
        if not active.any():
            break
        Vt = _qr_positive(V + t[:, None, None] * H)[0]
        ft = _value(T, Vt)
        acc = active & (ft >= f)
        V[acc] = Vt[acc]
        f[acc] = ft[acc]
        t[acc] = np.minimum(t[acc] * 1.6, 4.0)
        rej = active & ~acc
        t[rej] *= 0.3
    return V, f


# ---------------------------------------------------------------------------
# finite-difference ascent for arbitrary functions of a plane


def _fd_ascent(f, V, iters, h=1e-5, gtol=1e-10):
    n, k = V.shape

    def F(W):
        val = f(SimplePlane(W.T, check=False))
        if not math.isfinite(val):
            raise ValueError("non-finite functional value")
        return float(val)

    fv = F(V)
    t = 0.5
    for _ in range(iters):
        N = SimplePlane(V.T, check=False).completion()[:, k:]
        g = np.empty((k, n - k))
        for i in range(k):
            for j in range(n - k):
                Wp = V.copy()
                Wm = V.copy()
                Wp[:, i] = math.cos(h) * V[:, i] + math.sin(h) * N[:, j]
                Wm[:, i] = math.cos(h) * V[:, i] - math.sin(h) * N[:, j]
                g[i, j] = (F(Wp) - F(Wm)) / (2 * h)
        H = N @ g.T
        if np.linalg.norm(H) < gtol:
            break
        for _ in range(30):
            Vt = _qr_positive(V + t * H)[0]
            ft = F(Vt)
            if ft >= fv:
                V, fv = Vt, ft
                t = min(t * 1.6, 4.0)
                break
            t *= 0.3
        else:
            break
    return V, fv


def maximize_over_grassmannian(
    f,
    k: int,
    n: int,
    restarts: int = DEFAULT_RESTARTS,
    iters: int = DEFAULT_ITERS,
    seed=0,
) -> tuple[SimplePlane, float]:
    """Multi-start ascent of ``f`` over oriented k-planes in R^n.

    ``f`` is either a callable on :class:`SimplePlane` (gradient by central
    differences along the k(n-k) rotation directions) or a
    :class:`KCovector`, in which case the pairing is maximized with its exact
    gradient, all restarts at once.  Deterministic for a fixed seed.
    """
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    if not 0 <= k <= n:
        raise ValueError(f"invalid Grassmannian G({k}, R^{n})")
    V0 = random_frames(k, n, restarts, seed)
    if isinstance(f, KCovector):
        if (f.degree, f.dim) != (k, n):
            raise ValueError("covector degree/dim does not match (k, n)")
        if k == 0:
            return SimplePlane(np.zeros((0, n)), check=False), float(f.coeffs.get((), 0))
        T = np.broadcast_to(antisymmetric_tensor(f), (restarts,) + (n,) * k)
        V, vals = ascend_pairings(T, V0, iters)
    else:
        results = [_fd_ascent(f, V0[r], iters) for r in range(restarts)]
        V = np.stack([r[0] for r in results])
        vals = np.array([r[1] for r in results])
    best = int(np.argmax(vals))
    return SimplePlane(V[best].T, check=False), float(vals[best])
