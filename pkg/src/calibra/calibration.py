"""Comass, closedness, contact sets and the cousin/completion verifiers."""
from __future__ import annotations

import math
import weakref
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .exterior import KCovector, antisymmetric_tensor, multi_indices, sort_with_sign
from .forms import FormField
from .grassmannian import (
    DEFAULT_ITERS,
    DEFAULT_RESTARTS,
    SimplePlane,
    ascend_pairings,
    random_frames,
)

CONTACT_TOL = 1e-6
COUSIN_TOL = 1e-8

_cache: "weakref.WeakKeyDictionary[FormField, dict]" = weakref.WeakKeyDictionary()
_CHUNK = 1 << 21  # floats per batched tensor


def _as_point(phi: FormField, p) -> np.ndarray:
    p = np.asarray(p, dtype=float).reshape(-1)
    if p.shape != (phi.dim,):
        raise ValueError(f"point must have {phi.dim} coordinates")
    if not phi.region.contains(p):
        raise ValueError(f"point {p.tolist()} outside the region of {phi.name or 'form'}")
    return p


def _maximize_batch(coeff_rows, k, n, restarts, iters, seed):
    """Best (frame, value) for each row of dense covector coefficients."""
    P = len(coeff_rows)
    frames = np.empty((P, n, k))
    values = np.empty(P)
    if k == 0:
        return np.zeros((P, n, 0)), coeff_rows[:, 0].copy()
    V0 = random_frames(k, n, restarts, seed)
    per = max(1, _CHUNK // (restarts * n**k))
    for s in range(0, P, per):
        block = coeff_rows[s:s + per]
        T = np.stack([antisymmetric_tensor(KCovector.from_array(k, n, c)) for c in block])
        T = np.repeat(T, restarts, axis=0)
        V = np.tile(V0, (len(block), 1, 1))
        V, f = ascend_pairings(T, V, iters)
        f = f.reshape(len(block), restarts)
        best = f.argmax(axis=1)
        idx = np.arange(len(block)) * restarts + best
        frames[s:s + len(block)] = V[idx]
        values[s:s + len(block)] = f[np.arange(len(block)), best]
    return frames, values


def comass_values(phi: FormField, samples, restarts: int = DEFAULT_RESTARTS, iters: int = DEFAULT_ITERS, seed=0):
    """Per-point comass and maximizing planes for a set of sample points.

    Constant forms are optimized once; results are cached per form.
    """
    pts = np.asarray(samples, dtype=float).reshape(-1, phi.dim)
    if len(pts) == 0:
        raise ValueError("empty sample set")
    for p in pts:
        _as_point(phi, p)
    store = _cache.setdefault(phi, {})
    key_opts = (restarts, iters, repr(seed))
    if phi.constant:
        hit = store.get((None, key_opts))
        if hit is None:
            F, v = _maximize_batch(phi.coeffs(pts[0])[None], phi.degree, phi.dim, restarts, iters, seed)
            hit = (F[0], float(v[0]))
            store[(None, key_opts)] = hit
        frames = np.repeat(hit[0][None], len(pts), axis=0)
        return np.full(len(pts), hit[1]), [SimplePlane(f.T, check=False) for f in frames]
    keys = [(tuple(p.tolist()), key_opts) for p in pts]
    todo = [i for i, key in enumerate(keys) if key not in store]
    if todo:
        rows = phi.coeffs_many(pts[todo])
        F, v = _maximize_batch(rows, phi.degree, phi.dim, restarts, iters, seed)
        for j, i in enumerate(todo):
            store[keys[i]] = (F[j], float(v[j]))
    vals = np.array([store[key][1] for key in keys])
    planes = [SimplePlane(store[key][0].T, check=False) for key in keys]
    return vals, planes


def comass_maximizer(phi: FormField, p, restarts: int = DEFAULT_RESTARTS, iters: int = DEFAULT_ITERS, seed=0):
    vals, planes = comass_values(phi, [_as_point(phi, p)], restarts, iters, seed)
    return planes[0], float(vals[0])


def comass_at(phi: FormField, p, restarts: int = DEFAULT_RESTARTS, iters: int = DEFAULT_ITERS, seed=0) -> float:
    """sup of <phi_p, xi> over oriented unit simple k-vectors xi."""
    return comass_maximizer(phi, p, restarts, iters, seed)[1]


def comass_global(phi: FormField, samples, restarts: int = DEFAULT_RESTARTS, iters: int = DEFAULT_ITERS, seed=0) -> float:
    return float(comass_values(phi, samples, restarts, iters, seed)[0].max())


def sample_region(phi: FormField, count: int, seed=0, box: float = 1.0) -> np.ndarray:
    """Uniform samples from the form's region intersected with [-box, box]^n."""
    rng = np.random.default_rng(seed)
    out = []
    tries = 0
    while len(out) < count:
        tries += 1
        if tries > 1000 * count:
            raise ValueError("could not sample the region")
        p = rng.uniform(-box, box, phi.dim)
        if phi.region.contains(p):
            out.append(p)
    return np.array(out)


# ---------------------------------------------------------------------------
# exterior derivative


def exterior_derivative_numeric(phi: FormField, p, h: float = 1e-4) -> KCovector:
    """Central-difference d(phi) at p.

    d(sum c_I dx^I) = sum_a sum_I (dc_I/dx^a) dx^a ^ dx^I.
    """
    p = _as_point(phi, p)
    k, n = phi.degree, phi.dim
    if k >= n:
        raise ValueError("d of a top-degree form has no degree-(n+1) component")
    if not phi.region.contains(p, 2 * h):
        raise ValueError("difference stencil leaves the region")
    combos = multi_indices(n, k)
    terms: dict = {}
    if phi.constant:
        return KCovector(k + 1, n)
    for a in range(n):
        e = np.zeros(n)
        e[a] = h
        dc = (phi.coeffs(p + e) - phi.coeffs(p - e)) / (2 * h)
        for I, val in zip(combos, dc):
            if val == 0.0 or (a + 1) in I:
                continue
            sign, key = sort_with_sign((a + 1,) + I)
            terms[key] = terms.get(key, 0.0) + sign * float(val)
    return KCovector(k + 1, n, terms)


def derivative_form(phi: FormField, h: float = 1e-4) -> FormField:
    """The form field p -> exterior_derivative_numeric(phi, p, h)."""
    k, n = phi.degree, phi.dim
    if phi.constant:
        zero = np.zeros(len(multi_indices(n, k + 1)))
        return FormField(k + 1, n, lambda p: zero, phi.region, True, f"d({phi.name})")
    return FormField(
        k + 1, n, lambda p: exterior_derivative_numeric(phi, p, h).to_array(), phi.region, False, f"d({phi.name})"
    )


def closedness_order(phi: FormField, points, h0: float = 4e-3, levels: int = 3):
    """Max |d phi| coefficient at steps h0, h0/2, ...; returns (steps, errors, order).

    ``order`` is the observed log2 ratio of the last two errors; it is
    reported as inf when the errors are already at rounding level (exactly
    closed forms give zero).
    """
    steps = [h0 / 2**i for i in range(levels)]
    errs = []
    for h in steps:
        e = 0.0
        for p in points:
            c = exterior_derivative_numeric(phi, p, h).to_array()
            e = max(e, float(np.abs(c).max(initial=0.0)))
        errs.append(e)
    a, b = errs[-2], errs[-1]
    if b <= 1e-13 or a <= 1e-13:
        order = math.inf
    else:
        order = math.log2(a / b)
    return steps, errs, order


# ---------------------------------------------------------------------------
# contact sets


@dataclass(frozen=True)
class ContactReport:
    point: tuple
    plane: SimplePlane
    value: float
    residual: float
    member: bool


def _check_comass_one(phi, p, tol):
    c = comass_at(phi, p)
    if abs(c - 1.0) > tol:
        raise ValueError(f"comass {c:.12g} at p is not 1 (tol {tol:g})")
    return c


def _pair_plane(phi: FormField, p, plane: SimplePlane) -> float:
    if (plane.k, plane.n) != (phi.degree, phi.dim):
        raise ValueError("plane does not match the form's degree/dimension")
    return float(phi.coeffs(p) @ plane.plucker_array)


def contact_membership(phi: FormField, p, plane: SimplePlane, tol: float = CONTACT_TOL) -> ContactReport:
    p = _as_point(phi, p)
    _check_comass_one(phi, p, tol)
    value = _pair_plane(phi, p, plane)
    return ContactReport(tuple(p.tolist()), plane, value, 1.0 - value, value >= 1.0 - tol)


def first_cousins(plane: SimplePlane) -> np.ndarray:
    """Frames (k(n-k), n, k) of xi_ij: slot i of the frame replaced by normal j."""
    k, n = plane.k, plane.n
    Q = plane.completion()
    out = np.empty((k * (n - k), n, k))
    t = 0
    for i in range(k):
        for j in range(n - k):
            F = Q[:, :k].copy()
            F[:, i] = Q[:, k + j]
            out[t] = F
            t += 1
    return out


def first_cousin_check(phi: FormField, p, plane: SimplePlane, tol: float = CONTACT_TOL) -> float:
    """max |<phi_p, xi_ij>| over the first cousins of a contact plane."""
    rep = contact_membership(phi, p, plane, tol)
    if not rep.member:
        raise ValueError(f"plane is not in the contact set (value {rep.value:.12g})")
    if plane.k in (0, plane.n):
        return 0.0
    combos = np.asarray(multi_indices(plane.n, plane.k)) - 1
    vals = _kernels.pair_frames(phi.coeffs(p), combos, first_cousins(plane))
    return float(np.abs(vals).max())


@dataclass(frozen=True)
class Completion:
    status: str  # "UNIQUE" | "NONE" | "MULTIPLE"
    vector: np.ndarray | None
    value: float


def complete_plane(phi: FormField, p, eta: SimplePlane, tol: float = CONTACT_TOL, check_comass: bool = True) -> Completion:
    """Unit v orthogonal to eta with eta ^ v in the contact set, if any.

    g(v) = <phi_p, eta ^ v> = w . v for the covector w = phi_p(eta_1..eta_{k-1}, .),
    which already vanishes on eta; so v* = w/|w| and g(v*) = |w|.  A value
    above 1 + tol means the comass is not one; it is reported as MULTIPLE,
    since a whole arc of directions then exceeds 1 - tol.
    """
    p = _as_point(phi, p)
    k, n = phi.degree, phi.dim
    if eta.k != k - 1 or eta.n != n:
        raise ValueError("eta must be an oriented (k-1)-plane in R^n")
    if check_comass:
        _check_comass_one(phi, p, tol)
    T = antisymmetric_tensor(phi.at(p))
    w = T
    for v in eta.frame:
        w = np.tensordot(v, w, axes=(0, 0))
    w = np.asarray(w, dtype=float).reshape(n)
    w = w - eta.frame.T @ (eta.frame @ w)
    g = float(np.linalg.norm(w))
    if g > 1.0 + tol:
        return Completion("MULTIPLE", None, g)
    if g >= 1.0 - tol:
        return Completion("UNIQUE", w / g, g)
    return Completion("NONE", None, g)
