"""Hot numeric kernels.

Every kernel exists twice: ``*_nb`` is compiled with numba, ``*_np`` is the
numpy (or plain Python) fallback.  The public name is bound to one of them
according to :mod:`calibra._accel`.  Both variants must agree to rounding;
``tests/test_kernels.py`` checks that and ``benchmarks/bench_kernels.py``
times them against each other.
"""
import numpy as np

from ._accel import njit, pick

# ---------------------------------------------------------------------------
# Plücker coordinates of batches of frames


def plucker_np(frames, combos):
    """frames (N, n, k), combos (m, k) zero-based rows -> (N, m) minors."""
    frames = np.asarray(frames, dtype=float)
    N, n, k = frames.shape
    if k == 0:
        return np.ones((N, 1))
    sub = frames[:, combos, :]  # (N, m, k, k)
    return np.linalg.det(sub)


@njit
def _det_small(a):
    k = a.shape[0]
    m = a.copy()
    det = 1.0
    for c in range(k):
        piv = c
        best = abs(m[c, c])
        for r in range(c + 1, k):
            if abs(m[r, c]) > best:
                best = abs(m[r, c])
                piv = r
        if best == 0.0:
            return 0.0
        if piv != c:
            for j in range(k):
                tmp = m[c, j]
                m[c, j] = m[piv, j]
                m[piv, j] = tmp
            det = -det
        det *= m[c, c]
        for r in range(c + 1, k):
            f = m[r, c] / m[c, c]
            for j in range(c, k):
                m[r, j] -= f * m[c, j]
    return det


@njit
def _plucker_loop(frames, combos):
    N = frames.shape[0]
    k = frames.shape[2]
    m = combos.shape[0]
    out = np.empty((N, m))
    sub = np.empty((k, k))
    for s in range(N):
        for c in range(m):
            for i in range(k):
                row = combos[c, i]
                for j in range(k):
                    sub[i, j] = frames[s, row, j]
            out[s, c] = _det_small(sub)
    return out


def plucker_nb(frames, combos):
    frames = np.ascontiguousarray(frames, dtype=np.float64)
    if frames.shape[2] == 0:
        return np.ones((frames.shape[0], 1))
    return _plucker_loop(frames, np.ascontiguousarray(combos, dtype=np.int64))


plucker = pick(plucker_nb, plucker_np)


def pair_frames(coeffs, combos, frames):
    """<phi, v_1 ^ ... ^ v_k> for a batch of frames (N, n, k)."""
    return plucker(frames, combos) @ np.asarray(coeffs, dtype=float)


# ---------------------------------------------------------------------------
# Mass of a chain clipped to balls (density estimation)


def clipped_mass_np(verts, weights, bary, frac, center, radii):
    """Sum of weight * volume-fraction over sub-simplices whose centroid lies in each ball.

    verts (S, k+1, n); weights (S,) = |coef| * vol; bary (C, k+1) sub-simplex
    centroids in barycentric coordinates; frac (C,) volume fractions.
    """
    out = np.zeros(len(radii))
    r2 = np.asarray(radii, dtype=float) ** 2
    chunk = max(1, 200_000 // max(1, len(bary)))
    for s0 in range(0, len(verts), chunk):
        cen = np.einsum("ck,skn->scn", bary, verts[s0:s0 + chunk])
        d2 = ((cen - center) ** 2).sum(axis=-1)  # (S, C)
        w = weights[s0:s0 + chunk, None] * frac[None, :]
        for i, rr in enumerate(r2):
            out[i] += w[d2 <= rr].sum()
    return out


@njit
def _clipped_loop(verts, weights, bary, frac, center, r2):
    S, kp1, n = verts.shape
    C = bary.shape[0]
    R = r2.shape[0]
    out = np.zeros(R)
    for s in range(S):
        for c in range(C):
            d2 = 0.0
            for a in range(n):
                x = 0.0
                for v in range(kp1):
                    x += bary[c, v] * verts[s, v, a]
                x -= center[a]
                d2 += x * x
            w = weights[s] * frac[c]
            for i in range(R):
                if d2 <= r2[i]:
                    out[i] += w
    return out


def clipped_mass_nb(verts, weights, bary, frac, center, radii):
    return _clipped_loop(
        np.ascontiguousarray(verts, dtype=np.float64),
        np.ascontiguousarray(weights, dtype=np.float64),
        np.ascontiguousarray(bary, dtype=np.float64),
        np.ascontiguousarray(frac, dtype=np.float64),
        np.ascontiguousarray(center, dtype=np.float64),
        np.ascontiguousarray(np.asarray(radii, dtype=np.float64) ** 2),
    )


clipped_mass = pick(clipped_mass_nb, clipped_mass_np)


# ---------------------------------------------------------------------------
# Primal simplex iterations with Bland's rule on a dense tableau
#
# Tableau layout: rows 0..m-1 are [A | b], row m is [reduced costs | -z].
# Columns >= ncols are never chosen to enter.  Status: 0 optimal,
# 1 unbounded, 2 iteration limit.


def simplex_iterate_np(T, basis, ncols, max_iter, tol):
    m = T.shape[0] - 1
    it = 0
    while it < max_iter:
        red = T[m, :ncols]
        cand = np.nonzero(red < -tol)[0]
        if cand.size == 0:
            return 0, it
        j = cand[0]
        col = T[:m, j]
        pos = col > tol
        if not pos.any():
            return 1, it
        ratios = np.full(m, np.inf)
        ratios[pos] = T[:m, -1][pos] / col[pos]
        rmin = ratios.min()
        ties = np.nonzero(ratios <= rmin + tol * max(1.0, abs(rmin)))[0]
        i = ties[np.argmin(basis[ties])]
        T[i] /= T[i, j]
        f = T[:, j].copy()
        f[i] = 0.0
        T -= np.outer(f, T[i])
        basis[i] = j
        it += 1
    return 2, it


@njit
def _simplex_loop(T, basis, ncols, max_iter, tol):
    m = T.shape[0] - 1
    w = T.shape[1]
    it = 0
    while it < max_iter:
        j = -1
        for c in range(ncols):
            if T[m, c] < -tol:
                j = c
                break
        if j < 0:
            return 0, it
        rmin = np.inf
        for r in range(m):
            if T[r, j] > tol:
                q = T[r, w - 1] / T[r, j]
                if q < rmin:
                    rmin = q
        if rmin == np.inf:
            return 1, it
        thr = rmin + tol * max(1.0, abs(rmin))
        i = -1
        for r in range(m):
            if T[r, j] > tol and T[r, w - 1] / T[r, j] <= thr:
                if i < 0 or basis[r] < basis[i]:
                    i = r
        piv = T[i, j]
        for c in range(w):
            T[i, c] /= piv
        for r in range(m + 1):
            if r != i:
                f = T[r, j]
                if f != 0.0:
                    for c in range(w):
                        T[r, c] -= f * T[i, c]
        basis[i] = j
        it += 1
    return 2, it


def simplex_iterate_nb(T, basis, ncols, max_iter, tol):
    status, it = _simplex_loop(T, basis, ncols, max_iter, tol)
    return int(status), int(it)


simplex_iterate = pick(simplex_iterate_nb, simplex_iterate_np)


# ---------------------------------------------------------------------------
# Exhaustive enumeration of bounded integer chains with prescribed boundary


def _enumerate_impl(D, b, vol, bound, last, rem, tol, max_solutions):
    """Depth-first search over x in [-bound, bound]^m with D x = b.

    ``last[r]`` is the largest simplex index incident to row r and
    ``rem[r, p]`` the number of incident simplices with index > p; rows are
    checked as soon as they are fully determined.  Returns the minimum mass,
    the minimizers found (first ``count`` rows of ``sols``) and an overflow flag.
    """
    r_count, m = D.shape
    nv = 2 * bound + 1
    vals = np.zeros(nv, dtype=np.int64)
    for t in range(1, bound + 1):
        vals[2 * t - 1] = t
        vals[2 * t] = -t
    sols = np.zeros((max_solutions, m), dtype=np.int64)
    count = 0
    overflow = False
    best = np.inf
    x = np.zeros(m, dtype=np.int64)
    s = np.zeros(r_count, dtype=np.int64)
    choice = np.full(m, -1, dtype=np.int64)
    masses = np.zeros(m + 1)
    for r in range(r_count):
        if last[r] < 0 and b[r] != 0:
            return best, sols, 0, overflow
    if m == 0:
        return best, sols, 0, overflow
    p = 0
    while p >= 0:
        if choice[p] >= 0:
            for r in range(r_count):
                s[r] -= D[r, p] * x[p]
            x[p] = 0
        choice[p] += 1
        if choice[p] >= nv:
            choice[p] = -1
            p -= 1
            continue
        x[p] = vals[choice[p]]
        for r in range(r_count):
            s[r] += D[r, p] * x[p]
        masses[p + 1] = masses[p] + vol[p] * abs(x[p])
        if masses[p + 1] > best + tol:
            continue
        ok = True
        for r in range(r_count):
            if last[r] == p:
                if s[r] != b[r]:
                    ok = False
                    break
            elif last[r] > p:
                if abs(b[r] - s[r]) > bound * rem[r, p]:
                    ok = False
                    break
        if not ok:
            continue
        if p == m - 1:
            mass = masses[m]
            if mass < best - tol:
                best = mass
                count = 0
                overflow = False
            if count < max_solutions:
                for j in range(m):
                    sols[count, j] = x[j]
                count += 1
            else:
                overflow = True
            continue
        p += 1
    return best, sols, count, overflow


_enumerate_nb = njit(_enumerate_impl)


def enumerate_chains_np(D, b, vol, bound, last, rem, tol, max_solutions):
    return _enumerate_impl(D, b, vol, bound, last, rem, tol, max_solutions)


def enumerate_chains_nb(D, b, vol, bound, last, rem, tol, max_solutions):
    return _enumerate_nb(
        np.ascontiguousarray(D, dtype=np.int64),
        np.ascontiguousarray(b, dtype=np.int64),
        np.ascontiguousarray(vol, dtype=np.float64),
        int(bound),
        np.ascontiguousarray(last, dtype=np.int64),
        np.ascontiguousarray(rem, dtype=np.int64),
        float(tol),
        int(max_solutions),
    )


enumerate_chains = pick(enumerate_chains_nb, enumerate_chains_np)
