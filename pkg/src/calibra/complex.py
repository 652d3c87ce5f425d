"""Simplicial complexes in R^n, integral chains and real cochains."""
from __future__ import annotations

import math
from functools import cached_property

import numpy as np

from . import _kernels
from .exterior import KVector, multi_indices

VOLUME_TOL = 1e-14


def _parity(perm) -> int:
    perm = list(perm)
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


class SimplicialComplex:
    """Vertices in R^n plus oriented simplices per degree.

    ``simplices[d]`` lists vertex tuples whose order fixes the orientation.
    Missing faces are added (in increasing vertex order) after the given
    ones, so indices of supplied simplices are preserved.  Degree 0 is
    always the vertex list in order.
    """

    def __init__(self, vertices, simplices: dict):
        V = np.array(vertices, dtype=float)
        if V.ndim != 2 or len(V) == 0:
            raise ValueError("vertices must be a non-empty (V, n) array")
        if not np.all(np.isfinite(V)):
            raise ValueError("vertex coordinates must be finite")
        V.setflags(write=False)
        self.vertices = V
        given = {int(d): [tuple(int(v) for v in s) for s in ss] for d, ss in simplices.items()}
        top = max([d for d, ss in given.items() if ss], default=0)
        lists: dict[int, list] = {d: [] for d in range(top + 1)}
        lookup: dict[int, dict] = {d: {} for d in range(top + 1)}
        lists[0] = [(i,) for i in range(len(V))]
        lookup[0] = {frozenset(s): i for i, s in enumerate(lists[0])}
        if 0 in given and given[0]:
            if sorted(given[0]) != lists[0]:
                raise ValueError("degree-0 simplices must be exactly the vertices in order")
        for d in range(top, 0, -1):
            for s in given.get(d, []):
                self._add(lists, lookup, d, s)
        for d in range(top, 1, -1):
            for s in list(lists[d]):
                for i in range(d + 1):
                    face = s[:i] + s[i + 1:]
                    if frozenset(face) not in lookup[d - 1]:
                        self._add(lists, lookup, d - 1, tuple(sorted(face)))
        self.simplices = {d: np.array(lists[d], dtype=np.int64).reshape(-1, d + 1) for d in lists}
        self._lookup = lookup
        self.top = top
        for d in range(1, top + 1):
            if len(self.simplices[d]) and np.any(self.volumes(d) <= VOLUME_TOL):
                bad = int(np.argmin(self.volumes(d)))
                raise ValueError(f"degenerate {d}-simplex {self.simplices[d][bad].tolist()}")

    def _add(self, lists, lookup, d, s):
        if len(s) != d + 1 or len(set(s)) != d + 1:
            raise ValueError(f"malformed {d}-simplex {list(s)}")
        if min(s) < 0 or max(s) >= len(self.vertices):
            raise ValueError(f"simplex {list(s)} references a missing vertex")
        key = frozenset(s)
        if key in lookup[d]:
            raise ValueError(f"duplicate {d}-simplex {list(s)}")
        lookup[d][key] = len(lists[d])
        lists[d].append(tuple(s))

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    def count(self, d: int) -> int:
        return len(self.simplices[d]) if d in self.simplices else 0

    def find(self, d: int, verts) -> tuple[int, int]:
        """(index, sign) of the simplex with these vertices; sign compares orientations."""
        verts = tuple(int(v) for v in verts)
        idx = self._lookup.get(d, {}).get(frozenset(verts))
        if idx is None:
            raise KeyError(f"no {d}-simplex {list(verts)}")
        stored = tuple(self.simplices[d][idx])
        perm = [stored.index(v) for v in verts]
        return idx, _parity(perm)

    def vertex_coords(self, d: int) -> np.ndarray:
        return self.vertices[self.simplices[d]]

    @cached_property
    def _boundary(self):
        out = {}
        for d in range(1, self.top + 1):
            S = self.simplices[d]
            B = np.zeros((self.count(d - 1), len(S)), dtype=np.int64)
            for j, s in enumerate(S):
                s = tuple(s)
                for i in range(d + 1):
                    face = s[:i] + s[i + 1:]
                    idx, sign = self.find(d - 1, face)
                    B[idx, j] += (-1) ** i * sign
            B.setflags(write=False)
            out[d] = B
        return out

    def boundary_matrix(self, d: int) -> np.ndarray:
        """Integer incidence matrix from degree d to degree d-1."""
        if d < 1:
            raise ValueError("boundary of 0-chains is not defined")
        if d > self.top:
            return np.zeros((self.count(d - 1), 0), dtype=np.int64)
        return self._boundary[d]

    @cached_property
    def _geometry(self):
        out = {0: (np.ones(len(self.vertices)), np.ones((len(self.vertices), 1)))}
        for d in range(1, self.top + 1):
            P = self.vertex_coords(d)
            E = P[:, 1:, :] - P[:, :1, :]  # (m, d, n)
            gram = np.einsum("mia,mja->mij", E, E)
            vol = np.sqrt(np.maximum(np.linalg.det(gram), 0.0)) / math.factorial(d)
            combos = np.asarray(multi_indices(self.dim, d)) - 1
            pl = _kernels.plucker(E.transpose(0, 2, 1), combos)
            with np.errstate(invalid="ignore", divide="ignore"):
                unit = pl / (vol * math.factorial(d))[:, None]
            out[d] = (vol, unit)
        return out

    def volumes(self, d: int) -> np.ndarray:
        return self._geometry[d][0]

    def orientations(self, d: int) -> np.ndarray:
        """Dense unit Plücker coordinates of each d-simplex."""
        return self._geometry[d][1]

    def orientation(self, d: int, i: int) -> KVector:
        return KVector.from_array(d, self.dim, self.orientations(d)[i])

    def bounding_box(self):
        return self.vertices.min(axis=0), self.vertices.max(axis=0)

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "vertices": self.vertices.tolist(),
            "simplices": {str(d): self.simplices[d].tolist() for d in range(1, self.top + 1)},
        }

    @classmethod
    def from_json(cls, data: dict) -> "SimplicialComplex":
        V = data["vertices"]
        if "dim" in data and any(len(v) != data["dim"] for v in V):
            raise ValueError("vertex coordinates do not match 'dim'")
        return cls(V, {int(d): s for d, s in data.get("simplices", {}).items()})


class Chain:
    """Integral d-chain: one integer coefficient per d-simplex."""

    __slots__ = ("complex", "degree", "coeffs")

    def __init__(self, complex_: SimplicialComplex, degree: int, coeffs=None):
        if not 0 <= degree <= complex_.top:
            raise ValueError(f"complex has no simplices of degree {degree}")
        m = complex_.count(degree)
        if coeffs is None:
            c = np.zeros(m, dtype=np.int64)
        else:
            raw = np.asarray(coeffs)
            if raw.shape != (m,):
                raise ValueError(f"expected {m} coefficients")
            if raw.dtype.kind == "f" and np.any(raw != np.round(raw)):
                raise ValueError("chain coefficients must be integers")
            c = raw.astype(np.int64)
        c.setflags(write=False)
        self.complex = complex_
        self.degree = degree
        self.coeffs = c

    @classmethod
    def from_dict(cls, complex_, degree: int, terms: dict) -> "Chain":
        c = np.zeros(complex_.count(degree), dtype=np.int64)
        for idx, v in terms.items():
            if not 0 <= int(idx) < len(c):
                raise ValueError(f"simplex index {idx} out of range")
            if int(v) != v:
                raise ValueError("chain coefficients must be integers")
            c[int(idx)] += int(v)
        return cls(complex_, degree, c)

    @classmethod
    def from_simplices(cls, complex_, degree: int, terms) -> "Chain":
        """``terms``: iterable of (vertex tuple, coefficient); orientation follows the tuple order."""
        c = np.zeros(complex_.count(degree), dtype=np.int64)
        items = terms.items() if isinstance(terms, dict) else terms
        for verts, v in items:
            idx, sign = complex_.find(degree, verts)
            c[idx] += sign * int(v)
        return cls(complex_, degree, c)

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.coeffs)

    def _check(self, other):
        if not isinstance(other, Chain) or other.complex is not self.complex or other.degree != self.degree:
            raise ValueError("chains live on different complexes or degrees")

    def __add__(self, other):
        self._check(other)
        return Chain(self.complex, self.degree, self.coeffs + other.coeffs)

    def __sub__(self, other):
        self._check(other)
        return Chain(self.complex, self.degree, self.coeffs - other.coeffs)

    def __neg__(self):
        return Chain(self.complex, self.degree, -self.coeffs)

    def __mul__(self, s):
        if int(s) != s:
            raise ValueError("integral chains only scale by integers")
        return Chain(self.complex, self.degree, self.coeffs * int(s))

    __rmul__ = __mul__

    def __eq__(self, other):
        return (
            isinstance(other, Chain)
            and other.complex is self.complex
            and other.degree == self.degree
            and bool(np.array_equal(other.coeffs, self.coeffs))
        )

    def __hash__(self):
        return hash((id(self.complex), self.degree, self.coeffs.tobytes()))

    def is_zero(self) -> bool:
        return not self.coeffs.any()

    def terms(self) -> list[tuple[tuple[int, ...], int]]:
        S = self.complex.simplices[self.degree]
        return [(tuple(int(v) for v in S[i]), int(self.coeffs[i])) for i in self.support]

    def __repr__(self):
        return f"Chain(degree={self.degree}, {self.terms()})"

    def to_json(self) -> dict:
        return {"degree": self.degree, "coeffs": [[int(i), int(self.coeffs[i])] for i in self.support]}

    @classmethod
    def from_json(cls, complex_, data: dict) -> "Chain":
        return cls.from_dict(complex_, int(data["degree"]), _pairs(data.get("coeffs", []), int))


def _pairs(items, cast):
    out: dict = {}
    for item in items:
        if len(item) != 2:
            raise ValueError("expected [simplex_index, value] pairs")
        idx, v = item
        if isinstance(idx, bool) or int(idx) != idx:
            raise ValueError(f"bad simplex index {idx!r}")
        if cast is int and (isinstance(v, bool) or int(v) != v):
            raise ValueError(f"chain coefficient {v!r} is not an integer")
        out[int(idx)] = out.get(int(idx), 0) + cast(v)
    return out


class DiscreteCochain:
    """Real d-cochain: one value per oriented d-simplex."""

    __slots__ = ("complex", "degree", "values", "quad_error")

    def __init__(self, complex_: SimplicialComplex, degree: int, values, quad_error: float = 0.0):
        v = np.array(values, dtype=float)
        if v.shape != (complex_.count(degree),):
            raise ValueError(f"expected {complex_.count(degree)} cochain values")
        v.setflags(write=False)
        self.complex = complex_
        self.degree = degree
        self.values = v
        self.quad_error = quad_error

    def __call__(self, chain: Chain) -> float:
        if chain.complex is not self.complex or chain.degree != self.degree:
            raise ValueError("cochain and chain do not match")
        return float(self.values @ chain.coeffs)

    def coboundary(self) -> "DiscreteCochain":
        B = self.complex.boundary_matrix(self.degree + 1)
        return DiscreteCochain(self.complex, self.degree + 1, B.T @ self.values)

    def comass_excess(self) -> float:
        """max(|alpha(s)| - vol(s)) over simplices."""
        if not len(self.values):
            return -math.inf
        return float((np.abs(self.values) - self.complex.volumes(self.degree)).max())

    def to_json(self) -> dict:
        return {"degree": self.degree, "values": [[i, float(v)] for i, v in enumerate(self.values)]}

    @classmethod
    def from_json(cls, complex_, data: dict) -> "DiscreteCochain":
        d = int(data["degree"])
        vals = np.zeros(complex_.count(d))
        given = _pairs(data.get("values", []), float)
        if len(given) != len(vals):
            raise ValueError(f"cochain must give a value for each of the {len(vals)} {d}-simplices")
        for i, v in given.items():
            if not 0 <= i < len(vals):
                raise ValueError(f"simplex index {i} out of range")
            vals[i] = v
        return cls(complex_, d, vals)
