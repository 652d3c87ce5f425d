"""Alternating k-vectors and k-covectors on R^n.

Multi-indices are strictly increasing tuples of 1-based axis labels, so
``KCovector.basis(4, 1, 2)`` is dx^1 ^ dx^2.  Coefficients may be floats or
``fractions.Fraction``; all algebraic operations keep whatever number type
they are given, which gives exact arithmetic for rational inputs.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import lru_cache
from numbers import Number

import numpy as np

SIMPLICITY_TOL = 1e-9


@lru_cache(maxsize=None)
def multi_indices(n: int, k: int) -> tuple[tuple[int, ...], ...]:
    """All increasing k-tuples drawn from 1..n, in lexicographic order."""
    return tuple(itertools.combinations(range(1, n + 1), k))


@lru_cache(maxsize=None)
def index_position(n: int, k: int) -> dict[tuple[int, ...], int]:
    return {I: i for i, I in enumerate(multi_indices(n, k))}


def sort_with_sign(axes) -> tuple[int, tuple[int, ...]]:
    """Sort ``axes`` returning (sign of the sorting permutation, sorted tuple).

    The sign is 0 when an axis repeats.
    """
    axes = list(axes)
    if len(set(axes)) != len(axes):
        return 0, tuple(sorted(axes))
    sign = 1
    # insertion sort, counting transpositions
    for i in range(1, len(axes)):
        j = i
        while j > 0 and axes[j - 1] > axes[j]:
            axes[j - 1], axes[j] = axes[j], axes[j - 1]
            sign = -sign
            j -= 1
    return sign, tuple(axes)


class _Alternating:
    """Shared machinery for :class:`KVector` and :class:`KCovector`."""

    __slots__ = ("degree", "dim", "coeffs")
    kind = ""

    def __init__(self, degree: int, dim: int, coeffs=None):
        if dim < 0 or not 0 <= degree <= dim:
            raise ValueError(f"degree {degree} not in [0, {dim}]")
        clean = {}
        for axes, c in (coeffs or {}).items():
            axes = tuple(int(a) for a in axes)
            if len(axes) != degree:
                raise ValueError(f"index {axes} has length != degree {degree}")
            if any(a < 1 or a > dim for a in axes):
                raise ValueError(f"index {axes} out of range 1..{dim}")
            sign, key = sort_with_sign(axes)
            if sign == 0:
                continue
            clean[key] = clean.get(key, 0) + sign * c
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "coeffs", {I: c for I, c in clean.items() if c != 0})

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    # construction -----------------------------------------------------
    @classmethod
    def basis(cls, dim: int, *axes: int):
        """Signed basis element; ``basis(3, 2, 1)`` is -(e1 ^ e2)."""
        return cls(len(axes), dim, {tuple(axes): 1})

    @classmethod
    def scalar(cls, dim: int, value=1):
        return cls(0, dim, {(): value})

    @classmethod
    def from_vector(cls, v):
        v = list(v)
        return cls(1, len(v), {(i + 1,): c for i, c in enumerate(v)})

    @classmethod
    def from_array(cls, degree: int, dim: int, values):
        values = np.asarray(values, dtype=float)
        idx = multi_indices(dim, degree)
        if values.shape != (len(idx),):
            raise ValueError(f"expected {len(idx)} coefficients, got {values.shape}")
        return cls(degree, dim, {I: float(c) for I, c in zip(idx, values)})

    def to_array(self) -> np.ndarray:
        """Dense float coefficients in lexicographic multi-index order."""
        pos = index_position(self.dim, self.degree)
        out = np.zeros(len(pos))
        for I, c in self.coeffs.items():
            out[pos[I]] = float(c)
        return out

    # arithmetic -------------------------------------------------------
    def _check_same(self, other):
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other):
        self._check_same(other)
        if other.degree != self.degree:
            raise ValueError("cannot add forms of different degree")
        out = dict(self.coeffs)
        for I, c in other.coeffs.items():
            out[I] = out.get(I, 0) + c
        return type(self)(self.degree, self.dim, out)

    def __neg__(self):
        return type(self)(self.degree, self.dim, {I: -c for I, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, s):
        if not isinstance(s, Number):
            return NotImplemented
        return type(self)(self.degree, self.dim, {I: s * c for I, c in self.coeffs.items()})

    __rmul__ = __mul__

    def __truediv__(self, s):
        if not isinstance(s, Number):
            return NotImplemented
        return type(self)(self.degree, self.dim, {I: c / s for I, c in self.coeffs.items()})

    def __xor__(self, other):
        return wedge(self, other)

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return (self.degree, self.dim, self.coeffs) == (other.degree, other.dim, other.coeffs)

    def __hash__(self):
        return hash((type(self).__name__, self.degree, self.dim, frozenset(self.coeffs.items())))

    def isclose(self, other, atol: float = 1e-10) -> bool:
        self._check_same(other)
        if other.degree != self.degree:
            return False
        return bool(np.all(np.abs(self.to_array() - other.to_array()) <= atol))

    def norm(self) -> float:
        """Euclidean norm in the orthonormal basis e_I."""
        return math.sqrt(float(sum(c * c for c in self.coeffs.values())))

    def is_zero(self) -> bool:
        return not self.coeffs

    def __repr__(self):
        sym = "e" if self.kind == "vector" else "dx"
        if not self.coeffs:
            return f"{type(self).__name__}(0, degree={self.degree}, dim={self.dim})"
        terms = " + ".join(f"{c}*{sym}{''.join(map(str, I)) or '∅'}" for I, c in sorted(self.coeffs.items()))
        return f"{type(self).__name__}({terms}, dim={self.dim})"

    # serialization ----------------------------------------------------
    def to_json(self) -> dict:
        def enc(c):
            if isinstance(c, Fraction):
                return f"{c.numerator}/{c.denominator}"
            if isinstance(c, (int, np.integer)):
                return int(c)
            return float(c)

        return {
            "degree": self.degree,
            "dim": self.dim,
            "terms": [{"axes": list(I), "coeff": enc(c)} for I, c in sorted(self.coeffs.items())],
        }

    @classmethod
    def from_json(cls, data: dict):
        def dec(c):
            if isinstance(c, str):
                return Fraction(c)
            return c

        try:
            terms = {tuple(t["axes"]): dec(t["coeff"]) for t in data["terms"]}
            return cls(int(data["degree"]), int(data["dim"]), terms)
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed {cls.__name__} JSON: {exc}") from exc


class KVector(_Alternating):
    """Element of Λ_k(R^n)."""

    __slots__ = ()
    kind = "vector"


class KCovector(_Alternating):
    """Element of Λ^k(R^n); a constant k-form."""

    __slots__ = ()
    kind = "covector"


def wedge(a, b):
    """Exterior product of two k-vectors or two k-covectors."""
    if type(a) is not type(b) or not isinstance(a, _Alternating):
        raise TypeError("wedge needs two KVectors or two KCovectors")
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    if a.degree + b.degree > a.dim:
        raise ValueError(f"degree {a.degree}+{b.degree} exceeds dimension {a.dim}")
    out = {}
    for I, c in a.coeffs.items():
        for J, d in b.coeffs.items():
            sign, K = sort_with_sign(I + J)
            if sign:
                out[K] = out.get(K, 0) + sign * c * d
    return type(a)(a.degree + b.degree, a.dim, out)


def wedge_all(items):
    items = list(items)
    out = items[0]
    for x in items[1:]:
        out = wedge(out, x)
    return out


def interior(v, xi: KVector) -> KVector:
    """Contraction v ⌟ xi; on basis elements e_i ⌟ e_I = (-1)^(pos of i) e_{I \\ i}."""
    if isinstance(xi, KCovector) or not isinstance(xi, KVector):
        raise TypeError("interior expects a KVector")
    if xi.degree == 0:
        raise ValueError("interior product of a degree-0 element")
    if isinstance(v, KVector):
        if v.degree != 1:
            raise ValueError("interior needs a vector (degree 1)")
        comps = {I[0]: c for I, c in v.coeffs.items()}
        vdim = v.dim
    else:
        v = list(v)
        vdim = len(v)
        comps = {i + 1: c for i, c in enumerate(v) if c != 0}
    if vdim != xi.dim:
        raise ValueError(f"dimension mismatch: {vdim} vs {xi.dim}")
    out = {}
    for I, c in xi.coeffs.items():
        for pos, a in enumerate(I):
            if a in comps:
                key = I[:pos] + I[pos + 1:]
                out[key] = out.get(key, 0) + (-1) ** pos * comps[a] * c
    return KVector(xi.degree - 1, xi.dim, out)


def pair(phi: KCovector, xi: KVector):
    """Dual pairing <phi, xi>; the bases dx^I and e_I are dual."""
    if not isinstance(phi, KCovector) or not isinstance(xi, KVector):
        raise TypeError("pair(KCovector, KVector)")
    if phi.dim != xi.dim or phi.degree != xi.degree:
        raise ValueError(
            f"degree/dim mismatch: ({phi.degree},{phi.dim}) vs ({xi.degree},{xi.dim})"
        )
    small, big = (phi.coeffs, xi.coeffs) if len(phi.coeffs) <= len(xi.coeffs) else (xi.coeffs, phi.coeffs)
    return sum((c * big[I] for I, c in small.items() if I in big), 0)


def wedge_vectors(vectors) -> KVector:
    """v_1 ^ ... ^ v_k via its Plücker coordinates (k x k minors)."""
    V = np.asarray(vectors, dtype=float)
    if V.ndim != 2:
        raise ValueError("expected a (k, n) array of vectors")
    k, n = V.shape
    if k == 0:
        return KVector.scalar(n)
    from ._kernels import plucker

    return KVector.from_array(k, n, plucker(V.T[None], np.asarray(multi_indices(n, k)) - 1)[0])


def simplicity_defect(xi: KVector) -> float:
    """Size of the quadratic Plücker relations of ``xi`` relative to |xi|^2.

    For increasing I (length k-1) and J (length k+1) the relation is
    R(I, J) = sum_l (-1)^l xi[I + j_l] xi[J - j_l], with xi[.] the signed
    coefficient of an unsorted index.  Returns sqrt(sum R^2) / |xi|^2, which is
    zero exactly for simple k-vectors.  With this normalization
    e1^e2 + e3^e4 has defect 1.
    """
    norm2 = sum(c * c for c in xi.coeffs.values())
    if norm2 == 0:
        raise ValueError("simplicity of the zero k-vector is undefined")
    k, n = xi.degree, xi.dim
    if k <= 1 or k >= n - 1:
        return 0.0

    def coef(axes):
        sign, key = sort_with_sign(axes)
        return sign * xi.coeffs.get(key, 0) if sign else 0

    total = 0
    for I in multi_indices(n, k - 1):
        for J in multi_indices(n, k + 1):
            r = 0
            for l, j in enumerate(J):
                a = coef(I + (j,))
                if a:
                    r += (-1) ** l * a * coef(J[:l] + J[l + 1:])
            total += r * r
    return math.sqrt(float(total)) / float(norm2)


def is_simple(xi: KVector, tol: float = SIMPLICITY_TOL) -> bool:
    return simplicity_defect(xi) < tol


def antisymmetric_tensor(phi: _Alternating) -> np.ndarray:
    """Full (n,)*k antisymmetric array T with T[I] = coefficient for increasing I.

    Then <phi, v_1 ^ ... ^ v_k> = T contracted with v_1, ..., v_k.
    """
    k, n = phi.degree, phi.dim
    T = np.zeros((n,) * k)
    perms = list(itertools.permutations(range(k)))
    signs = [sort_with_sign(p)[0] for p in perms]
    for I, c in phi.coeffs.items():
        idx = [a - 1 for a in I]
        for p, s in zip(perms, signs):
            T[tuple(idx[i] for i in p)] = s * float(c)
    return T
