"""Differential forms on regions of R^n and the catalog of standard calibrations."""
from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .exterior import KCovector, index_position, multi_indices, wedge

# ---------------------------------------------------------------------------
# regions


@dataclass(frozen=True)
class Box:
    """Axis-aligned box; use +-inf for unbounded directions."""

    lo: tuple
    hi: tuple

    @property
    def dim(self) -> int:
        return len(self.lo)

    def contains(self, p, margin: float = 0.0) -> bool:
        p = np.asarray(p, dtype=float)
        return bool(np.all(p - margin >= np.asarray(self.lo)) and np.all(p + margin <= np.asarray(self.hi)))

    def lift(self, extra: int = 1) -> "Box":
        return Box(tuple(self.lo) + (-math.inf,) * extra, tuple(self.hi) + (math.inf,) * extra)


def whole_space(n: int) -> Box:
    return Box((-math.inf,) * n, (math.inf,) * n)


@dataclass(frozen=True)
class Annulus:
    """{r_in <= |p[axes] - center| <= r_out}; other coordinates unconstrained.

    ``r_in = 0`` gives a closed ball.
    """

    dim: int
    r_out: float
    r_in: float = 0.0
    axes: tuple = ()
    center: tuple = ()

    def __post_init__(self):
        if not self.axes:
            object.__setattr__(self, "axes", tuple(range(self.dim)))
        if not self.center:
            object.__setattr__(self, "center", (0.0,) * len(self.axes))

    def contains(self, p, margin: float = 0.0) -> bool:
        p = np.asarray(p, dtype=float)
        r = float(np.linalg.norm(p[list(self.axes)] - np.asarray(self.center)))
        inner = self.r_in + margin <= r if self.r_in > 0 else True
        return bool(inner and r <= self.r_out - margin)

    def lift(self, extra: int = 1) -> "Annulus":
        return Annulus(self.dim + extra, self.r_out, self.r_in, self.axes, self.center)


# ---------------------------------------------------------------------------
# form fields


@dataclass(frozen=True, eq=False)
class FormField:
    """A k-form on a region of R^n.

    ``coeff_fn(p)`` returns the dense coefficient vector of phi_p in the
    lexicographic basis dx^I (see :func:`calibra.exterior.multi_indices`).
    """

    degree: int
    dim: int
    coeff_fn: Callable[[np.ndarray], np.ndarray]
    region: object = None
    constant: bool = False
    name: str = ""
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.region is None:
            object.__setattr__(self, "region", whole_space(self.dim))

    @property
    def size(self) -> int:
        return len(multi_indices(self.dim, self.degree))

    def coeffs(self, p, *, check: bool = True) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        if p.shape != (self.dim,):
            raise ValueError(f"point must have {self.dim} coordinates")
        if check and not self.region.contains(p):
            raise ValueError(f"point {p.tolist()} outside the region of {self.name or 'form'}")
        return np.asarray(self.coeff_fn(p), dtype=float)

    def coeffs_many(self, points, *, check: bool = True) -> np.ndarray:
        points = np.asarray(points, dtype=float).reshape(-1, self.dim)
        if self.constant and len(points):
            c = self.coeffs(points[0], check=check)
            if check:
                for p in points[1:]:
                    if not self.region.contains(p):
                        raise ValueError(f"point {p.tolist()} outside the region of {self.name or 'form'}")
            return np.tile(c, (len(points), 1))
        return np.array([self.coeffs(p, check=check) for p in points]).reshape(len(points), self.size)

    def at(self, p) -> KCovector:
        return KCovector.from_array(self.degree, self.dim, self.coeffs(p))

    def scaled(self, c: float) -> "FormField":
        fn = self.coeff_fn
        return FormField(
            self.degree, self.dim, lambda p: c * fn(p), self.region, self.constant, f"{c}*{self.name}", dict(self.meta)
        )


def constant_form(phi: KCovector, name: str = "", region=None) -> FormField:
    arr = phi.to_array()
    arr.setflags(write=False)
    return FormField(phi.degree, phi.dim, lambda p: arr, region, True, name, {"covector": phi})


# ---------------------------------------------------------------------------
# catalog


def dx(n: int, *axes: int) -> KCovector:
    return KCovector.basis(n, *axes)


def volume_form(k: int, n: int) -> FormField:
    """dx^1 ^ ... ^ dx^k on R^n."""
    return constant_form(dx(n, *range(1, k + 1)), f"volume({k},{n})")


def kahler_covector(n: int) -> KCovector:
    """omega = sum_j dx^j ^ dy^j in coordinates (x^1..x^m, y^1..y^m), n = 2m."""
    if n % 2:
        raise ValueError("Kähler form needs even dimension")
    m = n // 2
    out = KCovector(2, n)
    for j in range(1, m + 1):
        out = out + dx(n, j, m + j)
    return out


def kahler_form(n: int, power: int = 1) -> FormField:
    """omega^p / p! on C^m = R^(2m)."""
    m = n // 2
    if not 1 <= power <= m:
        raise ValueError(f"power must be in 1..{m}")
    w = kahler_covector(n)
    out = w
    for _ in range(power - 1):
        out = wedge(out, w)
    out = out / math.factorial(power)
    return constant_form(out, f"kahler({n},{power})")


def slag_covector(n: int, phase: float = 0.0) -> KCovector:
    """Re(e^{-i phase} dz^1 ^ ... ^ dz^m) as a real m-form on R^(2m)."""
    if n % 2:
        raise ValueError("special Lagrangian form needs even dimension")
    m = n // 2
    rot = cmath.exp(-1j * phase)
    terms = {}
    for picks in itertools.product((0, 1), repeat=m):
        axes = tuple(j + 1 + m * pick for j, pick in enumerate(picks))
        c = (rot * 1j ** sum(picks)).real
        if abs(c) > 1e-15:
            terms[axes] = c
    return KCovector(m, n, terms)


def slag_form(n: int, phase: float = 0.0) -> FormField:
    return constant_form(slag_covector(n, phase), f"slag-re({n},{phase:g})")


def coassociative_covector() -> KCovector:
    """dx1234 - dx67^(dx12 - dx34) + dx57^(dx13 + dx24) - dx56^(dx14 - dx23)."""
    d = lambda *a: dx(7, *a)  # noqa: E731
    return (
        d(1, 2, 3, 4)
        - wedge(d(6, 7), d(1, 2) - d(3, 4))
        + wedge(d(5, 7), d(1, 3) + d(2, 4))
        - wedge(d(5, 6), d(1, 4) - d(2, 3))
    )


def coassociative_form() -> FormField:
    return constant_form(coassociative_covector(), "coassociative")


def graph_form(u, name: str = "graph") -> FormField:
    """Calibration of a codimension-one graph y = u(x), x in R^m.

    phi = (-1)^m W^-1 dx^1..m + sum_i (-1)^i u_i W^-1 dx^1..^i..m ^ dy with
    W = sqrt(1 + |Du|^2), coefficients frozen in x; lives on domain x R.
    It pairs to +1 with the graph oriented by (-1)^m times the standard
    orientation of the domain.
    """
    m = u.k
    if u.codim != 1:
        raise ValueError("graph calibration needs a scalar graph function")
    n = m + 1
    pos = index_position(n, m)
    top = pos[tuple(range(1, m + 1))]
    side = [pos[tuple(a for a in range(1, m + 1) if a != i) + (n,)] for i in range(1, m + 1)]
    sign_top = (-1) ** m

    def fn(p):
        g = np.asarray(u.jacobian(p[:m]), dtype=float).reshape(m)
        W = math.sqrt(1.0 + float(g @ g))
        out = np.zeros(len(pos))
        out[top] = sign_top / W
        for i in range(m):
            out[side[i]] = (-1) ** (i + 1) * g[i] / W
        return out

    const = bool(getattr(u, "is_affine", False))
    return FormField(m, n, fn, u.domain.lift(1), const, name, {"graph": u})


def standard_calibrations() -> dict[str, FormField]:
    """Default members of each catalog family."""
    from .graphs import AffineGraph

    return {
        "volume": volume_form(2, 3),
        "kahler": kahler_form(4),
        "kahler-r6": kahler_form(6),
        "kahler2-r6": kahler_form(6, 2),
        "slag-re": slag_form(4),
        "slag-re-c3": slag_form(6),
        "coassociative": coassociative_form(),
        "graph:flat": graph_form(AffineGraph(np.zeros((1, 2))), "graph:flat"),
    }


def catalog_form(form_id: str, k: int | None = None, dim: int | None = None) -> FormField:
    """Resolve a catalog id.

    volume (with k, dim) | kahler[:power] (dim, default 4) | slag-re[:phase]
    | coassociative | graph:flat | graph:affine:a1,a2,.. | graph:scherk
    | graph:disc | scale:<c>:<id>
    """
    head, _, rest = form_id.partition(":")
    if head == "scale":
        c, _, inner = rest.partition(":")
        if not inner:
            raise ValueError("scale id must look like scale:<c>:<form id>")
        return catalog_form(inner, k, dim).scaled(float(c))
    if head == "volume":
        k = 2 if k is None else k
        return volume_form(k, k if dim is None else dim)
    if head == "kahler":
        return kahler_form(dim or 4, int(rest) if rest else 1)
    if head == "slag-re":
        return slag_form(dim or 4, float(rest) if rest else 0.0)
    if head == "coassociative":
        return coassociative_form()
    if head == "graph":
        from . import graphs

        kind, _, args = rest.partition(":")
        if kind == "flat":
            m = int(args) if args else 2
            return graph_form(graphs.AffineGraph(np.zeros((1, m))), form_id)
        if kind == "affine":
            a = [float(s) for s in args.split(",")] if args else [0.3, -0.2]
            return graph_form(graphs.AffineGraph(np.array([a])), form_id)
        if kind == "scherk":
            return graph_form(graphs.ScherkGraph(), form_id)
        if kind == "disc":
            from .mse_solver import default_disc_solution

            return graph_form(default_disc_solution(), form_id)
    raise ValueError(f"unknown form id {form_id!r}")
