"""Named demo complexes, Plateau instances and certificates.

The bundled JSON fixtures are written from these builders by
:func:`write_fixtures`; tests check that the files and the builders agree.
"""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .complex import Chain, DiscreteCochain, SimplicialComplex
from .currents import boundary
from .forms import FormField, constant_form, dx, volume_form
from .plateau import PlateauInstance, induced_cochain

FIXTURE_DIR = Path(__file__).with_name("fixtures")


# ---------------------------------------------------------------------------
# complexes


def grid_square(nx: int = 8, size: float = 1.0, dim: int = 2, origin=(0.0, 0.0)) -> SimplicialComplex:
    """[0, size]^2 cut into nx^2 squares, two positively oriented triangles each."""
    xs = np.linspace(0.0, size, nx + 1)
    verts = []
    for i in range(nx + 1):
        for j in range(nx + 1):
            p = [origin[0] + xs[i], origin[1] + xs[j]] + [0.0] * (dim - 2)
            verts.append(p)
    idx = lambda i, j: i * (nx + 1) + j  # noqa: E731
    tris = []
    for i in range(nx):
        for j in range(nx):
            a, b, c, d = idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1)
            tris += [[a, b, c], [a, c, d]]
    return SimplicialComplex(verts, {2: tris})


def full_chain(K: SimplicialComplex, degree: int, coeff: int = 1) -> Chain:
    return Chain(K, degree, np.full(K.count(degree), coeff, dtype=np.int64))


def tilted_square(theta: float, nx: int = 2) -> SimplicialComplex:
    """Unit square rotated by theta about the x-axis in R^3."""
    K = grid_square(nx, dim=3)
    R = np.array([[1, 0, 0], [0, math.cos(theta), -math.sin(theta)], [0, math.sin(theta), math.cos(theta)]])
    return SimplicialComplex(K.vertices @ R.T, {2: K.simplices[2].tolist()})


def tetra_surface() -> SimplicialComplex:
    """Boundary of a tetrahedron with outward-consistent orientations (a closed 2-cycle)."""
    V = [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]]
    return SimplicialComplex(V, {2: [[0, 2, 1], [0, 1, 3], [0, 3, 2], [1, 2, 3]]})


def polygon_disc(n: int, radius: float = 1.0, dim: int = 2) -> SimplicialComplex:
    """Regular n-gon coned from the origin: vertices 0..n-1 on the circle, n the center."""
    ang = 2 * np.pi * np.arange(n) / n
    verts = np.zeros((n + 1, dim))
    verts[:n, 0] = radius * np.cos(ang)
    verts[:n, 1] = radius * np.sin(ang)
    tris = [[n, i, (i + 1) % n] for i in range(n)]
    return SimplicialComplex(verts, {2: tris})


def circle_chain(K: SimplicialComplex, n: int) -> Chain:
    """Counterclockwise cycle through vertices 0..n-1."""
    return Chain.from_simplices(K, 1, [((i, (i + 1) % n), 1) for i in range(n)])


def annulus(n: int = 12, r_in: float = 0.5, r_out: float = 1.0) -> SimplicialComplex:
    """Triangulated annulus: inner ring 0..n-1, outer ring n..2n-1."""
    ang = 2 * np.pi * np.arange(n) / n
    inner = np.stack([r_in * np.cos(ang), r_in * np.sin(ang)], axis=1)
    outer = np.stack([r_out * np.cos(ang), r_out * np.sin(ang)], axis=1)
    tris = []
    for i in range(n):
        j = (i + 1) % n
        tris += [[i, n + i, n + j], [i, n + j, j]]
    return SimplicialComplex(np.vstack([inner, outer]), {2: tris})


def holomorphic_graph_complex(coeffs=(0, 0, 1), nx: int = 12, half: float = 0.5) -> SimplicialComplex:
    """Triangulated graph of w = f(z) over the square |Re z|, |Im z| <= half.

    Points are (x1, x2, y1, y2) with z = x1 + i y1, w = x2 + i y2;
    triangles carry the orientation of the z-plane.
    """
    from .graphs import HolomorphicGraph

    f = HolomorphicGraph(coeffs)
    K = grid_square(nx, 2 * half, origin=(-half, -half))
    verts = np.array([f.embed(p, f.value(p)) for p in K.vertices])
    return SimplicialComplex(verts, {2: K.simplices[2].tolist()})


# ---------------------------------------------------------------------------
# Plateau instances


def four_corners() -> PlateauInstance:
    """A(1,1), B(1,-1), C(-1,-1), D(-1,1), origin O; boundary -A + B - C + D.

    Edges: the four sides and the half-diagonals through O; triangles ABO,
    BCO, CDO, DAO.  The certificate is the piecewise constant cochain
    -dy / dx / dy / -dx on those triangles.
    """
    V = [[1, 1], [1, -1], [-1, -1], [-1, 1], [0, 0]]
    A, B, C, D, O = range(5)
    edges = [[A, B], [B, C], [C, D], [D, A], [O, A], [O, B], [O, C], [O, D]]
    tris = [[A, B, O], [B, C, O], [C, D, O], [D, A, O]]
    K = SimplicialComplex(V, {1: edges, 2: tris})
    b = Chain.from_dict(K, 0, {A: -1, B: 1, C: -1, D: 1})
    alpha = induced_cochain(four_corners_form(), K, 1)
    return PlateauInstance(K, 1, b, None, alpha, "four-corners")


def four_corners_form() -> FormField:
    """-dy on ABO, dx on BCO, dy on CDO, -dx on DAO (the diagonals separate the pieces)."""
    table = {0: np.array([0.0, -1.0]), 1: np.array([1.0, 0.0]), 2: np.array([0.0, 1.0]), 3: np.array([-1.0, 0.0])}

    def fn(p):
        x, y = p
        if x >= abs(y):
            return table[0]
        if -y >= abs(x):
            return table[1]
        if -x >= abs(y):
            return table[2]
        return table[3]

    return FormField(1, 2, fn, None, False, "four-corners-cochain")


def four_corners_minimizers(inst: PlateauInstance) -> list[Chain]:
    K = inst.complex
    A, B, C, D = range(4)
    first = Chain.from_simplices(K, 1, [((A, B), 1), ((C, D), 1)])
    second = Chain.from_simplices(K, 1, [((A, D), 1), ((C, B), 1)])
    return [first, second]


def segment_path() -> PlateauInstance:
    """Points P0..P4 on the x-axis plus detour points above; boundary P4 - P0.

    The straight path is the unique shortest route; dx certifies it.
    """
    P = [[float(i), 0.0] for i in range(5)]
    Q = [[0.5, 1.0], [1.5, 0.5], [2.5, 1.0], [3.5, 0.5]]
    V = P + Q
    edges = [[i, i + 1] for i in range(4)]
    edges += [[i, 5 + i] for i in range(4)] + [[5 + i, i + 1] for i in range(4)]
    edges += [[5, 6], [7, 8]]
    K = SimplicialComplex(V, {1: edges})
    b = Chain.from_dict(K, 0, {0: -1, 4: 1})
    alpha = induced_cochain(constant_form(dx(2, 1), "dx"), K, 1)
    return PlateauInstance(K, 1, b, None, alpha, "segment-path")


def square_diagonal() -> PlateauInstance:
    """Unit square with its antidiagonal; boundary (1,1) - (0,0) has two routes of length 2."""
    V = [[0, 0], [1, 0], [1, 1], [0, 1]]
    edges = [[0, 1], [1, 2], [0, 3], [3, 2], [1, 3]]
    K = SimplicialComplex(V, {1: edges})
    b = Chain.from_dict(K, 0, {0: -1, 2: 1})
    return PlateauInstance(K, 1, b, None, None, "square-diagonal")


def cone_16gon(n: int = 16, bump: float = 0.5) -> PlateauInstance:
    """Circle n-gon in the z = 0 plane of R^3 spanning two sheets.

    Vertices 0..n-1 on the unit circle, n the center O, n+1 the top H =
    (0, 0, bump).  Triangles (O, v_i, v_i+1) form the coned disc and
    (H, v_i, v_i+1) the bumped alternative.  dx^dy certifies the disc.
    """
    ang = 2 * np.pi * np.arange(n) / n
    V = np.zeros((n + 2, 3))
    V[:n, 0], V[:n, 1] = np.cos(ang), np.sin(ang)
    V[n + 1, 2] = bump
    tris = [[n, i, (i + 1) % n] for i in range(n)] + [[n + 1, i, (i + 1) % n] for i in range(n)]
    K = SimplicialComplex(V, {2: tris})
    b = circle_chain(K, n)
    alpha = induced_cochain(volume_form(2, 3), K, 2)
    return PlateauInstance(K, 2, b, None, alpha, f"cone-{n}gon")


def cone_disc_chain(inst: PlateauInstance, n: int = 16) -> Chain:
    return Chain.from_simplices(inst.complex, 2, [((n, i, (i + 1) % n), 1) for i in range(n)])


def tilted_instance(theta: float = math.pi / 6) -> PlateauInstance:
    """Tilted unit square with its own boundary, the square itself as candidate."""
    K = tilted_square(theta)
    T = full_chain(K, 2)
    return PlateauInstance(K, 2, boundary(T), T, None, "tilted-square")


def tilted_cochain(inst: PlateauInstance) -> DiscreteCochain:
    """dx^dy integrated over the tilted square's triangles; not tight on the candidate."""
    return induced_cochain(volume_form(2, 3), inst.complex, 2)


def single_triangle() -> PlateauInstance:
    K = SimplicialComplex([[0, 0], [1, 0], [0, 1]], {2: [[0, 1, 2]]})
    return PlateauInstance(K, 2, boundary(full_chain(K, 2)), None, None, "triangle")


def random_instance(seed) -> PlateauInstance:
    """Small random instance (k = 1 graphs or k = 2 triangle sets) with a feasible boundary.

    Vertex coordinates are small integers so that ties occur.
    """
    rng = np.random.default_rng(seed)
    if rng.random() < 0.6:
        nv = int(rng.integers(4, 8))
        while True:
            V = rng.integers(0, 4, (nv, 2)).astype(float)
            if len({tuple(v) for v in V}) == nv:
                break
        pairs = [(i, j) for i in range(nv) for j in range(i + 1, nv)]
        rng.shuffle(pairs)
        edges = [list(p) for p in pairs[: int(rng.integers(nv, min(14, len(pairs)) + 1))]]
        K = SimplicialComplex(V, {1: edges})
        x = rng.integers(-1, 2, K.count(1))
        b = boundary(Chain(K, 1, x))
        return PlateauInstance(K, 1, b, None, None, f"random-{seed}")
    nx = int(rng.integers(2, 4))
    G = grid_square(nx)
    tris = G.simplices[2]
    keep = rng.choice(len(tris), size=min(len(tris), int(rng.integers(3, 9))), replace=False)
    V = G.vertices.copy()
    V += rng.integers(-1, 2, V.shape) * 0.25 * (rng.random() < 0.5)
    try:
        K = SimplicialComplex(V, {2: tris[np.sort(keep)].tolist()})
    except ValueError:
        K = SimplicialComplex(G.vertices, {2: tris[np.sort(keep)].tolist()})
    x = rng.integers(-1, 2, K.count(2))
    return PlateauInstance(K, 2, boundary(Chain(K, 2, x)), None, None, f"random-{seed}")


# ---------------------------------------------------------------------------
# fixtures


def instance_to_json(inst: PlateauInstance) -> dict:
    out = inst.complex.to_json()
    out["k"] = inst.k
    out["name"] = inst.name
    out["boundary"] = inst.boundary.to_json()
    if inst.candidate is not None:
        out["candidate"] = inst.candidate.to_json()
    if inst.certificate is not None:
        out["certificate"] = inst.certificate.to_json()
    return out


def bundled_instances() -> dict[str, PlateauInstance]:
    return {
        "four-corners": four_corners(),
        "cone-16gon": cone_16gon(),
        "segment-path": segment_path(),
        "square-diagonal": square_diagonal(),
        "tilted-square": tilted_instance(),
        "triangle": single_triangle(),
    }


def write_fixtures(directory=FIXTURE_DIR) -> list[Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, inst in bundled_instances().items():
        path = directory / f"{name}.json"
        path.write_text(json.dumps(instance_to_json(inst), indent=1, sort_keys=True) + "\n")
        paths.append(path)
    path = directory / "tilted-square.cochain.json"
    path.write_text(json.dumps(tilted_cochain(tilted_instance()).to_json(), indent=1, sort_keys=True) + "\n")
    paths.append(path)
    return paths


def demo_complexes() -> dict[str, Chain]:
    """Top-degree chains on assorted complexes used by the Stokes checks."""
    sq = grid_square(4)
    tilt = tilted_square(0.4, 3)
    holo = holomorphic_graph_complex(nx=6)
    cone = cone_16gon().complex
    tet = tetra_surface()
    disc = Chain.from_simplices(cone, 2, [((16, i, (i + 1) % 16), 1) for i in range(16)])
    path = segment_path()
    return {
        "square": full_chain(sq, 2),
        "tilted-square": full_chain(tilt, 2),
        "holomorphic-graph": full_chain(holo, 2),
        "cone-disc": disc,
        "tetra-surface": full_chain(tet, 2),
        "segment-path": Chain.from_simplices(path.complex, 1, [((i, i + 1), 1) for i in range(4)]),
    }


if __name__ == "__main__":  # pragma: no cover
    for p in write_fixtures():
        print(p)
