"""Calibrated planes built from geometry, independent of the comass optimizer."""
import numpy as np

from calibra.forms import coassociative_form, graph_form, kahler_form, slag_form, volume_form
from calibra.graphs import AffineGraph, LawsonOssermanGraph, ScherkGraph, sample_domain, tangent_plane
from calibra.grassmannian import plane_from_frame


def complex_structure(v):
    m = len(v) // 2
    return np.concatenate([-v[m:], v[:m]])


def complex_plane(m, dim_c, rng):
    """Random complex dim_c-plane in C^m = R^(2m), oriented by (v1, Jv1, v2, Jv2, ...)."""
    vecs = []
    for _ in range(dim_c):
        v = rng.normal(size=2 * m)
        for w in vecs:
            v -= (v @ w) * w
        v /= np.linalg.norm(v)
        Jv = complex_structure(v)
        vecs += [v, Jv]
    return plane_from_frame(vecs)


def special_lagrangian_plane(m, rng):
    """A R^m for a random A in SU(m); Re(dz^1..m) of it is Re det A = 1."""
    Z = rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))
    A = np.linalg.qr(Z)[0]
    A[:, 0] /= np.linalg.det(A)
    return plane_from_frame([np.concatenate([A[:, j].real, A[:, j].imag]) for j in range(m)])


def contact_pairs(rng, count):
    """(form, point, plane) triples with the plane in the form's contact set at the point."""
    from calibra.mse_solver import default_disc_solution

    loc = LawsonOssermanGraph()
    scherk = ScherkGraph()
    affine = AffineGraph(np.array([[0.7, -0.4]]))
    disc = default_disc_solution()
    forms = {
        "volume": volume_form(2, 3),
        "kahler": kahler_form(4),
        "kahler-r6": kahler_form(6),
        "kahler2-r6": kahler_form(6, 2),
        "slag-re": slag_form(4),
        "slag-re-c3": slag_form(6),
        "coassociative": coassociative_form(),
        "graph:affine": graph_form(affine),
        "graph:scherk": graph_form(scherk),
        "graph:disc": graph_form(disc),
    }
    graphs = {"coassociative": loc, "graph:affine": affine, "graph:scherk": scherk, "graph:disc": disc}
    names = sorted(forms)
    out = []
    for t in range(count):
        name = names[t % len(names)]
        phi = forms[name]
        if name in graphs:
            u = graphs[name]
            if name == "graph:disc":
                x = rng.uniform(-0.6, 0.6, 2)
            else:
                x = sample_domain(u, 1, rng)[0]
            p, P = u.point(x), tangent_plane(u, x)
        else:
            p = rng.uniform(-1, 1, phi.dim)
            if name == "volume":
                P = plane_from_frame([[1, 0, 0], [0, 1, 0]])
            elif name.startswith("slag"):
                P = special_lagrangian_plane(phi.dim // 2, rng)
            else:
                P = complex_plane(phi.dim // 2, phi.degree // 2, rng)
        out.append((name, phi, p, P))
    return out


def random_rotation(k, rng):
    Q = np.linalg.qr(rng.normal(size=(k, k)))[0]
    if np.linalg.det(Q) < 0:
        Q[:, 0] = -Q[:, 0]
    return Q
