"""Discrete oriented Plateau problem on a simplicial complex.

Minimize sum vol(s) |x_s| over integral k-chains x with boundary b.  The LP
relaxation is solved with x = x+ - x-; its dual is a (k-1)-cochain y with
|y(boundary s)| <= vol(s), so alpha = delta y is an exact calibrating
cochain whenever the relaxation is tight.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import null_space

from . import _kernels
from .complex import Chain, DiscreteCochain, SimplicialComplex
from .currents import boundary, fill_cycle, mass, simplex_pairings
from .forms import FormField
from .lp import solve_integer_program

TIE_TOL = 1e-9
NODE_LIMIT = 100_000


@dataclass
class PlateauInstance:
    complex: SimplicialComplex
    k: int
    boundary: Chain
    candidate: Chain | None = None
    certificate: DiscreteCochain | None = None
    name: str = ""

    def __post_init__(self):
        if self.k < 1 or self.k > self.complex.top:
            raise ValueError(f"complex has no {self.k}-simplices")
        if self.boundary.degree != self.k - 1 or self.boundary.complex is not self.complex:
            raise ValueError("boundary must be a (k-1)-chain on the instance's complex")
        if self.k >= 2 and not boundary(self.boundary).is_zero():
            raise ValueError("prescribed boundary is not a cycle")


class Infeasible(Exception):
    """The prescribed boundary bounds no chain in the complex."""


@dataclass
class PlateauSolution:
    chain: Chain | None
    mass: float
    verdict: str = "UNKNOWN"  # UNIQUE | MULTIPLE | UNKNOWN
    minimizers: list = field(default_factory=list)
    dual: DiscreteCochain | None = None
    diagnostics: dict = field(default_factory=dict)


def _system(instance):
    K = instance.complex
    B = K.boundary_matrix(instance.k).astype(float)
    vol = K.volumes(instance.k)
    return B, vol, instance.boundary.coeffs.astype(float)


def _solve_lp(instance, weights=None, extra=(), node_limit=NODE_LIMIT):
    """Integer optimum of sum w |x| with boundary b plus extra bounds on x.

    ``extra``: (index, sense, bound) with sense +1 for x_i <= bound and -1 for
    x_i >= bound.
    """
    B, vol, b = _system(instance)
    w = vol if weights is None else weights
    m = len(w)
    c = np.concatenate([w, w])
    A_eq = np.hstack([B, -B])
    rows, rhs = [], []
    for i, sense, bound in extra:
        row = np.zeros(2 * m)
        row[i], row[m + i] = sense, -sense
        rows.append(row)
        rhs.append(sense * bound)
    A_ub = np.array(rows).reshape(-1, 2 * m)
    res = solve_integer_program(c, A_eq, b, A_ub, np.array(rhs, dtype=float), node_limit)
    x = None if res.x is None else np.round(res.x[:m] - res.x[m:]).astype(np.int64)
    return res, x


def solve(instance: PlateauInstance, node_limit: int = NODE_LIMIT) -> PlateauSolution:
    """Least-mass integral chain with the prescribed boundary."""
    K, k = instance.complex, instance.k
    if fill_cycle(instance.boundary) is None:
        raise Infeasible("boundary is not a boundary in this complex")
    res, x = _solve_lp(instance, node_limit=node_limit)
    diag = {"nodes": res.nodes, "lp_integral": res.lp_integral, "status": res.status}
    if res.root is not None and res.root.status == "optimal":
        diag["lp_bound"] = float(res.root.fun)
    if res.status == "infeasible":
        raise Infeasible("no integral chain with this boundary")
    if x is None:
        return PlateauSolution(None, math.nan, "UNKNOWN", [], None, diag)
    T = Chain(K, k, x)
    if not np.array_equal(boundary(T).coeffs, instance.boundary.coeffs):
        raise RuntimeError("solver returned a chain with the wrong boundary")
    dual = None
    if res.lp_integral and res.root.duals is not None:
        y = res.root.duals
        dual = DiscreteCochain(K, k, K.boundary_matrix(k).T @ y)
    verdict = "UNKNOWN"
    return PlateauSolution(T, mass(T), verdict, [T], dual, diag)


def _canonical(chains):
    uniq = {c.coeffs.tobytes(): c for c in chains}
    return sorted(uniq.values(), key=lambda c: tuple(c.coeffs.tolist()))


@dataclass
class ProbeReport:
    verdict: str
    minimizers: list
    probes: int
    limited: int


def uniqueness_probe(
    instance: PlateauInstance, solution: PlateauSolution, trials: int = 8, seed=0, node_limit: int = NODE_LIMIT
) -> ProbeReport:
    """Search for a second minimizer.

    Runs ``trials`` solves with objective weights perturbed by a relative
    1e-7, then for every simplex s two forced solves (x_s <= T_s - 1 and
    x_s >= T_s + 1).  The forced solves cover every chain other than T, so
    when all of them finish the verdict is exact.
    """
    T = solution.chain
    if T is None:
        raise ValueError("solution has no chain")
    opt = mass(T)
    best, _ = _solve_lp(instance, node_limit=node_limit)
    if best.status == "optimal" and best.fun < opt - TIE_TOL:
        raise ValueError("solution is not optimal")
    _, vol, _ = _system(instance)
    found = [T]
    limited = 0
    probes = 0
    for child in np.random.SeedSequence(seed).spawn(trials):
        rng = np.random.default_rng(child)
        w = vol * (1.0 + 1e-7 * rng.uniform(-1.0, 1.0, len(vol)))
        res, x = _solve_lp(instance, w, node_limit=node_limit)
        probes += 1
        limited += res.status == "limit"
        if x is not None:
            S = Chain(instance.complex, instance.k, x)
            if abs(mass(S) - opt) <= TIE_TOL:
                found.append(S)
    for i in range(len(vol)):
        for sense, bound in ((+1, int(T.coeffs[i]) - 1), (-1, int(T.coeffs[i]) + 1)):
            res, x = _solve_lp(instance, extra=[(i, sense, bound)], node_limit=node_limit)
            probes += 1
            limited += res.status == "limit"
            if res.status == "optimal" and res.fun <= opt + TIE_TOL:
                found.append(Chain(instance.complex, instance.k, x))
    mins = _canonical(found)
    if len(mins) > 1:
        verdict = "MULTIPLE"
    elif limited:
        verdict = "UNKNOWN"
    else:
        verdict = "UNIQUE"
    return ProbeReport(verdict, mins, probes, limited)


# ---------------------------------------------------------------------------
# certificates


@dataclass
class CertificateReport:
    passed: bool
    comass_ok: bool
    max_comass_excess: float
    closed_ok: bool
    max_coboundary: float
    cycles_ok: bool
    max_cycle_value: float
    tight: bool
    gaps: list

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "comass_ok": self.comass_ok,
            "max_comass_excess": self.max_comass_excess,
            "closed_ok": self.closed_ok,
            "max_coboundary": self.max_coboundary,
            "cycles_ok": self.cycles_ok,
            "max_cycle_value": self.max_cycle_value,
            "tight": self.tight,
            "gaps": self.gaps,
        }


def verify_certificate(instance: PlateauInstance, chains, alpha: DiscreteCochain, tol: float = 1e-9) -> CertificateReport:
    """Weak-duality certificate for minimality.

    (i) |alpha(s)| <= vol(s); (ii) alpha(boundary t) = 0 on (k+1)-simplices;
    (ii') alpha vanishes on every k-cycle of the complex, which is what makes
    alpha(S) independent of S among chains with the same boundary (it
    implies (ii), and is strictly stronger when the complex has homology or
    no (k+1)-simplices); (iii) alpha(T) = mass(T) for each given chain.
    """
    K, k = instance.complex, instance.k
    if alpha.degree != k or alpha.complex is not K:
        raise ValueError("certificate degree/complex does not match the instance")
    if isinstance(chains, PlateauSolution):
        chains = chains.minimizers or [chains.chain]
    elif isinstance(chains, Chain):
        chains = [chains]
    vol = K.volumes(k)
    excess = float((np.abs(alpha.values) - vol).max(initial=-math.inf))
    comass_ok = excess <= tol
    cob = np.abs(K.boundary_matrix(k + 1).T @ alpha.values) if k + 1 <= K.top else np.zeros(0)
    max_cob = float(cob.max(initial=0.0))
    Z = null_space(K.boundary_matrix(k).astype(float))
    cyc = float(np.abs(Z.T @ alpha.values).max(initial=0.0)) if Z.size else 0.0
    gaps = [float(mass(T) - alpha(T)) for T in chains]
    tight = all(abs(g) <= tol for g in gaps)
    closed_ok = max_cob <= tol
    cycles_ok = cyc <= tol * max(1.0, math.sqrt(len(vol)))
    return CertificateReport(
        comass_ok and closed_ok and cycles_ok and tight, comass_ok, excess, closed_ok, max_cob, cycles_ok, cyc, tight, gaps
    )


def induced_cochain(phi: FormField, complex_: SimplicialComplex, degree: int, quad_order: int = 4) -> DiscreteCochain:
    """alpha(s) = int_s phi for every oriented simplex.

    ``quad_error`` records the change between ``quad_order`` and
    ``quad_order + 2`` (zero for constant forms).
    """
    if phi.degree != degree or phi.dim != complex_.dim:
        raise ValueError("form does not match the complex")
    vals = simplex_pairings(complex_, degree, phi, None, quad_order)
    err = 0.0
    if not phi.constant and len(vals):
        err = float(np.abs(simplex_pairings(complex_, degree, phi, None, quad_order + 2) - vals).max())
    return DiscreteCochain(complex_, degree, vals, err)


# ---------------------------------------------------------------------------
# exhaustive oracle


@dataclass
class OracleResult:
    mass: float | None
    minimizers: list
    overflow: bool = False


def _search_order(B):
    """Order columns so that rows become fully determined early."""
    m = B.shape[1]
    inc = [set(np.flatnonzero(B[:, j])) for j in range(m)]
    chosen: list[int] = []
    left = set(range(m))
    seen_rows: set = set()
    while left:
        def score(j):
            done = 0
            for r in inc[j]:
                others = set(np.flatnonzero(B[r])) - {j}
                if others <= set(chosen):
                    done += 1
            return (done, len(inc[j] & seen_rows), -j)

        j = max(left, key=score)
        chosen.append(j)
        left.remove(j)
        seen_rows |= inc[j]
    return chosen


def brute_force_oracle(
    instance: PlateauInstance, coeff_bound: int = 2, max_simplices: int = 14, max_solutions: int = 4096
) -> OracleResult:
    """Exact minimum and all minimizers among chains with coefficients in [-bound, bound]."""
    K, k = instance.complex, instance.k
    m = K.count(k)
    if m > max_simplices:
        raise ValueError(f"{m} simplices exceed the oracle limit of {max_simplices}")
    if not 0 <= coeff_bound <= 2:
        raise ValueError("coefficient bound must be in 0..2")
    B = K.boundary_matrix(k)
    order = _search_order(B)
    D = np.ascontiguousarray(B[:, order])
    vol = K.volumes(k)[order]
    last = np.full(D.shape[0], -1, dtype=np.int64)
    rem = np.zeros((D.shape[0], max(m, 1)), dtype=np.int64)
    for r in range(D.shape[0]):
        nz = np.flatnonzero(D[r])
        if len(nz):
            last[r] = nz[-1]
        for p in range(m):
            rem[r, p] = int(np.abs(D[r, p + 1:]).sum())
    best, sols, count, overflow = _kernels.enumerate_chains(
        D, instance.boundary.coeffs, vol, int(coeff_bound), last, rem, 1e-9, max_solutions
    )
    if count == 0:
        return OracleResult(None, [], False)
    inv = np.argsort(order)
    chains = [Chain(K, k, np.asarray(sols[i])[inv]) for i in range(count)]
    return OracleResult(float(best), _canonical(chains), bool(overflow))
