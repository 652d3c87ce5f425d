"""Command line interface: ``calibra <comass|verify|plateau|density|fill> ...``.

Exit codes: 0 success; 1 bad arguments, unknown id or malformed input;
2 infeasible boundary; 3 uniqueness verdict UNKNOWN (with --probe) or
node limit reached; 4 a verification check failed.
"""
from __future__ import annotations

import argparse
import csv
import io as _io
import math
import re
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .io import InputError, dumps, load_instance

EXIT_OK, EXIT_INPUT, EXIT_INFEASIBLE, EXIT_UNKNOWN, EXIT_CHECK = 0, 1, 2, 3, 4
DEFAULT_PROBE_TRIALS = 8


def _floats(text: str) -> list[float]:
    try:
        return [float(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _positive(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _clean(x):
    """Round-trip-safe JSON values (tuples to lists, numpy to python, nan/inf to strings)."""
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, np.ndarray):
        return _clean(x.tolist())
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x) or math.isinf(x):
            return str(x)
        return x
    return x


def _emit(report: dict, args, table=None) -> None:
    if getattr(args, "csv", False) and table is not None:
        buf = _io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        for row in table:
            w.writerow(row)
        text = buf.getvalue()
    else:
        text = dumps(_clean(report))
    if args.output:
        Path(args.output).write_text(text)
    elif not args.quiet:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# comass


def cmd_comass(args) -> int:
    from .calibration import comass_values, sample_region
    from .forms import catalog_form

    try:
        phi = catalog_form(args.form_id, args.k, args.dim)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    pts = sample_region(phi, args.samples, args.seed)
    vals, planes = comass_values(phi, pts, args.restarts, args.iters, args.seed)
    best = int(np.argmax(vals))
    report = {
        "command": "comass",
        "form": args.form_id,
        "degree": phi.degree,
        "dim": phi.dim,
        "seed": args.seed,
        "samples": args.samples,
        "restarts": args.restarts,
        "comass": float(vals[best]),
        "argmax_point": pts[best],
        "argmax_plane": planes[best].frame,
        "per_point_values": vals,
    }
    table = [["index"] + [f"x{i + 1}" for i in range(phi.dim)] + ["comass"]]
    table += [[i] + [repr(float(c)) for c in p] + [repr(float(v))] for i, (p, v) in enumerate(zip(pts, vals))]
    _emit(report, args, table)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify


def _parse_poly(text: str) -> list[complex]:
    """'z^2', '2z^3 - z + 1', '(1+2j)z^2' -> coefficient list a_0, a_1, ..."""
    s = text.replace(" ", "").replace("**", "^")
    if not s:
        raise ValueError("empty polynomial")
    terms = re.findall(r"[+-]?(?:\([^)]*\)|[0-9.]*j?)\*?(?:z(?:\^\d+)?)?", s)
    coeffs: dict[int, complex] = {}
    consumed = ""
    for t in terms:
        if not t:
            continue
        consumed += t
        m = re.fullmatch(r"([+-]?)(\([^)]*\)|[0-9.]*j?)\*?(z(?:\^(\d+))?)?", t)
        if m is None:
            raise ValueError(f"cannot parse term {t!r}")
        sign, num, zpart, power = m.groups()
        if not num and not zpart:
            raise ValueError(f"cannot parse term {t!r}")
        c = complex(num.strip("()")) if num else 1.0
        if sign == "-":
            c = -c
        deg = (int(power) if power else 1) if zpart else 0
        coeffs[deg] = coeffs.get(deg, 0) + c
    if consumed != s:
        raise ValueError(f"cannot parse polynomial {text!r}")
    return [coeffs.get(d, 0) for d in range(max(coeffs) + 1)]


def _check(name, value, limit, passed=None):
    ok = value <= limit if passed is None else passed
    return {"check": name, "value": float(value), "limit": limit, "passed": bool(ok)}


def _graph_checks(u, phi, xs, tol, contact=True):
    from .calibration import first_cousin_check
    from .graphs import graph_calibrated_defect, mss_residual, tangent_plane

    checks = [
        _check("mss_residual", max(float(np.abs(mss_residual(u, x)).max()) for x in xs), tol),
        _check("calibration_defect", graph_calibrated_defect(u, phi, xs), tol),
    ]
    if contact:
        worst = 0.0
        for x in xs[: min(len(xs), 50)]:
            worst = max(worst, first_cousin_check(phi, u.point(x), tangent_plane(u, x), tol))
        checks.append(_check("first_cousins", worst, tol))
    return checks


def verify_example(example_id: str, samples: int = 200, seed=0, tol: float = 1e-6) -> dict:
    """Run the named verification; raises ValueError on unknown ids."""
    from . import forms, graphs

    head, _, rest = example_id.partition(":")
    checks = []
    info: dict = {}
    if head == "loc":
        u = graphs.LawsonOssermanGraph()
        xs = graphs.sample_domain(u, samples, seed)
        checks = _graph_checks(u, forms.coassociative_form(), xs, tol)
        hom = max(abs(np.linalg.norm(graphs.lawson_osserman_map(x)) - graphs.SQRT5_2 * np.linalg.norm(x)) for x in xs)
        checks.append(_check("homogeneity", hom, 1e-12))
    elif head == "slag-quadratic":
        c = _floats(rest) if rest else [1.0, 1.0]
        u = graphs.PotentialGradientGraph.quadratic(c, forms.Box((-1.0,) * len(c), (1.0,) * len(c)))
        theta = graphs.slag_phase(u, np.zeros(len(c)))
        info["phase"] = theta
        xs = graphs.sample_domain(u, samples, seed)
        checks = _graph_checks(u, forms.slag_form(2 * len(c), theta), xs, tol)
    elif head == "holomorphic":
        coeffs = _parse_poly(rest or "z^2")
        u = graphs.HolomorphicGraph(coeffs, forms.Box((-1.0, -1.0), (1.0, 1.0)))
        info["coefficients"] = [[z.real, z.imag] for z in coeffs]
        xs = graphs.sample_domain(u, samples, seed)
        checks = _graph_checks(u, forms.kahler_form(4), xs, tol)
    elif head == "affine":
        rows = [_floats(r) for r in rest.split(";")] if rest else [[0.5, -0.25]]
        A = np.array(rows)
        u = graphs.AffineGraph(A, domain=forms.Box((-1.0,) * A.shape[1], (1.0,) * A.shape[1]))
        plane = graphs.tangent_plane(u, np.zeros(u.k))
        from .exterior import KCovector

        phi = forms.constant_form(KCovector.from_array(u.k, u.n, plane.plucker_array), "tangent-dual")
        xs = graphs.sample_domain(u, samples, seed)
        checks = _graph_checks(u, phi, xs, tol)
    elif head == "affine-tilted":
        theta = float(rest) if rest else math.pi / 6
        u = graphs.AffineGraph(np.array([[math.tan(theta), 0.0]]), domain=forms.Box((-1.0, -1.0), (1.0, 1.0)))
        xs = graphs.sample_domain(u, samples, seed)
        d = graphs.graph_calibrated_defect(u, forms.volume_form(2, 3), xs)
        info["theta"] = theta
        info["expected_defect"] = 1 - math.cos(theta)
        checks = [_check("calibration_defect", d, tol)]
    elif head == "scherk":
        from .calibration import closedness_order

        u = graphs.ScherkGraph()
        phi = forms.graph_form(u, "graph:scherk")
        xs = graphs.sample_domain(u, samples, seed)
        checks = _graph_checks(u, phi, xs, tol)
        pts = np.hstack([xs[:10], np.zeros((min(10, len(xs)), 1))])
        _, errs, order = closedness_order(phi, pts, 4e-3, 3)
        checks.append(_check("closedness", errs[-1], tol))
        info["closedness_order"] = order
    elif head == "simons":
        rng = np.random.default_rng(seed)
        worst = 0.0
        for _ in range(samples):
            a = rng.standard_normal(4)
            b = rng.standard_normal(4)
            r = rng.uniform(0.2, 1.0)
            p = np.concatenate([r * a / np.linalg.norm(a), r * b / np.linalg.norm(b)])
            worst = max(worst, abs(graphs.simons_mean_curvature(p)))
        checks = [_check("mean_curvature", worst, 1e-8)]
    else:
        raise ValueError(f"unknown example id {example_id!r}")
    return {
        "command": "verify",
        "example": example_id,
        "samples": samples,
        "seed": seed,
        "tol": tol,
        "checks": checks,
        "passed": all(c["passed"] for c in checks),
        **info,
    }


def cmd_verify(args) -> int:
    try:
        report = verify_example(args.example_id, args.samples, args.seed, args.tol)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    table = [["check", "value", "limit", "passed"]] + [
        [c["check"], repr(c["value"]), repr(c["limit"]), c["passed"]] for c in report["checks"]
    ]
    _emit(report, args, table)
    return EXIT_OK if report["passed"] else EXIT_CHECK


# ---------------------------------------------------------------------------
# plateau and friends


def resolve_input(name: str) -> Path:
    p = Path(name)
    if p.exists():
        return p
    from .demos import FIXTURE_DIR

    cand = FIXTURE_DIR / (name if name.endswith(".json") else f"{name}.json")
    if cand.exists():
        return cand
    raise InputError(f"{name}: no such file or bundled instance")


def _chain_report(T) -> dict:
    from .currents import mass

    return {"mass": mass(T), "terms": [[list(v), c] for v, c in T.terms()], "coeffs": T.to_json()["coeffs"]}


def cmd_plateau(args) -> int:
    from .io import cochain_from_json, read_json
    from .plateau import Infeasible, brute_force_oracle, solve, uniqueness_probe, verify_certificate

    try:
        path = resolve_input(args.instance)
        inst = load_instance(path)
        cert = inst.certificate
        if args.certificate and args.certificate != "dual":
            cert = cochain_from_json(inst.complex, read_json(resolve_input(args.certificate)), "$")
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report: dict = {"command": "plateau", "instance": inst.name or path.stem, "k": inst.k}
    try:
        sol = solve(inst, args.node_limit)
    except Infeasible as exc:
        report.update({"status": "INFEASIBLE", "message": str(exc)})
        _emit(report, args)
        return EXIT_INFEASIBLE
    code = EXIT_OK
    if sol.chain is None:
        report.update({"status": "LIMIT", "verdict": "UNKNOWN", "diagnostics": sol.diagnostics})
        _emit(report, args)
        return EXIT_UNKNOWN
    report.update({"status": "OPTIMAL", "mass": sol.mass, "chain": _chain_report(sol.chain), "diagnostics": sol.diagnostics})
    minimizers = [sol.chain]
    trials = DEFAULT_PROBE_TRIALS if args.probe is None else args.probe
    pr = uniqueness_probe(inst, sol, trials, args.seed, args.node_limit)
    minimizers = pr.minimizers
    report["verdict"] = pr.verdict
    report["minimizers"] = [_chain_report(T) for T in pr.minimizers]
    report["probe"] = {"trials": trials, "solves": pr.probes, "limited": pr.limited}
    if pr.verdict == "UNKNOWN" and args.probe is not None:
        code = EXIT_UNKNOWN
    if args.certificate == "dual":
        cert = sol.dual
    if cert is not None:
        report["certificate"] = verify_certificate(inst, minimizers, cert, args.tol).to_json()
    if inst.candidate is not None:
        from .currents import mass

        report["candidate"] = {"mass": mass(inst.candidate), "optimal": abs(mass(inst.candidate) - sol.mass) <= 1e-9}
    if args.oracle:
        try:
            o = brute_force_oracle(inst, args.coeff_bound, args.max_simplices)
        except ValueError as exc:
            report["oracle"] = {"error": str(exc)}
        else:
            report["oracle"] = {
                "mass": o.mass,
                "count": len(o.minimizers),
                "overflow": o.overflow,
                "agrees": o.mass is not None and abs(o.mass - sol.mass) <= 1e-9,
                "minimizers": [_chain_report(T) for T in o.minimizers],
            }
    _emit(report, args)
    return code


def _input_chain(name: str):
    """Chain for density: builtins 'square'/'square2', else an instance's candidate or solution."""
    from .demos import full_chain, grid_square
    from .plateau import solve

    if name in ("square", "square2"):
        return full_chain(grid_square(8), 2, 2 if name == "square2" else 1)
    inst = load_instance(resolve_input(name))
    if inst.candidate is not None:
        return inst.candidate
    return solve(inst).chain


def cmd_density(args) -> int:
    from .currents import density_estimate

    try:
        T = _input_chain(args.input)
        vals = density_estimate(T, args.point, args.radii, args.levels)
    except (InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report = {"command": "density", "input": args.input, "point": args.point, "radii": args.radii, "density": vals}
    table = [["radius", "density"]] + [[repr(r), repr(float(v))] for r, v in zip(args.radii, vals)]
    _emit(report, args, table)
    return EXIT_OK


def cmd_fill(args) -> int:
    from .currents import fill_cycle

    try:
        if args.input == "annulus-equator":
            from .demos import annulus

            K = annulus()
            from .complex import Chain

            b = Chain.from_simplices(K, 1, [((i, (i + 1) % 12), 1) for i in range(12)])
        else:
            b = load_instance(resolve_input(args.input)).boundary
        S = fill_cycle(b)
    except (InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if S is None:
        _emit({"command": "fill", "input": args.input, "status": "INFEASIBLE"}, args)
        return EXIT_INFEASIBLE
    _emit({"command": "fill", "input": args.input, "status": "FILLED", "filling": _chain_report(S)}, args)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="calibra", description="Calibrations, comass and discrete Plateau problems.")
    p.add_argument("--version", action="version", version=f"calibra {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, csv_ok=True):
        sp.add_argument("--output", "-o", help="write the report here instead of stdout")
        sp.add_argument("--quiet", "-q", action="store_true", help="no report on stdout")
        if csv_ok:
            fmt = sp.add_mutually_exclusive_group()
            fmt.add_argument("--json", dest="csv", action="store_false", help="JSON report (default)")
            fmt.add_argument("--csv", dest="csv", action="store_true", help="CSV table")
            sp.set_defaults(csv=False)

    c = sub.add_parser("comass", help="comass of a catalog form over sample points")
    c.add_argument("form_id", help="volume | kahler[:p] | slag-re[:phase] | coassociative | graph:... | scale:<c>:<id>")
    c.add_argument("--k", type=int, help="degree (volume form)")
    c.add_argument("--dim", type=int, help="ambient dimension")
    c.add_argument("--seed", type=int, required=True)
    c.add_argument("--samples", type=int, default=100)
    c.add_argument("--restarts", type=int, default=64)
    c.add_argument("--iters", type=int, default=200)
    c.add_argument("--tol", type=_positive, default=1e-6)
    common(c)
    c.set_defaults(func=cmd_comass)

    v = sub.add_parser("verify", help="check a calibrated / minimal example")
    v.add_argument("example_id", help="loc | slag-quadratic:<c,..> | holomorphic:<poly> | affine:<rows> | affine-tilted[:theta] | scherk | simons")
    v.add_argument("--samples", type=int, default=200)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--tol", type=_positive, default=1e-6)
    common(v)
    v.set_defaults(func=cmd_verify)

    pl = sub.add_parser("plateau", help="solve a discrete Plateau instance")
    pl.add_argument("instance", help="instance JSON path or bundled name (e.g. four-corners)")
    pl.add_argument("--oracle", action="store_true", help="also run the exhaustive oracle")
    pl.add_argument("--coeff-bound", type=int, default=2)
    pl.add_argument("--max-simplices", type=int, default=14)
    pl.add_argument("--certificate", help="cochain JSON path or bundled name, or 'dual' for the LP dual")
    pl.add_argument(
        "--probe", type=int, metavar="N",
        help=f"perturbation trials of the uniqueness probe (default {DEFAULT_PROBE_TRIALS}); exit 3 if the verdict stays UNKNOWN",
    )
    pl.add_argument("--seed", type=int, default=0)
    pl.add_argument("--node-limit", type=int, default=100_000)
    pl.add_argument("--tol", type=_positive, default=1e-9)
    common(pl, csv_ok=False)
    pl.set_defaults(func=cmd_plateau)

    d = sub.add_parser("density", help="mass ratios of a chain in balls around a point")
    d.add_argument("input", help="square | square2 | instance path / bundled name")
    d.add_argument("--point", type=_floats, required=True)
    d.add_argument("--radii", type=_floats, required=True)
    d.add_argument("--levels", type=int, default=4)
    common(d)
    d.set_defaults(func=cmd_density)

    f = sub.add_parser("fill", help="fill an instance's boundary cycle with an integral chain")
    f.add_argument("input", help="instance path / bundled name, or annulus-equator")
    common(f, csv_ok=False)
    f.set_defaults(func=cmd_fill)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if not hasattr(args, "csv"):
        args.csv = False
    return args.func(args)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
