"""Command-line front-end: evaluation, solving, verification, index tools.

Exit codes: 0 success; 1 a verification check failed; 2 non-integrable
combination or malformed index-set literal; 3 quadrature tolerance failure.
Identical configuration and seed produce byte-identical JSON artifacts
(reports exclude wall-clock fields; summation orders are fixed).
"""

import argparse
import json
import math
import re
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import analysis, index_calculus as ic, potentials
from .boundary_data import get_data, load_from_tables
from .errors import IntegrabilityViolation, NonIntegrable, ToleranceNotMet
from .kernels import HalfSpacePoint, KernelSpec
from .quadrature import QuadratureSpec
from .special_fn import gegenbauer, gegenbauer_derivative


def _common_flags(p):
    p.add_argument("--n", type=int, default=3, help="ambient dimension (default 3)")
    p.add_argument("--rel-tol", type=float, default=None)
    p.add_argument("--abs-tol", type=float, default=None)
    p.add_argument("--far-radius", type=float, default=None)
    p.add_argument("--split-radius", type=float, default=None)
    p.add_argument("--angular-points", type=int, default=None)
    p.add_argument("--out", type=Path, default=None, help="output directory")
    p.add_argument("--seed", type=int, default=0,
                   help="seed for randomized point sampling")


def _quad_from(args, **defaults):
    spec = QuadratureSpec(**defaults)
    overrides = {}
    for name in ("rel_tol", "abs_tol", "far_radius", "split_radius",
                 "angular_points"):
        v = getattr(args, name, None)
        if v is not None:
            overrides[name] = v
    return replace(spec, **overrides) if overrides else spec


def _resolve_data(name, n):
    if name.startswith("table:"):
        _, samples, coeffs, order = name.split(":")
        return load_from_tables(samples, coeffs, int(order), n=n)
    return get_data(name, n)


def parse_index_literal(text, truncation=ic.DEFAULT_TRUNCATION):
    """Index-set literal: an integer ('2', '-1'), 'empty', or generator
    tuples '(z,p)' separated by commas, e.g. '(1,0),(2,1)'."""
    text = text.strip()
    if text in ("empty", "inf"):
        return ic.empty_index_set(truncation)
    if re.fullmatch(r"-?\d+", text):
        return ic.integer_index_set(int(text), truncation)
    pairs = re.findall(r"\(([^(),]+),\s*(\d+)\)", text)
    if not pairs:
        raise ValueError(f"malformed index-set literal {text!r}")
    gens = []
    for z_text, p_text in pairs:
        try:
            z = complex(z_text.replace(" ", ""))
        except ValueError as exc:
            raise ValueError(f"malformed exponent {z_text!r}") from exc
        gens.append((z, int(p_text)))
    return ic.canonicalize(gens, truncation)


def _parse_points(text, n):
    pts = []
    for chunk in text.split(";"):
        vals = [float(v) for v in chunk.split(",")]
        if len(vals) != n:
            raise ValueError(f"each point needs {n} coordinates, got {chunk!r}")
        pts.append(vals)
    return np.asarray(pts)


def _set_repr(s):
    if s.is_empty:
        return "empty"
    return ",".join(f"({g.z.real:g},{g.p})" for g in s.generators)


# ---------------------------------------------------------------------------
# subcommands


def cmd_eval(args):
    data = _resolve_data(args.data, args.n)
    quad = _quad_from(args)
    kind = args.kind
    if args.k == "auto":
        k = ic.k_min(kind, data.index_set())
        print(f"resolved k = {k}")
    else:
        k = int(args.k)
    try:
        field = potentials.make_field(KernelSpec(args.n, kind, k), data, quad)
        points = _parse_points(args.points, args.n)
        if args.out:
            args.out.mkdir(parents=True, exist_ok=True)
            values = potentials.write_grid_csv(
                field, points, args.out / "values.csv", args.out / "meta.json")
        else:
            values = potentials.eval_grid(field, points)
        for p, v in zip(points, values):
            print(f"{','.join(f'{c:g}' for c in p)} -> {float(v)!r}")
    except NonIntegrable as exc:
        a = ic.alpha(kind, k)
        print(f"error: not integrable; requires Re E > alpha = {a}, data has "
              f"Re E = {data.leading_order} ({exc})", file=sys.stderr)
        return 2
    except ToleranceNotMet as exc:
        print(f"error: quadrature failure: {exc}", file=sys.stderr)
        return 3
    return 0


def cmd_solve(args):
    data = _resolve_data(args.data, args.n)
    quad = _quad_from(args)
    solver = (potentials.solve_dirichlet if args.problem == "dirichlet"
              else potentials.solve_neumann)
    try:
        field = solver(data, quad, n=args.n)
        fam = field.derived_index_family
        print(f"problem: {args.problem}; kernel: {field.spec.kind} k={field.spec.k}")
        print(f"index family: Y: {_set_repr(fam.get('Y'))}; "
              f"Z: {_set_repr(fam.get('Z'))}")
        print(f"solution unique up to harmonic polynomials of degree <= "
              f"{field.ambiguity_degree}")
        if args.points:
            points = _parse_points(args.points, args.n)
            if args.out:
                args.out.mkdir(parents=True, exist_ok=True)
                values = potentials.write_grid_csv(
                    field, points, args.out / "solution.csv",
                    args.out / "meta.json")
            else:
                values = potentials.eval_grid(field, points)
            for p, v in zip(points, values):
                print(f"{','.join(f'{c:g}' for c in p)} -> {float(v)!r}")
    except NonIntegrable as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ToleranceNotMet as exc:
        print(f"error: quadrature failure: {exc}", file=sys.stderr)
        return 3
    return 0


def _indicator_report(name, ok, params):
    return analysis.VerificationReport(name, params, [1.0 if ok else 0.0],
                                       [1.0], ["symbolic"], 0.5, bool(ok))


def _verify_index_suite(n):
    reports = []
    fixtures_ok = (
        ic.k_min("single", ic.integer_index_set(2)) == 0
        and ic.k_min("double", ic.integer_index_set(2)) == 0
        and ic.k_min("single", ic.integer_index_set(-1)) == 3
        and ic.k_min("double", ic.integer_index_set(-1)) == 1)
    reports.append(_indicator_report("index-kmin", fixtures_ok, {}))
    pb = ic.pullback_family(ic.left_projection_matrix(),
                            ic.integer_family(ic.HALF_SPACE_FACES, (1, -1)))
    expected = ic.integer_family(ic.RESOLVED_FACES, (1, -1, 0, -1, 1))
    reports.append(_indicator_report(
        "index-pullback", pb == expected,
        {"result": [_set_repr(s) for s in pb.sets]}))
    rows_ok = True
    for kind, k, e_lead in (("single", 0, 2), ("double", 0, 2),
                            ("single", 2, 0), ("double", 2, -2)):
        e = ic.integer_index_set(e_lead)
        fam = ic.layer_potential_index_family(kind, k, n, e)
        shift = -1 if kind == "single" else 0
        other = (n - 2 if kind == "single" else n - 1) if k == 0 else \
            (1 - k if kind == "single" else -k)
        want = ic.extended_union(ic.index_shift(e, shift),
                                 ic.integer_index_set(other))
        rows_ok = rows_ok and fam.get("Z") == want
    reports.append(_indicator_report("index-mapping-rows", rows_ok, {"n": n}))
    eu = ic.extended_union(ic.integer_index_set(0), ic.integer_index_set(1))
    eu_ok = eu == ic.canonicalize([(0, 0), (1, 1)])
    reports.append(_indicator_report("index-extended-union", eu_ok, {}))
    return reports


def _verify_harmonicity_suite(n, quad, rng):
    reports = []
    spec = KernelSpec(n, "single", 0)
    yp = np.array([0.3, -0.4] if n == 3 else [0.3] * (n - 1))

    def sl_eval(z, _s=spec, _yp=yp):
        from .kernels import single_layer
        return single_layer(n, z, _yp)

    pts = []
    for _ in range(10):
        x = 2.0 + rng.uniform(0.0, 1.0)
        y = rng.uniform(-1.0, 1.0, size=n - 1)
        pts.append(HalfSpacePoint(x, y))
    reports.append(analysis.check_harmonicity(
        sl_eval, pts, 1e-3, bound=1e-6, name="harmonicity-kernel"))
    data = get_data("example-f", n)
    fld = potentials.make_field(KernelSpec(n, "double", 0), data, quad)
    pts = [HalfSpacePoint(0.7 + 1.8 * rng.uniform(), rng.uniform(-1, 1, n - 1))
           for _ in range(6)]
    reports.append(analysis.check_harmonicity(
        fld, pts, 1e-2, quad_tol=quad.abs_tol, bound=1e-3,
        name="harmonicity-potential"))
    return reports


def _verify_gegenbauer_suite():
    reports = []
    rs = np.linspace(0.0, 0.5, 21)
    ts = np.linspace(-1.0, 1.0, 21)
    worst = 0.0
    for lam in (0.5, 1.5, 2.5):
        cs = np.array([[gegenbauer(lam, m, t) for t in ts] for m in range(65)])
        for r in rs:
            series = (cs * (r ** np.arange(65))[:, None]).sum(axis=0)
            closed = (1.0 - 2.0 * ts * r + r * r) ** (-lam)
            worst = max(worst, float(np.max(np.abs(series - closed))))
    reports.append(analysis.VerificationReport(
        "gegenbauer-generating-fn", {"orders": [0.5, 1.5, 2.5]},
        [worst], [0.0], ["series-vs-closed-form"], 1e-10, worst <= 1e-10))
    # h chosen so truncation (~h^2 C''') and roundoff (~eps |C|/h) both stay
    # below the tolerance for every order in the sweep
    h, worst_d = 1e-6, 0.0
    for lam in (0.5, 1.5, 2.5):
        for m in range(13):
            for t in np.linspace(-0.7, 0.7, 13):
                fd = (gegenbauer(lam, m, t + h) - gegenbauer(lam, m, t - h)) / (2 * h)
                worst_d = max(worst_d, abs(fd - gegenbauer_derivative(lam, m, t)))
    reports.append(analysis.VerificationReport(
        "gegenbauer-derivative", {"h": h}, [worst_d], [0.0],
        ["finite-difference"], 1e-7, worst_d <= 1e-7))
    return reports


def cmd_verify(args):
    quad = _quad_from(args)
    rng = np.random.default_rng(args.seed)
    suites = (["index", "normalization", "jump", "logs", "harmonicity",
               "gegenbauer"] if args.suite == "all" else [args.suite])
    reports = []
    try:
        for suite in suites:
            if suite == "index":
                reports += _verify_index_suite(args.n)
            elif suite == "normalization":
                reports.append(analysis.check_poisson_normalization(
                    args.n, quad=quad))
            elif suite == "jump":
                chis = []
                chi = 0.2
                while chi >= args.chi_min / 1.0000001:
                    chis.append(chi)
                    chi *= 0.5
                # defects shrink linearly in chi; the 0.01 bound is
                # calibrated at chi ~ 1e-3 and scales up for coarser stops
                factor = 0.01 * max(1.0, chis[-1] / 1e-3)
                data = get_data("example-f", args.n)
                for kind in ("double", "single", "single-normal"):
                    reports.append(analysis.check_jump(
                        kind, 0, data, chis=chis, quad=quad,
                        tol_factor=factor, strict=False))
            elif suite == "logs":
                f = get_data("example-f", args.n)
                g = get_data("example-g", args.n)
                for data, expect in ((f, True), (g, False)):
                    for kind in ("single", "double"):
                        reports.append(analysis.check_log_condition(
                            kind, 0, data, expect_logs=expect))
                fit_quad = QuadratureSpec(rel_tol=1e-6, abs_tol=1e-9,
                                          far_radius=1e6)
                direction = np.array([math.cos(0.7), math.sin(0.7), 0.0])
                windows = [(1 / 80.0, 1 / 25.0), (1 / 320.0, 1 / 80.0)]
                for data, expect in ((f, True), (g, False)):
                    for kind in ("single", "double"):
                        fld = potentials.make_field(
                            KernelSpec(args.n, kind, 0), data, fit_quad)
                        lead = round(min(gen.z.real for gen in
                                         fld.derived_index_family.get("Z").generators))
                        verdict, _ = analysis.detect_logs_two_windows(
                            fld, direction, windows,
                            [lead, lead + 1, lead + 2], quad_tol=1e-9)
                        reports.append(_indicator_report(
                            f"log-detector-{kind}-{data.name}",
                            verdict == expect,
                            {"verdict": bool(verdict), "expected": expect}))
            elif suite == "harmonicity":
                reports += _verify_harmonicity_suite(args.n, quad, rng)
            elif suite == "gegenbauer":
                reports += _verify_gegenbauer_suite()
            else:
                print(f"unknown suite {args.suite!r}", file=sys.stderr)
                return 2
    except ToleranceNotMet as exc:
        print(f"error: quadrature failure: {exc}", file=sys.stderr)
        return 3
    out_dir = args.out or Path(".")
    out_dir.mkdir(parents=True, exist_ok=True)
    bundle = [r.to_json_dict(volatile=False) for r in reports]
    (out_dir / "verify_reports.json").write_text(
        json.dumps(bundle, indent=2, sort_keys=True) + "\n")
    lines = [r.text_row() for r in reports]
    (out_dir / "verify_reports.txt").write_text("\n".join(lines) + "\n")
    for line in lines:
        print(line)
    return 0 if all(r.passed for r in reports) else 1


def cmd_index(args):
    try:
        if args.index_cmd == "kmin":
            e = parse_index_literal(args.E)
            print(json.dumps({"k_min": ic.k_min(args.kind, e)}))
        elif args.index_cmd == "family":
            e = parse_index_literal(args.E)
            fam = ic.layer_potential_index_family(args.kind, args.k, args.n, e)
            print(json.dumps(ic.family_to_json(fam), sort_keys=True))
        elif args.index_cmd == "union":
            a = parse_index_literal(args.a)
            b = parse_index_literal(args.b)
            print(json.dumps({"extended_union": _set_repr(ic.extended_union(a, b))}))
    except (ValueError, IntegrabilityViolation) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


def cmd_gegenbauer(args):
    if args.t is not None:
        print(repr(gegenbauer(args.lam, args.m, args.t)))
        return 0
    print(f"# C^{args.lam}_{args.m}(t)")
    for t in np.linspace(-1.0, 1.0, args.points):
        print(f"{t:+.4f}  {gegenbauer(args.lam, args.m, t)!r}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="halfpot",
        description="Layer potentials on the half-space: evaluation, "
                    "solving and verification.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate a (modified) layer potential")
    p.add_argument("--kind", choices=("single", "double"), required=True)
    p.add_argument("--k", default="auto",
                   help="modification order, or 'auto' for the minimal one")
    p.add_argument("--data", required=True,
                   help="registry name or table:<samples>:<coeffs>:<order>")
    p.add_argument("--points", required=True,
                   help="semicolon-separated points 'x,y1,...'")
    _common_flags(p)
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("solve", help="solve the Dirichlet or Neumann problem")
    p.add_argument("--problem", choices=("dirichlet", "neumann"),
                   required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--points", default=None)
    _common_flags(p)
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("verify", help="run verification checks")
    p.add_argument("--suite", default="all",
                   choices=("all", "index", "normalization", "jump", "logs",
                            "harmonicity", "gegenbauer"))
    p.add_argument("--chi-min", type=float, default=0.2 * 0.5 ** 8)
    _common_flags(p)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("index", help="index-calculus one-shots")
    isub = p.add_subparsers(dest="index_cmd", required=True)
    pk = isub.add_parser("kmin")
    pk.add_argument("--kind", choices=("single", "double"), required=True)
    pk.add_argument("--E", required=True)
    pf = isub.add_parser("family")
    pf.add_argument("--kind", choices=("single", "double"), required=True)
    pf.add_argument("--k", type=int, default=0)
    pf.add_argument("--n", type=int, default=3)
    pf.add_argument("--E", required=True)
    pu = isub.add_parser("union")
    pu.add_argument("--a", required=True)
    pu.add_argument("--b", required=True)
    p.set_defaults(fn=cmd_index)

    p = sub.add_parser("gegenbauer", help="Gegenbauer polynomial values")
    p.add_argument("--lam", type=float, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--t", type=float, default=None)
    p.add_argument("--points", type=int, default=21)
    p.set_defaults(fn=cmd_gegenbauer)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
